#ifndef CARTIER_EQSYS_IO_HPP
#define CARTIER_EQSYS_IO_HPP

#include <cstddef>
#include <istream>
#include <sstream>
#include <string>

#include <cartier/eqsys.hpp>
#include <cartier/error.hpp>
#include <cartier/poly_parse.hpp>
#include <cartier/series.hpp>

namespace cartier
{

// Line-oriented system file; '#' starts a comment.
//   p 2
//   vars 3
//   name 1 F                  optional label for Y1
//   poly 1 + X + X^2 - Y1^2 - X*Y2^2
//   base 1 p=2 offset=0 coeffs=1,1 trunc=inf
//   target 3 phi(H2)
//   nonzero Y1 + 1
// Every variable needs a base line; polynomials use Y1..Yn and X.
inline GoodEquationalSystem read_system(std::istream &in)
{
    GoodEquationalSystem s;
    bool have_p = false;
    std::size_t n = 0;
    bool have_n = false;
    std::vector<bool> have_base;
    std::vector<std::string> polys;
    std::vector<std::string> nonzero;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string &what) {
        throw parse_error("system file line " + std::to_string(lineno) + ": " + what);
    };
    auto index = [&](std::istringstream &ls) {
        std::size_t j = 0;
        if (!(ls >> j) || j < 1 || j > n) {
            fail("expected a variable index in 1.." + std::to_string(n));
        }
        return j - 1;
    };
    auto rest = [](std::istringstream &ls) {
        std::string r;
        std::getline(ls, r);
        const auto b = r.find_first_not_of(" \t");
        return b == std::string::npos ? std::string() : r.substr(b);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) {
            line.erase(h);
        }
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) {
            continue;
        }
        if (key == "p") {
            long long p = 0;
            if (!(ls >> p) || p < 2 || p > (1 << 20) || !is_prime(static_cast<std::uint64_t>(p))) {
                fail("p must be a prime");
            }
            s.p = static_cast<std::uint32_t>(p);
            have_p = true;
        } else if (key == "vars") {
            if (!(ls >> n) || n < 1) {
                fail("vars must be a positive count");
            }
            have_n = true;
            s.vars.assign(n, {});
            s.base_point.assign(n, Series(s.p));
            have_base.assign(n, false);
        } else if (!have_n || !have_p) {
            fail("'p' and 'vars' must come first");
        } else if (key == "name") {
            const auto j = index(ls);
            s.vars[j].name = rest(ls);
        } else if (key == "poly") {
            polys.push_back(rest(ls));
        } else if (key == "nonzero") {
            nonzero.push_back(rest(ls));
        } else if (key == "base") {
            const auto j = index(ls);
            auto v = Series::parse(rest(ls));
            if (v.p() != s.p) {
                fail("base point characteristic differs from p");
            }
            s.base_point[j] = std::move(v);
            have_base[j] = true;
        } else if (key == "target") {
            const auto j = index(ls);
            auto d = rest(ls);
            s.targets.push_back({j, d.empty() ? "Y" + std::to_string(j + 1) : d});
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!have_n) {
        throw parse_error("system file: missing 'vars'");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!have_base[j]) {
            throw parse_error("system file: no base value for Y" + std::to_string(j + 1));
        }
    }
    for (const auto &t : polys) {
        if (PolyParser::max_variable(t) > n) {
            throw parse_error("system file: " + t + " mentions a variable beyond Y" + std::to_string(n));
        }
        s.sigma.push_back(parse_polynomial(t, s.p, n));
    }
    for (const auto &t : nonzero) {
        s.nonvanishing.push_back(parse_polynomial(t, s.p, n));
    }
    s.validate();
    return s;
}

inline GoodEquationalSystem read_system(const std::string &text)
{
    std::istringstream in(text);
    return read_system(in);
}

inline std::string write_system(const GoodEquationalSystem &s)
{
    std::ostringstream o;
    o << "p " << s.p << "\nvars " << s.n() << "\n";
    for (std::size_t j = 0; j < s.n(); ++j) {
        if (!s.vars[j].name.empty()) {
            o << "name " << j + 1 << " " << s.vars[j].name << "\n";
        }
    }
    for (const auto &P : s.sigma) {
        o << "poly " << to_string(P) << "\n";
    }
    for (std::size_t j = 0; j < s.n(); ++j) {
        o << "base " << j + 1 << " " << s.base_point[j].to_string() << "\n";
    }
    for (const auto &t : s.targets) {
        o << "target " << t.index + 1 << " " << t.description << "\n";
    }
    for (const auto &C : s.nonvanishing) {
        o << "nonzero " << to_string(C) << "\n";
    }
    return o.str();
}

} // namespace cartier

#endif
