#ifndef CARTIER_WITNESS_HPP
#define CARTIER_WITNESS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <cartier/christol.hpp>
#include <cartier/error.hpp>
#include <cartier/hensel.hpp>
#include <cartier/network.hpp>
#include <cartier/propagate.hpp>
#include <cartier/series.hpp>

namespace cartier
{

namespace detail
{

// Accumulates witness elements, merging members equal at truncation so the
// network never sees an ambiguous identity. A constant merged into an
// existing node makes the node constant and keeps the exact value.
class WitnessBuilder
{
public:
    explicit WitnessBuilder(std::uint32_t p) : amb_{p} {}

    std::size_t add(const std::string &name, const std::string &expr, const Series &value, bool constant = false)
    {
        for (std::size_t i = 0; i < els_.size(); ++i) {
            if (amb_.equal(els_[i].value, value)) {
                if (constant && !els_[i].constant) {
                    els_[i].constant = true;
                    els_[i].value = value;
                }
                return i;
            }
        }
        els_.push_back({name, expr, value, constant});
        return els_.size() - 1;
    }

    SeriesNetwork build() const { return build_network(amb_, els_); }

private:
    SeriesAmbient amb_;
    std::vector<NetworkElement<SeriesAmbient>> els_;
};

inline std::string paren(const std::string &s)
{
    return s.find_first_of("+- ") == std::string::npos ? s : "(" + s + ")";
}

} // namespace detail

struct WitnessSet {
    SeriesNetwork network;
    std::size_t target = 0;
    MultiPoly annihilator;
    // Explicit members of B (roots of the annihilator in F_p[[X]] at the
    // working precision); B itself is "roots of P".
    std::vector<Series> roots;
    bool roots_complete = false;
    // witness_tc_series only: roots differ below this exponent.
    std::int64_t separation = -1;
};

// A(x) = {a_i} u {x^i} u {a_i x^i} u {sum_{i<=j} a_i x^i} for P = sum a_i Y^i,
// with the a_i as constants.
inline WitnessSet witness_from_polynomial(const AlgebraicSeries &F, std::int64_t N = default_truncation)
{
    const auto &P = F.annihilator;
    const auto p = P.p();
    const auto a = series_coefficients(P);
    const int d = static_cast<int>(a.size()) - 1;
    if (d < 1 || a.back().is_zero()) {
        throw domain_error("witness needs an annihilator of degree at least 1");
    }
    const auto x = F.expand(N);
    detail::WitnessBuilder b(p);
    std::size_t target = 0;
    std::vector<Series> pw{Series::constant(p, 1)};
    for (int i = 1; i <= d; ++i) {
        pw.push_back(pw.back() * x);
    }
    for (int i = 0; i <= d; ++i) {
        const auto name = "a" + std::to_string(i);
        b.add(name, a[i].is_polynomial() ? a[i].to_poly().to_string() : a[i].to_string(), a[i], true);
    }
    for (int i = 0; i <= d; ++i) {
        const auto idx = b.add(i == 1 ? "x" : "x^" + std::to_string(i), i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i),
                               pw[i]);
        if (i == 1) {
            target = idx;
        }
    }
    Series partial = Series::constant(p, 0);
    for (int i = 0; i <= d; ++i) {
        const auto term = a[i] * pw[i];
        const auto ai = "a" + std::to_string(i);
        b.add(ai + "x^" + std::to_string(i), ai + "*x^" + std::to_string(i), term);
        partial = partial + term;
        b.add("S" + std::to_string(i), "sum_{i<=" + std::to_string(i) + "} a_i*x^i", partial);
    }
    const auto rs = integral_roots(a, N);
    return {b.build(), target, P, rs.roots, rs.complete, -1};
}

// Exponent below which all roots of P in F_p[[X]] are pairwise distinct, i.e.
// the largest first difference over pairs (0 for a single root).
inline std::int64_t root_separation(const MultiPoly &P, std::int64_t N = default_truncation)
{
    const auto rs = integral_roots(P, N);
    if (!rs.complete) {
        throw precision_error("roots of " + to_string(P) + " are not all resolved at precision " + std::to_string(N));
    }
    std::int64_t sep = 0;
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const auto k = rs.roots[i].first_difference(rs.roots[j]);
            if (k >= std::min(rs.roots[i].trunc(), rs.roots[j].trunc())) {
                throw precision_error("two roots of " + to_string(P) + " agree to precision " + std::to_string(N));
            }
            sep = std::max(sep, k);
        }
    }
    return sep;
}

// A(x) together with the coefficient constants f_0..f_sep, X, and tail
// sections G_j, X*G_j (j <= sep + 1), where F = f_0 + ... + f_(j-1) X^(j-1) + X^j G_j
// and G_j = f_j + X G_(j+1). Propagation pins the first sep+1 coefficients of
// phi(F), which singles out F among the roots.
inline WitnessSet witness_tc_series(const AlgebraicSeries &F, std::int64_t N = default_truncation)
{
    const auto p = F.annihilator.p();
    const auto sep = root_separation(F.annihilator, N);
    auto w = witness_from_polynomial(F, N);
    detail::WitnessBuilder b(p);
    for (const auto &e : w.network.elements()) {
        b.add(e.name, e.expr, e.value, e.constant);
    }
    const auto x = F.expand(N);
    const auto X = Series::monomial(p, 1, 1);
    b.add("X", "X", X, true);
    for (std::int64_t j = 0; j <= sep; ++j) {
        b.add("f" + std::to_string(j), std::to_string(x.coeff(j)), Series::constant(p, x.coeff(j)), true);
    }
    for (std::int64_t j = 0; j <= sep + 1; ++j) {
        const auto g = x.tail_section(j);
        const auto name = "G" + std::to_string(j);
        b.add(name, j == 0 ? "x" : "tail_" + std::to_string(j) + "(x)", g);
        b.add("X*" + name, "X*" + name, X * g);
    }
    auto net = b.build();
    const auto target = *net.find(x);
    return {std::move(net), target, w.annihilator, w.roots, w.roots_complete, sep};
}

struct CounterexampleReport {
    SeriesNetwork network;
    DeductionState state;
    std::size_t h1 = 0;
    std::size_t h2 = 0;
    std::size_t f = 0;
    std::size_t g = 0;
    bool forced = false;
    bool degenerate = false;

    std::string caveat() const
    {
        std::string s = "F and G are treated as transcendental; this is assumed, not certified at truncation.";
        if (degenerate) {
            s += " F = G at truncation, so H1 = H2 and the demonstration is vacuous.";
        }
        return s;
    }
};

// Network {X, H1, H2} u {F^i, G^i : i <= p} u {X F^p, X G^p} with
// H1 = F^p + X G^p and H2 = G^p + X F^p. With phi(H1) pinned to H1, Cartier
// uniqueness fixes phi(F) and phi(G), hence phi(H2).
inline CounterexampleReport counterexample_311(const Series &F, const Series &G)
{
    const auto p = F.p();
    if (G.p() != p) {
        throw domain_error("F and G must share the characteristic");
    }
    for (const auto *s : {&F, &G}) {
        if (!s->is_zero() && s->offset() < 0) {
            throw domain_error("F and G must lie in F_p[[X]]");
        }
    }
    const auto X = Series::monomial(p, 1, 1);
    const auto Fp = F.pow(p);
    const auto Gp = G.pow(p);
    const auto H1 = Fp + X * Gp;
    const auto H2 = Gp + X * Fp;
    const auto ps = std::to_string(p);
    detail::WitnessBuilder b(p);
    b.add("X", "X", X, true);
    b.add("H1", "F^" + ps + " + X*G^" + ps, H1);
    b.add("H2", "G^" + ps + " + X*F^" + ps, H2);
    Series fi = Series::constant(p, 1);
    Series gi = fi;
    b.add("1", "1", fi, true);
    for (std::uint32_t i = 1; i <= p; ++i) {
        fi = fi * F;
        gi = gi * G;
        b.add(i == 1 ? "F" : "F^" + std::to_string(i), i == 1 ? "F" : "F^" + std::to_string(i), fi);
        b.add(i == 1 ? "G" : "G^" + std::to_string(i), i == 1 ? "G" : "G^" + std::to_string(i), gi);
    }
    b.add("XF^" + ps, "X*F^" + ps, X * Fp);
    b.add("XG^" + ps, "X*G^" + ps, X * Gp);
    auto net = b.build();
    CounterexampleReport r{net, {}, *net.find(H1), *net.find(H2), *net.find(F), *net.find(G), false,
                           SeriesAmbient(p).equal(F, G)};
    r.state = propagate_closure(r.network, {{r.h1, H1}});
    r.forced = r.state.forced(r.h2) && SeriesAmbient(p).equal(r.state.elements[r.h2].value, H2);
    return r;
}

// Human-readable table: handle, expression, constant flag, status.
inline std::string witness_table(const SeriesNetwork &net, const DeductionState *st = nullptr)
{
    std::size_t wn = 6;
    std::size_t we = 10;
    for (const auto &e : net.elements()) {
        wn = std::max(wn, e.name.size());
        we = std::max(we, std::min<std::size_t>(e.expr.size(), 40));
    }
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() > w) {
            s = s.substr(0, w - 3) + "...";
        }
        return s + std::string(w - s.size() + 2, ' ');
    };
    std::ostringstream out;
    out << pad("handle", wn) << pad("expression", we) << pad("K", 3) << "status\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto &e = net.element(i);
        out << pad(e.name, wn) << pad(e.expr, we) << pad(e.constant ? "yes" : "no", 3);
        if (!st) {
            out << "-";
        } else {
            const auto &d = st->elements[i];
            out << to_string(d.status);
            if (d.status == DeductionStatus::forced) {
                out << " (" << d.rule << ", " << (net.ambient().equal(d.value, e.value) ? "identity" : "moved")
                    << ")";
            } else if (d.status == DeductionStatus::root_of) {
                out << " " << relation_string(d.relation) << " [" << d.candidates.size()
                    << (d.candidates_complete ? "" : "+") << " candidates]";
            }
        }
        out << "\n";
    }
    return out.str();
}

} // namespace cartier

#endif
