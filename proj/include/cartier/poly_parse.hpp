#ifndef CARTIER_POLY_PARSE_HPP
#define CARTIER_POLY_PARSE_HPP

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/multi_polynomial.hpp>

namespace cartier
{

// Grammar (whitespace ignored):
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' integer)?
//   atom   := integer | 'X' | 'Y' digits | 'Y' | '(' expr ')' | '-' factor
// A bare 'Y' is Y1. Integer literals are reduced mod p.
class PolyParser
{
public:
    PolyParser(std::string_view text, std::uint32_t p, std::size_t n) : s_{text}, p_{p}, n_{n} {}

    MultiPoly parse()
    {
        pos_ = 0;
        auto r = expr();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        }
        return r;
    }

    // Largest variable index mentioned (1-based), 0 if none.
    static std::size_t max_variable(std::string_view s)
    {
        std::size_t best = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k] != 'Y' && s[k] != 'y') {
                continue;
            }
            std::size_t j = k + 1;
            std::size_t v = 0;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                v = v * 10 + static_cast<std::size_t>(s[j] - '0');
                ++j;
            }
            best = std::max(best, j == k + 1 ? std::size_t{1} : v);
        }
        return best;
    }

private:
    [[noreturn]] void fail(const std::string &what) const
    {
        throw parse_error("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }
    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    unsigned long long integer()
    {
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            fail("expected an integer");
        }
        unsigned long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            if (v > (1ull << 40)) {
                fail("integer literal too large");
            }
            v = v * 10 + static_cast<unsigned long long>(s_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    MultiPoly expr()
    {
        MultiPoly r = accept('-') ? -term() : term();
        for (;;) {
            if (accept('+')) {
                r += term();
            } else if (accept('-')) {
                r -= term();
            } else {
                return r;
            }
        }
    }
    MultiPoly term()
    {
        auto r = factor();
        while (accept('*')) {
            r *= factor();
        }
        return r;
    }
    MultiPoly factor()
    {
        auto a = atom();
        if (accept('^')) {
            a = a.pow(integer());
        }
        return a;
    }
    MultiPoly atom()
    {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end of input");
        }
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto r = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return r;
        }
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return MultiPoly::constant(p_, n_, static_cast<long long>(integer() % p_));
        }
        if (c == 'X' || c == 'x') {
            ++pos_;
            return MultiPoly::constant(p_, n_, Poly::x(p_));
        }
        if (c == 'Y' || c == 'y') {
            ++pos_;
            std::size_t idx = 1;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                idx = static_cast<std::size_t>(integer());
            }
            if (idx == 0 || idx > n_) {
                fail("variable Y" + std::to_string(idx) + " outside Y1..Y" + std::to_string(n_));
            }
            return MultiPoly::variable(p_, n_, idx - 1);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::uint32_t p_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

// Parses a polynomial over F_p[X] in Y1..Yn. With n == 0 the variable count is
// the largest index mentioned (at least 1).
inline MultiPoly parse_polynomial(std::string_view text, std::uint32_t p, std::size_t n = 0)
{
    PrimeField{p};
    if (n == 0) {
        n = std::max<std::size_t>(1, PolyParser::max_variable(text));
    }
    return PolyParser(text, p, n).parse();
}

// Parses an element of F_p[X] (no Y variables allowed).
inline Poly parse_univariate(std::string_view text, std::uint32_t p)
{
    if (PolyParser::max_variable(text) != 0) {
        throw parse_error("expected a polynomial in X only: " + std::string(text));
    }
    const auto P = PolyParser(text, p, 1).parse();
    return P.constant_term();
}

} // namespace cartier

#endif
