#ifndef CARTIER_HENSEL_HPP
#define CARTIER_HENSEL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/multi_polynomial.hpp>
#include <cartier/series.hpp>

namespace cartier
{

// Substitutes series for Y1..Yn. Coefficients of P are exact, so the result's
// truncation order is whatever the series product/sum rules give: for a term
// c*Y^e it is min_k (N_k + sum of the other valuations), and the sum takes the
// minimum over terms. With all inputs in F_p[[X]] known to X^N that is >= N.
inline Series mpoly_eval(const MultiPoly &P, const std::vector<Series> &point)
{
    if (point.size() != P.n()) {
        throw domain_error("mpoly_eval: point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                           std::to_string(P.n()) + " variables");
    }
    const auto p = P.p();
    return P.evaluate(point, [](const Poly &c) { return Series::from_poly(c); }, Series(p));
}

// Polynomial in one variable with series coefficients, lowest degree first.
using SeriesCoeffs = std::vector<Series>;

// Coefficient list of P with respect to Y_var; no other variable may occur.
inline SeriesCoeffs series_coefficients(const MultiPoly &P, std::size_t var = 0)
{
    for (std::size_t k = 0; k < P.n(); ++k) {
        if (k != var && P.mentions(k)) {
            throw domain_error("expected a polynomial in Y" + std::to_string(var + 1) + " only");
        }
    }
    SeriesCoeffs out;
    for (const auto &c : P.univariate(var)) {
        out.push_back(Series::from_poly(c.constant_term()));
    }
    return out;
}

inline Series eval_univariate(const SeriesCoeffs &c, const Series &y)
{
    if (c.empty()) {
        return Series(y.p());
    }
    Series r = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        r = r * y + c[k];
    }
    return r;
}

inline SeriesCoeffs derivative(const SeriesCoeffs &c)
{
    SeriesCoeffs d;
    for (std::size_t k = 1; k < c.size(); ++k) {
        d.push_back(c[k].scale(static_cast<std::uint32_t>(k % c[k].p())));
    }
    return d;
}

// Newton lifting of a simple residual root r of c (c(r) = 0 mod X, c'(r) a
// unit). Precision doubles each round until N or until the coefficients'
// truncation stops further progress.
inline Series newton_lift(const SeriesCoeffs &c, std::uint32_t r, std::int64_t N)
{
    const auto p = c.front().p();
    const auto dc = derivative(c);
    auto y = Series::from_coeffs(p, 0, {r}, std::min<std::int64_t>(1, N));
    while (y.trunc() < N) {
        const auto target = std::min(2 * y.trunc(), N);
        const auto yp = y.head(y.trunc());
        const auto v = eval_univariate(c, yp).truncate(target);
        const auto d = eval_univariate(dc, yp).truncate(target);
        const auto next = (yp - v * d.inverse(target)).truncate(target);
        if (next.trunc() <= y.trunc()) {
            break;
        }
        y = next;
    }
    return y;
}

// The unique F in F_p[[X]] with F(0) = seed and P(X, F) = 0 mod X^N, for a
// polynomial P in a single variable Y whose residue has seed as a simple root.
inline Series hensel_expand(const MultiPoly &P, std::uint32_t seed, std::int64_t N = default_truncation)
{
    if (P.n() != 1) {
        throw domain_error("hensel_expand: expected a polynomial in one variable Y");
    }
    const auto p = P.p();
    if (seed >= p) {
        throw domain_error("hensel_expand: seed " + std::to_string(seed) + " is not reduced mod " + std::to_string(p));
    }
    const auto c = series_coefficients(P);
    const PrimeField f{p};
    std::uint32_t val = 0;
    std::uint32_t der = 0;
    for (std::size_t k = c.size(); k-- > 0;) {
        val = f.add(f.mul(val, seed), c[k].coeff(0));
        if (k > 0) {
            der = f.add(f.mul(der, seed), f.mul(c[k].coeff(0), static_cast<std::uint32_t>(k % p)));
        }
    }
    if (val != 0) {
        throw domain_error("hensel_expand: seed " + std::to_string(seed) + " is not a root of P at X = 0");
    }
    if (der == 0) {
        throw domain_error("hensel_expand: seed " + std::to_string(seed) +
                           " is a multiple root of P at X = 0 (ramified case is not supported)");
    }
    return newton_lift(c, seed, N);
}

// Roots of a univariate polynomial with F_p[[X]] coefficients that lie in
// F_p[[X]], found by residue splitting: simple residual roots are lifted by
// Newton, multiple ones are refined through Y = r + X*T. `complete` is false
// when some branch ran out of precision or depth before it could be decided.
struct RootSearch {
    std::vector<Series> roots;
    bool complete = true;
};

namespace detail
{

// Coefficients of C(r + X*T) as a polynomial in T.
inline SeriesCoeffs shift_substitute(const SeriesCoeffs &c, std::uint32_t r)
{
    const auto p = c.front().p();
    const PrimeField f{p};
    const std::size_t d = c.size() - 1;
    SeriesCoeffs out(d + 1, Series(p));
    // binom(k, j) r^(k-j) X^j contributes c_k to T^j.
    std::vector<std::vector<std::uint32_t>> binom(d + 1, std::vector<std::uint32_t>(d + 1, 0));
    for (std::size_t k = 0; k <= d; ++k) {
        binom[k][0] = 1 % p;
        for (std::size_t j = 1; j <= k; ++j) {
            binom[k][j] = f.add(binom[k - 1][j - 1], j <= k - 1 ? binom[k - 1][j] : 0);
        }
    }
    for (std::size_t k = 0; k <= d; ++k) {
        for (std::size_t j = 0; j <= k; ++j) {
            const auto s = f.mul(binom[k][j], f.pow(r, k - j));
            if (s != 0) {
                out[j] = out[j] + c[k].scale(s).shift(static_cast<std::int64_t>(j));
            }
        }
    }
    return out;
}

inline void collect_roots(SeriesCoeffs c, std::int64_t N, int depth, int max_depth, RootSearch &out,
                          const Series &prefix, std::int64_t prefix_len)
{
    const auto p = c.front().p();
    const PrimeField f{p};
    while (c.size() > 1 && c.back().is_exact_zero()) {
        c.pop_back();
    }
    // Smallest valuation among the coefficients; zero-so-far entries only bound it.
    std::int64_t v = Series::infinite;
    bool any_known = false;
    for (const auto &s : c) {
        if (s.is_exact_zero()) {
            continue;
        }
        v = std::min(v, s.offset());
        any_known = any_known || !s.is_zero();
    }
    if (!any_known) {
        if (c.size() == 1 && c[0].is_exact_zero()) {
            out.complete = false; // the zero polynomial: every series is a root
        } else if (c.size() == 1) {
            return; // nonzero constant (exactly known) has no root
        } else {
            out.complete = false;
        }
        return;
    }
    for (auto &s : c) {
        s = s.shift(-v);
        if (!s.is_exact_zero() && s.trunc() < 1) {
            out.complete = false;
            return;
        }
    }
    if (c.size() == 1) {
        return;
    }
    for (std::uint32_t r = 0; r < p; ++r) {
        std::uint32_t val = 0;
        std::uint32_t der = 0;
        for (std::size_t k = c.size(); k-- > 0;) {
            val = f.add(f.mul(val, r), c[k].coeff(0));
            if (k > 0) {
                der = f.add(f.mul(der, r), f.mul(c[k].coeff(0), static_cast<std::uint32_t>(k % p)));
            }
        }
        if (val != 0) {
            continue;
        }
        const auto here = prefix + Series::monomial(p, r, prefix_len);
        if (der != 0) {
            const auto t = newton_lift(c, r, N - prefix_len);
            out.roots.push_back(prefix + t.shift(prefix_len));
            continue;
        }
        if (depth >= max_depth || prefix_len + 1 >= N) {
            out.complete = false;
            continue;
        }
        collect_roots(shift_substitute(c, r), N, depth + 1, max_depth, out, here, prefix_len + 1);
    }
}

} // namespace detail

inline RootSearch integral_roots(const SeriesCoeffs &c, std::int64_t N = default_truncation, int max_depth = 64)
{
    RootSearch out;
    if (c.empty()) {
        out.complete = false;
        return out;
    }
    detail::collect_roots(c, N, 0, max_depth, out, Series(c.front().p()), 0);
    return out;
}

inline RootSearch integral_roots(const MultiPoly &P, std::int64_t N = default_truncation, int max_depth = 64)
{
    return integral_roots(series_coefficients(P), N, max_depth);
}

} // namespace cartier

#endif
