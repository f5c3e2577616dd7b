#ifndef CARTIER_LINEAR_ALGEBRA_HPP
#define CARTIER_LINEAR_ALGEBRA_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <cartier/polynomial.hpp>
#include <cartier/prime_field.hpp>

namespace cartier
{

// Basis of {x : A x = 0} over F_p, one vector per free column of the reduced
// row echelon form (free entry set to 1).
inline std::vector<std::vector<std::uint32_t>> nullspace_mod_p(std::vector<std::vector<std::uint32_t>> a,
                                                               std::size_t ncols, std::uint32_t p)
{
    const PrimeField f{p};
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
        std::size_t r = row;
        while (r < a.size() && a[r][col] == 0) {
            ++r;
        }
        if (r == a.size()) {
            continue;
        }
        std::swap(a[row], a[r]);
        const auto inv = f.inv(a[row][col]);
        for (auto &x : a[row]) {
            x = f.mul(x, inv);
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][col] == 0) {
                continue;
            }
            const auto m = a[i][col];
            for (std::size_t j = col; j < ncols; ++j) {
                a[i][j] = f.sub(a[i][j], f.mul(m, a[row][j]));
            }
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivot_col) {
        is_pivot[c] = true;
    }
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        std::vector<std::uint32_t> v(ncols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            v[pivot_col[r]] = f.neg(a[r][free]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Same over F_p(X).
inline std::vector<std::vector<RationalFunction>> nullspace_rational(std::vector<std::vector<RationalFunction>> a,
                                                                     std::size_t ncols)
{
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
        std::size_t r = row;
        while (r < a.size() && a[r][col].is_zero()) {
            ++r;
        }
        if (r == a.size()) {
            continue;
        }
        std::swap(a[row], a[r]);
        const auto piv = a[row][col];
        for (auto &x : a[row]) {
            x = x / piv;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][col].is_zero()) {
                continue;
            }
            const auto m = a[i][col];
            for (std::size_t j = col; j < ncols; ++j) {
                a[i][j] = a[i][j] - m * a[row][j];
            }
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivot_col) {
        is_pivot[c] = true;
    }
    std::vector<std::vector<RationalFunction>> basis;
    const auto p = a.empty() || a[0].empty() ? 2 : a[0][0].p();
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        std::vector<RationalFunction> v(ncols, RationalFunction(Poly(p)));
        v[free] = RationalFunction(Poly::constant(p, 1));
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            v[pivot_col[r]] = -a[r][free];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Scales a vector over F_p(X) to a primitive vector over F_p[X].
inline std::vector<Poly> clear_denominators(const std::vector<RationalFunction> &v)
{
    const auto p = v.front().p();
    Poly l = Poly::constant(p, 1);
    for (const auto &x : v) {
        l = exact_div(l * x.denominator(), gcd(l, x.denominator()));
    }
    std::vector<Poly> out;
    Poly g(p);
    for (const auto &x : v) {
        out.push_back(exact_div(x.numerator() * l, x.denominator()));
        g = gcd(g, out.back());
    }
    if (!g.is_zero()) {
        for (auto &x : out) {
            x = exact_div(x, g);
        }
    }
    return out;
}

} // namespace cartier

#endif
