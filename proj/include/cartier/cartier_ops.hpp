#ifndef CARTIER_CARTIER_OPS_HPP
#define CARTIER_CARTIER_OPS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/linear_algebra.hpp>
#include <cartier/polynomial.hpp>
#include <cartier/series.hpp>

namespace cartier
{

// (R, Lambda) with x = sum_{r in R} r * lambda(r)^p. For F_p((X)) restricted
// to F_p[[X]], R = {1, X, ..., X^(p-1)} and Lambda_x is the single map
// X^i -> Lambda_i(x).
struct GeneralizedCartier {
    std::uint32_t p = 2;
    std::vector<Series> R;

    // Every lambda in Lambda_x, as the list of values lambda(R[k]).
    std::vector<std::vector<Series>> decompose(const Series &x) const
    {
        if (!x.is_zero() && x.offset() < 0) {
            throw domain_error("generalized Cartier operator is defined on F_p[[X]] only");
        }
        return {cartier_parts(x)};
    }

    Series recompose(const std::vector<Series> &lambda) const
    {
        if (lambda.size() != R.size()) {
            throw domain_error("map has " + std::to_string(lambda.size()) + " values, R has " +
                               std::to_string(R.size()) + " members");
        }
        Series s = Series::constant(p, 0);
        for (std::size_t k = 0; k < R.size(); ++k) {
            s = s + R[k] * lambda[k].frobenius();
        }
        return s;
    }

    // Stability on K = F_p(X): the components of a rational function are
    // rational, Lambda_i(A/B) = Lambda_i(A B^(p-1)) / B.
    std::vector<RationalFunction> decompose(const RationalFunction &x) const
    {
        std::vector<RationalFunction> out;
        for (std::uint32_t i = 0; i < p; ++i) {
            out.push_back(x.cartier(i));
        }
        return out;
    }
};

inline GeneralizedCartier gco_instance(std::uint32_t p)
{
    PrimeField{p};
    GeneralizedCartier g{p, {}};
    for (std::uint32_t i = 0; i < p; ++i) {
        g.R.push_back(Series::monomial(p, 1, i));
    }
    return g;
}

struct KhatOptions {
    // Y-degree and X-degree of the exhibited relation.
    int relation_degree = 2;
    int coefficient_degree = 1;
    // Extra equations beyond the unknown count before a relation is trusted.
    std::size_t margin = 16;
    std::size_t max_level_size = 256;
};

struct KhatVerdict {
    bool member = false;
    int depth = -1;
    // Level size and number of equations used at the deciding depth.
    std::size_t level_size = 0;
    std::int64_t equations = 0;
    std::string detail;
};

// Level k is S_k with S_0 = {1, X} u generators and S_(k+1) = S_k u
// {Lambda_i(s)}. The query is a member at depth k when it satisfies
// sum_a query^a T_a = 0 with T_a in the F_p[X]-span of S_k and some T_a (a >= 1)
// nonzero, at truncation with at least `margin` spare equations. Sound for
// "yes" at truncation; "no" only means nothing was exhibited within the bounds.
inline KhatVerdict khat_members(const std::vector<Series> &generators, int depth, const Series &query,
                                const KhatOptions &opt = {})
{
    const auto p = query.p();
    auto nonzero_known = [](const Series &s) { return !s.is_zero(); };
    std::vector<Series> level{Series::constant(p, 1), Series::monomial(p, 1, 1)};
    auto insert = [&](const Series &s) {
        if (!nonzero_known(s) || s.offset() < 0) {
            return;
        }
        for (const auto &t : level) {
            if (t.agrees_with(s)) {
                return;
            }
        }
        level.push_back(s);
    };
    for (const auto &g : generators) {
        if (g.p() != p) {
            throw domain_error("generators and query must share the characteristic");
        }
        insert(g);
    }
    KhatVerdict v;
    const int D = opt.relation_degree;
    const int e = opt.coefficient_degree;
    std::vector<Series> qpow{Series::constant(p, 1)};
    for (int a = 1; a <= D; ++a) {
        qpow.push_back(qpow.back() * query);
    }
    for (int k = 0; k <= depth; ++k) {
        if (k > 0) {
            const auto prev = level;
            for (const auto &s : prev) {
                for (std::uint32_t i = 0; i < p; ++i) {
                    insert(s.cartier(i));
                }
            }
            if (level.size() > opt.max_level_size) {
                v.detail = "level " + std::to_string(k) + " exceeds " + std::to_string(opt.max_level_size) + " members";
                return v;
            }
        }
        std::vector<Series> cols;
        for (int a = 0; a <= D; ++a) {
            for (const auto &s : level) {
                for (int t = 0; t <= e; ++t) {
                    cols.push_back(qpow[a] * s.shift(t));
                }
            }
        }
        std::int64_t rows = Series::infinite;
        for (const auto &c : cols) {
            rows = std::min(rows, c.trunc());
        }
        if (rows == Series::infinite) {
            rows = static_cast<std::int64_t>(cols.size() + opt.margin);
        }
        v.level_size = level.size();
        v.equations = rows;
        if (rows < static_cast<std::int64_t>(cols.size() + opt.margin)) {
            v.detail = "too few known coefficients at depth " + std::to_string(k);
            return v;
        }
        std::vector<std::vector<std::uint32_t>> A(static_cast<std::size_t>(rows),
                                                  std::vector<std::uint32_t>(cols.size(), 0));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            for (std::int64_t m = 0; m < rows; ++m) {
                A[static_cast<std::size_t>(m)][j] = cols[j].coeff(m);
            }
        }
        const auto per_a = level.size() * static_cast<std::size_t>(e + 1);
        for (const auto &vec : nullspace_mod_p(A, cols.size(), p)) {
            for (int a = 1; a <= D; ++a) {
                Series T = Series::constant(p, 0);
                for (std::size_t j = 0; j < per_a; ++j) {
                    const auto c = vec[static_cast<std::size_t>(a) * per_a + j];
                    if (c != 0) {
                        T = T + level[j / static_cast<std::size_t>(e + 1)]
                                    .shift(static_cast<std::int64_t>(j % static_cast<std::size_t>(e + 1)))
                                    .scale(c);
                    }
                }
                if (nonzero_known(T)) {
                    v.member = true;
                    v.depth = k;
                    v.detail = "relation with a nonzero query^" + std::to_string(a) + " coefficient over level " + std::to_string(k);
                    return v;
                }
            }
        }
    }
    v.detail = "no relation within the search bounds";
    return v;
}

} // namespace cartier

#endif
