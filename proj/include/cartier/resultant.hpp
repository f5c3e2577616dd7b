#ifndef CARTIER_RESULTANT_HPP
#define CARTIER_RESULTANT_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/multi_polynomial.hpp>

namespace cartier
{

namespace detail
{

inline void guard_degree(const MultiPoly &e, int max_x_degree)
{
    if (max_x_degree >= 0 && x_degree(e) > max_x_degree) {
        throw bound_error("resultant: intermediate X-degree " + std::to_string(x_degree(e)) + " exceeds bound " +
                          std::to_string(max_x_degree));
    }
}

// Res(a*Y + b, Q) = sum_k q_k (-b)^k a^(d-k), i.e. a^d Q(-b/a).
inline MultiPoly linear_resultant(const std::vector<MultiPoly> &lin, const std::vector<MultiPoly> &q, int max_x_degree)
{
    const auto &a = lin[1];
    const auto mb = -lin[0];
    const std::size_t d = q.size() - 1;
    std::vector<MultiPoly> apow{MultiPoly::constant(a.p(), a.n(), 1)};
    for (std::size_t k = 1; k <= d; ++k) {
        apow.push_back(apow.back() * a);
    }
    MultiPoly r(a.p(), a.n());
    MultiPoly bpow = MultiPoly::constant(a.p(), a.n(), 1);
    for (std::size_t k = 0; k <= d; ++k) {
        r += q[k] * bpow * apow[d - k];
        guard_degree(r, max_x_degree);
        bpow = bpow * mb;
    }
    return r;
}

} // namespace detail

// Determinant of a square matrix over F_p[X][Y...] by Bareiss fraction-free
// elimination; every division is exact.
inline MultiPoly bareiss_determinant(std::vector<std::vector<MultiPoly>> m, std::uint32_t p, std::size_t n,
                                     int max_x_degree = -1)
{
    const std::size_t sz = m.size();
    if (sz == 0) {
        return MultiPoly::constant(p, n, 1);
    }
    bool negate = false;
    MultiPoly prev = MultiPoly::constant(p, n, 1);
    for (std::size_t k = 0; k + 1 < sz; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t r = k + 1;
            while (r < sz && m[r][k].is_zero()) {
                ++r;
            }
            if (r == sz) {
                return MultiPoly(p, n);
            }
            std::swap(m[k], m[r]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < sz; ++i) {
            for (std::size_t j = k + 1; j < sz; ++j) {
                auto v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = exact_div(std::move(v), prev);
                detail::guard_degree(m[i][j], max_x_degree);
            }
            m[i][k] = MultiPoly(p, n);
        }
        prev = m[k][k];
    }
    auto d = m[sz - 1][sz - 1];
    return negate ? -d : d;
}

// Pseudo-remainder of A by B with respect to Y_i: repeatedly replaces A by
// lc(B) A - lc(A) Y_i^(deg A - deg B) B until deg_i A < deg_i B. Zero exactly when
// B divides A in the polynomial ring over the fraction field of the other
// variables (B of positive degree).
inline MultiPoly pseudo_remainder(MultiPoly A, const MultiPoly &B, std::size_t i)
{
    const int db = B.degree_in(i);
    if (db < 0) {
        throw domain_error("pseudo_remainder: division by zero");
    }
    const auto lb = B.coefficient_in(i, static_cast<std::size_t>(db));
    while (!A.is_zero() && A.degree_in(i) >= db) {
        const int da = A.degree_in(i);
        const auto la = A.coefficient_in(i, static_cast<std::size_t>(da));
        const auto shift =
            MultiPoly::monomial(A.p(), A.n(), Poly::constant(A.p(), 1),
                                MultiPoly::unit_exponent(A.n(), i, static_cast<std::uint32_t>(da - db)));
        A = lb * A - la * shift * B;
        if (!A.is_zero()) {
            A = primitive_part(A);
        }
    }
    return A;
}

// Sylvester resultant of P and Q with respect to Y_i. The result lives in the
// same variable space and does not mention Y_i. A negative max_x_degree
// disables the growth guard.
inline MultiPoly resultant(const MultiPoly &P, const MultiPoly &Q, std::size_t i, int max_x_degree = -1)
{
    if (P.n() != Q.n()) {
        throw domain_error("resultant: polynomials live in different variable spaces");
    }
    if (i >= P.n()) {
        throw domain_error("resultant: variable index out of range");
    }
    const int dp = P.degree_in(i);
    const int dq = Q.degree_in(i);
    if (dp <= 0 || dq <= 0) {
        throw domain_error("resultant: input has degree zero in Y" + std::to_string(i + 1));
    }
    const auto p = P.p() != 0 ? P.p() : Q.p();
    const auto cp = P.univariate(i);
    const auto cq = Q.univariate(i);
    if (dp == 1) {
        return detail::linear_resultant(cp, cq, max_x_degree);
    }
    if (dq == 1) {
        auto r = detail::linear_resultant(cq, cp, max_x_degree);
        return (dp * dq) % 2 == 0 ? r : -r;
    }
    const std::size_t sz = static_cast<std::size_t>(dp + dq);
    std::vector<std::vector<MultiPoly>> m(sz, std::vector<MultiPoly>(sz, MultiPoly(p, P.n())));
    // Row r holds the coefficients of Y^(dq-1-r) * P, highest power first.
    for (int r = 0; r < dq; ++r) {
        for (int k = 0; k <= dp; ++k) {
            m[r][r + dp - k] = cp[k];
        }
    }
    for (int r = 0; r < dp; ++r) {
        for (int k = 0; k <= dq; ++k) {
            m[dq + r][r + dq - k] = cq[k];
        }
    }
    return bareiss_determinant(std::move(m), p, P.n(), max_x_degree);
}

} // namespace cartier

#endif
