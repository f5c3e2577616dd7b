#ifndef CARTIER_CHRISTOL_HPP
#define CARTIER_CHRISTOL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <cartier/dfao.hpp>
#include <cartier/error.hpp>
#include <cartier/hensel.hpp>
#include <cartier/kernel.hpp>
#include <cartier/linear_algebra.hpp>
#include <cartier/multi_polynomial.hpp>
#include <cartier/resultant.hpp>
#include <cartier/series.hpp>

namespace cartier
{

// Result of substituting a series into a polynomial: either the identity holds
// up to X^precision, or the first nonzero coefficient sits at failing_exponent.
struct AnnihilationVerdict {
    bool holds = false;
    std::int64_t precision = 0;
    std::int64_t failing_exponent = 0;

    std::string to_string() const
    {
        if (!holds) {
            return "fails at exponent " + std::to_string(failing_exponent);
        }
        if (precision == Series::infinite) {
            return "holds exactly";
        }
        return "holds mod X^" + std::to_string(precision);
    }
};

inline AnnihilationVerdict verify_annihilation(const MultiPoly &P, const Series &F)
{
    const auto v = eval_univariate(series_coefficients(P), F);
    if (v.is_zero()) {
        return {true, v.trunc(), 0};
    }
    return {false, v.trunc(), v.offset()};
}

// sum_{n < N} u(n) X^n for the sequence generated by M.
inline Series automatic_series(const Dfao &M, std::int64_t N)
{
    return Series::from_coeffs(M.p(), 0, M.sequence(static_cast<std::size_t>(N)), N);
}

// A root of an annihilating polynomial in F_p[[X]], identified by its residue
// (seed) and, when the residue is not a simple root, by the known prefix of
// the cached expansion.
struct AlgebraicSeries {
    MultiPoly annihilator;
    std::uint32_t seed = 0;
    Series expansion;

    static AlgebraicSeries from_seed(const MultiPoly &P, std::uint32_t seed, std::int64_t N = default_truncation)
    {
        check_annihilator(P);
        try {
            return {P, seed, hensel_expand(P, seed, N)};
        } catch (const domain_error &) {
            if (seed >= P.p()) {
                throw;
            }
        }
        return from_prefix(P, Series::from_coeffs(P.p(), 0, {seed}, 1), N);
    }

    // The unique root of P in F_p[[X]] agreeing with `prefix` where it is known.
    static AlgebraicSeries from_prefix(const MultiPoly &P, const Series &prefix, std::int64_t N = default_truncation)
    {
        check_annihilator(P);
        const auto rs = integral_roots(P, N);
        std::vector<Series> matches;
        for (const auto &r : rs.roots) {
            const auto n = std::min(prefix.trunc(), r.trunc());
            if (r.equal_mod(prefix, n)) {
                matches.push_back(r);
            }
        }
        if (matches.empty()) {
            throw domain_error("no root of " + to_string(P) + " in F_p[[X]] starts with the given coefficients" +
                               (rs.complete ? "" : " (root search incomplete at this precision)"));
        }
        if (matches.size() > 1) {
            throw domain_error("several roots of " + to_string(P) + " share the given prefix; give more coefficients");
        }
        return {P, matches[0].coeff(0), matches[0]};
    }

    Series expand(std::int64_t N) const
    {
        if (expansion.trunc() >= N) {
            return expansion.truncate(N);
        }
        try {
            return hensel_expand(annihilator, seed, N);
        } catch (const domain_error &) {
        }
        return from_prefix(annihilator, expansion, N).expansion;
    }

private:
    static void check_annihilator(const MultiPoly &P)
    {
        if (P.is_zero()) {
            throw domain_error("the zero polynomial is not an annihilator");
        }
        if (P.n() != 1) {
            throw domain_error("annihilator must be a polynomial in one variable Y");
        }
    }
};

struct KernelOptions {
    std::size_t max_size = 64;
    // Elements known to fewer coefficients than this cannot be compared.
    std::int64_t min_precision = 16;
};

// Cartier closure of a truncated series. Elements are merged when equal at
// their common precision; `precision` is the smallest such comparison order,
// and `certified` stays false whenever any comparison was made at truncation.
struct SeriesKernel {
    std::vector<Series> elements;
    KernelTable table;
    bool certified = false;
    std::int64_t precision = Series::infinite;
};

inline SeriesKernel series_kernel(const Series &F, const KernelOptions &opt = {})
{
    const auto p = F.p();
    SeriesKernel K;
    K.table.p = p;
    K.elements.push_back(F);
    bool exact = F.is_exact();
    for (std::size_t k = 0; k < K.elements.size(); ++k) {
        std::vector<std::size_t> row;
        for (std::uint32_t i = 0; i < p; ++i) {
            auto child = K.elements[k].cartier(i);
            if (child.trunc() < opt.min_precision) {
                throw precision_error("kernel closure ran out of precision: an element is known only to X^" +
                                      std::to_string(child.trunc()) + "; raise the truncation order");
            }
            std::size_t match = K.elements.size();
            for (std::size_t j = 0; j < K.elements.size(); ++j) {
                const auto n = std::min(child.trunc(), K.elements[j].trunc());
                const bool eq = n == Series::infinite ? child == K.elements[j] : child.equal_mod(K.elements[j], n);
                if (eq) {
                    match = j;
                    if (n != Series::infinite) {
                        K.precision = std::min(K.precision, n);
                        exact = false;
                    }
                    break;
                }
            }
            if (match == K.elements.size()) {
                if (K.elements.size() >= opt.max_size) {
                    throw bound_error("kernel closure exceeds " + std::to_string(opt.max_size) +
                                      " elements before stabilizing; raise the truncation order or the size bound");
                }
                exact = exact && child.is_exact();
                K.elements.push_back(std::move(child));
            }
            row.push_back(match);
        }
        K.table.closure.push_back(std::move(row));
    }
    for (const auto &e : K.elements) {
        K.table.outputs.push_back(e.coeff(0));
    }
    K.table.labels = default_labels(K.elements.size());
    K.certified = exact;
    return K;
}

inline SeriesKernel series_kernel(const AlgebraicSeries &F, std::int64_t N, const KernelOptions &opt = {})
{
    return series_kernel(F.expand(N), opt);
}

// Kernel relations in linear form: U_j = sum_l M[j][l] U_l^p over F_p[X], with
// U_0 the series itself. From a kernel table M[j][l] is the sum of X^i over
// the digits i with Lambda_i u_j = u_l.
struct LinearKernel {
    std::uint32_t p = 2;
    std::vector<std::vector<Poly>> M;

    std::size_t size() const noexcept { return M.size(); }
};

inline LinearKernel linear_kernel(const KernelTable &k)
{
    const auto n = k.size();
    LinearKernel L{k.p, std::vector<std::vector<Poly>>(n, std::vector<Poly>(n, Poly(k.p)))};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::uint32_t i = 0; i < k.p; ++i) {
            L.M[j][k.closure[j][i]] += Poly::monomial(k.p, 1, i);
        }
    }
    return L;
}

// Kernel elements of an automatic sequence are functions g on states, and
// Lambda_i (g -> g o delta(., i)) is F_p-linear in g. Since (sum a_l U_l)^p =
// sum a_l U_l^p for a_l in F_p, a basis of their span (at most one element per
// state) already closes up, and is usually far smaller than the kernel.
inline LinearKernel linear_kernel(const AutomatonKernel &ak)
{
    const auto p = ak.table.p;
    const auto Q = ak.normalized.size();
    std::vector<std::size_t> basis;
    // Columns are basis functions followed by -v; a kernel vector ending in 1
    // gives the coordinates of v.
    auto coordinates = [&](const std::vector<std::uint32_t> &v) -> std::vector<std::uint32_t> {
        const PrimeField f{p};
        std::vector<std::vector<std::uint32_t>> A(Q, std::vector<std::uint32_t>(basis.size() + 1));
        for (std::size_t q = 0; q < Q; ++q) {
            for (std::size_t b = 0; b < basis.size(); ++b) {
                A[q][b] = ak.functions[basis[b]][q];
            }
            A[q][basis.size()] = f.neg(v[q]);
        }
        for (const auto &x : nullspace_mod_p(std::move(A), basis.size() + 1, p)) {
            if (x.back() != 0) {
                const auto s = f.inv(x.back());
                std::vector<std::uint32_t> c(basis.size());
                for (std::size_t b = 0; b < basis.size(); ++b) {
                    c[b] = f.mul(x[b], s);
                }
                return c;
            }
        }
        return {};
    };
    for (std::size_t j = 0; j < ak.functions.size(); ++j) {
        if (basis.empty() || coordinates(ak.functions[j]).empty()) {
            basis.push_back(j);
        }
    }
    const auto r = basis.size();
    LinearKernel L{p, std::vector<std::vector<Poly>>(r, std::vector<Poly>(r, Poly(p)))};
    for (std::size_t b = 0; b < r; ++b) {
        for (std::uint32_t i = 0; i < p; ++i) {
            const auto c = coordinates(ak.functions[ak.table.closure[basis[b]][i]]);
            for (std::size_t l = 0; l < r; ++l) {
                L.M[b][l] += Poly::monomial(p, c[l], i);
            }
        }
    }
    return L;
}

struct ChristolOptions {
    // Growth guard on X-degrees inside resultant elimination.
    int max_x_degree = 512;
    // Largest Sylvester matrix attempted before switching to linear algebra.
    int max_sylvester = 16;
    // Largest Bezout bound (product of total Y-degrees) on a resultant.
    int max_bezout = 81;
    // Precision at which the returned annihilator is verified.
    std::int64_t verify_precision = 256;
    // Bounds on the small-annihilator search: unknowns per system and Y-degree.
    std::size_t max_unknowns = 240;
    int max_search_degree = 32;
    bool minimize = true;
};

struct ChristolPolynomial {
    MultiPoly annihilator;
    // Polynomial produced by elimination before the small-annihilator search.
    MultiPoly eliminated;
    // "resultant" or "linear-algebra".
    std::string method;
    std::string note;
    AnnihilationVerdict verdict;
    KernelTable kernel;
    // Size of the linear basis the elimination ran on.
    std::size_t basis_size = 0;
};

namespace detail
{

inline std::vector<MultiPoly> kernel_system(const LinearKernel &k)
{
    const auto p = k.p;
    const auto n = k.size();
    std::vector<MultiPoly> sys;
    for (std::size_t j = 0; j < n; ++j) {
        auto E = MultiPoly::variable(p, n, j);
        for (std::size_t l = 0; l < n; ++l) {
            if (!k.M[j][l].is_zero()) {
                E -= MultiPoly::monomial(p, n, k.M[j][l], MultiPoly::unit_exponent(n, l, p));
            }
        }
        sys.push_back(E);
    }
    return sys;
}

// Eliminates Y2..Yk from Y_j = sum_l M[j][l] Y_l^p by iterated resultants,
// smallest degree first, with direct substitution when a polynomial is linear
// in the variable with a constant coefficient.
inline MultiPoly eliminate_kernel_system(const LinearKernel &k, const ChristolOptions &opt)
{
    const auto n = k.size();
    const auto p = k.p;
    auto sys = kernel_system(k);
    std::vector<std::size_t> remaining;
    for (std::size_t v = 1; v < n; ++v) {
        remaining.push_back(v);
    }
    while (!remaining.empty()) {
        // Variable with the smallest degree sum; ties by index.
        std::size_t best = 0;
        long best_cost = std::numeric_limits<long>::max();
        for (std::size_t r = 0; r < remaining.size(); ++r) {
            long cost = 0;
            for (const auto &P : sys) {
                cost += std::max(P.degree_in(remaining[r]), 0);
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = r;
            }
        }
        const auto v = remaining[best];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        std::vector<MultiPoly> with;
        std::vector<MultiPoly> without;
        for (auto &P : sys) {
            (P.mentions(v) ? with : without).push_back(std::move(P));
        }
        if (with.size() <= 1) {
            sys = std::move(without);
            continue;
        }
        std::size_t piv = 0;
        for (std::size_t r = 1; r < with.size(); ++r) {
            const auto dr = with[r].degree_in(v);
            const auto dp = with[piv].degree_in(v);
            if (dr < dp || (dr == dp && with[r].term_count() < with[piv].term_count())) {
                piv = r;
            }
        }
        const auto A = with[piv];
        const auto lead = A.coefficient_in(v, 1);
        const bool unit_linear = A.degree_in(v) == 1 && lead.is_constant() && lead.constant_term().degree() == 0;
        for (std::size_t r = 0; r < with.size(); ++r) {
            if (r == piv) {
                continue;
            }
            MultiPoly R;
            if (unit_linear) {
                const auto u = PrimeField{p}.inv(lead.constant_term().leading());
                const auto solved = (-A.coefficient_in(v, 0)).scale(Poly::constant(p, u));
                R = with[r].substitute(v, solved);
            } else {
                if (A.degree_in(v) + with[r].degree_in(v) > opt.max_sylvester) {
                    throw bound_error("resultant elimination: Sylvester matrix larger than " +
                                      std::to_string(opt.max_sylvester));
                }
                if (A.total_degree() * with[r].total_degree() > opt.max_bezout) {
                    throw bound_error("resultant elimination: Bezout bound exceeds " + std::to_string(opt.max_bezout));
                }
                R = resultant(A, with[r], v, opt.max_x_degree);
            }
            if (R.is_zero()) {
                throw domain_error("resultant elimination: intermediate resultant vanishes identically");
            }
            if (x_degree(R) > opt.max_x_degree) {
                throw bound_error("resultant elimination: X-degree exceeds bound " + std::to_string(opt.max_x_degree));
            }
            without.push_back(primitive_part(R));
        }
        sys = std::move(without);
    }
    const MultiPoly *best = nullptr;
    for (const auto &P : sys) {
        if (P.mentions(0) && (best == nullptr || P.degree_in(0) < best->degree_in(0))) {
            best = &P;
        }
    }
    if (best == nullptr) {
        throw domain_error("resultant elimination left no polynomial in Y1");
    }
    std::vector<std::size_t> target(n, n);
    target[0] = 0;
    return best->remap(1, target);
}

// Linear-algebra route: with V the vector of kernel series, V = M V^(p). Hence
// F^(p^e) = row_0(M^[p^e] ... M^[p^(m-1)]) . V^(p^m) for e <= m, and the first
// m for which these m+1 rows are dependent over F_p(X) gives an annihilator
// sum_e c_e Y^(p^e). Such an m <= size always exists.
inline MultiPoly ore_annihilator(const LinearKernel &k)
{
    const auto p = k.p;
    const auto n = k.size();
    const auto &M = k.M;
    auto frob = [&](const std::vector<std::vector<Poly>> &A, std::size_t times) {
        auto B = A;
        for (auto &row : B) {
            for (auto &x : row) {
                for (std::size_t t = 0; t < times; ++t) {
                    x = x.frobenius();
                }
            }
        }
        return B;
    };
    auto matmul = [&](const std::vector<std::vector<Poly>> &A, const std::vector<std::vector<Poly>> &B) {
        std::vector<std::vector<Poly>> C(n, std::vector<Poly>(n, Poly(p)));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (A[a][b].is_zero()) {
                    continue;
                }
                for (std::size_t c = 0; c < n; ++c) {
                    C[a][c] += A[a][b] * B[b][c];
                }
            }
        }
        return C;
    };
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<std::vector<Poly>> T(n, std::vector<Poly>(n, Poly(p)));
        for (std::size_t a = 0; a < n; ++a) {
            T[a][a] = Poly::constant(p, 1);
        }
        std::vector<std::vector<Poly>> rows(m + 1);
        rows[m] = T[0];
        for (std::size_t e = m; e-- > 0;) {
            T = matmul(frob(M, e), T);
            rows[e] = T[0];
        }
        // Columns are the rows r_e; solve sum_e c_e r_e = 0.
        std::vector<std::vector<RationalFunction>> A(n, std::vector<RationalFunction>(m + 1));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t e = 0; e <= m; ++e) {
                A[a][e] = RationalFunction(rows[e][a]);
            }
        }
        const auto ns = nullspace_rational(A, m + 1);
        if (ns.empty()) {
            continue;
        }
        const auto c = clear_denominators(ns.front());
        MultiPoly P(p, 1);
        std::uint32_t pe = 1;
        for (std::size_t e = 0; e <= m; ++e) {
            P.add_term({pe}, c[e]);
            pe *= p;
        }
        return primitive_part(P);
    }
    throw domain_error("linear-algebra elimination found no dependency (kernel table inconsistent)");
}

} // namespace detail

// Smallest-degree divisor Q of P (in F_p(X)[Y]) that vanishes on F at
// truncation, found by solving for sum q_ab X^b Y^a with deg_Y = d ascending.
// For each d the least workable deg_X = e (at most deg_X P by Gauss's lemma)
// is located by bisection, since a solution at e persists at e + 1. Series in
// characteristic p can have unusually good rational approximations, so each
// system is overdetermined by a factor of two and candidates are checked
// against all of F before the divisibility test. Returns P
// when nothing smaller is found within the unknown budget.
inline MultiPoly minimize_annihilator(const MultiPoly &P, const Series &F, std::size_t max_unknowns = 240,
                                      int max_degree = 32, std::int64_t margin = 24)
{
    const auto p = P.p();
    const int D = P.degree_in(0);
    const int E = x_degree(P);
    std::vector<Series> pw{Series::constant(p, 1)};
    auto solve = [&](int d, int e) {
        const auto U = static_cast<std::size_t>((d + 1) * (e + 1));
        const auto rows = static_cast<std::size_t>(std::min<std::int64_t>(F.trunc(), 2 * static_cast<std::int64_t>(U) + margin));
        while (pw.size() <= static_cast<std::size_t>(d)) {
            pw.push_back(pw.back() * F);
        }
        std::vector<std::vector<std::uint32_t>> A(rows, std::vector<std::uint32_t>(U, 0));
        for (int a = 0; a <= d; ++a) {
            const auto &c = pw[static_cast<std::size_t>(a)].coeffs();
            const auto off = pw[static_cast<std::size_t>(a)].offset();
            for (std::size_t r = 0; r < rows; ++r) {
                for (int b = 0; b <= e && static_cast<std::int64_t>(r) - b >= off; ++b) {
                    const auto k = static_cast<std::int64_t>(r) - b - off;
                    if (k < static_cast<std::int64_t>(c.size())) {
                        A[r][static_cast<std::size_t>(a * (e + 1) + b)] = c[static_cast<std::size_t>(k)];
                    }
                }
            }
        }
        return nullspace_mod_p(std::move(A), U, p);
    };
    auto candidate = [&](const std::vector<std::uint32_t> &v, int d, int e) {
        MultiPoly Q(p, 1);
        for (int a = 0; a <= d; ++a) {
            std::vector<std::uint32_t> c(static_cast<std::size_t>(e + 1));
            for (int b = 0; b <= e; ++b) {
                c[static_cast<std::size_t>(b)] = v[static_cast<std::size_t>(a * (e + 1) + b)];
            }
            Q.add_term({static_cast<std::uint32_t>(a)}, Poly(p, c));
        }
        return Q;
    };
    for (int d = 1; d < D && d <= max_degree; ++d) {
        int hi = std::min<int>(E, static_cast<int>(max_unknowns) / (d + 1) - 1);
        while (hi >= 0 && (d + 1) * (hi + 1) + margin > F.trunc()) {
            --hi;
        }
        if (hi < 0) {
            break;
        }
        if (solve(d, hi).empty()) {
            continue;
        }
        int lo = 0;
        int top = hi;
        while (lo < top) {
            const int mid = (lo + top) / 2;
            if (solve(d, mid).empty()) {
                lo = mid + 1;
            } else {
                top = mid;
            }
        }
        for (int e = lo; e <= hi; ++e) {
            for (const auto &v : solve(d, e)) {
                auto Q = candidate(v, d, e);
                if (Q.degree_in(0) != d) {
                    continue;
                }
                Q = primitive_part(Q);
                if (verify_annihilation(Q, F).holds && pseudo_remainder(P, Q, 0).is_zero()) {
                    return Q;
                }
            }
        }
    }
    return P;
}

// Automaton -> annihilating polynomial of sum u(n) X^n. The kernel system is
// eliminated by resultants; if that is blocked (degree guard or a vanishing
// resultant) the linear-algebra route is used instead. The result is then
// shrunk to the smallest verified divisor and checked by substitution.
inline ChristolPolynomial automaton_to_polynomial(const Dfao &M, const ChristolOptions &opt = {})
{
    ChristolPolynomial out;
    const auto ak = kernel_from_automaton(M);
    out.kernel = ak.table;
    const auto L = linear_kernel(ak);
    out.basis_size = L.size();
    try {
        out.eliminated = detail::eliminate_kernel_system(L, opt);
        out.method = "resultant";
    } catch (const domain_error &e) {
        out.note = std::string("resultant elimination abandoned (") + e.what() + "); used linear algebra";
        out.eliminated = detail::ore_annihilator(L);
        out.method = "linear-algebra";
    }
    out.eliminated = primitive_part(out.eliminated);
    const auto F = automatic_series(M, std::max<std::int64_t>(opt.verify_precision, 1024));
    out.annihilator = opt.minimize ? minimize_annihilator(out.eliminated, F, opt.max_unknowns, opt.max_search_degree) : out.eliminated;
    out.verdict = verify_annihilation(out.annihilator, F.truncate(opt.verify_precision));
    if (!out.verdict.holds || out.verdict.precision < opt.verify_precision) {
        throw domain_error("derived polynomial " + to_string(out.annihilator) +
                           " failed verification: " + out.verdict.to_string());
    }
    return out;
}

struct ChristolAutomaton {
    Dfao automaton;
    SeriesKernel kernel;
    // Truncation order the kernel was computed at.
    std::int64_t truncation = 0;
};

// Algebraic series -> automaton through the truncated Cartier closure. When
// grow is set, a closure that runs out of precision is retried with p times
// more coefficients, up to max_truncation.
inline ChristolAutomaton polynomial_to_automaton(const AlgebraicSeries &F, std::int64_t N, const KernelOptions &opt = {},
                                                 bool grow = true, std::int64_t max_truncation = 1 << 16)
{
    for (;;) {
        try {
            auto K = series_kernel(F, N, opt);
            auto A = automaton_from_kernel(K.table);
            return {std::move(A), std::move(K), N};
        } catch (const precision_error &) {
            if (!grow || N * F.annihilator.p() > max_truncation) {
                throw;
            }
            N *= F.annihilator.p();
        }
    }
}

} // namespace cartier

#endif
