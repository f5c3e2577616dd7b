#ifndef CARTIER_EQSYS_HPP
#define CARTIER_EQSYS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <cartier/cartier_ops.hpp>
#include <cartier/christol.hpp>
#include <cartier/error.hpp>
#include <cartier/hensel.hpp>
#include <cartier/multi_polynomial.hpp>
#include <cartier/network.hpp>
#include <cartier/series.hpp>

namespace cartier
{

struct SystemVariable {
    std::string name;
    // Where the variable came from: a network element, or a Cartier component
    // Lambda_i of an earlier variable.
    std::string provenance;
};

struct SystemTarget {
    std::size_t index = 0;
    // B_j is kept symbolic.
    std::string description;
};

// (n, sigma, Omega, y, B): polynomials over F_p[X] in Y1..Yn vanishing at the
// base point, with Omega modelled by nonvanishing conditions.
struct GoodEquationalSystem {
    std::uint32_t p = 2;
    std::vector<SystemVariable> vars;
    std::vector<MultiPoly> sigma;
    std::vector<Series> base_point;
    std::vector<SystemTarget> targets;
    std::vector<MultiPoly> nonvanishing;

    std::size_t n() const noexcept { return vars.size(); }

    bool is_distinguished(std::size_t j) const
    {
        return std::any_of(targets.begin(), targets.end(), [&](const SystemTarget &t) { return t.index == j; });
    }

    void validate() const
    {
        if (base_point.size() != n()) {
            throw domain_error("base point has " + std::to_string(base_point.size()) + " coordinates for " +
                               std::to_string(n()) + " variables");
        }
        for (const auto &t : targets) {
            if (t.index >= n()) {
                throw domain_error("distinguished index " + std::to_string(t.index + 1) + " out of range");
            }
        }
        for (const auto &P : sigma) {
            if (P.n() != n() || P.p() != p) {
                throw domain_error("polynomial " + to_string(P) + " does not live in this system");
            }
            if (!mpoly_eval(P, base_point).is_zero()) {
                throw domain_error("polynomial " + to_string(P) + " does not vanish at the base point");
            }
        }
        for (const auto &C : nonvanishing) {
            if (C.n() != n() || mpoly_eval(C, base_point).is_zero()) {
                throw domain_error("nonvanishing condition " + to_string(C) + " fails at the base point");
            }
        }
    }
};

using Trace = std::vector<std::string>;

namespace detail
{

inline void note(Trace *trace, std::string s)
{
    if (trace) {
        trace->push_back(std::move(s));
    }
}

inline std::vector<std::size_t> mentioning(const GoodEquationalSystem &s, std::size_t j)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < s.sigma.size(); ++k) {
        if (s.sigma[k].mentions(j)) {
            out.push_back(k);
        }
    }
    return out;
}

// Normalizes up to units of F_p[X] (dividing the content only shrinks the
// root set to a subset of the old one), drops zeros and duplicates.
inline void tidy(GoodEquationalSystem &s)
{
    std::vector<MultiPoly> out;
    for (const auto &P : s.sigma) {
        if (P.is_zero()) {
            continue;
        }
        auto Q = primitive_part(P);
        if (Q.variables().empty()) {
            throw domain_error("system became inconsistent: nonzero constant " + to_string(P));
        }
        if (std::find(out.begin(), out.end(), Q) == out.end()) {
            out.push_back(std::move(Q));
        }
    }
    s.sigma = std::move(out);
    std::vector<MultiPoly> nv;
    for (const auto &C : s.nonvanishing) {
        if (C.variables().empty()) {
            continue;
        }
        auto Q = primitive_part(C);
        if (std::find(nv.begin(), nv.end(), Q) == nv.end()) {
            nv.push_back(std::move(Q));
        }
    }
    s.nonvanishing = std::move(nv);
}

inline void add_nonvanishing(GoodEquationalSystem &s, const MultiPoly &C)
{
    if (C.variables().empty()) {
        return;
    }
    const auto Q = primitive_part(C);
    if (std::find(s.nonvanishing.begin(), s.nonvanishing.end(), Q) == s.nonvanishing.end()) {
        s.nonvanishing.push_back(Q);
    }
}

// Removes variable j, which must no longer occur in sigma.
inline void drop_variable(GoodEquationalSystem &s, std::size_t j)
{
    const auto n = s.n();
    std::vector<std::size_t> target(n);
    for (std::size_t k = 0; k < n; ++k) {
        target[k] = k < j ? k : k == j ? n : k - 1;
    }
    for (auto &P : s.sigma) {
        P = P.remap(n - 1, target);
    }
    std::vector<MultiPoly> nv;
    for (const auto &C : s.nonvanishing) {
        if (!C.mentions(j)) {
            nv.push_back(C.remap(n - 1, target));
        }
    }
    s.nonvanishing = std::move(nv);
    s.vars.erase(s.vars.begin() + static_cast<std::ptrdiff_t>(j));
    s.base_point.erase(s.base_point.begin() + static_cast<std::ptrdiff_t>(j));
    for (auto &t : s.targets) {
        if (t.index > j) {
            --t.index;
        }
    }
}

inline MultiPoly y_power(std::uint32_t p, std::size_t n, std::size_t j, std::uint32_t k)
{
    return MultiPoly::monomial(p, n, Poly::constant(p, 1), MultiPoly::unit_exponent(n, j, k));
}

inline std::string var_name(const GoodEquationalSystem &s, std::size_t j)
{
    return "Y" + std::to_string(j + 1) + (s.vars[j].name.empty() ? "" : " (" + s.vars[j].name + ")");
}

} // namespace detail

// Substitutes away variables that some polynomial defines linearly with a unit
// coefficient (c*Y_j + R, R free of Y_j), latest variable first. Distinguished
// variables are kept.
inline GoodEquationalSystem merge_definitions(GoodEquationalSystem s, Trace *trace = nullptr)
{
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = s.n(); j-- > 0 && !changed;) {
            if (s.is_distinguished(j)) {
                continue;
            }
            for (std::size_t k = 0; k < s.sigma.size(); ++k) {
                const auto &P = s.sigma[k];
                if (P.degree_in(j) != 1) {
                    continue;
                }
                const auto c = P.coefficient_in(j, 1);
                if (!c.is_constant() || c.constant_term().degree() != 0) {
                    continue;
                }
                const auto inv = PrimeField{s.p}.inv(c.constant_term().leading());
                const auto rest = P - c * detail::y_power(s.p, s.n(), j, 1);
                const auto solved = (-rest).scale(Poly::constant(s.p, inv));
                detail::note(trace, "merge " + detail::var_name(s, j) + " = " + to_string(solved));
                s.sigma.erase(s.sigma.begin() + static_cast<std::ptrdiff_t>(k));
                for (auto &Q : s.sigma) {
                    Q = Q.substitute(j, solved);
                }
                for (auto &C : s.nonvanishing) {
                    C = C.substitute(j, solved);
                }
                detail::drop_variable(s, j);
                detail::tidy(s);
                changed = true;
                break;
            }
        }
    }
    return s;
}

// Encodes a network: non-constant members become variables, each triple
// a + b = c or a * b = c becomes a polynomial, constants stay coefficients.
// Constants must be polynomials in X. A target that is itself a constant x
// contributes a variable with the equation Y - x.
inline GoodEquationalSystem system_from_witness(const SeriesNetwork &net, const std::vector<std::size_t> &targets,
                                                bool merge = true, Trace *trace = nullptr)
{
    const auto p = net.ambient().p;
    GoodEquationalSystem s;
    s.p = p;
    std::vector<std::size_t> var(net.size(), net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto &e = net.element(i);
        if (e.constant) {
            if (!e.value.is_polynomial()) {
                throw domain_error("constant " + e.name + " is not a polynomial in X");
            }
            continue;
        }
        var[i] = s.vars.size();
        s.vars.push_back({e.name, "element " + e.name + " = " + e.expr});
        s.base_point.push_back(e.value);
    }
    std::vector<std::pair<std::size_t, MultiPoly>> pinned;
    for (auto t : targets) {
        if (t >= net.size()) {
            throw domain_error("target is not a network member");
        }
        if (var[t] == net.size()) {
            var[t] = s.vars.size();
            s.vars.push_back({net.element(t).name, "constant target " + net.element(t).name});
            s.base_point.push_back(net.value(t));
            pinned.push_back({var[t], MultiPoly()});
        }
        s.targets.push_back({var[t], "phi(" + net.element(t).name + ")"});
    }
    const auto n = s.vars.size();
    auto term = [&](std::size_t i) {
        return var[i] == net.size() ? MultiPoly::constant(p, n, net.value(i).to_poly())
                                    : MultiPoly::variable(p, n, var[i]);
    };
    for (auto &[j, P] : pinned) {
        for (std::size_t i = 0; i < net.size(); ++i) {
            if (var[i] == j) {
                s.sigma.push_back(MultiPoly::variable(p, n, j) - MultiPoly::constant(p, n, net.value(i).to_poly()));
            }
        }
    }
    for (const auto &t : net.mul_triples()) {
        s.sigma.push_back(term(t[0]) * term(t[1]) - term(t[2]));
    }
    for (const auto &t : net.add_triples()) {
        s.sigma.push_back(term(t[0]) + term(t[1]) - term(t[2]));
    }
    detail::tidy(s);
    detail::note(trace, "encoded " + std::to_string(net.size()) + " elements as " + std::to_string(n) +
                            " variables and " + std::to_string(s.sigma.size()) + " polynomials");
    if (merge) {
        s = merge_definitions(std::move(s), trace);
    }
    return s;
}

// Pseudo-division until at most one polynomial mentions Y_j. A leading
// coefficient a that vanishes at the base point is peeled off (P becomes
// P - a Y_j^d together with a); otherwise R = b P1 - a Y_j^(d1-d2) P2 replaces
// P1 and b joins the nonvanishing conditions, so common roots of the new
// system in Omega are common roots of the old.
inline GoodEquationalSystem simplify_over_variable(GoodEquationalSystem s, std::size_t j, Trace *trace = nullptr)
{
    if (j >= s.n()) {
        throw domain_error("variable index out of range");
    }
    if (s.is_distinguished(j)) {
        throw domain_error("cannot simplify over distinguished variable " + detail::var_name(s, j));
    }
    for (;;) {
        detail::tidy(s);
        const auto idx = detail::mentioning(s, j);
        if (idx.size() <= 1) {
            return s;
        }
        auto i2 = idx[0];
        auto i1 = idx[0];
        for (auto k : idx) {
            if (s.sigma[k].degree_in(j) < s.sigma[i2].degree_in(j)) {
                i2 = k;
            }
        }
        i1 = i2 == idx[0] ? idx[1] : idx[0];
        for (auto k : idx) {
            if (k != i2 && s.sigma[k].degree_in(j) > s.sigma[i1].degree_in(j)) {
                i1 = k;
            }
        }
        const auto P1 = s.sigma[i1];
        const auto P2 = s.sigma[i2];
        const auto d1 = static_cast<std::uint32_t>(P1.degree_in(j));
        const auto d2 = static_cast<std::uint32_t>(P2.degree_in(j));
        const auto a = P1.coefficient_in(j, d1);
        const auto b = P2.coefficient_in(j, d2);
        bool peeled = false;
        for (auto [k, lc, d] : {std::tuple{i1, a, d1}, std::tuple{i2, b, d2}}) {
            if (!peeled && mpoly_eval(lc, s.base_point).is_zero()) {
                const auto P = s.sigma[k];
                s.sigma[k] = P - lc * detail::y_power(s.p, s.n(), j, d);
                s.sigma.push_back(lc);
                detail::note(trace, "simplify " + detail::var_name(s, j) + ": peel leading coefficient " +
                                        to_string(lc) + " (vanishes at the base point)");
                peeled = true;
            }
        }
        if (peeled) {
            continue;
        }
        s.sigma[i1] = b * P1 - a * detail::y_power(s.p, s.n(), j, d1 - d2) * P2;
        detail::add_nonvanishing(s, b);
        detail::note(trace, "simplify " + detail::var_name(s, j) + ": degree " + std::to_string(d1) + " against " +
                                std::to_string(d2) + ", require " + to_string(b) + " != 0");
    }
}

// P = sum_s alpha_s Y^(p s) = sum_i X^i (sum_s Lambda_i(alpha_s) Y^s)^p. Every
// common root of the inner polynomials P_i is a root of P, and a root of P in
// F_p[[X]] is a root of every P_i by uniqueness of the decomposition.
inline std::vector<MultiPoly> split_polynomial(const MultiPoly &P, const GeneralizedCartier &gco)
{
    const auto p = P.p();
    if (gco.p != p) {
        throw domain_error("generalized Cartier operator has the wrong characteristic");
    }
    std::vector<MultiPoly> parts(p, MultiPoly(p, P.n()));
    for (const auto &[e, c] : P.terms()) {
        Exponent s(e.size());
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] % p != 0) {
                throw domain_error("split needs every exponent divisible by p; " + to_string(P) + " has Y" +
                                   std::to_string(k + 1) + "^" + std::to_string(e[k]));
            }
            s[k] = e[k] / p;
        }
        const auto lam = gco.decompose(RationalFunction(c));
        for (std::uint32_t i = 0; i < p; ++i) {
            if (!lam[i].is_polynomial()) {
                throw domain_error("coefficient " + c.to_string() + " does not decompose inside F_p[X]");
            }
            parts[i].add_term(s, lam[i].numerator() * Poly::constant(p, PrimeField{p}.inv(lam[i].denominator().leading())));
        }
    }
    std::vector<MultiPoly> out;
    for (auto &Q : parts) {
        if (!Q.is_zero()) {
            out.push_back(std::move(Q));
        }
    }
    return out;
}

inline bool all_exponents_divisible(const MultiPoly &P)
{
    for (const auto &[e, c] : P.terms()) {
        for (auto k : e) {
            if (k % P.p() != 0) {
                return false;
            }
        }
    }
    return true;
}

// Projection of the single polynomial P mentioning Y_j; P is kept as a solved
// form in the trace and its leading coefficient joins the nonvanishing
// conditions so that every remaining root extends to a root of P.
inline GoodEquationalSystem eliminate_variable(GoodEquationalSystem s, std::size_t j, Trace *trace = nullptr)
{
    if (j >= s.n()) {
        throw domain_error("variable index out of range");
    }
    if (s.is_distinguished(j)) {
        throw domain_error("cannot eliminate distinguished variable " + detail::var_name(s, j));
    }
    detail::tidy(s);
    const auto idx = detail::mentioning(s, j);
    if (idx.size() != 1) {
        throw domain_error("elimination needs exactly one polynomial in " + detail::var_name(s, j) + ", found " +
                           std::to_string(idx.size()) + " (simplify first)");
    }
    auto P = s.sigma[idx[0]];
    if (P.partial(j).is_zero()) {
        throw domain_error("d/d" + detail::var_name(s, j) + " of " + to_string(P) + " vanishes (split first)");
    }
    s.sigma.erase(s.sigma.begin() + static_cast<std::ptrdiff_t>(idx[0]));
    // Leading coefficients vanishing at the base point become constraints of their own.
    auto lc = P.coefficient_in(j, static_cast<std::size_t>(P.degree_in(j)));
    while (P.degree_in(j) > 0 && mpoly_eval(lc, s.base_point).is_zero()) {
        detail::note(trace, "eliminate " + detail::var_name(s, j) + ": peel leading coefficient " + to_string(lc) +
                                " (vanishes at the base point)");
        P = P - lc * detail::y_power(s.p, s.n(), j, static_cast<std::uint32_t>(P.degree_in(j)));
        s.sigma.push_back(lc);
        lc = P.coefficient_in(j, static_cast<std::size_t>(std::max(P.degree_in(j), 0)));
    }
    if (P.degree_in(j) <= 0) {
        s.sigma.push_back(P);
        detail::drop_variable(s, j);
        detail::tidy(s);
        return s;
    }
    if (P.partial(j).is_zero()) {
        s.sigma.push_back(P);
        throw domain_error("d/d" + detail::var_name(s, j) + " of " + to_string(P) + " vanishes after peeling (split first)");
    }
    detail::note(trace, "eliminate " + detail::var_name(s, j) + " via solved form " + to_string(P) + " = 0");
    detail::add_nonvanishing(s, lc);
    detail::drop_variable(s, j);
    detail::tidy(s);
    return s;
}

// Y_k = sum_i X^i Y_(k,i)^p with fresh variables Y_(k,i) valued Lambda_i(y_k).
// A distinguished Y_k stays, tied to its components by a link polynomial.
inline GoodEquationalSystem frobenius_substitute(GoodEquationalSystem s, std::size_t k, Trace *trace = nullptr)
{
    const auto p = s.p;
    const auto n0 = s.n();
    const auto name = detail::var_name(s, k);
    for (auto &P : s.sigma) {
        P = P.extend(p);
    }
    for (auto &C : s.nonvanishing) {
        C = C.extend(p);
    }
    const auto parts = cartier_parts(s.base_point[k]);
    const auto n = n0 + p;
    MultiPoly q(p, n);
    for (std::uint32_t i = 0; i < p; ++i) {
        s.vars.push_back({s.vars[k].name + "_" + std::to_string(i), "Lambda_" + std::to_string(i) + " of " + name});
        s.base_point.push_back(parts[i]);
        q += MultiPoly::monomial(p, n, Poly::monomial(p, 1, i), MultiPoly::unit_exponent(n, n0 + i, p));
    }
    for (auto &P : s.sigma) {
        P = P.substitute(k, q);
    }
    for (auto &C : s.nonvanishing) {
        C = C.substitute(k, q);
    }
    detail::note(trace, "substitute " + name + " = sum_i X^i Y_(" + std::to_string(k + 1) + ",i)^" +
                            std::to_string(p) + " with fresh Y" + std::to_string(n0 + 1) + "..Y" + std::to_string(n));
    if (s.is_distinguished(k)) {
        s.sigma.push_back(MultiPoly::variable(p, n, k) - q);
    } else {
        detail::drop_variable(s, k);
    }
    detail::tidy(s);
    return s;
}

struct ReduceOptions {
    std::size_t max_steps = 10000;
    std::size_t max_variables = 64;
};

struct ReductionResult {
    // Keyed by the original distinguished index; univariate in Y (n = 1).
    std::map<std::size_t, MultiPoly> annihilators;
    std::map<std::size_t, AnnihilationVerdict> verdicts;
    Trace trace;
    std::size_t steps = 0;
};

// Two-phase driver per distinguished variable t: split polynomials that are
// p-th powers throughout, simplify over the other variables (lowest degree
// first, ties by index) and eliminate those left in a single polynomial with
// nonzero derivative. A variable stuck in a polynomial in Y_j^p gets the
// other offending variables replaced by their Cartier components, after
// which the polynomial splits. Stops when some polynomial involves Y_t alone.
inline ReductionResult reduce_system(const GoodEquationalSystem &sys, const ReduceOptions &opt = {})
{
    sys.validate();
    ReductionResult res;
    const auto gco = gco_instance(sys.p);
    res.trace.push_back("exact reduction: the implicit function step is replaced by resultant-style pseudo-division "
                        "and solved-form projection; Omega is the list of nonvanishing conditions");
    for (const auto &target : sys.targets) {
        GoodEquationalSystem s = sys;
        s.targets = {target};
        auto &tr = res.trace;
        tr.push_back("target " + detail::var_name(s, target.index) + ": " + target.description);
        bool done = false;
        while (!done) {
            if (++res.steps > opt.max_steps) {
                throw bound_error("reduction exceeded " + std::to_string(opt.max_steps) + " steps; trace:\n" +
                                  [&] {
                                      std::string all;
                                      for (const auto &line : tr) {
                                          all += "  " + line + "\n";
                                      }
                                      return all;
                                  }());
            }
            if (s.n() > opt.max_variables) {
                throw bound_error("reduction grew past " + std::to_string(opt.max_variables) + " variables");
            }
            detail::tidy(s);
            const auto t = s.targets[0].index;
            for (std::size_t j = s.n(); j-- > 0;) {
                if (j != t && detail::mentioning(s, j).empty()) {
                    tr.push_back("drop unconstrained " + detail::var_name(s, j));
                    detail::drop_variable(s, j);
                }
            }
            const auto t2 = s.targets[0].index;
            const MultiPoly *best = nullptr;
            for (const auto &P : s.sigma) {
                const auto vs = P.variables();
                if (vs.size() == 1 && vs[0] == t2 && (!best || P.degree_in(t2) < best->degree_in(t2))) {
                    best = &P;
                }
            }
            if (best) {
                std::vector<std::size_t> to(s.n(), 1);
                to[t2] = 0;
                const auto A = primitive_part(best->remap(1, to));
                const auto v = verify_annihilation(A, s.base_point[t2]);
                tr.push_back("annihilator " + to_string(A) + (v.holds ? " (verified)" : " (FAILED verification)"));
                if (!v.holds) {
                    throw domain_error("reduction produced " + to_string(A) + ", which does not annihilate the base value");
                }
                res.annihilators[target.index] = A;
                res.verdicts[target.index] = v;
                done = true;
                continue;
            }
            bool progressed = false;
            for (std::size_t k = 0; k < s.sigma.size() && !progressed; ++k) {
                if (all_exponents_divisible(s.sigma[k])) {
                    const auto P = s.sigma[k];
                    const auto parts = split_polynomial(P, gco);
                    tr.push_back("split " + to_string(P) + " into " + std::to_string(parts.size()) + " polynomials");
                    s.sigma.erase(s.sigma.begin() + static_cast<std::ptrdiff_t>(k));
                    s.sigma.insert(s.sigma.end(), parts.begin(), parts.end());
                    progressed = true;
                }
            }
            if (progressed) {
                continue;
            }
            std::vector<std::size_t> order;
            for (std::size_t j = 0; j < s.n(); ++j) {
                if (j != t2) {
                    order.push_back(j);
                }
            }
            auto maxdeg = [&](std::size_t j) {
                int d = 0;
                for (const auto &P : s.sigma) {
                    d = std::max(d, P.degree_in(j));
                }
                return d;
            };
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return maxdeg(a) < maxdeg(b); });
            std::vector<std::size_t> stuck;
            for (auto j : order) {
                s = simplify_over_variable(std::move(s), j, &tr);
                const auto idx = detail::mentioning(s, j);
                if (idx.empty()) {
                    progressed = true;
                    break;
                }
                if (idx.size() == 1 && !s.sigma[idx[0]].partial(j).is_zero()) {
                    s = eliminate_variable(std::move(s), j, &tr);
                    progressed = true;
                    break;
                }
                stuck.push_back(j);
            }
            if (progressed) {
                continue;
            }
            for (auto j : stuck) {
                const auto idx = detail::mentioning(s, j);
                if (idx.size() != 1) {
                    continue;
                }
                const auto &P = s.sigma[idx[0]];
                for (std::size_t k = 0; k < s.n() && !progressed; ++k) {
                    bool offending = false;
                    for (const auto &[e, c] : P.terms()) {
                        offending = offending || e[k] % s.p != 0;
                    }
                    if (offending) {
                        tr.push_back(detail::var_name(s, j) + " is stuck in " + to_string(P));
                        s = frobenius_substitute(std::move(s), k, &tr);
                        progressed = true;
                    }
                }
                if (progressed) {
                    break;
                }
            }
            if (!progressed) {
                std::string all;
                for (const auto &line : tr) {
                    all += "  " + line + "\n";
                }
                throw domain_error("reduction is stuck with " + std::to_string(s.sigma.size()) +
                                   " polynomials and no annihilator for the target; trace:\n" + all);
            }
        }
    }
    return res;
}

} // namespace cartier

#endif
