#ifndef CARTIER_PROPAGATE_HPP
#define CARTIER_PROPAGATE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <cartier/error.hpp>
#include <cartier/hensel.hpp>
#include <cartier/network.hpp>
#include <cartier/series.hpp>

namespace cartier
{

// What the pseudo-morphisms of a series network (into F_p[[X]]) are known to
// do to one element.
enum class DeductionStatus { open, forced, root_of };

inline std::string to_string(DeductionStatus s)
{
    switch (s) {
    case DeductionStatus::forced:
        return "forced";
    case DeductionStatus::root_of:
        return "root-of";
    default:
        return "open";
    }
}

struct ElementDeduction {
    DeductionStatus status = DeductionStatus::open;
    // Forced value, at the precision the deduction reached.
    Series value;
    // phi(e) agrees with prefix up to X^prefix.trunc().
    Series prefix;
    std::string rule;
    // root_of: phi(e) is a root of sum relation[k] Y^k (at truncation), and
    // lies among candidates when candidates_complete.
    SeriesCoeffs relation;
    std::vector<Series> candidates;
    bool candidates_complete = false;
};

struct DeductionState {
    std::vector<ElementDeduction> elements;
    std::vector<std::string> log;

    bool forced(std::size_t i) const { return elements.at(i).status == DeductionStatus::forced; }
};

struct PropagationOptions {
    std::size_t max_rounds = 10000;
    int max_relation_degree = 8;
    int root_depth = 64;
};

namespace detail
{

// Structural Cartier shapes: form[e] = {i -> u} when the triples show
// e = sum_i X^i u^p, with X^i (0 < i < p) a constant node and u^p reached by
// a multiplication chain from u.
inline std::vector<std::map<std::uint32_t, std::size_t>> cartier_forms(const SeriesNetwork &net)
{
    const auto n = net.size();
    const auto p = net.ambient().p;
    std::vector<std::map<std::uint32_t, std::size_t>> form(n);
    std::vector<bool> has(n, false);
    for (std::size_t u = 0; u < n; ++u) {
        if (net.is_constant(u)) {
            continue;
        }
        std::vector<std::uint32_t> exp(n, 0);
        exp[u] = 1;
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto &t : net.mul_triples()) {
                if (exp[t[0]] && exp[t[1]] && !exp[t[2]] && exp[t[0]] + exp[t[1]] <= p) {
                    exp[t[2]] = exp[t[0]] + exp[t[1]];
                    changed = true;
                }
            }
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (exp[c] == p && !has[c]) {
                form[c] = {{0, u}};
                has[c] = true;
            }
        }
    }
    auto monomial_degree = [&](std::size_t k) -> std::optional<std::uint32_t> {
        if (!net.is_constant(k)) {
            return std::nullopt;
        }
        for (std::uint32_t i = 1; i < p; ++i) {
            if (net.ambient().equal(net.value(k), Series::monomial(p, 1, i))) {
                return i;
            }
        }
        return std::nullopt;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto &t : net.mul_triples()) {
            const auto i = monomial_degree(t[0]);
            if (i && has[t[1]] && !has[t[2]] && form[t[1]].size() == 1 && form[t[1]].count(0)) {
                form[t[2]] = {{*i, form[t[1]].at(0)}};
                has[t[2]] = true;
                changed = true;
            }
        }
        for (const auto &t : net.add_triples()) {
            if (!has[t[0]] || !has[t[1]] || has[t[2]]) {
                continue;
            }
            auto f = form[t[0]];
            bool disjoint = true;
            for (const auto &[i, u] : form[t[1]]) {
                disjoint = disjoint && f.emplace(i, u).second;
            }
            if (disjoint) {
                form[t[2]] = std::move(f);
                has[t[2]] = true;
                changed = true;
            }
        }
    }
    return form;
}

inline SeriesCoeffs coeffs_add(const SeriesCoeffs &a, const SeriesCoeffs &b, bool subtract)
{
    const auto p = a.front().p();
    SeriesCoeffs r(std::max(a.size(), b.size()), Series::constant(p, 0));
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (k < a.size()) {
            r[k] = r[k] + a[k];
        }
        if (k < b.size()) {
            r[k] = subtract ? r[k] - b[k] : r[k] + b[k];
        }
    }
    return r;
}

inline SeriesCoeffs coeffs_mul(const SeriesCoeffs &a, const SeriesCoeffs &b)
{
    const auto p = a.front().p();
    SeriesCoeffs r(a.size() + b.size() - 1, Series::constant(p, 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    return r;
}

// Drops top coefficients that vanish at truncation. Every value lives in
// F_p[[X]], so such terms vanish at the same truncation after substitution.
inline SeriesCoeffs coeffs_trim(SeriesCoeffs c)
{
    while (c.size() > 1 && c.back().is_zero()) {
        c.pop_back();
    }
    return c;
}

inline int coeffs_degree(const SeriesCoeffs &c)
{
    return c.size() == 1 && c[0].is_zero() ? -1 : static_cast<int>(c.size()) - 1;
}

} // namespace detail

inline std::string relation_string(const SeriesCoeffs &c)
{
    std::string s;
    for (std::size_t k = c.size(); k-- > 0;) {
        if (c[k].is_zero()) {
            continue;
        }
        std::string coef = c[k].is_polynomial() ? c[k].to_poly().to_string() : "[" + c[k].to_string() + "]";
        if (!s.empty()) {
            s += " + ";
        }
        if (k == 0) {
            s += coef;
            continue;
        }
        if (coef != "1") {
            s += (coef.find(' ') != std::string::npos && coef.front() != '[' ? "(" + coef + ")" : coef) + "*";
        }
        s += k == 1 ? "Y" : "Y^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

// Monotone fixpoint of the deduction rules over a series network whose
// pseudo-morphisms map into F_p[[X]]:
//   R1  constants are forced to themselves;
//   R2  a triple with two forced members forces the third (division only by
//       members forced nonzero); the same arithmetic on known prefixes
//       tightens congruences phi(e) = s mod X^k;
//   R3  squaring chains (x, x, x^2) propagate forced powers;
//   R4  v = sum_i X^i u_i^p realized by triples, with v known, gives
//       u_i = Lambda_i(v) by uniqueness of the Cartier decomposition;
//   R5  when the triples relate an open x to forced values through a
//       univariate polynomial, x is a root of it; if exactly one root in
//       F_p[[X]] matches the known prefix of x (complete search), x is forced.
// Deterministic: rules run in a fixed order over triples in stored order.
// Contradictions throw domain_error naming the violated relation.
inline DeductionState propagate_closure(const SeriesNetwork &net, const std::map<std::size_t, Series> &pinned = {},
                                        const PropagationOptions &opt = {})
{
    const auto n = net.size();
    const auto p = net.ambient().p;
    const auto &amb = net.ambient();
    std::int64_t cap = 0;
    for (const auto &e : net.elements()) {
        if (e.value.trunc() != Series::infinite) {
            cap = std::max(cap, e.value.trunc());
        }
    }
    if (cap == 0) {
        cap = default_truncation;
    }
    DeductionState st;
    st.elements.resize(n);
    for (auto &d : st.elements) {
        d.prefix = Series::zero_to(p, 0);
    }
    bool changed = false;
    auto fail = [&](const std::string &what) { throw domain_error("propagation contradiction: " + what); };
    auto clip = [&](Series s) { return s.trunc() != Series::infinite && s.trunc() > cap ? s.truncate(cap) : s; };
    auto set_forced = [&](std::size_t i, Series v, const std::string &rule, const std::string &why) {
        v = clip(std::move(v));
        if (v.trunc() < 1) {
            return;
        }
        if (v.offset() < 0 && !v.is_zero()) {
            fail(net.element(i).name + " would leave F_p[[X]] via " + why);
        }
        auto &d = st.elements[i];
        if (d.status == DeductionStatus::forced) {
            if (!amb.equal(d.value, v)) {
                fail(net.element(i).name + " forced to two different values (" + why + ")");
            }
            if (v.trunc() > d.value.trunc()) {
                d.value = v;
                d.prefix = v;
                changed = true;
            }
            return;
        }
        if (!amb.equal(d.prefix, v)) {
            fail(net.element(i).name + " forced against its known prefix (" + why + ")");
        }
        d.status = DeductionStatus::forced;
        d.value = v;
        d.prefix = v;
        d.rule = rule;
        d.candidates.clear();
        st.log.push_back(rule + ": " + net.element(i).name + " forced by " + why);
        changed = true;
    };
    auto set_prefix = [&](std::size_t i, Series v, const std::string &why) {
        v = clip(std::move(v));
        auto &d = st.elements[i];
        if (v.trunc() <= d.prefix.trunc() || v.trunc() < 1) {
            return;
        }
        if (v.offset() < 0 && !v.is_zero()) {
            fail(net.element(i).name + " would leave F_p[[X]] via " + why);
        }
        if (!amb.equal(d.prefix, v)) {
            fail(net.element(i).name + " has incompatible congruences (" + why + ")");
        }
        if (d.status == DeductionStatus::forced) {
            return;
        }
        d.prefix = v;
        changed = true;
    };
    auto forced = [&](std::size_t i) { return st.elements[i].status == DeductionStatus::forced; };
    auto val = [&](std::size_t i) -> const Series & { return st.elements[i].value; };
    auto pre = [&](std::size_t i) -> const Series & { return st.elements[i].prefix; };

    for (std::size_t i = 0; i < n; ++i) {
        if (net.is_constant(i)) {
            set_forced(i, net.value(i), "R1", "constant");
        }
    }
    for (const auto &[i, v] : pinned) {
        if (i >= n) {
            throw domain_error("pin references a non-member");
        }
        set_forced(i, v, "pin", "pin");
    }
    const auto forms = detail::cartier_forms(net);
    const Series half = p == 2 ? Series() : Series::constant(p, PrimeField{p}.inv(2));

    for (std::size_t round = 0;; ++round) {
        if (round >= opt.max_rounds) {
            throw bound_error("propagation did not settle within " + std::to_string(opt.max_rounds) + " rounds");
        }
        changed = false;
        for (const auto &t : net.add_triples()) {
            const auto [a, b, c] = t;
            const auto why = net.triple_string(t, " + ");
            if (a == b) {
                if (forced(a)) {
                    set_forced(c, val(a) + val(a), "R2", why);
                } else if (forced(c) && p != 2) {
                    set_forced(a, val(c) * half, "R2", why);
                }
                continue;
            }
            if (forced(a) && forced(b)) {
                set_forced(c, val(a) + val(b), "R2", why);
            } else if (forced(c) && forced(a)) {
                set_forced(b, val(c) - val(a), "R2", why);
            } else if (forced(c) && forced(b)) {
                set_forced(a, val(c) - val(b), "R2", why);
            }
            set_prefix(c, pre(a) + pre(b), why);
            set_prefix(b, pre(c) - pre(a), why);
            set_prefix(a, pre(c) - pre(b), why);
        }
        for (const auto &t : net.mul_triples()) {
            const auto [a, b, c] = t;
            const auto why = net.triple_string(t, " * ");
            if (forced(a) && forced(b)) {
                set_forced(c, val(a) * val(b), a == b ? "R3" : "R2", why);
            } else if ((forced(a) && val(a).is_exact_zero()) || (forced(b) && val(b).is_exact_zero())) {
                set_forced(c, Series::constant(p, 0), "R2", why);
            }
            if (a != b && forced(c)) {
                if (forced(a) && !val(a).is_zero() && !forced(b)) {
                    set_forced(b, val(c) * val(a).inverse(), "R2", why);
                } else if (forced(b) && !val(b).is_zero() && !forced(a)) {
                    set_forced(a, val(c) * val(b).inverse(), "R2", why);
                }
            }
            set_prefix(c, pre(a) * pre(b), why);
            if (a != b && forced(a) && !val(a).is_zero()) {
                set_prefix(b, pre(c) * val(a).inverse(), why);
            }
            if (a != b && forced(b) && !val(b).is_zero()) {
                set_prefix(a, pre(c) * val(b).inverse(), why);
            }
        }
        for (std::size_t e = 0; e < n; ++e) {
            if (forms[e].empty()) {
                continue;
            }
            const auto &known = forced(e) ? val(e) : pre(e);
            if (known.trunc() < 1 || known.offset() < 0) {
                continue;
            }
            const auto parts = cartier_parts(known);
            std::string why = net.element(e).name + " = ";
            for (const auto &[i, u] : forms[e]) {
                why += (why.back() == ' ' ? "" : " + ") + (i == 0 ? "" : "X^" + std::to_string(i) + "*") +
                       net.element(u).name + "^" + std::to_string(p);
            }
            for (std::uint32_t i = 0; i < p; ++i) {
                auto it = forms[e].find(i);
                if (it == forms[e].end()) {
                    if (!parts[i].is_zero()) {
                        fail("Lambda_" + std::to_string(i) + " of " + net.element(e).name + " is nonzero but " +
                             why + " has no such component");
                    }
                    continue;
                }
                if (forced(e)) {
                    set_forced(it->second, parts[i], "R4", why);
                } else {
                    set_prefix(it->second, parts[i], why);
                }
            }
        }
        if (changed) {
            continue;
        }
        // R5, only once the cheaper rules are exhausted.
        for (std::size_t x = 0; x < n && !changed; ++x) {
            if (forced(x)) {
                continue;
            }
            std::vector<std::optional<SeriesCoeffs>> rep(n);
            rep[x] = SeriesCoeffs{Series::constant(p, 0), Series::constant(p, 1)};
            for (std::size_t e = 0; e < n; ++e) {
                if (forced(e)) {
                    rep[e] = SeriesCoeffs{val(e)};
                }
            }
            std::optional<SeriesCoeffs> best;
            auto relate = [&](std::size_t e, SeriesCoeffs cand) -> bool {
                cand = detail::coeffs_trim(std::move(cand));
                if (detail::coeffs_degree(cand) > opt.max_relation_degree) {
                    return false;
                }
                if (!rep[e]) {
                    rep[e] = std::move(cand);
                    return true;
                }
                auto diff = detail::coeffs_trim(detail::coeffs_add(*rep[e], cand, true));
                const int d = detail::coeffs_degree(diff);
                if (d == 0) {
                    fail("the values forced so far admit no pseudo-morphism (" + net.element(e).name + ")");
                }
                if (d >= 1 && (!best || d < detail::coeffs_degree(*best))) {
                    best = std::move(diff);
                }
                return false;
            };
            for (bool grew = true; grew;) {
                grew = false;
                for (const auto &t : net.add_triples()) {
                    const auto [a, b, c] = t;
                    if (rep[a] && rep[b]) {
                        grew = relate(c, detail::coeffs_add(*rep[a], *rep[b], false)) || grew;
                    }
                    if (rep[c] && rep[a]) {
                        grew = relate(b, detail::coeffs_add(*rep[c], *rep[a], true)) || grew;
                    }
                    if (rep[c] && rep[b]) {
                        grew = relate(a, detail::coeffs_add(*rep[c], *rep[b], true)) || grew;
                    }
                }
                for (const auto &t : net.mul_triples()) {
                    const auto [a, b, c] = t;
                    if (rep[a] && rep[b]) {
                        grew = relate(c, detail::coeffs_mul(*rep[a], *rep[b])) || grew;
                    }
                }
            }
            if (!best) {
                continue;
            }
            auto &d = st.elements[x];
            const bool fresh = d.status != DeductionStatus::root_of ||
                               detail::coeffs_degree(*best) < detail::coeffs_degree(d.relation);
            std::int64_t prec = cap;
            for (const auto &c : *best) {
                if (c.trunc() != Series::infinite) {
                    prec = std::min(prec, c.trunc());
                }
            }
            const auto rs = integral_roots(*best, prec, opt.root_depth);
            std::vector<Series> cands;
            for (const auto &r : rs.roots) {
                if (amb.equal(r, d.prefix)) {
                    cands.push_back(r);
                }
            }
            if (fresh || cands.size() != d.candidates.size()) {
                d.status = DeductionStatus::root_of;
                d.relation = *best;
                d.rule = "R5";
                d.candidates = cands;
                d.candidates_complete = rs.complete;
                st.log.push_back("R5: " + net.element(x).name + " is a root of " + relation_string(*best) + " (" +
                                 std::to_string(cands.size()) + (rs.complete ? "" : "+") + " candidates)");
                changed = true;
            }
            if (rs.complete && cands.empty()) {
                fail(net.element(x).name + " must be a root of " + relation_string(*best) +
                     " but no root in F_p[[X]] fits its known prefix");
            }
            if (rs.complete && cands.size() == 1) {
                set_forced(x, cands[0], "R5", "unique root of " + relation_string(*best));
            }
        }
        if (!changed) {
            break;
        }
    }
    for (const auto &t : net.add_triples()) {
        if (forced(t[0]) && forced(t[1]) && forced(t[2]) && !amb.equal(val(t[0]) + val(t[1]), val(t[2]))) {
            fail("forced values violate " + net.triple_string(t, " + "));
        }
    }
    for (const auto &t : net.mul_triples()) {
        if (forced(t[0]) && forced(t[1]) && forced(t[2]) && !amb.equal(val(t[0]) * val(t[1]), val(t[2]))) {
            fail("forced values violate " + net.triple_string(t, " * "));
        }
    }
    return st;
}

} // namespace cartier

#endif
