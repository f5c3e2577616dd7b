// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <cartier/cartier.hpp>

using namespace cartier;

namespace
{

// Wall-clock limits, seconds.
constexpr double limit_identity = 5.0;
constexpr double limit_subfield = 60.0;
constexpr double limit_christol = 30.0;
constexpr double limit_pipeline = 1.0;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
    bool ok = true;
    std::string detail;

    void fail(const std::string &why)
    {
        if (ok) {
            detail = why;
        }
        ok = false;
    }
};

int failures = 0;

void report(int id, const std::string &name, const std::function<Verdict()> &body)
{
    Verdict v;
    try {
        v = body();
    } catch (const std::exception &e) {
        v.fail(std::string("exception: ") + e.what());
    }
    failures += v.ok ? 0 : 1;
    std::printf("%s %2d %s: %s\n", v.ok ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
    std::fflush(stdout);
}

std::string secs(double s)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3f s", s);
    return b;
}

// Lowest exponent with a nonzero coefficient, read off the coefficient list.
std::int64_t first_nonzero(const Series &s)
{
    for (std::int64_t k = s.offset(); k < s.trunc(); ++k) {
        if (s.coeff(k) != 0) {
            return k;
        }
    }
    return s.trunc();
}

// Schoolbook product mod X^n of series in F_p[[X]] given by coefficient lists.
std::vector<std::uint32_t> naive_product(const std::vector<std::uint32_t> &a, const std::vector<std::uint32_t> &b,
                                         std::uint32_t p)
{
    std::vector<std::uint32_t> c(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t{a[i]} * b[j]) % p);
        }
    }
    return c;
}

// P(xi, z) over F_q with X specialized to xi.
std::uint32_t eval_at(const FiniteField &F, const MultiPoly &P, std::uint32_t xi, const std::vector<std::uint32_t> &z)
{
    std::uint32_t acc = 0;
    for (const auto &[e, c] : P.terms()) {
        std::uint32_t cv = 0;
        for (std::size_t k = c.coeffs().size(); k-- > 0;) {
            cv = F.add(F.mul(cv, xi), c.coeffs()[k]);
        }
        for (std::size_t k = 0; k < e.size(); ++k) {
            cv = F.mul(cv, F.pow(z[k], e[k]));
        }
        acc = F.add(acc, cv);
    }
    return acc;
}

// Number of y in F_p[X]/(X^k) with P(y) = 0 mod X^k, by enumeration.
std::size_t residue_roots(const MultiPoly &P, int k)
{
    const auto p = P.p();
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) {
        total *= p;
    }
    std::size_t count = 0;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> c;
        for (std::size_t r = code; c.size() < static_cast<std::size_t>(k); r /= p) {
            c.push_back(static_cast<std::uint32_t>(r % p));
        }
        const auto y = Series::from_coeffs(p, 0, c, k);
        const auto v = mpoly_eval(P, {y});
        count += v.equal_mod(Series::constant(p, 0), k) ? 1 : 0;
    }
    return count;
}

const char *automaton_texts[] = {
    // Thue-Morse
    "p = 2\nstates = even odd\nq0 = even\ndelta even = even odd\ndelta odd = odd even\ntau = 0 1\n",
    // Rudin-Shapiro, parity of "11" blocks
    "p = 2\nstates = a b c d\nq0 = a\ndelta a = a b\ndelta b = a d\ndelta c = c d\ndelta d = c b\ntau = 0 0 1 1\n",
    // Baum-Sweet
    "p = 2\nstates = a b c\nq0 = a\ndelta a = b a\ndelta b = a c\ndelta c = c c\ntau = 1 0 0\n",
    // period doubling
    "p = 2\nstates = a b\nq0 = a\ndelta a = a b\ndelta b = a a\ntau = 0 1\n",
    // ternary expansion avoids 1
    "p = 3\nstates = in out\nq0 = in\ndelta in = in out in\ndelta out = out out out\ntau = 1 0\n",
    // n mod 3 read in base 3 digits: last digit
    "p = 3\nstates = r0 r1 r2\nq0 = r0\ndelta r0 = r0 r1 r2\ndelta r1 = r0 r1 r2\ndelta r2 = r0 r1 r2\ntau = 0 1 2\n",
};

} // namespace

int main()
{
    report(1, "Cartier identity F = sum X^i (Lambda_i F)^p", [] {
        Verdict v;
        const auto t0 = Clock::now();
        Rng rng(1);
        const int n = 1000;
        const std::uint32_t primes[] = {2, 3, 5};
        for (int k = 0; k < n; ++k) {
            const auto p = primes[k % 3];
            const auto F = random_series(rng, p, 128);
            const auto back = reassemble(cartier_parts(F));
            if (back.trunc() < F.trunc() || !back.equal_mod(F, F.trunc())) {
                v.fail("mismatch at p = " + std::to_string(p) + ": " + F.to_string());
            }
        }
        const auto dt = since(t0);
        if (dt >= limit_identity) {
            v.fail("took " + secs(dt));
        }
        if (v.ok) {
            v.detail = std::to_string(n) + " series, N = 128, exact at truncation, " + secs(dt);
        }
        return v;
    });

    std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> subfields;
    report(2, "characterizable subfield is the prime field", [&] {
        Verdict v;
        const auto t0 = Clock::now();
        for (std::uint32_t q : {4u, 8u, 9u, 25u, 27u}) {
            const FiniteField F(q);
            const auto got = characterizable_subfield(q);
            subfields.push_back({q, got});
            // The prime field is the set of Frobenius-fixed elements.
            std::vector<std::uint32_t> prime;
            for (std::uint32_t x = 0; x < q; ++x) {
                if (F.pow(x, F.p()) == x) {
                    prime.push_back(x);
                }
            }
            if (got != prime) {
                v.fail("q = " + std::to_string(q) + " gave " + std::to_string(got.size()) + " elements");
            }
        }
        const auto dt = since(t0);
        if (dt >= limit_subfield) {
            v.fail("took " + secs(dt));
        }
        if (v.ok) {
            v.detail = "q in {4, 8, 9, 25, 27}, " + secs(dt);
        }
        return v;
    });

    report(3, "characterizable sets are subfields", [&] {
        Verdict v;
        if (subfields.size() != 5) {
            v.fail("criterion 2 did not produce all sets");
            return v;
        }
        for (const auto &[q, set] : subfields) {
            const FiniteField F(q);
            const std::set<std::uint32_t> S(set.begin(), set.end());
            if (!S.count(0) || !S.count(1)) {
                v.fail("q = " + std::to_string(q) + ": missing 0 or 1");
            }
            for (auto a : S) {
                if (!S.count(F.neg(a)) || (a != 0 && !S.count(F.inv(a)))) {
                    v.fail("q = " + std::to_string(q) + ": not closed under negation or inverse");
                }
                for (auto b : S) {
                    if (!S.count(F.add(a, b)) || !S.count(F.mul(a, b))) {
                        v.fail("q = " + std::to_string(q) + ": not closed under + or *");
                    }
                }
            }
        }
        if (v.ok) {
            v.detail = "closed under +, -, *, inverse for all five fields";
        }
        return v;
    });

    report(4, "Christol round trip", [] {
        Verdict v;
        const auto t0 = Clock::now();
        int done = 0;
        for (const auto *text : automaton_texts) {
            const auto M = Dfao::parse(text);
            const auto cp = automaton_to_polynomial(M);
            const auto S = automatic_series(M, 256);
            if (!verify_annihilation(cp.annihilator, S).holds || verify_annihilation(cp.annihilator, S).precision < 256) {
                v.fail("annihilator fails for " + M.names()[0] + "-automaton: " + to_string(cp.annihilator));
                continue;
            }
            const auto F = AlgebraicSeries::from_prefix(cp.annihilator, automatic_series(M, 64), 256);
            const auto A = polynomial_to_automaton(F, 256);
            for (std::uint64_t n = 0; n < 256; ++n) {
                if (A.automaton.nth_term(n) != M.nth_term(n)) {
                    v.fail("term " + std::to_string(n) + " differs for annihilator " + to_string(cp.annihilator));
                    break;
                }
            }
            ++done;
        }
        const auto dt = since(t0);
        if (dt >= limit_christol) {
            v.fail("took " + secs(dt));
        }
        if (v.ok) {
            v.detail = std::to_string(done) + " automata (Thue-Morse + 5), verified mod X^256, n < 256, " + secs(dt);
        }
        return v;
    });

    report(5, "witness sets of algebraic series", [] {
        Verdict v;
        struct Case {
            std::uint32_t p;
            const char *poly;
            std::uint32_t seed;
        };
        const Case cases[] = {{2, "1 + (1+X)*Y", 1}, {3, "(Y - 1 - X)*(X*Y - 1)", 1}, {3, "Y^2 - 1 - X", 1},
                              {2, "Y^2 + Y + X", 0}, {5, "Y^2 - 1 - X^2", 1}};
        int unique = 0;
        for (const auto &c : cases) {
            const auto P = parse_polynomial(c.poly, c.p, 1);
            const auto F = AlgebraicSeries::from_seed(P, c.seed, 64);
            const auto w = witness_from_polynomial(F, 64);
            const auto st = propagate_closure(w.network);
            const auto &d = st.elements[w.target];
            std::vector<Series> values;
            if (d.status == DeductionStatus::forced) {
                values.push_back(d.value);
            } else if (d.status == DeductionStatus::root_of) {
                values = d.candidates;
            } else {
                v.fail(std::string(c.poly) + ": target left open");
            }
            for (const auto &x : values) {
                const auto r = mpoly_eval(P, {x});
                if (!r.is_zero()) {
                    v.fail(std::string(c.poly) + ": a propagated value is not a root");
                }
            }
            // Oracle: one residue root mod X^6 means a unique root in F_p[[X]].
            if (residue_roots(P, 6) == 1) {
                ++unique;
                if (d.status != DeductionStatus::forced || !F.expansion.equal_mod(d.value, 64)) {
                    v.fail(std::string(c.poly) + ": unique root not forced");
                }
            }
        }
        if (unique < 2) {
            v.fail("fewer than two unique-root cases");
        }
        if (v.ok) {
            v.detail = "5 annihilators of degree <= 2, " + std::to_string(unique) + " unique-root cases forced";
        }
        return v;
    });

    report(6, "TC witness forces phi(F) = F", [] {
        Verdict v;
        const auto X = Series::monomial(2, 1, 1);
        // Oracles: 1/(1+X) by inversion, sum X^(2^k) written out.
        std::vector<std::uint32_t> lacunary(128, 0);
        for (std::size_t k = 1; k < 128; k *= 2) {
            lacunary[k] = 1;
        }
        const std::pair<AlgebraicSeries, Series> cases[] = {
            {AlgebraicSeries::from_seed(parse_polynomial("(1+X)*Y - 1", 2, 1), 1, 128),
             (Series::constant(2, 1) + X).inverse(128)},
            {AlgebraicSeries::from_seed(parse_polynomial("Y^2 + Y + X", 2, 1), 0, 128),
             Series::from_coeffs(2, 0, lacunary, 128)},
        };
        for (const auto &[F, expected] : cases) {
            const auto w = witness_tc_series(F, 128);
            const auto st = propagate_closure(w.network);
            const auto &d = st.elements[w.target];
            if (d.status != DeductionStatus::forced) {
                v.fail(to_string(F.annihilator) + ": target is " + to_string(d.status));
            } else if (!d.value.equal_mod(expected, 128)) {
                v.fail(to_string(F.annihilator) + ": forced to another value");
            }
        }
        if (v.ok) {
            v.detail = "1/(1+X) and sum X^(2^k) forced mod X^128";
        }
        return v;
    });

    report(7, "counterexample: H2 forced, F and G in K-hat at depth 1", [] {
        Verdict v;
        Rng rng(7);
        int runs = 0;
        for (std::uint32_t p : {2u, 3u}) {
            for (int t = 0; t < 3; ++t) {
                Series F = random_series(rng, p, 64);
                Series G = random_series(rng, p, 64);
                if (F.agrees_with(G)) {
                    continue;
                }
                const auto r = counterexample_311(F, G);
                if (!r.forced || r.degenerate) {
                    v.fail("p = " + std::to_string(p) + ": H2 not forced");
                }
                const auto &H1 = r.network.value(r.h1);
                const auto kf = khat_members({H1}, 1, F);
                const auto kg = khat_members({H1}, 1, G);
                if (!kf.member || kf.depth > 1 || !kg.member || kg.depth > 1) {
                    v.fail("p = " + std::to_string(p) + ": K-hat membership not shown (" + kf.detail + "; " + kg.detail + ")");
                }
                ++runs;
            }
        }
        if (v.ok) {
            v.detail = std::to_string(runs) + " random pairs, p in {2, 3}, N = 64";
        }
        return v;
    });

    report(8, "splitting: degree bound and root containment", [] {
        Verdict v;
        Rng rng(8);
        const FiniteField F4(4);
        const auto g = gco_instance(2);
        int done = 0;
        while (done < 200) {
            MultiPoly P(2, 2);
            const auto terms = 1 + rng.below(8);
            for (std::size_t k = 0; k < terms; ++k) {
                P.add_term({static_cast<std::uint32_t>(2 * rng.below(5)), static_cast<std::uint32_t>(2 * rng.below(5))},
                           random_poly(rng, 2, 8));
            }
            if (P.is_zero()) {
                continue;
            }
            ++done;
            const auto parts = split_polynomial(P, g);
            for (const auto &Q : parts) {
                for (std::size_t i = 0; i < 2; ++i) {
                    if (2 * Q.degree_in(i) > std::max(P.degree_in(i), 0)) {
                        v.fail("degree bound fails for " + to_string(P));
                    }
                }
            }
            for (std::uint32_t xi = 0; xi < 4; ++xi) {
                for (std::uint32_t a = 0; a < 4; ++a) {
                    for (std::uint32_t b = 0; b < 4; ++b) {
                        const std::vector<std::uint32_t> z{a, b};
                        const bool common = std::all_of(parts.begin(), parts.end(),
                                                        [&](const MultiPoly &Q) { return eval_at(F4, Q, xi, z) == 0; });
                        if (common && eval_at(F4, P, xi, z) != 0) {
                            v.fail("common root of the parts is not a root of " + to_string(P));
                        }
                    }
                }
            }
        }
        if (v.ok) {
            v.detail = "200 polynomials in F_2[X][Y1^2, Y2^2], exhaustive over X, Y1, Y2 in F_4";
        }
        return v;
    });

    report(9, "reduction driver", [] {
        Verdict v;
        const auto t0 = Clock::now();
        const auto H1 = parse_univariate("1 + X + X^3 + X^4 + X^7", 2);
        // Cartier components of H1 read off by hand: even exponents 0, 4 and odd 1, 3, 7.
        const auto F = parse_univariate("1 + X^2", 2);
        const auto G = parse_univariate("1 + X + X^3", 2);
        const auto X = parse_univariate("X", 2);
        const auto H2 = G * G + X * F * F;
        GoodEquationalSystem s;
        s.p = 2;
        s.vars = {{"F", ""}, {"G", ""}, {"H2", ""}};
        s.sigma = {MultiPoly::constant(2, 3, H1) - parse_polynomial("Y1^2 + X*Y2^2", 2, 3),
                   parse_polynomial("Y3 - Y2^2 - X*Y1^2", 2, 3)};
        s.base_point = {Series::from_poly(F), Series::from_poly(G), Series::from_poly(H2)};
        s.targets = {{2, "phi(H2)"}};
        const auto r = reduce_system(s);
        const auto dt = since(t0);
        const auto want = primitive_part(parse_polynomial("Y", 2, 1) - MultiPoly::constant(2, 1, H2));
        if (!r.annihilators.count(2) || primitive_part(r.annihilators.at(2)) != want ||
            !verify_annihilation(r.annihilators.at(2), Series::from_poly(H2)).holds) {
            v.fail("pipeline did not give Y - H2");
        }
        if (dt >= limit_pipeline) {
            v.fail("pipeline took " + secs(dt));
        }
        Rng rng(9);
        int ran = 0;
        std::size_t max_steps = 0;
        for (int trial = 0; ran < 50 && trial < 1000; ++trial) {
            const std::uint32_t p = trial % 3 == 2 ? 3 : 2;
            MultiPoly P(p, 1);
            const int d = 1 + static_cast<int>(rng.below(2));
            for (int k = 0; k <= d; ++k) {
                P.add_term({static_cast<std::uint32_t>(k)}, random_poly(rng, p, 2));
            }
            if (P.degree_in(0) < 1) {
                continue;
            }
            AlgebraicSeries A;
            bool found = false;
            for (std::uint32_t seed = 0; seed < p && !found; ++seed) {
                try {
                    A = AlgebraicSeries::from_seed(P, seed, 64);
                    found = true;
                } catch (const domain_error &) {
                }
            }
            if (!found) {
                continue;
            }
            const auto w = witness_from_polynomial(A, 64);
            GoodEquationalSystem sys;
            try {
                sys = system_from_witness(w.network, {w.target}, rng.coin());
            } catch (const domain_error &) {
                continue;
            }
            if (sys.n() > 4) {
                continue;
            }
            ++ran;
            try {
                const auto rr = reduce_system(sys);
                max_steps = std::max(max_steps, rr.steps);
                if (rr.annihilators.size() != 1 || !verify_annihilation(rr.annihilators.begin()->second, A.expansion).holds) {
                    v.fail("unverified annihilator for the root of " + to_string(P));
                }
            } catch (const std::exception &e) {
                v.fail("reduction of the system for " + to_string(P) + " failed: " + e.what());
            }
        }
        if (ran < 50) {
            v.fail("only " + std::to_string(ran) + " random systems generated");
        }
        if (v.ok) {
            v.detail = "pipeline " + secs(dt) + "; 50 random systems verified, at most " + std::to_string(max_steps) +
                       " steps (cap 10000)";
        }
        return v;
    });

    report(10, "norm laws", [] {
        Verdict v;
        Rng rng(10);
        for (int t = 0; t < 1000; ++t) {
            const std::uint32_t p = t % 3 == 0 ? 2 : t % 3 == 1 ? 3 : 5;
            const auto F = random_nonzero_series(rng, p, -6, 6, 24);
            const auto G = random_nonzero_series(rng, p, -6, 6, 24);
            const auto vf = first_nonzero(F);
            const auto vg = first_nonzero(G);
            // Oracle for the product order: schoolbook product of the shifted lists.
            std::vector<std::uint32_t> a;
            std::vector<std::uint32_t> b;
            for (auto k = vf; k < F.trunc(); ++k) {
                a.push_back(F.coeff(k));
            }
            for (auto k = vg; k < G.trunc(); ++k) {
                b.push_back(G.coeff(k));
            }
            const auto c = naive_product(a, b, p);
            const auto lead = std::find_if(c.begin(), c.end(), [](std::uint32_t x) { return x != 0; }) - c.begin();
            const auto prod = (F * G).norm();
            if (prod != Valuation::order_of(vf + vg + lead) || lead != 0 || prod != F.norm() * G.norm()) {
                v.fail("multiplicativity fails for " + F.to_string() + " and " + G.to_string());
            }
            const auto sum = (F + G).norm();
            if (!norm_at_most(sum, norm_max(F.norm(), G.norm()))) {
                v.fail("ultrametric inequality fails for " + F.to_string() + " and " + G.to_string());
            }
            if (vf != vg && sum != Valuation::order_of(std::min(vf, vg))) {
                v.fail("strict ultrametric equality fails for " + F.to_string() + " and " + G.to_string());
            }
        }
        if (v.ok) {
            v.detail = "1000 random pairs, p in {2, 3, 5}, exact";
        }
        return v;
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
