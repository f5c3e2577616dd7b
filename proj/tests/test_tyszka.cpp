#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include <cartier/cartier_ops.hpp>
#include <cartier/enumerate.hpp>
#include <cartier/poly_parse.hpp>
#include <cartier/random.hpp>
#include <cartier/witness.hpp>

using namespace cartier;

namespace
{

using Map = std::vector<std::uint32_t>;

// Independent check of the definition: fixes 0 and 1 when present and every
// sum or product of members that lands in the set.
bool respects(const FiniteField &F, const Map &codes, const Map &phi)
{
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if ((codes[i] == 0 || codes[i] == 1) && phi[i] != codes[i]) {
            return false;
        }
        for (std::size_t j = 0; j < codes.size(); ++j) {
            for (std::size_t k = 0; k < codes.size(); ++k) {
                if (F.add(codes[i], codes[j]) == codes[k] && F.add(phi[i], phi[j]) != phi[k]) {
                    return false;
                }
                if (F.mul(codes[i], codes[j]) == codes[k] && F.mul(phi[i], phi[j]) != phi[k]) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::vector<Map> brute_force(const FiniteField &F, const Map &codes)
{
    std::vector<Map> out;
    Map phi(codes.size(), 0);
    for (;;) {
        if (respects(F, codes, phi)) {
            out.push_back(phi);
        }
        std::size_t k = 0;
        while (k < phi.size() && ++phi[k] == F.q()) {
            phi[k++] = 0;
        }
        if (k == phi.size()) {
            return out;
        }
    }
}

Map all_codes(std::uint32_t q)
{
    Map v(q);
    for (std::uint32_t i = 0; i < q; ++i) {
        v[i] = i;
    }
    return v;
}

Series satisfies(const MultiPoly &P, const Series &y) { return eval_univariate(series_coefficients(P), y); }

} // namespace

TEST(Network, ZeroOneTriples)
{
    const auto net = field_network(5, {0, 1});
    EXPECT_EQ(net.add_triples(), (std::vector<Triple>{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}}));
    EXPECT_EQ(net.mul_triples(), (std::vector<Triple>{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}}));
    EXPECT_TRUE(net.is_constant(0));
    EXPECT_TRUE(net.is_constant(1));
}

TEST(Network, TriplesMatchExhaustiveCheck)
{
    const FiniteField F(7);
    const Map codes{2, 5, 3, 4, 6};
    const auto net = field_network(7, codes);
    std::set<Triple> add(net.add_triples().begin(), net.add_triples().end());
    std::set<Triple> mul(net.mul_triples().begin(), net.mul_triples().end());
    std::size_t na = 0;
    std::size_t nm = 0;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        for (std::size_t j = 0; j < codes.size(); ++j) {
            for (std::size_t k = 0; k < codes.size(); ++k) {
                if ((codes[i] + codes[j]) % 7 == codes[k]) {
                    EXPECT_TRUE(add.count({i, j, k}));
                    ++na;
                }
                if ((codes[i] * codes[j]) % 7 == codes[k]) {
                    EXPECT_TRUE(mul.count({i, j, k}));
                    ++nm;
                }
            }
        }
    }
    EXPECT_EQ(add.size(), na);
    EXPECT_EQ(mul.size(), nm);
}

TEST(Network, RejectsAmbiguousIdentity)
{
    SeriesAmbient amb(2);
    const auto a = Series::from_coeffs(2, 0, {1, 1}, 8);
    const auto b = Series::from_coeffs(2, 0, {1, 1, 0, 0, 0, 0, 0, 0, 1}, 12);
    EXPECT_THROW(build_network(amb, {{"a", "a", a, false}, {"b", "b", b, false}}), domain_error);
    EXPECT_THROW(field_network(4, {2, 2}), domain_error);
}

TEST(Network, RejectsFalseTriple)
{
    FieldAmbient amb(7);
    std::vector<NetworkElement<FieldAmbient>> els{{"2", "2", 2, false}, {"3", "3", 3, false}, {"6", "6", 6, false}};
    EXPECT_THROW(FieldNetwork(amb, els, {{0, 1, 2}}, {}), domain_error);
    EXPECT_NO_THROW(FieldNetwork(amb, els, {}, {{0, 1, 2}}));
}

TEST(PseudoMorphism, IdentityAndViolation)
{
    const auto net = field_network(7, {2, 3, 5});
    EXPECT_TRUE(is_pseudo_morphism(net, {2, 3, 5}));
    EXPECT_FALSE(is_pseudo_morphism(net, {2, 3, 6}));
    const auto whole = field_network(9, all_codes(9));
    EXPECT_TRUE(is_pseudo_morphism(whole, all_codes(9)));
}

TEST(Enumerate, WholeF4IsIdentityAndFrobenius)
{
    const FiniteField F(4);
    const auto maps = enumerate_pseudo_morphisms(field_network(4, all_codes(4)));
    std::set<Map> got(maps.begin(), maps.end());
    std::set<Map> oracle;
    for (const auto &m : brute_force(F, all_codes(4))) {
        oracle.insert(m);
    }
    EXPECT_EQ(got, oracle);
    Map frob(4);
    for (std::uint32_t x = 0; x < 4; ++x) {
        frob[x] = F.pow(x, 2);
    }
    EXPECT_EQ(got, (std::set<Map>{all_codes(4), frob}));
}

TEST(Enumerate, MatchesExhaustiveFilter)
{
    const FiniteField F7(7);
    for (const Map &codes : {Map{2, 3, 5}, Map{0, 1, 3, 4}, Map{2, 4, 6, 1}}) {
        const auto maps = enumerate_pseudo_morphisms(field_network(7, codes));
        std::set<Map> got(maps.begin(), maps.end());
        const auto oracle = brute_force(F7, codes);
        EXPECT_EQ(got, std::set<Map>(oracle.begin(), oracle.end()));
    }
    const FiniteField F8(8);
    const Map codes{1, 2, 3, 5, 6};
    const auto maps = enumerate_pseudo_morphisms(field_network(8, codes));
    const auto oracle = brute_force(F8, codes);
    EXPECT_EQ(std::set<Map>(maps.begin(), maps.end()), std::set<Map>(oracle.begin(), oracle.end()));
}

TEST(Enumerate, ConstantsOnly)
{
    const auto maps = enumerate_pseudo_morphisms(field_network(9, {0, 1}));
    ASSERT_EQ(maps.size(), 1u);
    EXPECT_EQ(maps[0], (Map{0, 1}));
}

TEST(Enumerate, PartitionByFirstValue)
{
    const auto net = field_network(8, {3, 4, 6, 7});
    const auto full = enumerate_pseudo_morphisms(net);
    std::set<Map> merged;
    for (std::uint32_t v = 0; v < 8; ++v) {
        EnumerateOptions opt;
        opt.first_value = v;
        for (const auto &m : enumerate_pseudo_morphisms(net, opt)) {
            EXPECT_EQ(m[0], v);
            merged.insert(m);
        }
    }
    EXPECT_EQ(merged, std::set<Map>(full.begin(), full.end()));
}

TEST(Enumerate, RestrictionClosure)
{
    Rng rng(7);
    for (std::uint32_t q : {8u, 9u}) {
        const auto net = field_network(q, all_codes(q));
        const auto maps = enumerate_pseudo_morphisms(net);
        EXPECT_NE(std::find(maps.begin(), maps.end(), all_codes(q)), maps.end());
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < q; ++i) {
                if (rng.coin()) {
                    keep.push_back(i);
                }
            }
            const auto sub = net.restrict_to(keep);
            for (const auto &phi : maps) {
                Map r;
                for (auto i : keep) {
                    r.push_back(phi[i]);
                }
                EXPECT_TRUE(is_pseudo_morphism(sub, r));
            }
        }
    }
}

TEST(Enumerate, BoundIsEnforced)
{
    EnumerateOptions opt;
    opt.max_results = 3;
    EXPECT_THROW(enumerate_pseudo_morphisms(field_network(9, {3, 7}), opt), bound_error);
}

TEST(Subfield, IsPrimeField)
{
    EXPECT_EQ(characterizable_subfield(4), (Map{0, 1}));
    EXPECT_EQ(characterizable_subfield(9), (Map{0, 1, 2}));
    EXPECT_EQ(characterizable_subfield(7), all_codes(7));
    const FiniteField F(8);
    const auto fixed = characterizable_subfield(8);
    for (std::uint32_t x = 0; x < 8; ++x) {
        const bool prime = F.pow(x, 2) == x;
        EXPECT_EQ(std::count(fixed.begin(), fixed.end(), x) == 1, prime) << x;
    }
}

TEST(Propagate, InverseOfOnePlusXIsForced)
{
    const auto P = parse_polynomial("1 + (1+X)*Y", 2);
    const auto F = AlgebraicSeries::from_seed(P, 1, 64);
    const auto w = witness_from_polynomial(F, 64);
    EXPECT_EQ(w.network.size(), 4u);
    const auto st = propagate_closure(w.network);
    ASSERT_TRUE(st.forced(w.target));
    EXPECT_TRUE(st.elements[w.target].value.agrees_with(F.expansion));
    EXPECT_EQ(st.elements[w.target].rule, "R2");
    ASSERT_EQ(w.roots.size(), 1u);
}

TEST(Propagate, TwoRootsGiveRootOf)
{
    const auto P = parse_polynomial("Y^2 + Y + X", 2);
    const auto F = AlgebraicSeries::from_seed(P, 0, 64);
    const auto w = witness_from_polynomial(F, 64);
    EXPECT_LE(w.network.size(), 12u);
    const auto st = propagate_closure(w.network);
    const auto &d = st.elements[w.target];
    ASSERT_EQ(d.status, DeductionStatus::root_of);
    ASSERT_EQ(d.candidates.size(), 2u);
    const auto other = F.expansion + Series::constant(2, 1);
    EXPECT_TRUE(std::any_of(d.candidates.begin(), d.candidates.end(), [&](const Series &c) { return c.agrees_with(F.expansion); }));
    EXPECT_TRUE(std::any_of(d.candidates.begin(), d.candidates.end(), [&](const Series &c) { return c.agrees_with(other); }));
    for (const auto &c : d.candidates) {
        EXPECT_TRUE(satisfies(P, c).is_zero());
    }
}

TEST(Propagate, UniqueIntegralRootAtDegreeTwo)
{
    // The other root is 1/X, outside F_3[[X]].
    const auto P = parse_polynomial("(Y - 1 - X)*(X*Y - 1)", 3);
    const auto F = AlgebraicSeries::from_seed(P, 1, 64);
    EXPECT_TRUE(F.expansion.agrees_with(Series::from_coeffs(3, 0, {1, 1}, 64)));
    const auto w = witness_from_polynomial(F, 64);
    EXPECT_LE(w.network.size(), 12u);
    const auto st = propagate_closure(w.network);
    ASSERT_TRUE(st.forced(w.target));
    EXPECT_TRUE(satisfies(P, st.elements[w.target].value).is_zero());
    EXPECT_TRUE(st.elements[w.target].value.agrees_with(F.expansion));
}

TEST(Propagate, SquareRootHasTwoCandidates)
{
    const auto P = parse_polynomial("Y^2 - 1 - X", 3);
    const auto F = AlgebraicSeries::from_seed(P, 1, 64);
    const auto st = propagate_closure(witness_from_polynomial(F, 64).network);
    const auto w = witness_from_polynomial(F, 64);
    const auto &d = st.elements[w.target];
    ASSERT_EQ(d.status, DeductionStatus::root_of);
    EXPECT_EQ(d.candidates.size(), 2u);
    for (const auto &c : d.candidates) {
        EXPECT_TRUE(satisfies(P, c).is_zero());
    }
}

TEST(Propagate, ContradictoryPinThrows)
{
    const auto P = parse_polynomial("1 + (1+X)*Y", 2);
    const auto w = witness_from_polynomial(AlgebraicSeries::from_seed(P, 1, 32), 32);
    EXPECT_THROW(propagate_closure(w.network, {{w.target, Series::constant(2, 1)}}), domain_error);
}

TEST(Propagate, NoConstantsNoTriplesStaysOpen)
{
    SeriesAmbient amb(2);
    std::vector<NetworkElement<SeriesAmbient>> els{{"u", "u", Series::monomial(2, 1, 1), false},
                                                   {"v", "v", Series::monomial(2, 1, 3), false}};
    const SeriesNetwork net(amb, els, {}, {});
    const auto st = propagate_closure(net);
    for (const auto &d : st.elements) {
        EXPECT_EQ(d.status, DeductionStatus::open);
    }
}

TEST(Propagate, ForcedValuesSatisfyTriples)
{
    Rng rng(11);
    const auto F = random_series(rng, 2, 64);
    const auto G = random_series(rng, 2, 64);
    const auto r = counterexample_311(F, G);
    const auto &net = r.network;
    for (const auto &t : net.add_triples()) {
        if (r.state.forced(t[0]) && r.state.forced(t[1]) && r.state.forced(t[2])) {
            EXPECT_TRUE(net.ambient().equal(r.state.elements[t[0]].value + r.state.elements[t[1]].value,
                                            r.state.elements[t[2]].value));
        }
    }
    for (const auto &t : net.mul_triples()) {
        if (r.state.forced(t[0]) && r.state.forced(t[1]) && r.state.forced(t[2])) {
            EXPECT_TRUE(net.ambient().equal(r.state.elements[t[0]].value * r.state.elements[t[1]].value,
                                            r.state.elements[t[2]].value));
        }
    }
}

TEST(Propagate, MorePinsNeverLoseForcing)
{
    Rng rng(5);
    const auto F = random_series(rng, 3, 48);
    const auto G = random_series(rng, 3, 48);
    const auto r = counterexample_311(F, G);
    const auto bare = propagate_closure(r.network);
    EXPECT_FALSE(bare.forced(r.h2));
    const auto pinned = propagate_closure(r.network, {{r.h1, r.network.value(r.h1)}});
    for (std::size_t i = 0; i < r.network.size(); ++i) {
        if (bare.forced(i)) {
            EXPECT_TRUE(pinned.forced(i));
        }
    }
    const auto again = propagate_closure(r.network, {{r.h1, r.network.value(r.h1)}});
    EXPECT_EQ(again.log, pinned.log);
}

TEST(TcWitness, ForcesIdentity)
{
    const auto inv = AlgebraicSeries::from_seed(parse_polynomial("1 + (1+X)*Y", 2), 1, 64);
    const auto lac = AlgebraicSeries::from_seed(parse_polynomial("Y^2 + Y + X", 2), 0, 64);
    const auto sqr = AlgebraicSeries::from_seed(parse_polynomial("Y^2 - 1 - X", 3), 1, 64);
    for (const auto *F : {&inv, &lac, &sqr}) {
        const auto w = witness_tc_series(*F, 64);
        EXPECT_EQ(w.separation, 0);
        const auto st = propagate_closure(w.network);
        ASSERT_TRUE(st.forced(w.target)) << to_string(F->annihilator);
        EXPECT_TRUE(st.elements[w.target].value.agrees_with(F->expansion));
    }
}

TEST(TcWitness, SeparationBeyondConstantTerm)
{
    // Roots X + X^2 and X^2 - X ... differ first at exponent 1.
    const auto P = parse_polynomial("(Y - X - X^2)*(Y + X - X^2)", 3);
    EXPECT_EQ(root_separation(P, 64), 1);
    const auto F = AlgebraicSeries::from_prefix(P, Series::from_coeffs(3, 0, {0, 1}, 2), 64);
    const auto w = witness_tc_series(F, 64);
    const auto st = propagate_closure(w.network);
    ASSERT_TRUE(st.forced(w.target));
    EXPECT_TRUE(st.elements[w.target].value.agrees_with(F.expansion));
}

TEST(Counterexample, ForcedForP2AndP3)
{
    Rng rng(2024);
    for (std::uint32_t p : {2u, 3u}) {
        const auto F = random_series(rng, p, 64);
        const auto G = random_series(rng, p, 64);
        const auto r = counterexample_311(F, G);
        EXPECT_TRUE(r.forced) << p;
        EXPECT_FALSE(r.degenerate);
        EXPECT_TRUE(r.state.forced(r.f));
        EXPECT_TRUE(r.state.forced(r.g));
        EXPECT_TRUE(r.state.elements[r.f].value.agrees_with(F));
        EXPECT_EQ(r.state.elements[r.f].rule, "R4");
    }
}

TEST(Counterexample, EqualInputsAreDegenerate)
{
    Rng rng(3);
    const auto F = random_series(rng, 2, 64);
    const auto r = counterexample_311(F, F);
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.forced);
    EXPECT_NE(r.caveat().find("vacuous"), std::string::npos);
}

TEST(Gco, Examples)
{
    const auto g = gco_instance(2);
    const auto zero = g.decompose(Series::constant(2, 0));
    ASSERT_EQ(zero.size(), 1u);
    for (const auto &v : zero[0]) {
        EXPECT_TRUE(v.is_exact_zero());
    }
    const auto x = g.decompose(Series::from_poly(parse_univariate("1 + X + X^2", 2)));
    EXPECT_EQ(x[0][0], Series::from_poly(parse_univariate("1 + X", 2)));
    EXPECT_EQ(x[0][1], Series::constant(2, 1));
    Rng rng(9);
    const auto g3 = gco_instance(3);
    const auto F = random_series(rng, 3, 40);
    const auto l = g3.decompose(F.pow(3));
    EXPECT_TRUE(l[0][0].agrees_with(F));
    EXPECT_TRUE(l[0][1].is_zero());
    EXPECT_TRUE(l[0][2].is_zero());
}

TEST(Gco, RecomposesRandomSeries)
{
    Rng rng(31);
    for (int t = 0; t < 1000; ++t) {
        const std::uint32_t p = t % 3 == 0 ? 2 : t % 3 == 1 ? 3 : 5;
        const auto g = gco_instance(p);
        const auto x = random_series(rng, p, 64);
        for (const auto &lam : g.decompose(x)) {
            EXPECT_TRUE(g.recompose(lam).agrees_with(x));
        }
    }
}

TEST(Gco, StableOnRationalFunctions)
{
    Rng rng(13);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const auto g = gco_instance(p);
        for (int t = 0; t < 20; ++t) {
            auto den = random_poly(rng, p, 3);
            if (den.coeff(0) == 0) {
                den = den + Poly::constant(p, 1);
            }
            const RationalFunction f(random_poly(rng, p, 4), den);
            const auto parts = g.decompose(f);
            const auto series = g.decompose(Series::from_rational(f, 96))[0];
            for (std::uint32_t i = 0; i < p; ++i) {
                EXPECT_TRUE(Series::from_rational(parts[i], 96).agrees_with(series[i]));
            }
        }
    }
}

TEST(Khat, DepthZeroAndOne)
{
    Rng rng(17);
    const auto gen = random_series(rng, 2, 96);
    auto v = khat_members({gen}, 0, gen);
    EXPECT_TRUE(v.member);
    EXPECT_EQ(v.depth, 0);
    v = khat_members({gen}, 0, Series::monomial(2, 1, 1));
    EXPECT_TRUE(v.member);
    v = khat_members({gen}, 1, gen.cartier(0));
    EXPECT_TRUE(v.member);
    EXPECT_EQ(v.depth, 1);
}

TEST(Khat, CounterexampleGenerators)
{
    Rng rng(23);
    for (std::uint32_t p : {2u, 3u}) {
        const auto F = random_series(rng, p, 64);
        const auto G = random_series(rng, p, 64);
        const auto X = Series::monomial(p, 1, 1);
        const auto H1 = F.pow(p) + X * G.pow(p);
        for (const auto *q : {&F, &G}) {
            const auto v = khat_members({X, H1}, 1, *q);
            EXPECT_TRUE(v.member) << v.detail;
            EXPECT_EQ(v.depth, 1);
        }
    }
}

TEST(Khat, UnrelatedSeriesIsNotExhibited)
{
    Rng rng(29);
    const auto gen = random_series(rng, 2, 128);
    const auto other = random_series(rng, 2, 128);
    EXPECT_FALSE(khat_members({gen}, 1, other).member);
}
