#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "pypl/decomposition.hpp"

using namespace pypl;

TEST_CASE("single-block decomposition is trivially independent") {
    auto m = fixtures::example1();
    DecompositionSpec spec{{{0, 1, 2, 3}}};
    auto v = check_independent(m.net, spec);
    CHECK(v.independent);
    CHECK(v.s == v.s_sum);
    auto inc = check_incidence_independent(m.net, spec);
    CHECK(inc.incidence_independent);
}

TEST_CASE("invalid partitions are rejected") {
    auto m = fixtures::example1();
    CHECK_THROWS_WITH_AS(check_independent(m.net, {{{0, 1}, {1, 2, 3}}}),
                         doctest::Contains("InvalidPartition"), Error);
    CHECK_THROWS_WITH_AS(check_independent(m.net, {{{0, 1}}}),
                         doctest::Contains("InvalidPartition"), Error);
    CHECK_THROWS_WITH_AS(check_independent(m.net, {{{0, 1, 2, 3}, {}}}),
                         doctest::Contains("InvalidPartition"), Error);
    CHECK_THROWS_WITH_AS(check_independent(m.net, {{{0, 1, 2, 7}}}),
                         doctest::Contains("InvalidPartition"), Error);
}

TEST_CASE("example 1 linkage classes: C-decomposition but not independent") {
    auto m = fixtures::example1();
    auto spec = linkage_class_decomposition(m.net);
    REQUIRE(spec.blocks.size() == 2);
    auto v = check_independent(m.net, spec);
    CHECK(!v.independent);  // both classes span the same line (1,1)
    CHECK(v.s == 1);
    CHECK(v.s_sum == 2);
    auto inc = check_incidence_independent(m.net, spec);
    CHECK(inc.incidence_independent);
    CHECK(inc.c_decomposition);
    for (const auto& b : inc.blocks) CHECK(b.weakly_reversible);
}

TEST_CASE("example 2 split into its two reversible pairs is independent") {
    auto m = fixtures::example2();
    DecompositionSpec spec{{{0, 1}, {2, 3}}};
    auto v = check_independent(m.net, spec);
    CHECK(v.independent);  // spans (-1,-1,0,1) and (1,0,1,-1) are independent
    CHECK(v.s == 2);
    CHECK(v.blocks[0].rank == 1);
    CHECK(v.blocks[1].rank == 1);
    CHECK(v.deficiency <= v.deficiency_sum);
}

TEST_CASE("verdicts are invariant under block reordering") {
    auto m = fixtures::example2();
    auto a = check_independent(m.net, {{{0, 1}, {2, 3}}});
    auto b = check_independent(m.net, {{{2, 3}, {0, 1}}});
    CHECK(a.independent == b.independent);
    CHECK(a.s_sum == b.s_sum);
    CHECK(a.deficiency_sum == b.deficiency_sum);
}

TEST_CASE("linkage-class decomposition is incidence independent on random networks") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Network net = fixtures::random_network(rng);
        auto spec = linkage_class_decomposition(net);
        auto inc = check_incidence_independent(net, spec);
        CHECK(inc.incidence_independent);
        CHECK(inc.deficiency >= inc.deficiency_sum);
        // independence, when it also holds, forces the sum to match exactly
        auto v = check_independent(net, spec);
        if (v.independent) CHECK(v.deficiency == v.deficiency_sum);
    }
}

TEST_CASE("STAR-MSC replicas give an incidence independent decomposition") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 5; ++trial) {
        Network net = fixtures::random_network(rng);
        auto kin = fixtures::random_kinetics(rng, net, 3);
        auto t = star_msc_transform(net, canonicalize(kin));
        auto rd = replica_decomposition(t);
        DecompositionSpec spec{rd.blocks};
        auto inc = check_incidence_independent(t.transformed, spec);
        CHECK(inc.incidence_independent);
        CHECK(inc.c_decomposition);
    }
}

TEST_CASE("equilibria relations: example 1 with complex balancing rates") {
    auto m = fixtures::example1(Rational(1, 4), Rational(1, 4), Rational(1, 2), Rational(1, 2));
    auto spec = linkage_class_decomposition(m.net);
    SolveOptions opts;
    opts.seed = 5;
    opts.starts = 12;
    auto rel = equilibria_set_relations(m.net, m.kin, spec, opts);
    CHECK(rel.incidence_independent);
    CHECK(rel.intersection_witnesses > 0);  // blockwise-balanced points exist
    CHECK(rel.intersection_contained);      // and they are global equilibria
    CHECK(rel.max_global_f_residual <= 1e-8);
}

TEST_CASE("equilibria relations: independent decomposition of example 2") {
    for (std::uint64_t seed : {1, 2, 3}) {
        auto m = fixtures::example2();
        DecompositionSpec spec{{{0, 1}, {2, 3}}};
        SolveOptions opts;
        opts.seed = seed;
        opts.starts = 12;
        auto rel = equilibria_set_relations(m.net, m.kin, spec, opts);
        CHECK(rel.independent);
        CHECK(rel.intersection_contained);
        CHECK(rel.equality_holds);  // global equilibria balance both blocks
    }
}
