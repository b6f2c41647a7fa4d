#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "pypl/robustness.hpp"

using namespace pypl;
using fixtures::rv;

namespace {

// A <-> B with rates k x_A and k x_A^2: every equilibrium has x_A = 1, so the
// concentration of A is absolutely robust while B ranges over the class.
fixtures::Model acr_instance() { return fixtures::two_cycle(rv({1, 0}), rv({2, 0})); }

// A+B+C <-> 0 with r1 = 2 (one constant term) and r2 = x_A + x_B/x_C.
// Canonicalization splits the constant of r1 into two half-terms, so the two
// layers have kinetic order subspaces span{(1,0,0)} and span{(0,1,-1)}.
// PL-complex balanced equilibria are (1,t,t); positive equilibria satisfy
// x_A + x_B/x_C = 2, a strictly larger set.
fixtures::Model clp_instance() {
    Network net;
    net.species = {"A", "B", "C"};
    net.complexes = {{1, 1, 1}, {0, 0, 0}};
    net.reactions = {{0, 1}, {1, 0}};
    fixtures::Model m;
    m.net = validated(net);
    m.kin.reactions = {
        {Rational(2), {{Rational(1), rv({0, 0, 0})}}},
        {Rational(1), {{Rational(1), rv({0, 1, -1})}, {Rational(1), rv({1, 0, 0})}}},
    };
    validate_kinetics(m.kin, m.net);
    return m;
}

}  // namespace

TEST_CASE("SF-pair detection on closed forms") {
    auto a = acr_instance();
    auto pairs = find_sf_pairs(a.net, canonicalize(a.kin));
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].species == 0);
    CHECK(pairs[0].linked);

    auto none = fixtures::two_cycle(rv({1, 0}), rv({2, 1}));
    CHECK(find_sf_pairs(none.net, canonicalize(none.kin)).empty());
}

TEST_CASE("SF-pair of the enzymatic system sits in S1 with one witnessing layer") {
    auto m = fixtures::example2();
    auto rep = canonicalize(m.kin);
    auto pairs = find_sf_pairs(m.net, rep);
    bool found = false;
    for (const auto& p : pairs)
        if (p.reaction_a == 0 && p.reaction_b == 2) {
            found = true;
            CHECK(p.species == 0);  // S1
            CHECK(p.witnessing_layers == std::vector<std::size_t>{2});
            CHECK(p.linked);
        }
    CHECK(found);
}

TEST_CASE("SF-pairs are preserved under species permutation") {
    auto m = fixtures::example2();
    auto p = fixtures::permute_species(m, {3, 2, 1, 0});
    auto pairs = find_sf_pairs(m.net, canonicalize(m.kin));
    auto ppairs = find_sf_pairs(p.net, canonicalize(p.kin));
    REQUIRE(pairs.size() == ppairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        CHECK(ppairs[i].species == 3 - pairs[i].species);
}

TEST_CASE("ACR audit certifies the deficiency-zero instance") {
    auto m = acr_instance();
    SolveOptions opts;
    opts.seed = 71;
    opts.starts = 40;
    auto sols = solve_equilibrium(m.net, m.kin, SolveMode::positive, opts);
    REQUIRE(sols.size() >= 3);  // x_B free, so many distinct equilibria
    auto spec = linkage_class_decomposition(m.net);
    auto report = acr_audit(m.net, m.kin, spec, sols);
    REQUIRE(report.certificates.size() >= 1);
    CHECK(report.certificates[0].theorem == "deficiency-zero linked SF-pair");
    CHECK(report.acr_species.count(0) == 1);
    CHECK(report.acr_species.count(1) == 0);
    CHECK(report.empirical_ok);
    for (const auto& rec : sols) CHECK(rec.c[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ACR audit preconditions") {
    auto m = acr_instance();
    auto spec = linkage_class_decomposition(m.net);
    CHECK_THROWS_WITH_AS(acr_audit(m.net, m.kin, spec, {}),
                         doctest::Contains("PreconditionUnmet"), Error);

    auto e1 = fixtures::example1();
    auto lc = linkage_class_decomposition(e1.net);  // not independent
    EquilibriumRecord dummy;
    dummy.c = {1.0, 1.0};
    CHECK_THROWS_WITH_AS(acr_audit(e1.net, e1.kin, lc, {dummy}),
                         doctest::Contains("PreconditionUnmet"), Error);
}

TEST_CASE("BCR audit: e_X in P_Z picks out exactly the balanced-robust species") {
    auto m = clp_instance();
    auto rep = canonicalize(m.kin);
    REQUIRE(rep.h == 2);
    auto kd = kinetic_order_subspaces(m.net, rep, classify(m.net, rep));
    CHECK(same_span(kd.layers[0].subspace_basis, {rv({1, 0, 0})}));
    CHECK(same_span(kd.layers[1].subspace_basis, {rv({0, 1, -1})}));

    SolveOptions opts;
    opts.seed = 73;
    opts.starts = 24;
    auto cb = solve_equilibrium(m.net, m.kin, SolveMode::pl_complex_balanced, opts);
    REQUIRE(!cb.empty());
    for (const auto& rec : cb) {
        CHECK(rec.c[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rec.c[1] == doctest::Approx(rec.c[2]).epsilon(1e-6));
    }
    auto report = bcr_audit(m.net, kd, cb);
    CHECK(report.bcr_species == std::set<std::size_t>{0});
    CHECK(!report.all_species);
    CHECK(report.empirical_ok);

    CHECK_THROWS_WITH_AS(bcr_audit(m.net, kd, {}), doctest::Contains("PreconditionUnmet"), Error);
}

TEST_CASE("combined report on the CLP instance: PLE gate blocks ACR, counts nest") {
    auto m = clp_instance();
    SolveOptions opts;
    opts.seed = 79;
    opts.starts = 24;
    auto positive = solve_equilibrium(m.net, m.kin, SolveMode::positive, opts);
    auto balanced = solve_equilibrium(m.net, m.kin, SolveMode::pl_complex_balanced, opts);
    REQUIRE(!positive.empty());
    REQUIRE(!balanced.empty());
    bool off_manifold = false;
    for (const auto& rec : positive)
        off_manifold |= std::abs(rec.c[0] - 1.0) > 1e-3;  // equilibria with x_A != 1 exist
    CHECK(off_manifold);

    auto sample = positive;
    sample.insert(sample.end(), balanced.begin(), balanced.end());
    auto rep = canonicalize(m.kin);
    auto kd = kinetic_order_subspaces(m.net, rep, classify(m.net, rep));
    auto spec = linkage_class_decomposition(m.net);
    auto report = robustness_report(m.net, m.kin, spec, kd, sample);
    CHECK(report.acr.certificates.empty());  // layer-imbalanced sample voids the hypothesis
    REQUIRE(!report.acr.caveats.empty());
    CHECK(report.m_acr == 0);
    CHECK(report.m_bcr == 1);
    CHECK(report.s == 1);
}

TEST_CASE("combined report on the ACR instance: full count chain") {
    auto m = acr_instance();
    SolveOptions opts;
    opts.seed = 83;
    opts.starts = 30;
    auto sols = solve_equilibrium(m.net, m.kin, SolveMode::positive, opts);
    REQUIRE(!sols.empty());
    auto rep = canonicalize(m.kin);
    auto kd = kinetic_order_subspaces(m.net, rep, classify(m.net, rep));
    auto spec = linkage_class_decomposition(m.net);
    auto report = robustness_report(m.net, m.kin, spec, kd, sols);
    CHECK(report.m_acr == 1);
    CHECK(report.m_bcr == 1);
    CHECK(report.s == 1);
    CHECK(report.acr.acr_species == report.bcr.bcr_species);
}
