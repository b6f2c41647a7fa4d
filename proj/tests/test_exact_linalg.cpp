#include <random>

#include "doctest.h"
#include "pypl/linprog.hpp"
#include "pypl/matrix.hpp"

using namespace pypl;

static RatVec rv(std::initializer_list<int> xs) {
    RatVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

TEST_CASE("rank basics") {
    CHECK(rank(RatMatrix::identity(2)) == 2);
    CHECK(rank(RatMatrix(3, 4)) == 0);
    // all rows +-(1,1): rank 1
    auto m = RatMatrix::from_rows({rv({1, 1}), rv({-1, -1}), rv({1, 1}), rv({-1, -1})});
    CHECK(rank(m) == 1);
}

TEST_CASE("nullspace basics") {
    CHECK(nullspace(RatMatrix::identity(3)).empty());
    auto b = nullspace(RatMatrix::from_rows({rv({1, 1})}));
    REQUIRE(b.size() == 1);
    // (-1, 1) up to scaling
    CHECK(b[0][0] * Rational(1) == -b[0][1]);
    auto b2 = nullspace(RatMatrix::from_rows({rv({1, 1}), rv({-1, -1})}));
    CHECK(b2.size() == 1);
}

TEST_CASE("rank-nullity and exact kernel membership on random rational matrices") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 6), num(-3, 3), den(1, 3);
    for (int trial = 0; trial < 60; ++trial) {
        RatMatrix m(dim(rng), dim(rng));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = Rational(num(rng), den(rng));
        auto ns = nullspace(m);
        CHECK(rank(m) + ns.size() == m.cols());
        for (const auto& v : ns) {
            for (const Rational& e : m * v) CHECK(e == 0);
        }
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("feasible_signed: witness matches queried pattern exactly") {
    SUBCASE("span{(1,1)}") {
        std::vector<RatVec> basis{rv({1, 1})};
        auto w = feasible_signed(basis, SignPattern{{1, 1}});
        REQUIRE(w.has_value());
        CHECK((*w)[0] >= 1);
        CHECK((*w)[1] >= 1);
        CHECK(!feasible_signed(basis, SignPattern{{1, -1}}).has_value());
    }
    SUBCASE("full plane realizes every pattern") {
        std::vector<RatVec> basis{rv({1, -1}), rv({0, 1})};
        auto w = feasible_signed(basis, SignPattern{{-1, 0}});
        REQUIRE(w.has_value());
        CHECK((*w)[0] <= -1);
        CHECK((*w)[1] == 0);
    }
    SUBCASE("dimension mismatch") {
        std::vector<RatVec> basis{rv({1, 1})};
        CHECK_THROWS(feasible_signed(basis, SignPattern{{1, 1, 1}}));
    }
}

TEST_CASE("feasible_signed properties on random spans") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dimd(1, 3), amb(2, 5), num(-2, 2), sgn(-1, 1);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t ambient = amb(rng), d = dimd(rng);
        std::vector<RatVec> basis(d, RatVec(ambient));
        for (auto& b : basis)
            for (auto& x : b) x = Rational(num(rng));
        SignPattern p;
        for (std::size_t i = 0; i < ambient; ++i) p.coords.push_back(sgn(rng));
        auto w = feasible_signed(basis, p);
        if (!w) continue;
        // witness lies in the span and has the exact sign pattern
        CHECK(in_span(basis, *w));
        CHECK(SignPattern::of(*w) == p);
        // positive scaling keeps the pattern
        RatVec scaled = *w;
        for (auto& x : scaled) x *= Rational(7, 3);
        CHECK(SignPattern::of(scaled) == p);
    }
}

TEST_CASE("positive kernel vector exists iff kernel meets the open orthant") {
    // two-cycle incidence matrix: kernel spanned by (1,1)
    RatMatrix ia(2, 2);
    ia(0, 0) = -1; ia(1, 0) = 1;
    ia(0, 1) = 1;  ia(1, 1) = -1;
    auto b = positive_kernel_vector(ia);
    REQUIRE(b.has_value());
    CHECK((*b)[0] >= 1);
    CHECK((*b)[1] >= 1);
    for (const Rational& e : ia * *b) CHECK(e == 0);

    // single arc: kernel is {0}
    RatMatrix arrow(2, 1);
    arrow(0, 0) = -1; arrow(1, 0) = 1;
    CHECK(!positive_kernel_vector(arrow).has_value());
}
