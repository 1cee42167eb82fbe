#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "opforge/linalg.hpp"

using namespace opforge;
using opforge::testing::Rng;

TEST_CASE("triplet invariants") {
    auto m = RationalMatrix::from_triplets(2, 2, {{0, 0, Rat(1)}, {1, 1, Rat(0)}});
    CHECK(m.nnz() == 1);   // explicit zeros are dropped
    CHECK_THROWS_AS(RationalMatrix::from_triplets(2, 2, {{0, 0, Rat(1)}, {0, 0, Rat(2)}}),
                    ShapeMismatch);
    CHECK_THROWS_AS(RationalMatrix::from_triplets(2, 2, {{2, 0, Rat(1)}}), ShapeMismatch);
    m.add_at(0, 0, Rat(-1));
    CHECK(m.nnz() == 0);   // cancellation erases the key
}

TEST_CASE("rank of a dependent matrix") {
    auto m = RationalMatrix::from_triplets(
        2, 2, {{0, 0, Rat(1)}, {0, 1, Rat(2)}, {1, 0, Rat(2)}, {1, 1, Rat(4)}});
    CHECK(rank(m) == 1);
    CHECK(rank(m.transpose()) == 1);
}

TEST_CASE("kernel of [1 1]") {
    auto m = RationalMatrix::from_triplets(1, 2, {{0, 0, Rat(1)}, {0, 1, Rat(1)}});
    SubspaceBasis k = kernel_basis(m);
    CHECK(k.dim() == 1);
    CHECK(k.ambient_dim == 2);
    CHECK(k.vecs.get(0, 0) == -k.vecs.get(1, 0));
    CHECK(k.vecs.get(1, 0) != 0);
    CHECK((m * k.vecs).is_zero());
}

TEST_CASE("solve and inconsistency") {
    auto A = RationalMatrix::from_triplets(
        2, 2, {{0, 0, Rat(1)}, {0, 1, Rat(2)}, {1, 0, Rat(3)}, {1, 1, Rat(4)}});
    RationalMatrix b(2, 1);
    b.set(0, 0, Rat(5));
    b.set(1, 0, Rat(6));
    auto x = solve(A, b);
    REQUIRE(x.has_value());
    CHECK(x->get(0, 0) == Rat(-4));
    CHECK(x->get(1, 0) == Rat(9, 2));
    CHECK(A * *x == b);

    RationalMatrix A2(2, 1), b2(2, 1);
    A2.set(0, 0, Rat(1));
    b2.set(1, 0, Rat(1));
    CHECK_FALSE(solve(A2, b2).has_value());
}

TEST_CASE("cokernel of the diagonal") {
    RationalMatrix m(2, 1);
    m.set(0, 0, Rat(1));
    m.set(1, 0, Rat(1));
    Cokernel ck = cokernel(m);
    CHECK(ck.coords == std::vector<int>{1});
    CHECK((ck.proj * m).is_zero());
    CHECK(ck.proj * ck.sect == RationalMatrix::identity(1));
}

TEST_CASE("homology dims of short complexes") {
    // sphere: everything survives
    CHECK(homology_dims({{0, 3}}, {}) == std::map<int, int>{{0, 3}});
    // disk: acyclic
    auto h = homology_dims({{1, 1}, {0, 1}}, {{1, RationalMatrix::identity(1)}});
    CHECK(h == std::map<int, int>{{1, 0}, {0, 0}});
    // three-term pattern Q -> Q^2 -> Q, exact
    auto d1 = RationalMatrix::from_triplets(1, 2, {{0, 0, Rat(1)}, {0, 1, Rat(-1)}});
    auto d2 = RationalMatrix::from_triplets(2, 1, {{0, 0, Rat(1)}, {1, 0, Rat(1)}});
    auto h2 = homology_dims({{0, 1}, {1, 2}, {2, 1}}, {{1, d1}, {2, d2}});
    CHECK(h2 == std::map<int, int>{{0, 0}, {1, 0}, {2, 0}});
    // breaking the middle map leaves classes at 1 and 2
    auto h3 = homology_dims({{0, 1}, {1, 2}, {2, 1}}, {{1, d1}});
    CHECK(h3 == std::map<int, int>{{0, 0}, {1, 1}, {2, 1}});
}

TEST_CASE("homology dims rejects non-complexes and bad shapes") {
    auto d1 = RationalMatrix::from_triplets(1, 2, {{0, 0, Rat(1)}, {0, 1, Rat(1)}});
    auto d2 = RationalMatrix::from_triplets(2, 1, {{0, 0, Rat(1)}, {1, 0, Rat(1)}});
    CHECK_THROWS_AS(homology_dims({{0, 1}, {1, 2}, {2, 1}}, {{1, d1}, {2, d2}}), NotAComplex);
    CHECK_THROWS_AS(homology_dims({{0, 2}, {1, 2}}, {{1, d1}}), ShapeMismatch);
}

TEST_CASE("randomized rank laws") {
    Rng g(20260823);
    for (int trial = 0; trial < 120; ++trial) {
        int rows = 1 + (int)(g() % 7), cols = 1 + (int)(g() % 7);
        RationalMatrix m = testing::rand_matrix(g, rows, cols);
        int r = rank(m);
        CHECK(r == rank(m.transpose()));
        CHECK(r + kernel_basis(m).dim() == cols);
        CHECK(image_basis(m).dim() == r);
        // solving against own image always succeeds and reproduces it
        RationalMatrix X = testing::rand_matrix(g, cols, 2);
        auto sol = solve(m, m * X);
        REQUIRE(sol.has_value());
        CHECK(m * *sol == m * X);
        // cokernel dims and annihilation
        Cokernel ck = cokernel(m);
        CHECK((int)ck.coords.size() == rows - r);
        CHECK((ck.proj * m).is_zero());
    }
}

TEST_CASE("randomized homology against known sphere content") {
    Rng g(4711);
    for (int trial = 0; trial < 60; ++trial) {
        auto rc = testing::rand_complex(g);
        auto h = rc.X.homology();
        for (const auto& [n, dim] : rc.X.dims()) {
            int expect = rc.expected_homology.count(n) ? rc.expected_homology.at(n) : 0;
            int got = h.count(n) ? h.at(n) : 0;
            CHECK(got == expect);
        }
        // Euler characteristic agrees with alternating homology sum
        Rat chi(0), chi_h(0);
        for (const auto& [n, dim] : rc.X.dims()) chi += Rat((n % 2 == 0) ? dim : -dim);
        for (const auto& [n, dim] : h) chi_h += Rat((n % 2 == 0) ? dim : -dim);
        CHECK(chi == chi_h);
    }
}
