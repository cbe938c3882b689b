#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdga/matrix.hpp"
#include "fdga/subspace.hpp"
#include "support.hpp"

using namespace fdga;
using fdga_test::Rng;

TEST_CASE("kernel of identity is the zero subspace") {
    Subspace k = kernel_basis(RatMatrix::identity(2));
    CHECK(k.dim() == 0);
    CHECK(k.ambient_dim() == 2);
}

TEST_CASE("kernel of [1 1] is span{(1,-1)}") {
    RatMatrix m(1, 2);
    m(0, 0) = 1;
    m(0, 1) = 1;
    Subspace k = kernel_basis(m);
    REQUIRE(k.dim() == 1);
    CHECK(k.contains(Vec{rat(1), rat(-1)}));
}

TEST_CASE("random kernels: M v = 0 for every basis vector, plus rank-nullity") {
    Rng rng(20240811);
    for (int trial = 0; trial < 25; ++trial) {
        RatMatrix m = fdga_test::random_matrix(rng, 5, 7);
        Subspace k = kernel_basis(m);
        for (const auto& v : k.basis()) CHECK(is_zero_vec(m.apply(v)));
        CHECK(rank(m) + k.dim() == m.cols());
    }
}

TEST_CASE("solve_in_subspace: identity matrix, ambient subspace") {
    RatMatrix m = RatMatrix::identity(3);
    Vec b{rat(2), rat(-1), rat(7, 3)};
    auto x = solve_in_subspace(m, b, Subspace::full(3));
    REQUIRE(x.has_value());
    CHECK(*x == b);
}

TEST_CASE("solve_in_subspace: kernel solve along span{(1,-1)}") {
    RatMatrix m(1, 2);
    m(0, 0) = 1;
    m(0, 1) = 1;
    Subspace s = Subspace::span({Vec{rat(1), rat(-1)}}, 2);
    auto x = solve_in_subspace(m, Vec{rat(0)}, s);
    REQUIRE(x.has_value());
    CHECK(s.contains(*x));
    CHECK(is_zero_vec(m.apply(*x)));
}

TEST_CASE("solve_in_subspace: b outside the image of M restricted to S") {
    // M kills S entirely, so any nonzero b is unreachable. Oracle: the
    // rank of [M S^T | b] exceeds the rank of M S^T.
    RatMatrix m(1, 2);
    m(0, 0) = 1;
    m(0, 1) = 1;
    Subspace s = Subspace::span({Vec{rat(1), rat(-1)}}, 2);
    Vec b{rat(3)};

    RatMatrix msT(1, 1);
    msT(0, 0) = m.apply(s.basis()[0])[0];
    RatMatrix aug(1, 2);
    aug(0, 0) = msT(0, 0);
    aug(0, 1) = b[0];
    REQUIRE(rank(aug) > rank(msT));  // independent consistency oracle

    CHECK_FALSE(solve_in_subspace(m, b, s).has_value());
}

TEST_CASE("meet_join: U = V") {
    Rng rng(7);
    Subspace u = fdga_test::random_subspace(rng, 5, 3);
    auto [m, j] = meet_join(u, u);
    CHECK(m == u);
    CHECK(j == u);
}

TEST_CASE("meet_join: complementary lines in the plane") {
    Subspace u = Subspace::span({Vec{rat(1), rat(0)}}, 2);
    Subspace v = Subspace::span({Vec{rat(1), rat(1)}}, 2);
    auto [m, j] = meet_join(u, v);
    CHECK(m.dim() == 0);
    CHECK(j == Subspace::full(2));
}

TEST_CASE("meet_join agrees with the Zassenhaus oracle and the dimension identity") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        Subspace u = fdga_test::random_subspace(rng, 6, 3);
        Subspace v = fdga_test::random_subspace(rng, 6, 4);
        auto [m, j] = meet_join(u, v);
        auto [om, oj] = fdga_test::zassenhaus_meet_join(u, v);
        CHECK(m == om);
        CHECK(j == oj);
        CHECK(m.dim() + j.dim() == u.dim() + v.dim());
    }
}

TEST_CASE("quotient_representatives: edge cases") {
    Rng rng(3);
    Subspace v = fdga_test::random_subspace(rng, 5, 4);
    CHECK(quotient_representatives(v, v).empty());
    auto reps = quotient_representatives(Subspace::zero(5), v);
    CHECK(reps.size() == v.dim());
    CHECK(Subspace::span(reps, 5) == v);
}

TEST_CASE("quotient_representatives: dims 2 in 5, reps independent mod U") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Subspace v = fdga_test::random_subspace(rng, 6, 5);
        if (v.dim() < 5) continue;
        Subspace u = Subspace::span({v.basis()[0], v.basis()[1]}, 6);
        auto reps = quotient_representatives(u, v);
        CHECK(reps.size() == v.dim() - u.dim());
        // Oracle: augmenting U's basis with the reps and row-reducing
        // recovers the full dimension of V.
        std::vector<Vec> all = u.basis();
        for (const auto& r : reps) all.push_back(r);
        CHECK(Subspace::span(all, 6) == v);
    }
}

TEST_CASE("quotient_representatives rejects U not contained in V") {
    Subspace u = Subspace::span({Vec{rat(1), rat(0)}}, 2);
    Subspace v = Subspace::span({Vec{rat(0), rat(1)}}, 2);
    CHECK_THROWS(quotient_representatives(u, v));
}

TEST_CASE("echelon form is canonical: same span, same representation") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec> vs;
        for (int i = 0; i < 3; ++i) vs.push_back(fdga_test::random_vec(rng, 5));
        Subspace a = Subspace::span(vs, 5);
        // Shuffle and mix the generators; the span is unchanged.
        std::vector<Vec> ws;
        ws.push_back(vec_add(vs[0], scaled(vs[1], rat(3))));
        ws.push_back(scaled(vs[2], rat(-2, 7)));
        ws.push_back(vs[1]);
        ws.push_back(vec_add(vs[2], vs[0]));
        Subspace b = Subspace::span(ws, 5);
        CHECK(a == b);
    }
}

TEST_CASE("preimage: M x in T") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        RatMatrix m = fdga_test::random_matrix(rng, 4, 6);
        Subspace t = fdga_test::random_subspace(rng, 4, 2);
        Subspace pre = preimage(m, t);
        for (const auto& v : pre.basis()) CHECK(t.contains(m.apply(v)));
        // Everything in the kernel belongs to every preimage.
        CHECK(pre.contains(kernel_basis(m)));
    }
}

TEST_CASE("solve recovers a particular solution on consistent systems") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        RatMatrix m = fdga_test::random_matrix(rng, 4, 5);
        Vec x0 = fdga_test::random_vec(rng, 5);
        Vec b = m.apply(x0);
        auto x = solve(m, b);
        REQUIRE(x.has_value());
        CHECK(m.apply(*x) == b);
    }
}
