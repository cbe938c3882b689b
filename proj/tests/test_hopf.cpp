#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdga/hopf.hpp"
#include "fdga/minimal_model.hpp"
#include "fdga/splitting.hpp"
#include "support.hpp"

using namespace fdga;

TEST_CASE("build_e1_u: cohomology of S^3, H^3 class, and the 1-splitting") {
    auto a = build_e1_u();
    int dims[4];
    for (int n = 0; n <= 3; ++n) dims[n] = a->cohomology(n).first;
    CHECK(dims[0] == 1);
    CHECK(dims[1] == 0);
    CHECK(dims[2] == 0);
    CHECK(dims[3] == 1);

    Bigrading g = level_bigrading(a, 1, 5);
    CHECK_FALSE(verify_r_splitting(a, g, 1, 5).has_value());
}

TEST_CASE("build_e1_p1: two classes, concentrated in the zero column") {
    auto p = build_e1_p1();
    CHECK(p->cohomology(0).first == 1);
    CHECK(p->cohomology(1).first == 0);
    CHECK(p->cohomology(2).first == 1);
    Element alpha = p->gen_element(0);
    CHECK(p->mul(alpha, alpha).is_zero());
    SpectralPage pg = page(p, 1, 0, 3);
    for (const auto& [key, cell] : pg.cells) CHECK(key.second == 0);
}

TEST_CASE("sphere models: cohomology dimensions") {
    auto s = sphere_models();
    // H(M(S^2)): 1,0,1,0,0
    int expect2[5] = {1, 0, 1, 0, 0};
    for (int n = 0; n <= 4; ++n) CHECK(s.m_s2->cohomology(n).first == expect2[n]);
    // H(M(S^3)): 1,0,0,1
    int expect3[4] = {1, 0, 0, 1};
    for (int n = 0; n <= 3; ++n) CHECK(s.m_s3->cohomology(n).first == expect3[n]);
}

TEST_CASE("minimal model of the S^2 cohomology dga matches M(S^2) generator counts") {
    auto s = sphere_models();
    MinimalModelResult res = minimal_model(s.h_s2, 4);
    CHECK(generator_counts(res.model) == generator_counts(s.m_s2));
}

TEST_CASE("epsilon_to_hopf: the Hopf fibration and the power maps") {
    for (long q : {1L, 2L, 3L}) {
        HopfResult res = epsilon_to_hopf({q, true});
        CHECK(res.lambda == Rat(q * q));
    }
    // both signs verify
    HopfResult plus = epsilon_to_hopf({2, false});
    CHECK(plus.lambda == rat(4));
}

TEST_CASE("epsilon = 0 degenerates consistently") {
    HopfResult res = epsilon_to_hopf({0, true});
    CHECK(res.lambda == rat(0));
}

TEST_CASE("epsilon in -3..3, both signs: witness verifies and lambda = eps^2") {
    for (long e = -3; e <= 3; ++e)
        for (bool minus : {true, false}) {
            HopfResult res = epsilon_to_hopf({e, minus});
            CHECK(res.lambda == Rat(e * e));
        }
}

TEST_CASE("uniqueness of epsilon: c1 = +-c2 accepted, everything else rejected") {
    auto r1 = uniqueness_of_epsilon(rat(1), rat(1));
    CHECK(r1.accepted);
    CHECK(r1.epsilon == rat(1));
    CHECK(r1.integral);

    auto r2 = uniqueness_of_epsilon(rat(1), rat(0));
    CHECK_FALSE(r2.accepted);

    auto r3 = uniqueness_of_epsilon(rat(2), rat(-2));
    CHECK(r3.accepted);
    CHECK(r3.epsilon == rat(2));

    auto r4 = uniqueness_of_epsilon(rat(1, 2), rat(1, 2));
    CHECK(r4.accepted);
    CHECK_FALSE(r4.integral);
}

TEST_CASE("E1(g) respects the bidegree bigradings (morphism splitting)") {
    HopfResult res = epsilon_to_hopf({2, true});
    Bigrading gs = level_bigrading(res.e1p1, 1, 4);
    Bigrading gt = level_bigrading(res.e1u, 1, 4);
    CHECK_FALSE(check_morphism_splitting(res.e1g, gs, gt, 4).has_value());
}

TEST_CASE("page self-consistency: E_1 of E1(U) reproduces its bidegree dimensions") {
    auto a = build_e1_u();
    SpectralPage p1 = page(a, 1, 0, 4);
    Bigrading g = level_bigrading(a, 1, 5);
    for (const auto& [key, cell] : p1.cells) {
        const Subspace* piece = g.piece(key.first, key.second);
        REQUIRE(piece != nullptr);
        CHECK(static_cast<int>(piece->dim()) == cell.dim);
    }
}

TEST_CASE("the opposite homotopy orientation is rejected by the checker") {
    // with h(beta) flipped to eps^2(ua+vb)(1-t^2) against the same endpoints
    // the d-compatibility check must fire
    HopfResult res = epsilon_to_hopf({1, true});
    PathMorphism bad = res.witness;
    bad.images[1] = path_scale(Rat(-1), bad.images[1]);
    DgaMorphism from = compose(res.rho_prime, res.f_tilde);
    DgaMorphism to = compose(res.e1g, res.rho);
    auto viol = check_r_homotopy(bad, from, to);
    REQUIRE(viol.has_value());
}
