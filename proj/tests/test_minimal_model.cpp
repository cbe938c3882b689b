#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdga/hopf.hpp"
#include "fdga/minimal_model.hpp"
#include "fdga/spectral.hpp"
#include "support.hpp"

using namespace fdga;

TEST_CASE("extend: attaching beta with d beta = alpha^2 yields M(S^2)") {
    auto base = make_presentation({{"alpha", 2, 0}}, {}, {Element{3, {}}}, 8);
    Element alpha2 = base->mul(base->gen_element(0), base->gen_element(0));
    auto m = extend(base, "beta", 3, -1, alpha2, 1);
    CHECK(m->n_gens() == 2);
    CHECK((m->differential(m->gen_element(1)) -
           m->mul(m->gen_element(0), m->gen_element(0))).is_zero());
    CHECK_FALSE(check_er_cofibrant(m, 1).has_value());
}

TEST_CASE("extend with xi = 0 attaches a closed generator") {
    auto base = make_presentation({}, {}, {}, 6);
    auto m = extend(base, "x", 3, 0, Element{4, {}}, 1);
    CHECK(m->n_gens() == 1);
    CHECK(m->differential(m->gen_element(0)).is_zero());
}

TEST_CASE("extend validates the weight window of the attaching map") {
    // attach u with du = a: weights u:-1, a:0 and r=1 pass (level drops 1)
    auto base = make_presentation({{"a", 2, 0}}, {}, {Element{3, {}}}, 6);
    CHECK_NOTHROW(extend(base, "u", 1, -1, base->gen_element(0), 1));
    // weight(u) = 0 would need xi one level below 0
    CHECK_THROWS_AS(extend(base, "u", 1, 0, base->gen_element(0), 1), ValidationError);
    // non-cocycle attaching maps are rejected
    auto base2 = extend(base, "u", 1, -1, base->gen_element(0), 1);
    Element u = base2->gen_element(1);
    CHECK_THROWS_AS(extend(base2, "z", 0 + 0, 0, u, 0), ValidationError);
}

TEST_CASE("minimal model of the S^2 cohomology dga") {
    auto spheres = sphere_models();
    MinimalModelResult res = minimal_model(spheres.h_s2, 4);
    auto counts = generator_counts(res.model);
    CHECK(counts.size() == 2);
    CHECK(counts[{2, 0}] == 1);
    CHECK(counts[{3, -1}] == 1);
    // d(beta) = +-alpha^2
    int bi = -1;
    for (std::size_t i = 0; i < res.model->n_gens(); ++i)
        if (res.model->generators()[i].degree == 3) bi = static_cast<int>(i);
    REQUIRE(bi >= 0);
    Element dbeta = res.model->normal_form(res.model->gen_differential(bi));
    CHECK_FALSE(dbeta.is_zero());
    // rho is an E_1-quasi-isomorphism on the window
    CHECK(is_er_quasi_iso(res.rho, 1, 0, 3));
}

TEST_CASE("minimal model of the S^3 cohomology dga") {
    auto spheres = sphere_models();
    MinimalModelResult res = minimal_model(spheres.h_s3, 4);
    auto counts = generator_counts(res.model);
    CHECK(counts.size() == 1);
    CHECK(counts[{3, 0}] == 1);
    CHECK(res.model->differential(res.model->gen_element(0)).is_zero());
    CHECK(is_er_quasi_iso(res.rho, 1, 0, 3));
}

TEST_CASE("minimal model of E1(U) with its weight filtration") {
    auto e1u = build_e1_u();
    MinimalModelResult res = minimal_model(e1u, 3);
    auto counts = generator_counts(res.model);
    REQUIRE(counts.size() == 1);
    CHECK(counts[{3, -1}] == 1);
    // the generator maps to ua + vb (echelon-normalized representative)
    Element img = res.rho.images[0];
    Element u = e1u->gen_element(e1u->gen_index("u"));
    Element v = e1u->gen_element(e1u->gen_index("v"));
    Element a = e1u->gen_element(e1u->gen_index("a"));
    Element b = e1u->gen_element(e1u->gen_index("b"));
    Element z = e1u->mul(u, a) + e1u->mul(v, b);
    CHECK(((img - z).is_zero() || (img + z).is_zero()));
    CHECK(is_er_quasi_iso(res.rho, 1, 0, 3));
}

TEST_CASE("minimal model construction log records cone dimensions") {
    auto spheres = sphere_models();
    MinimalModelResult res = minimal_model(spheres.h_s2, 4);
    REQUIRE(res.log.size() == 3);  // degrees 2, 3, 4
    CHECK(res.log[0].degree == 2);
    CHECK(res.log[0].cone_dim == 1);
    CHECK(res.log[1].cone_dim == 1);
    CHECK(res.log[2].cone_dim == 0);
}

TEST_CASE("idempotence up to generator counts") {
    auto spheres = sphere_models();
    for (const auto& m0 : {spheres.m_s2, spheres.m_s3}) {
        MinimalModelResult res = minimal_model(m0, 4);
        CHECK(generator_counts(res.model) == generator_counts(m0));
    }
}

TEST_CASE("decomposability of every attaching map") {
    auto spheres = sphere_models();
    MinimalModelResult res = minimal_model(spheres.h_s2, 4);
    const auto& m = *res.model;
    for (std::size_t i = 0; i < m.n_gens(); ++i)
        for (const auto& [mono, c] : m.gen_differential(i).terms) {
            int total = 0;
            for (int e : mono) total += e;
            CHECK(total >= 2);
        }
}

TEST_CASE("non-simply-connected input is rejected") {
    // H^1 != 0: a single closed degree-1 generator
    auto a = make_presentation({{"t", 1, 0}}, {}, {Element{2, {}}}, 6);
    CHECK_THROWS_AS(minimal_model(a, 3), ValidationError);
}

TEST_CASE("insufficient truncation is rejected") {
    auto spheres = sphere_models();
    auto small = make_presentation({{"w2", 2, 0}},
                                   {[&] {
                                       Element e;
                                       e.degree = 4;
                                       e.terms[{2}] = 1;
                                       return e;
                                   }()},
                                   {Element{3, {}}}, 4);
    CHECK_THROWS_AS(minimal_model(small, 4), TruncationError);
}
