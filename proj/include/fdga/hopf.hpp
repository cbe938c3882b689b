#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdga/path.hpp"
#include "fdga/presentation.hpp"
#include "fdga/spectral.hpp"

namespace fdga {

namespace detail {
inline Element mono_elem(const PresentationPtr& a, std::initializer_list<std::pair<int, int>> factors,
                         Rat coeff = Rat(1)) {
    Element e = a->unit();
    e *= coeff;
    for (auto [gen, exp] : factors)
        for (int k = 0; k < exp; ++k) e = a->free_mul(e, a->gen_element(gen));
    return a->normal_form(e);
}
}  // namespace detail

/// First page of the weight spectral sequence of the blow-up
/// compactification of C^2 \ {0}: Lambda(u,v,a,b) / (uv, ub, va, a^2+b^2, ab)
/// with du = a, dv = b. u,v sit in bidegree (-1,2), a,b in (0,2); the
/// products u*a and -v*b realize the point classes of the two divisor
/// components, with the cross terms vanishing because the divisors are
/// disjoint.
inline PresentationPtr build_e1_u(int truncation = 8) {
    std::vector<GeneratorSpec> gens{
        {"u", 1, -1}, {"v", 1, -1}, {"a", 2, 0}, {"b", 2, 0}};
    auto tmp = make_presentation(gens, {}, {Element{2, {}}, Element{2, {}}, Element{3, {}}, Element{3, {}}},
                                 truncation);
    // relations: uv, ub, va, a^2 + b^2, ab
    std::vector<Element> rels;
    rels.push_back(detail::mono_elem(tmp, {{0, 1}, {1, 1}}));
    rels.push_back(detail::mono_elem(tmp, {{0, 1}, {3, 1}}));
    rels.push_back(detail::mono_elem(tmp, {{1, 1}, {2, 1}}));
    rels.push_back(detail::mono_elem(tmp, {{2, 2}}) + detail::mono_elem(tmp, {{3, 2}}));
    rels.push_back(detail::mono_elem(tmp, {{2, 1}, {3, 1}}));
    std::vector<Element> diff{
        tmp->gen_element(2),  // du = a
        tmp->gen_element(3),  // dv = b
        Element{3, {}},       // da = 0
        Element{3, {}},       // db = 0
    };
    return make_presentation(gens, std::move(rels), std::move(diff), truncation);
}

/// E_1 of P^1: Lambda(alpha)/(alpha^2), alpha in bidegree (0,2), d = 0.
inline PresentationPtr build_e1_p1(int truncation = 8) {
    std::vector<GeneratorSpec> gens{{"alpha", 2, 0}};
    auto tmp = make_presentation(gens, {}, {Element{3, {}}}, truncation);
    std::vector<Element> rels{detail::mono_elem(tmp, {{0, 2}})};
    return make_presentation(gens, std::move(rels), {Element{3, {}}}, truncation);
}

struct SphereModels {
    PresentationPtr m_s2;       // Lambda(alpha, beta), d beta = alpha^2
    PresentationPtr m_s3;       // Lambda(gamma), d = 0
    PresentationPtr h_s2;       // cohomology dga of S^2, trivial filtration
    PresentationPtr h_s3;       // cohomology dga of S^3, trivial filtration
};

/// Normalized sphere models. The minimal models carry the weights forced
/// by the blow-up page (beta and gamma of weight -1, so that dbeta drops
/// the filtration level and gamma can hit the degree-3 class of E1(U));
/// the cohomology dgas are trivially filtered.
inline SphereModels sphere_models(int truncation = 8) {
    SphereModels out;
    {
        std::vector<GeneratorSpec> gens{{"alpha", 2, 0}, {"beta", 3, -1}};
        auto tmp = make_presentation(gens, {}, {Element{3, {}}, Element{4, {}}}, truncation);
        std::vector<Element> diff{Element{3, {}}, detail::mono_elem(tmp, {{0, 2}})};
        out.m_s2 = make_presentation(gens, {}, std::move(diff), truncation);
    }
    {
        std::vector<GeneratorSpec> gens{{"gamma", 3, -1}};
        out.m_s3 = make_presentation(gens, {}, {Element{4, {}}}, truncation);
    }
    {
        std::vector<GeneratorSpec> gens{{"w2", 2, 0}};
        auto tmp = make_presentation(gens, {}, {Element{3, {}}}, truncation);
        std::vector<Element> rels{detail::mono_elem(tmp, {{0, 2}})};
        out.h_s2 = make_presentation(gens, std::move(rels), {Element{3, {}}}, truncation);
    }
    {
        std::vector<GeneratorSpec> gens{{"w3", 3, 0}};
        out.h_s3 = make_presentation(gens, {}, {Element{4, {}}}, truncation);
    }
    return out;
}

/// A power-map scenario: exponent or epsilon with a sign choice (a+b vs
/// a-b). lambda = epsilon^2 always; for the power maps epsilon = q.
struct HopfScenario {
    long epsilon = 1;
    bool minus_sign = true;  // the power maps use a - b
};

struct HopfResult {
    Rat lambda;
    PresentationPtr e1u, e1p1, m_s2, m_s3;
    DgaMorphism e1g;        // E1(P^1) -> E1(U), alpha -> eps (a +- b)
    DgaMorphism rho;        // M(S^2) -> E1(P^1)
    DgaMorphism rho_prime;  // M(S^3) -> E1(U), gamma -> -(ua+vb)
    DgaMorphism f_tilde;    // M(S^2) -> M(S^3), beta -> eps^2 gamma
    PathMorphism witness;   // verified 1-homotopy rho' f~  ~  E1(g) rho
};

/// Builds the whole blow-up scenario for a given epsilon and sign, and
/// returns lambda = eps^2 only after the 1-homotopy witness verifies.
/// The orientation of the degree-3 class is normalized as
/// rho'(gamma) = -(ua+vb); with the opposite orientation the same witness
/// exhibits -lambda, matching the dependence of the Hopf invariant on the
/// orientation of S^3.
inline HopfResult epsilon_to_hopf(const HopfScenario& sc, int truncation = 8) {
    HopfResult out;
    Rat eps(sc.epsilon);
    out.e1u = build_e1_u(truncation);
    out.e1p1 = build_e1_p1(truncation);
    SphereModels spheres = sphere_models(truncation);
    out.m_s2 = spheres.m_s2;
    out.m_s3 = spheres.m_s3;

    const auto& e1u = out.e1u;
    Element u = e1u->gen_element(0), v = e1u->gen_element(1);
    Element a = e1u->gen_element(2), b = e1u->gen_element(3);
    Element apm = sc.minus_sign ? (a - b) : (a + b);
    Element upm = sc.minus_sign ? (u - v) : (u + v);
    Element z = e1u->mul(u, a) + e1u->mul(v, b);  // ua + vb

    // E1(g): alpha -> eps (a +- b)
    Element ga = apm;
    ga *= eps;
    out.e1g = DgaMorphism{out.e1p1, e1u, {ga}};
    // rho: alpha -> alpha, beta -> 0
    out.rho = DgaMorphism{out.m_s2, out.e1p1, {out.e1p1->gen_element(0), Element{4, {}}}};
    // rho': gamma -> -(ua+vb)
    Element mz = z;
    mz *= Rat(-1);
    out.rho_prime = DgaMorphism{out.m_s3, e1u, {mz}};
    // f~: alpha -> 0, beta -> eps^2 gamma
    Element e2g = out.m_s3->gen_element(0);
    e2g *= eps * eps;
    out.f_tilde = DgaMorphism{out.m_s2, out.m_s3, {Element{2, {}}, e2g}};

    for (const DgaMorphism* f : {&out.e1g, &out.rho, &out.rho_prime, &out.f_tilde})
        if (auto viol = check_filtered_morphism(*f, 4))
            throw ValidationError("epsilon_to_hopf: scenario morphism invalid: " + viol->what);
    if (!is_er_quasi_iso(out.rho_prime, 1, 0, 3))
        throw ValidationError("epsilon_to_hopf: rho' is not an E_1-quasi-isomorphism");
    if (!is_er_quasi_iso(out.rho, 1, 0, 3))
        throw ValidationError("epsilon_to_hopf: rho is not an E_1-quasi-isomorphism");

    // witness: h(alpha) = eps(a+-b) t - eps(u+-v) dt,
    //          h(beta)  = eps^2 (ua+vb)(t^2 - 1)
    PathElement h_alpha = path_mul(path_const(e1u, 1, ga), path_t(e1u, 1));
    Element mu = upm;
    mu *= -eps;
    h_alpha = path_add(h_alpha, path_mul(path_const(e1u, 1, mu), path_dt(e1u, 1)));
    Element ze = z;
    ze *= eps * eps;
    PathElement t2 = path_mul(path_t(e1u, 1), path_t(e1u, 1));
    PathElement h_beta = path_mul(path_const(e1u, 1, ze),
                                  path_add(t2, path_scale(Rat(-1), path_const(e1u, 1, e1u->unit()))));
    out.witness = PathMorphism{out.m_s2, e1u, 1, {h_alpha, h_beta}};

    DgaMorphism from = compose(out.rho_prime, out.f_tilde);  // alpha -> 0, beta -> -eps^2 (ua+vb)
    DgaMorphism to = compose(out.e1g, out.rho);              // alpha -> eps(a+-b), beta -> 0
    if (auto viol = check_r_homotopy(out.witness, from, to))
        throw ValidationError("epsilon_to_hopf: homotopy verification failed: " + viol->what);

    out.lambda = eps * eps;
    return out;
}

struct EpsilonClassification {
    bool accepted = false;
    Rat epsilon;      // the common magnitude when accepted
    bool integral = false;
    std::string reason;
};

/// Classifies a candidate page map alpha -> c1 a + c2 b: accepted iff
/// (c1 a + c2 b)^2 = 0 mod R, i.e. c1 = +-c2. The weight spectral sequence
/// of a compactification is defined over Z, so a non-integer epsilon is
/// flagged.
inline EpsilonClassification uniqueness_of_epsilon(const Rat& c1, const Rat& c2, int truncation = 8) {
    EpsilonClassification out;
    auto e1u = build_e1_u(truncation);
    Element a = e1u->gen_element(2), b = e1u->gen_element(3);
    Element cand = c1 * a + c2 * b;
    Element sq = e1u->mul(cand, cand);
    if (!sq.is_zero()) {
        out.reason = "alpha^2 does not map to zero: " + e1u->element_str(sq);
        return out;
    }
    out.accepted = true;
    out.epsilon = c1;
    out.integral = (out.epsilon.get_den() == 1);
    if (!out.integral) out.reason = "epsilon is not an integer";
    return out;
}

}  // namespace fdga
