#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fdga/lift.hpp"
#include "fdga/path.hpp"
#include "fdga/spectral.hpp"

namespace fdga {

/// One E_r-cofibrant extension step: a new generator of pure degree and
/// weight attached along a cocycle xi that sits r levels below.
inline PresentationPtr extend(const PresentationPtr& a, const std::string& name, int degree, int weight,
                              const Element& xi, int r) {
    if (!xi.is_zero()) {
        if (xi.degree != degree + 1) throw ValidationError("extend: xi must have degree n+1");
        if (!a->differential(xi).is_zero()) throw ValidationError("extend: xi is not a cocycle");
        if (a->element_level(xi) > -weight - r)
            throw ValidationError("extend: xi escapes W_{p-r} (level " +
                                  std::to_string(a->element_level(xi)) + " > " +
                                  std::to_string(-weight - r) + ")");
    }
    std::vector<GeneratorSpec> gens = a->generators();
    gens.push_back({name, degree, weight});
    auto widen = [&](const Element& e) {
        Element out;
        out.degree = e.degree;
        for (const auto& [mono, c] : e.terms) {
            Monomial m = mono;
            m.push_back(0);
            out.terms[m] = c;
        }
        return out;
    };
    std::vector<Element> rels;
    for (const auto& rel : a->relations()) rels.push_back(widen(rel));
    std::vector<Element> diffs;
    for (std::size_t i = 0; i < a->n_gens(); ++i) diffs.push_back(widen(a->gen_differential(i)));
    diffs.push_back(widen(xi));
    return make_presentation(std::move(gens), std::move(rels), std::move(diffs), a->truncation());
}

struct MinimalModelStep {
    int degree = 0;
    int cone_dim = 0;                       // dim H^n of the cone before extending
    std::vector<std::pair<int, int>> gens;  // (weight, count) attached
};

struct MinimalModelResult {
    PresentationPtr model;
    DgaMorphism rho;  // model -> A, a quasi-isomorphism on the window
    std::vector<MinimalModelStep> log;
};

namespace detail {

/// Map from cone coordinates to cohomology coordinates (representatives
/// first, boundaries absorbed).
inline RatMatrix class_matrix(const FilteredComplex& cone, int n, const ComplexCohomology& h) {
    std::vector<Vec> cols = h.reps;
    for (const auto& b : h.boundaries.basis()) cols.push_back(b);
    RatMatrix m(cone.dim(n), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < cone.dim(n); ++i) m(i, j) = cols[j][i];
    return m;
}

}  // namespace detail

/// Degreewise minimal-model construction for simply connected filtered
/// presentations: for each degree n <= N the weight-filtered cone
/// cohomology H^n(C_1(rho)) is attached as a minimal E_1-extension, with
/// representatives chosen level by level from echelon bases adapted to the
/// weight chain. The final rho is verified to induce isomorphisms on
/// H^{<= N} and to have cone cohomology vanishing through degree N.
inline MinimalModelResult minimal_model(const PresentationPtr& a, int up_to_degree) {
    int n_top = up_to_degree;
    if (n_top + 1 > a->truncation())
        throw TruncationError("minimal_model: need truncation >= N+1 on the target");
    {
        auto [h0, r0] = a->cohomology(0);
        if (h0 != 1) throw ValidationError("minimal_model: target is not 0-connected");
        auto [h1, r1] = a->cohomology(1);
        if (h1 != 0)
            throw ValidationError("minimal_model: H^1 != 0; only simply connected targets are supported");
    }

    int m_trunc = n_top + 2;
    PresentationPtr m = make_presentation({}, {}, {}, m_trunc);
    DgaMorphism rho{m, a, {}};
    MinimalModelResult out;

    for (int n = 2; n <= n_top; ++n) {
        FilteredComplex fm = complex_of(m, std::min(m_trunc, n + 2));
        FilteredComplex fa = complex_of(a, std::min(a->truncation(), n + 1));
        FilteredComplex cone = r_cone(fm, fa, morphism_matrices(rho, n + 1), 1);
        ComplexCohomology h = complex_cohomology(cone, n);

        MinimalModelStep step;
        step.degree = n;
        step.cone_dim = h.dim;
        if (h.dim > 0) {
            auto filt = induced_filtration_on_cohomology(cone, n, h);
            RatMatrix cm = detail::class_matrix(cone, n, h);
            Subspace prev = Subspace::zero(h.reps.size());
            int counter = 0;
            std::vector<std::tuple<std::string, int, Element, Element>> attach;  // name, weight, dv, rho_v
            for (const auto& [p, hp] : filt) {
                auto fresh = quotient_representatives(prev, hp);
                if (!fresh.empty()) {
                    // lift each new class to a cone cocycle inside W_p
                    Subspace zw = meet_join(h.cocycles, cone.slice(n, p)).first;
                    for (const auto& cls : fresh) {
                        // find z in Z cap W_p with [z] = cls
                        RatMatrix to_class(h.reps.size(), zw.dim());
                        for (std::size_t j = 0; j < zw.dim(); ++j) {
                            auto sol = solve(cm, zw.basis()[j]);
                            if (!sol) throw ValidationError("minimal_model: cocycle escapes Z");
                            for (std::size_t i = 0; i < h.reps.size(); ++i) to_class(i, j) = (*sol)[i];
                        }
                        auto y = solve(to_class, cls);
                        if (!y) throw ValidationError("minimal_model: W-compatible section failed");
                        Vec z = zero_vec(cone.dim(n));
                        for (std::size_t j = 0; j < zw.dim(); ++j) axpy(z, (*y)[j], zw.basis()[j]);
                        // split z = (m-part, a-part)
                        Vec mpart(z.begin(), z.begin() + fm.dim(n + 1));
                        Vec apart(z.begin() + fm.dim(n + 1), z.end());
                        Element dv = m->from_coords(mpart, n + 1);
                        dv *= Rat(-1);
                        Element rv = a->from_coords(apart, n);
                        std::string name = "e" + std::to_string(n) + "_" + std::to_string(counter++);
                        attach.emplace_back(name, -p, dv, rv);
                    }
                }
                prev = hp;
            }
            std::map<int, int> per_weight;
            for (auto& [name, wgt, dv, rv] : attach) {
                // minimality: the attaching cocycle is decomposable
                for (const auto& [mono, c] : dv.terms) {
                    int total = 0;
                    for (int e : mono) total += e;
                    if (total < 2) throw ValidationError("minimal_model: attaching map is not decomposable");
                }
                // dv was computed over the pre-batch presentation; pad it to
                // the current generator count
                Element padded;
                padded.degree = dv.degree;
                for (const auto& [mono, c] : dv.terms) {
                    Monomial pm = mono;
                    pm.resize(m->n_gens(), 0);
                    padded.terms[pm] = c;
                }
                m = extend(m, name, n, wgt, padded, 1);
                rho.source = m;
                rho.images.push_back(rv);
                per_weight[wgt]++;
            }
            for (auto [wgt, cnt] : per_weight) step.gens.push_back({wgt, cnt});
        }
        out.log.push_back(step);
    }

    // final verification: rho is a quasi-isomorphism through degree N and
    // the cone cohomology vanishes there
    if (auto v = check_morphism(rho))
        throw ValidationError("minimal_model: rho is not a morphism: " + v->what);
    if (auto v = check_filtered_morphism(rho, n_top))
        throw ValidationError("minimal_model: rho is not filtered: " + v->what);
    if (auto v = check_er_cofibrant(m, 1, n_top))
        throw ValidationError("minimal_model: model is not E_1-cofibrant: " + v->what);
    {
        FilteredComplex fm = complex_of(m, std::min(m_trunc, n_top + 2));
        FilteredComplex fa = complex_of(a, std::min(a->truncation(), n_top + 1));
        FilteredComplex cone = r_cone(fm, fa, morphism_matrices(rho, n_top + 1), 1);
        for (int n = 0; n <= n_top; ++n) {
            if (complex_cohomology(cone, n).dim != 0)
                throw ValidationError("minimal_model: cone cohomology persists in degree " +
                                      std::to_string(n));
        }
    }

    out.model = m;
    out.rho = rho;
    return out;
}

/// Generator counts per (degree, weight) of a presentation.
inline std::map<std::pair<int, int>, int> generator_counts(const PresentationPtr& a) {
    std::map<std::pair<int, int>, int> out;
    for (const auto& g : a->generators()) out[{g.degree, g.weight}]++;
    return out;
}

}  // namespace fdga
