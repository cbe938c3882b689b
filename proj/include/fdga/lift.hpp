#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fdga/path.hpp"
#include "fdga/spectral.hpp"

namespace fdga {

struct CofibrancyViolation {
    std::string what;
};

/// Verifies that A is E_r-cofibrant over the given generator order:
/// no relations, d(g_k) involves only earlier generators, and the
/// differential drops the filtration level by at least r, checked both
/// per generator and degreewise on slices.
inline std::optional<CofibrancyViolation> check_er_cofibrant(const PresentationPtr& a,
                                                             const std::vector<int>& order, int r,
                                                             int top = -1) {
    if (!a->relations().empty()) return CofibrancyViolation{"presentation is not free"};
    if (order.size() != a->n_gens()) return CofibrancyViolation{"order must list every generator"};
    std::vector<int> rank(a->n_gens(), -1);
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (order[k] < 0 || order[k] >= static_cast<int>(a->n_gens()) || rank[order[k]] != -1)
            return CofibrancyViolation{"order is not a permutation"};
        rank[order[k]] = static_cast<int>(k);
    }
    for (std::size_t i = 0; i < a->n_gens(); ++i) {
        const Element& dg = a->gen_differential(i);
        if (dg.is_zero()) continue;
        const auto& g = a->generators()[i];
        int glevel = -g.weight;
        for (const auto& [m, c] : dg.terms) {
            for (std::size_t j = 0; j < m.size(); ++j)
                if (m[j] > 0 && rank[j] >= rank[i])
                    return CofibrancyViolation{"d(" + g.name + ") involves '" + a->generators()[j].name +
                                               "', which is not earlier in the extension order"};
            if (a->mono_level(m) > glevel - r)
                return CofibrancyViolation{"d(" + g.name + ") does not drop the level by " +
                                           std::to_string(r)};
        }
    }
    // degreewise slice check d(W_p) <= W_{p-r}
    if (top < 0) top = a->truncation() - 1;
    top = std::min(top, a->truncation() - 1);
    for (int n = 0; n <= top; ++n) {
        if (a->dim(n) == 0) continue;
        for (int p : a->levels_present(n)) {
            Subspace img = map_subspace(a->d_matrix(n), a->filtration_slice(n, p));
            if (!a->filtration_slice(n + 1, p - r).contains(img))
                return CofibrancyViolation{"d(W_" + std::to_string(p) + ") escapes W_" +
                                           std::to_string(p - r) + " in degree " + std::to_string(n)};
        }
    }
    return std::nullopt;
}

inline std::optional<CofibrancyViolation> check_er_cofibrant(const PresentationPtr& a, int r,
                                                             int top = -1) {
    std::vector<int> order(a->n_gens());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    return check_er_cofibrant(a, order, r, top);
}

struct LiftError : FdgaError {
    explicit LiftError(const std::string& m) : FdgaError(m) {}
};

struct LiftResult {
    DgaMorphism g;   // M -> A
    PathMorphism h;  // r-homotopy with evaluate(h,0) = w o g, evaluate(h,1) = f
};

/// Homotopy lifting against an E_r-quasi-isomorphism. Given E_r-cofibrant M
/// (extension order = declaration order), w: A -> B an E_r-quasi-isomorphism
/// and f: M -> B filtered, produces g: M -> A with an r-homotopy wg ~ f.
/// r = 1 runs the r = 0 algorithm in the decalage filtration and re-reads
/// the result through Dec W_p M^n = W_{p-n} M^n.
///
/// For each generator v the algorithm solves, inside the W_p slice of the
/// 0-cone of w, the equation d(a,b) = (-g'(dv), f(v) + \int_0^1 h'(dv)) and
/// sets g(v) = a, h(v) = f(v) + \int_0^t h'(dv) + d(b t). A failing solve is
/// reported with the offending generator: it signals that w was not an
/// E_r-quasi-isomorphism on the window.
inline LiftResult lift(const PresentationPtr& m, const DgaMorphism& w, const DgaMorphism& f, int r) {
    if (r != 0 && r != 1) throw ValidationError("lift: only r = 0 and r = 1 are supported");
    if (f.source != m) throw ValidationError("lift: f must start at the cofibrant algebra");
    if (w.target != f.target) throw ValidationError("lift: w and f must share the target");
    if (auto v = check_er_cofibrant(m, r)) throw ValidationError("lift: M is not E_r-cofibrant: " + v->what);

    const PresentationPtr& a = w.source;
    const PresentationPtr& b = w.target;
    int max_deg = 0;
    for (const auto& g : m->generators()) max_deg = std::max(max_deg, g.degree);
    int top = max_deg + 1;
    if (top > a->truncation() || top > b->truncation() || max_deg > m->truncation())
        throw TruncationError("lift: truncation too small for the generator degrees");

    // slice providers: plain filtration for r = 0, decalage chains for r = 1
    FilteredComplex fa = complex_of(a, top);
    FilteredComplex fb = complex_of(b, top);
    if (r == 1) {
        fa = decalage(complex_of(a, std::min(a->truncation(), top + 1)));
        fb = decalage(complex_of(b, std::min(b->truncation(), top + 1)));
    }
    auto m_level = [&](std::size_t i) {
        int lv = -m->generators()[i].weight;
        return r == 1 ? lv + m->generators()[i].degree : lv;
    };

    DgaMorphism g{m, a, std::vector<Element>(m->n_gens())};
    PathMorphism h{m, b, r, {}};
    for (std::size_t i = 0; i < m->n_gens(); ++i) {
        h.images.push_back(path_zero(b, r, m->generators()[i].degree));
        g.images[i] = Element{m->generators()[i].degree, {}};
    }

    for (std::size_t i = 0; i < m->n_gens(); ++i) {
        const auto& gen = m->generators()[i];
        int n = gen.degree;
        int p = m_level(i);
        Element dv = m->normal_form(m->gen_differential(i));

        Element g_dv = g.apply(dv);                 // in A^{n+1}
        PathElement h_dv = h.apply(dv);             // in P(B)^{n+1}
        Element beta = f.images[i] + integrate_0_1(h_dv);  // in B^n

        // cone coordinates: A^n + B^{n-1} -> A^{n+1} + B^n with
        // d(a,b) = (-da, w a + d b)
        int dimA_n = a->dim(n), dimA_n1 = a->dim(n + 1);
        int dimB_n = b->dim(n), dimB_n1 = b->dim(n - 1);
        RatMatrix cone(dimA_n1 + dimB_n, dimA_n + dimB_n1);
        RatMatrix da = a->d_matrix(n);
        for (int ri = 0; ri < dimA_n1; ++ri)
            for (int j = 0; j < dimA_n; ++j) cone(ri, j) = -da(ri, j);
        RatMatrix wn = w.matrix(n);
        for (int ri = 0; ri < dimB_n; ++ri)
            for (int j = 0; j < dimA_n; ++j) cone(dimA_n1 + ri, j) = wn(ri, j);
        if (n - 1 >= 0 && dimB_n1 > 0) {
            RatMatrix db = b->d_matrix(n - 1);
            for (int ri = 0; ri < dimB_n; ++ri)
                for (int j = 0; j < dimB_n1; ++j) cone(dimA_n1 + ri, dimA_n + j) = db(ri, j);
        }

        Vec theta = zero_vec(dimA_n1 + dimB_n);
        Vec gdv = a->coords(g_dv, n + 1);
        for (int ri = 0; ri < dimA_n1; ++ri) theta[ri] = -gdv[ri];
        Vec bv = b->coords(beta, n);
        for (int ri = 0; ri < dimB_n; ++ri) theta[dimA_n1 + ri] = bv[ri];

        Subspace slice = sum(embed(fa.slice(n, p), dimA_n + dimB_n1, 0),
                             embed(fb.slice(n - 1, p), dimA_n + dimB_n1, dimA_n));
        auto sol = solve_in_subspace(cone, theta, slice);
        if (!sol)
            throw LiftError("lift: preimage solve failed at generator '" + gen.name +
                            "' (w is not an E_" + std::to_string(r) +
                            "-quasi-isomorphism on this window)");

        Vec a_coord(sol->begin(), sol->begin() + dimA_n);
        Vec b_coord(sol->begin() + dimA_n, sol->end());
        g.images[i] = a->from_coords(a_coord, n);

        PathElement hv = path_const(b, r, f.images[i]);
        hv = path_add(hv, integrate_0_t(h_dv));
        PathElement bt = path_mul(path_const(b, r, b->from_coords(b_coord, n - 1)), path_t(b, r));
        hv = path_add(hv, path_d(bt));
        h.images[i] = std::move(hv);
    }

    // orient the homotopy as wg ~ f
    for (auto& img : h.images) img = path_reverse(img);

    LiftResult out{std::move(g), std::move(h)};
    if (auto v = check_morphism(out.g))
        throw LiftError("lift: produced g is not a morphism: " + v->what);
    if (auto v = check_filtered_morphism(out.g, max_deg))
        throw LiftError("lift: produced g is not filtered: " + v->what);
    DgaMorphism wg = compose(w, out.g);
    if (auto v = check_r_homotopy(out.h, wg, f))
        throw LiftError("lift: homotopy verification failed: " + v->what);
    return out;
}

}  // namespace fdga
