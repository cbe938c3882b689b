#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fdga/filtration.hpp"
#include "fdga/presentation.hpp"

namespace fdga {

/// Element of the r-path P_r(A) = Lambda(t,dt) (x) A, stored in the left
/// tensor convention: t^k (x) x and t^k dt (x) y with coefficients in the
/// carrier. Filtration: a t-term sits at the level of its coefficient, a
/// dt-term r levels below (dt has pure weight -r). Finitely supported in t.
struct PathElement {
    PresentationPtr carrier;
    int r = 0;
    int degree = 0;                  // total degree; dt counts 1
    std::map<int, Element> t_part;   // k -> coefficient of t^k, degree = degree
    std::map<int, Element> dt_part;  // k -> coefficient of t^k dt, degree = degree - 1

    bool is_zero() const { return t_part.empty() && dt_part.empty(); }

    void prune() {
        for (auto it = t_part.begin(); it != t_part.end();)
            it = it->second.is_zero() ? t_part.erase(it) : std::next(it);
        for (auto it = dt_part.begin(); it != dt_part.end();)
            it = it->second.is_zero() ? dt_part.erase(it) : std::next(it);
    }
};

inline PathElement path_zero(const PresentationPtr& a, int r, int degree) {
    return PathElement{a, r, degree, {}, {}};
}

/// x (x) 1 as a constant path.
inline PathElement path_const(const PresentationPtr& a, int r, const Element& x) {
    PathElement p{a, r, x.degree, {}, {}};
    if (!x.is_zero()) p.t_part[0] = x;
    return p;
}

/// The path element t (degree 0) and dt (degree 1).
inline PathElement path_t(const PresentationPtr& a, int r) {
    PathElement p{a, r, 0, {}, {}};
    p.t_part[1] = a->unit();
    return p;
}
inline PathElement path_dt(const PresentationPtr& a, int r) {
    PathElement p{a, r, 1, {}, {}};
    p.dt_part[0] = a->unit();
    return p;
}

inline PathElement path_add(const PathElement& x, const PathElement& y) {
    if (x.carrier != y.carrier || x.r != y.r) throw ValidationError("path_add: carrier mismatch");
    if (!x.is_zero() && !y.is_zero() && x.degree != y.degree)
        throw ValidationError("path_add: inhomogeneous sum");
    PathElement out = x;
    if (out.is_zero()) out.degree = y.degree;
    for (const auto& [k, c] : y.t_part) {
        auto it = out.t_part.find(k);
        if (it == out.t_part.end())
            out.t_part[k] = c;
        else
            it->second += c;
    }
    for (const auto& [k, c] : y.dt_part) {
        auto it = out.dt_part.find(k);
        if (it == out.dt_part.end())
            out.dt_part[k] = c;
        else
            it->second += c;
    }
    out.prune();
    return out;
}

inline PathElement path_scale(const Rat& c, PathElement x) {
    for (auto& [k, e] : x.t_part) e *= c;
    for (auto& [k, e] : x.dt_part) e *= c;
    x.prune();
    return x;
}

/// Koszul product in the left convention:
///   (t^a x)(t^b y)       = t^{a+b} (x y)
///   (t^a x)(t^b dt y)    = (-1)^{|x|} t^{a+b} dt (x y)
///   (t^a dt x)(t^b y)    = t^{a+b} dt (x y)
///   dt terms multiply to zero.
inline PathElement path_mul(const PathElement& x, const PathElement& y) {
    if (x.carrier != y.carrier || x.r != y.r) throw ValidationError("path_mul: carrier mismatch");
    const auto& alg = *x.carrier;
    PathElement out{x.carrier, x.r, x.degree + y.degree, {}, {}};
    auto add_t = [&](int k, const Element& e) {
        if (e.is_zero()) return;
        auto it = out.t_part.find(k);
        if (it == out.t_part.end())
            out.t_part[k] = e;
        else
            it->second += e;
    };
    auto add_dt = [&](int k, const Element& e) {
        if (e.is_zero()) return;
        auto it = out.dt_part.find(k);
        if (it == out.dt_part.end())
            out.dt_part[k] = e;
        else
            it->second += e;
    };
    for (const auto& [ka, xa] : x.t_part) {
        for (const auto& [kb, yb] : y.t_part) add_t(ka + kb, alg.mul(xa, yb));
        for (const auto& [kb, yb] : y.dt_part) {
            Element prod = alg.mul(xa, yb);
            if (xa.degree % 2 != 0) prod *= Rat(-1);
            add_dt(ka + kb, prod);
        }
    }
    for (const auto& [ka, xa] : x.dt_part)
        for (const auto& [kb, yb] : y.t_part) add_dt(ka + kb, alg.mul(xa, yb));
    out.prune();
    return out;
}

/// d(t^k x) = k t^{k-1} dt x + t^k dx;  d(t^k dt y) = - t^k dt dy.
inline PathElement path_d(const PathElement& x) {
    const auto& alg = *x.carrier;
    PathElement out{x.carrier, x.r, x.degree + 1, {}, {}};
    for (const auto& [k, e] : x.t_part) {
        Element de = alg.differential(e);
        if (!de.is_zero()) {
            auto it = out.t_part.find(k);
            if (it == out.t_part.end())
                out.t_part[k] = de;
            else
                it->second += de;
        }
        if (k > 0) {
            Element ke = e;
            ke *= Rat(k);
            auto it = out.dt_part.find(k - 1);
            if (it == out.dt_part.end())
                out.dt_part[k - 1] = ke;
            else
                it->second += ke;
        }
    }
    for (const auto& [k, e] : x.dt_part) {
        Element de = alg.differential(e);
        de *= Rat(-1);
        if (!de.is_zero()) {
            auto it = out.dt_part.find(k);
            if (it == out.dt_part.end())
                out.dt_part[k] = de;
            else
                it->second += de;
        }
    }
    out.prune();
    return out;
}

/// Evaluation of forms at t = lambda: t -> lambda, dt -> 0.
inline Element evaluate(const PathElement& x, const Rat& lambda) {
    Element out;
    out.degree = x.degree;
    for (const auto& [k, e] : x.t_part) {
        Rat p = 1;
        for (int i = 0; i < k; ++i) p *= lambda;
        Element scaled_e = e;
        scaled_e *= p;
        out += scaled_e;
    }
    return out;
}

/// Definite integral: t^k -> 0, t^k dt y -> y/(k+1). Degree drops by one;
/// the level rises by at most r. Satisfies the Stokes identity
/// evaluate(.,1) - evaluate(.,0) = d o I + I o d.
inline Element integrate_0_1(const PathElement& x) {
    Element out;
    out.degree = x.degree - 1;
    for (const auto& [k, e] : x.dt_part) {
        Element term = e;
        term *= Rat(1) / Rat(k + 1);
        out += term;
    }
    return out;
}

/// Indefinite integral from 0: t^k -> 0, t^k dt y -> t^{k+1} y/(k+1).
/// Satisfies d o I + I o d = id - (constant at t=0).
inline PathElement integrate_0_t(const PathElement& x) {
    PathElement out{x.carrier, x.r, x.degree - 1, {}, {}};
    for (const auto& [k, e] : x.dt_part) {
        Element term = e;
        term *= Rat(1) / Rat(k + 1);
        out.t_part[k + 1] = term;
    }
    out.prune();
    return out;
}

/// t -> 1 - t reversal; swaps the endpoints of a homotopy.
inline PathElement path_reverse(const PathElement& x) {
    const auto& alg = *x.carrier;
    PathElement out{x.carrier, x.r, x.degree, {}, {}};
    auto binom_expand = [&](int k, const Element& e, bool dt) {
        // (1-t)^k = sum_j C(k,j) (-1)^j t^j
        Rat c = 1;
        for (int j = 0; j <= k; ++j) {
            Element term = e;
            term *= c * ((j % 2 == 0) ? 1 : -1);
            if (dt) {
                term *= Rat(-1);  // dt -> -dt
                auto it = out.dt_part.find(j);
                if (it == out.dt_part.end())
                    out.dt_part[j] = term;
                else
                    it->second += term;
            } else {
                auto it = out.t_part.find(j);
                if (it == out.t_part.end())
                    out.t_part[j] = term;
                else
                    it->second += term;
            }
            c = c * Rat(k - j) / Rat(j + 1);
        }
        (void)alg;
    };
    for (const auto& [k, e] : x.t_part) binom_expand(k, e, false);
    for (const auto& [k, e] : x.dt_part) binom_expand(k, e, true);
    out.prune();
    return out;
}

/// Smallest p with x in W_p P_r: t-terms at their coefficient's level,
/// dt-terms r below. INT_MIN for zero.
inline int path_level(const PathElement& x) {
    const auto& alg = *x.carrier;
    int lv = INT_MIN;
    for (const auto& [k, e] : x.t_part) lv = std::max(lv, alg.element_level(e));
    for (const auto& [k, e] : x.dt_part) lv = std::max(lv, alg.element_level(e) - x.r);
    return lv;
}

/// A homotopy datum: generator images in P_r(target) of a common source.
struct PathMorphism {
    PresentationPtr source;
    PresentationPtr target;
    int r = 0;
    std::vector<PathElement> images;  // one per source generator

    PathElement apply(const Element& x) const {
        PathElement out = path_zero(target, r, x.degree);
        for (const auto& [m, c] : x.terms) {
            PathElement term = path_const(target, r, target->unit());
            for (std::size_t i = 0; i < m.size(); ++i)
                for (int e = 0; e < m[i]; ++e) term = path_mul(term, images[i]);
            out = path_add(out, path_scale(c, term));
        }
        return out;
    }
};

struct HomotopyViolation {
    std::string what;
};

/// Verifies that h extends to a filtered dga morphism source -> P_r(target)
/// with evaluate(h,0) = f and evaluate(h,1) = g. Checks relations, the
/// Leibniz compatibility d h = h d on generators, the weight windows of the
/// r-path filtration, and the endpoints.
inline std::optional<HomotopyViolation> check_r_homotopy(const PathMorphism& h, const DgaMorphism& f,
                                                         const DgaMorphism& g) {
    if (f.source != h.source || g.source != h.source || f.target != h.target || g.target != h.target)
        return HomotopyViolation{"endpoint morphisms do not share the homotopy's source/target"};
    const auto& src = *h.source;
    int top = std::min(h.source->truncation(), h.target->truncation());
    if (h.images.size() != src.n_gens()) return HomotopyViolation{"missing generator images"};

    for (std::size_t i = 0; i < src.n_gens(); ++i) {
        const auto& gen = src.generators()[i];
        const PathElement& hi = h.images[i];
        if (!hi.is_zero() && hi.degree != gen.degree)
            return HomotopyViolation{"h(" + gen.name + ") has wrong degree"};
        // weight window of the r-path filtration
        if (!hi.is_zero() && path_level(hi) > -gen.weight)
            return HomotopyViolation{"h(" + gen.name + ") escapes W_" + std::to_string(-gen.weight) +
                                     " of the r-path"};
        // endpoints
        Element at0 = h.target->normal_form(evaluate(hi, 0));
        Element at1 = h.target->normal_form(evaluate(hi, 1));
        if (!(at0 - f.images[i]).is_zero())
            return HomotopyViolation{"evaluate(h,0) != f on " + gen.name};
        if (!(at1 - g.images[i]).is_zero())
            return HomotopyViolation{"evaluate(h,1) != g on " + gen.name};
        // d-compatibility
        if (gen.degree + 1 <= top) {
            PathElement lhs = path_d(hi);
            PathElement rhs = h.apply(src.normal_form(src.gen_differential(i)));
            PathElement dif = path_add(lhs, path_scale(Rat(-1), rhs));
            if (!dif.is_zero())
                return HomotopyViolation{"d h != h d on " + gen.name};
        }
    }
    // relations map to zero
    for (const auto& rel : src.relations()) {
        if (rel.degree > top) continue;
        PathElement img = h.apply(rel);
        if (!img.is_zero())
            return HomotopyViolation{"relation " + src.element_str(rel) + " survives in the path algebra"};
    }
    return std::nullopt;
}

/// Constant homotopy at f, witnessing f ~ f.
inline PathMorphism constant_homotopy(const DgaMorphism& f, int r) {
    PathMorphism h{f.source, f.target, r, {}};
    for (const auto& img : f.images) h.images.push_back(path_const(f.target, r, img));
    return h;
}

/// P_r of a filtered complex, truncated at t-polynomial degree <= tmax.
/// Basis per degree: t^k (x) e_i (k <= tmax) then t^k dt (x) e_j. Used for
/// the decalage/path compatibility checks.
inline FilteredComplex path_complex(const FilteredComplex& fc, int r, int tmax) {
    FilteredComplex out;
    out.lo = fc.lo;
    int degs = static_cast<int>(fc.dims.size());
    out.dims.resize(degs);
    // offsets: for degree n, blocks (k, t, dim(n)) for k=0..tmax then (k, dt, dim(n-1))
    auto block_dims = [&](int n) {
        int t_dim = fc.dim(n) * (tmax + 1);
        int dt_dim = fc.dim(n - 1) * (tmax + 1);
        return std::pair<int, int>(t_dim, dt_dim);
    };
    for (int n = fc.lo; n <= fc.hi(); ++n) {
        auto [td, dd] = block_dims(n);
        out.dims[n - fc.lo] = td + dd;
    }
    // d(t^k x) = t^k dx + k t^{k-1} dt x ; d(t^k dt y) = -t^k dt dy
    for (int n = fc.lo; n < fc.hi(); ++n) {
        auto [td_n, dd_n] = block_dims(n);
        auto [td_m, dd_m] = block_dims(n + 1);
        RatMatrix m(td_m + dd_m, td_n + dd_n);
        RatMatrix dn = fc.d_out(n);
        RatMatrix dn1 = fc.d_out(n - 1);
        int dim_n = fc.dim(n), dim_n1 = fc.dim(n - 1);
        for (int k = 0; k <= tmax; ++k) {
            // t^k x -> t^k dx
            for (std::size_t i = 0; i < dn.rows(); ++i)
                for (std::size_t j = 0; j < dn.cols(); ++j)
                    m(k * fc.dim(n + 1) + i, k * dim_n + j) = dn(i, j);
            // t^k x -> k t^{k-1} dt x  (dt block row offset td_m)
            if (k > 0)
                for (int j = 0; j < dim_n; ++j)
                    m(td_m + (k - 1) * dim_n + j, k * dim_n + j) = k;
            // t^k dt y -> -t^k dt dy
            for (std::size_t i = 0; i < dn1.rows(); ++i)
                for (std::size_t j = 0; j < dn1.cols(); ++j)
                    m(td_m + k * dim_n + i, td_n + k * dim_n1 + j) = -dn1(i, j);
        }
        out.d.push_back(std::move(m));
    }
    // W_p = (W_p (x) t-part) + (W_{p+r} (x) dt-part)
    out.chains.resize(degs);
    for (int n = fc.lo; n <= fc.hi(); ++n) {
        auto [td_n, dd_n] = block_dims(n);
        int total = td_n + dd_n;
        std::vector<int> cand;
        for (int p : fc.jump_levels(n)) cand.push_back(p);
        for (int p : fc.jump_levels(n - 1)) cand.push_back(p - r);
        if (cand.empty()) cand.push_back(0);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (int p : cand) {
            std::vector<Vec> rows;
            Subspace wt = fc.slice(n, p);
            for (int k = 0; k <= tmax; ++k)
                for (const auto& b : wt.basis()) {
                    Vec v = zero_vec(total);
                    for (int i = 0; i < fc.dim(n); ++i) v[k * fc.dim(n) + i] = b[i];
                    rows.push_back(std::move(v));
                }
            Subspace wdt = fc.slice(n - 1, p + r);
            for (int k = 0; k <= tmax; ++k)
                for (const auto& b : wdt.basis()) {
                    Vec v = zero_vec(total);
                    for (int i = 0; i < fc.dim(n - 1); ++i) v[td_n + k * fc.dim(n - 1) + i] = b[i];
                    rows.push_back(std::move(v));
                }
            out.chains[n - fc.lo][p] = Subspace::span(std::move(rows), total);
        }
    }
    return out;
}

}  // namespace fdga
