#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fdga/presentation.hpp"
#include "fdga/subspace.hpp"

namespace fdga {

/// A filtered complex presented degreewise: exact dimensions, differential
/// matrices, and an increasing chain of subspaces per degree indexed by
/// filtration level. Slices below the first stored jump are zero and above
/// the last are the full space (the filtration is regular and exhaustive
/// within the window).
struct FilteredComplex {
    int lo = 0;                                  // first degree of the window
    std::vector<int> dims;                       // dims[i] = dim in degree lo+i
    std::vector<RatMatrix> d;                    // d[i]: degree lo+i -> lo+i+1 (size dims.size()-1)
    std::vector<std::map<int, Subspace>> chains;  // per degree: level -> slice

    int hi() const { return lo + static_cast<int>(dims.size()) - 1; }

    int dim(int n) const {
        if (n < lo || n > hi()) return 0;
        return dims[n - lo];
    }

    /// d matrix out of degree n; degrees at the top or outside the window
    /// map to the zero complex.
    RatMatrix d_out(int n) const {
        if (n < lo || n > hi()) return RatMatrix(dim(n + 1), 0);
        if (n == hi()) return RatMatrix(0, dims[n - lo]);
        return d[n - lo];
    }

    Subspace slice(int n, int p) const {
        if (n < lo || n > hi()) return Subspace::zero(0);
        const auto& chain = chains[n - lo];
        if (chain.empty()) return Subspace::full(dims[n - lo]);
        auto it = chain.upper_bound(p);
        if (it == chain.begin()) return Subspace::zero(dims[n - lo]);
        --it;
        return it->second;
    }

    std::vector<int> jump_levels(int n) const {
        std::vector<int> out;
        if (n < lo || n > hi()) return out;
        for (const auto& [p, s] : chains[n - lo]) out.push_back(p);
        return out;
    }

    int min_level(int n) const {
        auto js = jump_levels(n);
        return js.empty() ? 0 : js.front();
    }
    int max_level(int n) const {
        auto js = jump_levels(n);
        return js.empty() ? 0 : js.back();
    }

    /// The filtration must be nested, end at the full space, and satisfy
    /// d W_p <= W_p degreewise. Degree pairs at the window edge are skipped.
    void check_valid() const {
        for (int n = lo; n <= hi(); ++n) {
            const auto& chain = chains[n - lo];
            const Subspace* prev = nullptr;
            for (const auto& [p, s] : chain) {
                if (static_cast<int>(s.ambient_dim()) != dim(n))
                    throw ValidationError("filtration slice has wrong ambient dimension");
                if (prev && !s.contains(*prev)) throw ValidationError("filtration not nested");
                prev = &s;
            }
            if (!chain.empty() && prev->dim() != static_cast<std::size_t>(dim(n)))
                throw ValidationError("filtration not exhaustive in degree " + std::to_string(n));
        }
        for (int n = lo; n < hi(); ++n) {
            if (d[n - lo].rows() != static_cast<std::size_t>(dim(n + 1)) ||
                d[n - lo].cols() != static_cast<std::size_t>(dim(n)))
                throw ValidationError("differential has wrong shape");
            for (int p : jump_levels(n)) {
                Subspace img = map_subspace(d[n - lo], slice(n, p));
                if (!slice(n + 1, p).contains(img))
                    throw ValidationError("differential does not preserve the filtration");
            }
        }
        for (int n = lo; n + 2 <= hi(); ++n) {
            RatMatrix dd = d[n + 1 - lo].mul(d[n - lo]);
            for (std::size_t i = 0; i < dd.rows(); ++i)
                for (std::size_t j = 0; j < dd.cols(); ++j)
                    if (!is_zero(dd(i, j))) throw ValidationError("d o d != 0");
        }
    }
};

/// Degreewise realization of a presentation with its multiplicative weight
/// filtration, over degrees [0, top].
inline FilteredComplex complex_of(const PresentationPtr& a, int top) {
    if (top > a->truncation()) throw TruncationError("complex_of: window exceeds truncation");
    FilteredComplex fc;
    fc.lo = 0;
    for (int n = 0; n <= top; ++n) fc.dims.push_back(a->dim(n));
    for (int n = 0; n < top; ++n) fc.d.push_back(a->d_matrix(n));
    fc.chains.resize(top + 1);
    for (int n = 0; n <= top; ++n) {
        for (int p : a->levels_present(n)) fc.chains[n][p] = a->filtration_slice(n, p);
        if (fc.chains[n].empty() && a->dim(n) > 0) fc.chains[n][0] = Subspace::full(a->dim(n));
    }
    return fc;
}

/// Deligne decalage: (Dec W)_p in degree n = W_{p-n} meet d^{-1}(W_{p-n-1}
/// in degree n+1). The top degree of the window is dropped because its
/// differential is not available.
inline FilteredComplex decalage(const FilteredComplex& fc) {
    if (fc.dims.size() < 2) throw ValidationError("decalage: window too small");
    FilteredComplex out;
    out.lo = fc.lo;
    out.dims.assign(fc.dims.begin(), fc.dims.end() - 1);
    out.d.assign(fc.d.begin(), fc.d.end() - 1);
    out.chains.resize(out.dims.size());
    for (int n = out.lo; n <= out.hi(); ++n) {
        // candidate jump levels: shifted source jumps in degrees n, n+1
        std::vector<int> cand;
        for (int p : fc.jump_levels(n)) cand.push_back(p + n);
        for (int p : fc.jump_levels(n + 1)) {
            cand.push_back(p + n + 1);
        }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        Subspace prev = Subspace::zero(fc.dim(n));
        for (int p : cand) {
            Subspace wa = fc.slice(n, p - n);
            Subspace target = fc.slice(n + 1, p - n - 1);
            Subspace pre = preimage(fc.d_out(n), target);
            Subspace dec = meet_join(wa, pre).first;
            if (dec != prev || out.chains[n - out.lo].empty()) {
                out.chains[n - out.lo][p] = dec;
                prev = dec;
            }
        }
        // ensure exhaustiveness at the top
        if (fc.dim(n) > 0) {
            Subspace fullpre = preimage(fc.d_out(n), fc.slice(n + 1, fc.max_level(n + 1)));
            int ptop = std::max(fc.max_level(n) + n, fc.max_level(n + 1) + n + 1);
            out.chains[n - out.lo][ptop] = meet_join(fc.slice(n, ptop - n), fullpre).first;
        }
    }
    return out;
}

/// f(W_p) <= W_p in every degree of the window, on top of check_morphism.
struct FilteredViolation {
    std::string what;
};

inline std::optional<FilteredViolation> check_filtered_morphism(const DgaMorphism& f, int top = -1) {
    if (auto v = check_morphism(f)) return FilteredViolation{v->what};
    if (top < 0) top = f.common_truncation();
    const auto& src = *f.source;
    const auto& tgt = *f.target;
    for (int n = 0; n <= top; ++n) {
        if (src.dim(n) == 0) continue;
        RatMatrix m = f.matrix(n);
        for (int p : src.levels_present(n)) {
            Subspace s = src.filtration_slice(n, p);
            Subspace t = tgt.filtration_slice(n, p);
            Subspace img = map_subspace(m, s);
            if (!t.contains(img))
                return FilteredViolation{"f(W_" + std::to_string(p) + ") escapes W_" +
                                         std::to_string(p) + " in degree " + std::to_string(n)};
        }
    }
    return std::nullopt;
}

/// Degreewise matrices of a morphism over [0, top].
inline std::vector<RatMatrix> morphism_matrices(const DgaMorphism& f, int top) {
    std::vector<RatMatrix> out;
    for (int n = 0; n <= top; ++n) out.push_back(f.matrix(n));
    return out;
}

/// r-cone of a morphism of filtered complexes:
///   C^n = A^{n+1} + B^n,   d(a,b) = (-da, f(a) + db),
///   W_p C^n = W_{p-r} A^{n+1} + W_p B^n.
inline FilteredComplex r_cone(const FilteredComplex& a, const FilteredComplex& b,
                              const std::vector<RatMatrix>& f, int r) {
    if (a.lo != 0 || b.lo != 0) throw ValidationError("r_cone: windows must start at degree 0");
    int top = std::min(a.hi() - 1, b.hi());
    FilteredComplex c;
    c.lo = -1;  // C^{-1} = A^0
    for (int n = -1; n <= top; ++n) c.dims.push_back(a.dim(n + 1) + b.dim(n));
    c.chains.resize(top + 2);
    for (int n = -1; n < top; ++n) {
        std::size_t rows = c.dims[n + 2], cols = c.dims[n + 1];
        RatMatrix m(rows, cols);
        std::size_t a_in = a.dim(n + 1), a_out = a.dim(n + 2);
        // -d_A block
        RatMatrix da = a.d_out(n + 1);
        for (std::size_t i = 0; i < da.rows(); ++i)
            for (std::size_t j = 0; j < da.cols(); ++j) m(i, j) = -da(i, j);
        // f block and d_B block
        const RatMatrix& fn = f[n + 1];
        for (std::size_t i = 0; i < fn.rows(); ++i)
            for (std::size_t j = 0; j < fn.cols(); ++j) m(a_out + i, j) = fn(i, j);
        RatMatrix db = b.d_out(n);
        for (std::size_t i = 0; i < db.rows(); ++i)
            for (std::size_t j = 0; j < db.cols(); ++j) m(a_out + i, a_in + j) = db(i, j);
        c.d.push_back(std::move(m));
    }
    for (int n = -1; n <= top; ++n) {
        std::vector<int> cand;
        for (int p : a.jump_levels(n + 1)) cand.push_back(p + r);
        for (int p : b.jump_levels(n)) cand.push_back(p);
        if (cand.empty()) cand.push_back(0);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (int p : cand) {
            Subspace sa = a.slice(n + 1, p - r);
            Subspace sb = b.slice(n, p);
            Subspace block = sum(embed(sa, c.dims[n + 1], 0), embed(sb, c.dims[n + 1], a.dim(n + 1)));
            c.chains[n + 1][p] = std::move(block);
        }
    }
    return c;
}

/// Cohomology of a complex window at degree n (valid for lo < n < hi, and
/// at the edges when the missing differential is known to be zero).
struct ComplexCohomology {
    int dim = 0;
    std::vector<Vec> reps;           // cocycle representatives
    Subspace cocycles;               // ker d_n
    Subspace boundaries;             // im d_{n-1}
};

inline ComplexCohomology complex_cohomology(const FilteredComplex& fc, int n) {
    ComplexCohomology out;
    RatMatrix dn = fc.d_out(n);
    out.cocycles = kernel_basis(dn);
    RatMatrix dprev = fc.d_out(n - 1);
    out.boundaries = (n - 1 < fc.lo) ? Subspace::zero(fc.dim(n)) : image(dprev);
    out.reps = quotient_representatives(out.boundaries, out.cocycles);
    out.dim = static_cast<int>(out.reps.size());
    return out;
}

/// Filtration induced on H^n: W_p H = image of H(W_p) in H, computed as
/// (Z meet W_p + B)/B expressed in the representative coordinates.
inline std::map<int, Subspace> induced_filtration_on_cohomology(const FilteredComplex& fc, int n,
                                                                const ComplexCohomology& h) {
    std::map<int, Subspace> out;
    std::size_t hdim = h.reps.size();
    // basis change: express a cocycle as reps-part + boundary-part
    std::vector<Vec> full = h.reps;
    for (const auto& b : h.boundaries.basis()) full.push_back(b);
    RatMatrix basis_mat(fc.dim(n), full.size());
    for (std::size_t j = 0; j < full.size(); ++j)
        for (int i = 0; i < fc.dim(n); ++i) basis_mat(i, j) = full[j][i];
    for (int p : fc.jump_levels(n)) {
        Subspace zp = meet_join(h.cocycles, fc.slice(n, p)).first;
        std::vector<Vec> coords;
        for (const auto& z : zp.basis()) {
            auto sol = solve(basis_mat, z);
            if (!sol) throw ValidationError("induced filtration: cocycle escapes Z = reps + B");
            coords.push_back(Vec(sol->begin(), sol->begin() + hdim));
        }
        out[p] = Subspace::span(std::move(coords), hdim);
    }
    return out;
}

}  // namespace fdga
