#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fdga/filtration.hpp"

namespace fdga {

/// One bidegree of a spectral page. `level` is the filtration index p of
/// the increasing filtration; the printed bidegree is (-p, n+p) with total
/// degree n. Representatives live in the degree-n coordinates of the
/// underlying complex and are chosen by echelon pivot order.
struct PageCell {
    int n = 0;
    int level = 0;
    Subspace znum;    // Z_r = W_p meet d^{-1} W_{p-r}
    Subspace denom;   // Z_{r-1}^{p-1} + d Z_{r-1}^{p+r-1}
    std::vector<Vec> reps;
    int dim = 0;
    RatMatrix dr;     // matrix to the cell (n+1, p-r); dim(target) x dim
};

struct SpectralPage {
    int r = 0;
    int n_lo = 0, n_hi = 0;
    FilteredComplex complex;  // the underlying filtered complex
    std::map<std::pair<int, int>, PageCell> cells;  // key (n, level); nonzero cells only

    int dim(int n, int level) const {
        auto it = cells.find({n, level});
        return it == cells.end() ? 0 : it->second.dim;
    }

    int total_dim(int n) const {
        int s = 0;
        for (const auto& [k, c] : cells)
            if (k.first == n) s += c.dim;
        return s;
    }

    /// Page filtration W_p E_r: dimensions of the sum of columns of level <= p.
    int page_filtration_dim(int n, int p) const {
        int s = 0;
        for (const auto& [k, c] : cells)
            if (k.first == n && k.second <= p) s += c.dim;
        return s;
    }

    std::vector<std::pair<int, int>> keys_at(int n) const {
        std::vector<std::pair<int, int>> out;
        for (const auto& [k, c] : cells)
            if (k.first == n) out.push_back(k);
        return out;
    }
};

namespace detail {

struct CellSpaces {
    Subspace znum;
    Subspace denom;
};

/// Z_r^p(n) = W_p(n) meet d^{-1}(W_{p-r}(n+1)); the denominator is
/// Z_{r-1}^{p-1}(n) + d(Z_{r-1}^{p+r-1}(n-1)). Degrees outside the window
/// are treated as zero, which is correct when the complex vanishes there.
inline CellSpaces cell_spaces(const FilteredComplex& fc, int r, int n, int p) {
    CellSpaces out;
    RatMatrix dn = fc.d_out(n);
    Subspace wp = fc.slice(n, p);
    Subspace pre = preimage(dn, fc.slice(n + 1, p - r));
    out.znum = meet_join(wp, pre).first;

    Subspace zlow = meet_join(fc.slice(n, p - 1), pre).first;
    Subspace dprev(0);
    if (n - 1 >= fc.lo && fc.dim(n - 1) > 0) {
        RatMatrix dm = fc.d_out(n - 1);
        Subspace zin = meet_join(fc.slice(n - 1, p + r - 1), preimage(dm, wp)).first;
        dprev = map_subspace(dm, zin);
    } else {
        dprev = Subspace::zero(fc.dim(n));
    }
    out.denom = sum(zlow, dprev);
    return out;
}

/// Coordinates of a vector's class in a cell's representative basis.
inline Vec express_in_cell(const PageCell& cell, const Vec& x, int ambient) {
    std::vector<Vec> cols = cell.reps;
    for (const auto& b : cell.denom.basis()) cols.push_back(b);
    RatMatrix m(ambient, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < ambient; ++i) m(i, j) = cols[j][i];
    auto sol = solve(m, x);
    if (!sol) throw ValidationError("express_in_cell: vector outside Z_r");
    return Vec(sol->begin(), sol->begin() + cell.reps.size());
}

}  // namespace detail

/// The page E_r of a filtered complex over total degrees [n_lo, n_hi].
/// Needs the differential out of n_hi, so n_hi must stay below the window
/// top of the complex.
inline SpectralPage page(const FilteredComplex& fc, int r, int n_lo, int n_hi) {
    if (r < 0) throw ValidationError("page: negative r");
    if (n_lo < fc.lo || n_hi + 1 > fc.hi())
        throw TruncationError("page: window exceeds the available degrees");
    SpectralPage out;
    out.r = r;
    out.n_lo = n_lo;
    out.n_hi = n_hi;
    out.complex = fc;

    for (int n = n_lo; n <= n_hi; ++n) {
        for (int p : fc.jump_levels(n)) {
            auto cs = detail::cell_spaces(fc, r, n, p);
            if (!cs.znum.contains(cs.denom))
                throw ValidationError("page: denominator escapes Z_r");
            auto reps = quotient_representatives(cs.denom, cs.znum);
            if (reps.empty()) continue;
            PageCell cell;
            cell.n = n;
            cell.level = p;
            cell.znum = cs.znum;
            cell.denom = cs.denom;
            cell.reps = std::move(reps);
            cell.dim = static_cast<int>(cell.reps.size());
            out.cells[{n, p}] = std::move(cell);
        }
    }

    // induced differentials d_r: (n, p) -> (n+1, p-r)
    for (auto& [key, cell] : out.cells) {
        auto [n, p] = key;
        auto tgt = out.cells.find({n + 1, p - r});
        int tdim = (tgt == out.cells.end()) ? 0 : tgt->second.dim;
        RatMatrix m(tdim, cell.dim);
        if (tdim > 0) {
            for (int j = 0; j < cell.dim; ++j) {
                Vec dx = fc.d_out(n).apply(cell.reps[j]);
                Vec c = detail::express_in_cell(tgt->second, dx, fc.dim(n + 1));
                for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
            }
        }
        cell.dr = std::move(m);
    }
    return out;
}

inline SpectralPage page(const PresentationPtr& a, int r, int n_lo, int n_hi) {
    if (n_hi + 1 > a->truncation()) throw TruncationError("page: window exceeds truncation");
    return page(complex_of(a, std::min(a->truncation(), n_hi + 1)), r, n_lo, n_hi);
}

/// E_{r+1} as homology of (E_r, d_r), using only the page matrices for the
/// dimensions. Valid on the interior of the window. Representatives are
/// lifted back to complex coordinates; the output's own d matrices are then
/// induced so the oracle can be iterated.
inline SpectralPage next_page_oracle(const SpectralPage& P) {
    SpectralPage out;
    out.r = P.r + 1;
    out.n_lo = P.n_lo + 1;
    out.n_hi = P.n_hi - 1;
    out.complex = P.complex;
    if (out.n_lo > out.n_hi) throw ValidationError("next_page_oracle: window too small");

    for (const auto& [key, cell] : P.cells) {
        auto [n, p] = key;
        if (n < out.n_lo || n > out.n_hi) continue;
        Subspace ker = kernel_basis(cell.dr);
        Subspace im = Subspace::zero(cell.dim);
        auto in_it = P.cells.find({n - 1, p + P.r});
        if (in_it != P.cells.end()) {
            // image of d_r landing in this cell
            RatMatrix into(cell.dim, in_it->second.dim);
            const RatMatrix& dr_in = in_it->second.dr;
            if (dr_in.rows() == static_cast<std::size_t>(cell.dim)) into = dr_in;
            im = image(into);
        }
        auto reps_coords = quotient_representatives(im, ker);
        if (reps_coords.empty()) continue;
        PageCell ncell;
        ncell.n = n;
        ncell.level = p;
        ncell.dim = static_cast<int>(reps_coords.size());

        // A lifted representative z has [dz]_r = 0, i.e. dz = x + dy with
        // x in Z_{r-1}^{p-r-1}(n+1) and y in Z_{r-1}^{p-1}(n); replacing z
        // by z - y gives a genuine Z_{r+1} representative of the same class.
        const FilteredComplex& fc = P.complex;
        RatMatrix dn = fc.d_out(n);
        Subspace x_space = meet_join(fc.slice(n + 1, p - P.r - 1),
                                     preimage(fc.d_out(n + 1), fc.slice(n + 2, p - 2 * P.r))).first;
        Subspace y_space = meet_join(fc.slice(n, p - 1), preimage(dn, fc.slice(n + 1, p - P.r))).first;
        std::size_t nx = x_space.dim(), ny = y_space.dim();
        RatMatrix decompose(fc.dim(n + 1), nx + ny);
        for (std::size_t j = 0; j < nx; ++j)
            for (int i = 0; i < fc.dim(n + 1); ++i) decompose(i, j) = x_space.basis()[j][i];
        for (std::size_t j = 0; j < ny; ++j) {
            Vec dyj = dn.apply(y_space.basis()[j]);
            for (int i = 0; i < fc.dim(n + 1); ++i) decompose(i, nx + j) = dyj[i];
        }
        for (const auto& rc : reps_coords) {
            Vec lifted = zero_vec(fc.dim(n));
            for (int j = 0; j < cell.dim; ++j) axpy(lifted, rc[j], cell.reps[j]);
            Vec dz = dn.apply(lifted);
            if (!is_zero_vec(dz)) {
                auto sol = solve(decompose, dz);
                if (!sol)
                    throw ValidationError("next_page_oracle: dz escapes the page-r denominator");
                for (std::size_t j = 0; j < ny; ++j) axpy(lifted, -(*sol)[nx + j], y_space.basis()[j]);
            }
            ncell.reps.push_back(std::move(lifted));
        }
        auto cs = detail::cell_spaces(P.complex, out.r, n, p);
        ncell.znum = cs.znum;
        ncell.denom = cs.denom;
        out.cells[{n, p}] = std::move(ncell);
    }

    for (auto& [key, cell] : out.cells) {
        auto [n, p] = key;
        auto tgt = out.cells.find({n + 1, p - out.r});
        int tdim = (tgt == out.cells.end()) ? 0 : tgt->second.dim;
        RatMatrix m(tdim, cell.dim);
        if (tdim > 0) {
            for (int j = 0; j < cell.dim; ++j) {
                Vec dx = P.complex.d_out(n).apply(cell.reps[j]);
                Vec c = detail::express_in_cell(tgt->second, dx, P.complex.dim(n + 1));
                for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
            }
        }
        cell.dr = std::move(m);
    }
    return out;
}

/// Induced map on pages: per-cell matrices of E_r(f).
inline std::map<std::pair<int, int>, RatMatrix> page_map(const std::vector<RatMatrix>& f,
                                                         const SpectralPage& src,
                                                         const SpectralPage& tgt) {
    std::map<std::pair<int, int>, RatMatrix> out;
    for (const auto& [key, cell] : src.cells) {
        auto [n, p] = key;
        auto t = tgt.cells.find(key);
        int tdim = (t == tgt.cells.end()) ? 0 : t->second.dim;
        RatMatrix m(tdim, cell.dim);
        for (int j = 0; j < cell.dim; ++j) {
            Vec fx = f[n].apply(cell.reps[j]);
            if (tdim > 0) {
                Vec c = detail::express_in_cell(t->second, fx, tgt.complex.dim(n));
                for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
            } else {
                auto cs = detail::cell_spaces(tgt.complex, tgt.r, n, p);
                if (!cs.denom.contains(fx))
                    throw ValidationError("page_map: image hits a cell that is zero on the target");
            }
        }
        out[key] = std::move(m);
    }
    return out;
}

/// f is an E_r-quasi-isomorphism iff E_{r+1}(f) is an isomorphism on the
/// window of total degrees.
inline bool is_er_quasi_iso(const DgaMorphism& f, int r, int n_lo, int n_hi) {
    int top = std::min(f.source->truncation(), f.target->truncation());
    if (n_hi + 1 > top) throw TruncationError("is_er_quasi_iso: window exceeds truncation");
    FilteredComplex cs = complex_of(f.source, n_hi + 1);
    FilteredComplex ct = complex_of(f.target, n_hi + 1);
    SpectralPage ps = page(cs, r + 1, n_lo, n_hi);
    SpectralPage pt = page(ct, r + 1, n_lo, n_hi);

    for (const auto& [key, cell] : pt.cells) {
        if (ps.cells.find(key) == ps.cells.end()) {
            if (cell.dim > 0) return false;
        }
    }
    auto f_mats = morphism_matrices(f, n_hi);
    std::map<std::pair<int, int>, RatMatrix> mats;
    try {
        mats = page_map(f_mats, ps, pt);
    } catch (const ValidationError&) {
        return false;  // image fails to land isomorphically
    }
    for (const auto& [key, cell] : ps.cells) {
        const RatMatrix& m = mats.at(key);
        if (m.rows() != m.cols()) return false;
        if (rank(m) != m.rows()) return false;
    }
    return true;
}

/// Plain-text table of a page: bidegree, dimension, d_r entries. Stable
/// ordering for golden tests.
inline std::string serialize_page(const SpectralPage& P) {
    std::ostringstream os;
    os << "page r=" << P.r << " degrees " << P.n_lo << ".." << P.n_hi << "\n";
    for (const auto& [key, cell] : P.cells) {
        auto [n, p] = key;
        int c = -p, q = n + p;
        os << "E^{" << c << "," << q << "} dim=" << cell.dim;
        if (cell.dr.rows() > 0) {
            os << " d_r->E^{" << c + P.r << "," << q + 1 - P.r << "} [";
            for (std::size_t i = 0; i < cell.dr.rows(); ++i) {
                os << (i ? ";" : "");
                for (std::size_t j = 0; j < cell.dr.cols(); ++j)
                    os << (j ? "," : "") << rat_str(cell.dr(i, j));
            }
            os << "]";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace fdga
