#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fdga/spectral.hpp"

namespace fdga {

/// Direct-sum decomposition of every degree slice into summands indexed by
/// filtration level (the printed bidegree of the level-p piece in degree n
/// is (-p, n+p)). The recorded r is the splitting parameter.
struct Bigrading {
    int r = 1;
    std::map<int, std::vector<std::pair<int, Subspace>>> summands;  // degree -> (level, piece)

    const Subspace* piece(int n, int level) const {
        auto it = summands.find(n);
        if (it == summands.end()) return nullptr;
        for (const auto& [p, s] : it->second)
            if (p == level) return &s;
        return nullptr;
    }
};

struct SplittingViolation {
    std::string what;
};

/// Checks the three r-splitting conditions on basis elements and pairs:
/// summands decompose every degree slice, d maps the level-p piece into the
/// level-(p-r) piece one degree up, products add bidegrees, and
/// W_m A^n = (+)_{p <= m} A^{(p), n}.
inline std::optional<SplittingViolation> verify_r_splitting(const PresentationPtr& a, const Bigrading& g,
                                                            int r, int top = -1) {
    if (top < 0) top = a->truncation();
    for (int n = 0; n <= top; ++n) {
        if (a->dim(n) == 0) continue;
        auto it = g.summands.find(n);
        if (it == g.summands.end())
            return SplittingViolation{"degree " + std::to_string(n) + " is not covered"};
        int total = 0;
        Subspace sum_space = Subspace::zero(a->dim(n));
        for (const auto& [p, s] : it->second) {
            if (static_cast<int>(s.ambient_dim()) != a->dim(n))
                return SplittingViolation{"summand with wrong ambient dimension in degree " +
                                          std::to_string(n)};
            auto [meet, join] = meet_join(sum_space, s);
            if (meet.dim() > 0)
                return SplittingViolation{"summands are not independent in degree " + std::to_string(n)};
            sum_space = join;
            total += static_cast<int>(s.dim());
        }
        if (total != a->dim(n))
            return SplittingViolation{"summands do not span degree " + std::to_string(n)};
        // filtration condition: W_m = sum of pieces of level <= m
        for (int m : a->levels_present(n)) {
            Subspace w = a->filtration_slice(n, m);
            Subspace acc = Subspace::zero(a->dim(n));
            for (const auto& [p, s] : it->second)
                if (p <= m) acc = sum(acc, s);
            if (!(acc == w))
                return SplittingViolation{"W_" + std::to_string(m) + " in degree " + std::to_string(n) +
                                          " is not the sum of the levels <= " + std::to_string(m)};
        }
    }
    // differential condition: the level-p piece maps into the level-(p-r)
    // piece of the next degree
    for (int n = 0; n < top; ++n) {
        auto it = g.summands.find(n);
        if (it == g.summands.end()) continue;
        for (const auto& [p, s] : it->second) {
            const Subspace* target = g.piece(n + 1, p - r);
            for (const auto& v : s.basis()) {
                Vec dv = a->d_matrix(n).apply(v);
                if (is_zero_vec(dv)) continue;
                if (!target)
                    return SplittingViolation{"d of a level-" + std::to_string(p) +
                                              " element in degree " + std::to_string(n) +
                                              " lands outside the splitting"};
                if (!target->contains(dv))
                    return SplittingViolation{"d does not map level " + std::to_string(p) +
                                              " into level " + std::to_string(p - r) + " in degree " +
                                              std::to_string(n)};
            }
        }
    }
    // multiplicativity on basis pairs, within the truncation
    for (int n1 = 0; n1 <= top; ++n1)
        for (int n2 = n1; n2 + n1 <= top; ++n2) {
            auto i1 = g.summands.find(n1), i2 = g.summands.find(n2);
            if (i1 == g.summands.end() || i2 == g.summands.end()) continue;
            for (const auto& [p1, s1] : i1->second)
                for (const auto& [p2, s2] : i2->second) {
                    const Subspace* target = g.piece(n1 + n2, p1 + p2);
                    for (const auto& x : s1.basis())
                        for (const auto& y : s2.basis()) {
                            Element prod = a->mul(a->from_coords(x, n1), a->from_coords(y, n2));
                            if (prod.is_zero()) continue;
                            Vec pc = a->coords(prod, n1 + n2);
                            if (!target || !target->contains(pc))
                                return SplittingViolation{
                                    "product of levels (" + std::to_string(p1) + "," +
                                    std::to_string(p2) + ") escapes the splitting in degree " +
                                    std::to_string(n1 + n2)};
                        }
                }
        }
    return std::nullopt;
}

/// The isomorphism pi: A -> E_r(A) of a split filtered dga: the level-p
/// piece of degree n maps onto the page cell at (n, p). Verified filtered,
/// d-compatible (d on A against d_r on the page) and degreewise bijective.
struct PageIso {
    SpectralPage page;
    std::map<std::pair<int, int>, RatMatrix> blocks;  // (n, level) -> cell coords x piece coords
};

inline PageIso splitting_to_page_iso(const PresentationPtr& a, const Bigrading& g, int r, int top) {
    if (auto v = verify_r_splitting(a, g, r, top))
        throw ValidationError("splitting_to_page_iso: not an r-splitting: " + v->what);
    PageIso out;
    FilteredComplex fc = complex_of(a, top);
    out.page = page(fc, r, 0, top - 1);
    for (int n = 0; n < top; ++n) {
        auto it = g.summands.find(n);
        if (it == g.summands.end()) continue;
        for (const auto& [p, s] : it->second) {
            if (s.dim() == 0) continue;
            auto cell_it = out.page.cells.find({n, p});
            if (cell_it == out.page.cells.end())
                throw ValidationError("splitting_to_page_iso: page cell (" + std::to_string(n) + "," +
                                      std::to_string(p) + ") is zero but the piece is not");
            const PageCell& cell = cell_it->second;
            RatMatrix m(cell.dim, s.dim());
            for (std::size_t j = 0; j < s.dim(); ++j) {
                Vec c = detail::express_in_cell(cell, s.basis()[j], a->dim(n));
                for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
            }
            if (m.rows() != m.cols() || rank(m) != m.rows())
                throw ValidationError("splitting_to_page_iso: block (" + std::to_string(n) + "," +
                                      std::to_string(p) + ") is not invertible");
            out.blocks[{n, p}] = std::move(m);
        }
    }
    // d-compatibility: pi(dx) = d_r(pi x) blockwise
    for (int n = 0; n + 1 < top; ++n) {
        auto it = g.summands.find(n);
        if (it == g.summands.end()) continue;
        for (const auto& [p, s] : it->second) {
            auto blk = out.blocks.find({n, p});
            if (blk == out.blocks.end()) continue;
            const PageCell& cell = out.page.cells.at({n, p});
            auto tgt_cell = out.page.cells.find({n + 1, p - r});
            for (std::size_t j = 0; j < s.dim(); ++j) {
                Vec dx = fc.d_out(n).apply(s.basis()[j]);
                Vec lhs = (tgt_cell == out.page.cells.end())
                              ? Vec()
                              : detail::express_in_cell(tgt_cell->second, dx, a->dim(n + 1));
                Vec pix(cell.dim, Rat(0));
                for (int i = 0; i < cell.dim; ++i) pix[i] = (*blk).second(i, j);
                Vec rhs = cell.dr.apply(pix);
                if (lhs.empty() && !is_zero_vec(rhs))
                    throw ValidationError("splitting_to_page_iso: d_r disagrees with d");
                if (!lhs.empty() && lhs != rhs)
                    throw ValidationError("splitting_to_page_iso: d_r disagrees with d");
            }
        }
    }
    return out;
}

/// Diagonal page automorphism scaling the cell at (n, level p) by
/// alpha^{nr + p}. alpha must not be 0, 1 or -1 (the rational roots of
/// unity).
inline std::map<std::pair<int, int>, Rat> bigrading_automorphism(const SpectralPage& p, const Rat& alpha) {
    if (is_zero(alpha) || alpha == Rat(1) || alpha == Rat(-1))
        throw ValidationError("bigrading_automorphism: alpha must not be 0 or a root of unity");
    std::map<std::pair<int, int>, Rat> out;
    for (const auto& [key, cell] : p.cells) {
        auto [n, lv] = key;
        long e = static_cast<long>(n) * p.r + lv;
        Rat scale = 1;
        for (long i = 0; i < (e >= 0 ? e : -e); ++i) scale *= alpha;
        if (e < 0) scale = 1 / scale;
        out[key] = scale;
    }
    return out;
}

struct SplitFromAutoError : FdgaError {
    explicit SplitFromAutoError(const std::string& m) : FdgaError(m) {}
};

/// The eigenspace construction: given a filtered automorphism Phi with
/// E_r(Phi) = phi_alpha, the generalized eigenspaces of Phi for the
/// expected eigenvalues alpha^{nr+p} produce an r-splitting. A nonzero
/// residual complement is a failure (Phi was ill-chosen), as is a page
/// action different from phi_alpha.
inline Bigrading splitting_from_automorphism(const PresentationPtr& a, const DgaMorphism& phi,
                                             const Rat& alpha, int r, int top) {
    if (is_zero(alpha) || alpha == Rat(1) || alpha == Rat(-1))
        throw ValidationError("splitting_from_automorphism: alpha must not be 0 or a root of unity");
    if (phi.source != a || phi.target != a)
        throw ValidationError("splitting_from_automorphism: Phi must be an endomorphism of A");
    if (auto v = check_filtered_morphism(phi, top))
        throw ValidationError("splitting_from_automorphism: Phi is not filtered: " + v->what);
    for (int n = 0; n <= top; ++n) {
        RatMatrix m = phi.matrix(n);
        if (rank(m) != m.cols())
            throw ValidationError("splitting_from_automorphism: Phi is not invertible in degree " +
                                  std::to_string(n));
    }

    // E_r(Phi) must equal phi_alpha on the window
    FilteredComplex fc = complex_of(a, top);
    SpectralPage pg = page(fc, r, 0, top - 1);
    auto expected = bigrading_automorphism(pg, alpha);
    auto mats = page_map(morphism_matrices(phi, top), pg, pg);
    for (const auto& [key, cell] : pg.cells) {
        const RatMatrix& m = mats.at(key);
        Rat want = expected.at(key);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                Rat w = (i == j) ? want : Rat(0);
                if (m(i, j) != w)
                    throw SplitFromAutoError(
                        "splitting_from_automorphism: E_r(Phi) is not phi_alpha at cell (" +
                        std::to_string(key.first) + "," + std::to_string(key.second) + ")");
            }
    }

    // generalized eigenspaces for the expected eigenvalues only
    Bigrading out;
    out.r = r;
    for (int n = 0; n <= top; ++n) {
        if (a->dim(n) == 0) continue;
        RatMatrix m = phi.matrix(n);
        int dim = a->dim(n);
        int covered = 0;
        std::vector<std::pair<int, Subspace>> pieces;
        for (int p : a->levels_present(n)) {
            long e = static_cast<long>(n) * r + p;
            Rat lambda = 1;
            for (long i = 0; i < (e >= 0 ? e : -e); ++i) lambda *= alpha;
            if (e < 0) lambda = 1 / lambda;
            RatMatrix shifted = m;
            for (int i = 0; i < dim; ++i) shifted(i, i) -= lambda;
            // (Phi - lambda)^dim
            RatMatrix power = RatMatrix::identity(dim);
            for (int i = 0; i < dim; ++i) power = power.mul(shifted);
            Subspace ker = kernel_basis(power);
            if (ker.dim() > 0) pieces.push_back({p, ker});
            covered += static_cast<int>(ker.dim());
        }
        if (covered != dim)
            throw SplitFromAutoError(
                "splitting_from_automorphism: residual complement is nonzero in degree " +
                std::to_string(n));
        out.summands[n] = std::move(pieces);
    }
    if (auto v = verify_r_splitting(a, out, r, top))
        throw SplitFromAutoError("splitting_from_automorphism: produced decomposition fails: " + v->what);
    return out;
}

/// Morphism-level splitting compatibility: f(A^{(p),n}) <= B^{(p),n}.
inline std::optional<SplittingViolation> check_morphism_splitting(const DgaMorphism& f,
                                                                  const Bigrading& gsrc,
                                                                  const Bigrading& gtgt, int top) {
    for (int n = 0; n <= top; ++n) {
        auto it = gsrc.summands.find(n);
        if (it == gsrc.summands.end()) continue;
        RatMatrix m = f.matrix(n);
        for (const auto& [p, s] : it->second) {
            const Subspace* target = gtgt.piece(n, p);
            for (const auto& v : s.basis()) {
                Vec fv = m.apply(v);
                if (is_zero_vec(fv)) continue;
                if (!target || !target->contains(fv))
                    return SplittingViolation{"f does not respect the level-" + std::to_string(p) +
                                              " piece in degree " + std::to_string(n)};
            }
        }
    }
    return std::nullopt;
}

/// The canonical bidegree bigrading of a presentation whose filtration
/// splits by monomial level (each degree slice decomposes by the level of
/// its basis monomials).
inline Bigrading level_bigrading(const PresentationPtr& a, int r, int top) {
    Bigrading g;
    g.r = r;
    for (int n = 0; n <= top; ++n) {
        if (a->dim(n) == 0) continue;
        std::map<int, std::vector<Vec>> by_level;
        auto levels = a->basis_levels(n);
        for (int j = 0; j < a->dim(n); ++j) {
            Vec e = zero_vec(a->dim(n));
            e[j] = 1;
            by_level[levels[j]].push_back(std::move(e));
        }
        std::vector<std::pair<int, Subspace>> pieces;
        for (auto& [p, vs] : by_level) pieces.push_back({p, Subspace::span(std::move(vs), a->dim(n))});
        g.summands[n] = std::move(pieces);
    }
    return g;
}

}  // namespace fdga
