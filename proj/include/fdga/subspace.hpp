#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fdga/matrix.hpp"

namespace fdga {

/// A linear subspace of Q^n, stored as a reduced-echelon basis. The
/// echelon form is the unique canonical representative, so equality and
/// inclusion of subspaces are syntactic.
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    static Subspace zero(std::size_t ambient) { return Subspace(ambient); }

    static Subspace full(std::size_t ambient) {
        Subspace s(ambient);
        for (std::size_t i = 0; i < ambient; ++i) {
            Vec v = zero_vec(ambient);
            v[i] = 1;
            s.rows_.push_back(std::move(v));
        }
        return s;
    }

    static Subspace span(std::vector<Vec> vectors, std::size_t ambient) {
        for (const auto& v : vectors)
            if (v.size() != ambient) throw std::invalid_argument("span: wrong vector length");
        Subspace s(ambient);
        rref_in_place(vectors, ambient);
        s.rows_ = std::move(vectors);
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return rows_.size(); }
    const std::vector<Vec>& basis() const { return rows_; }

    bool contains(const Vec& v) const {
        if (v.size() != ambient_) throw std::invalid_argument("contains: wrong vector length");
        Vec w = v;
        reduce_against(w);
        return is_zero_vec(w);
    }

    bool contains(const Subspace& other) const {
        if (other.ambient_ != ambient_) throw std::invalid_argument("contains: ambient mismatch");
        for (const auto& v : other.rows_)
            if (!contains(v)) return false;
        return true;
    }

    bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && rows_ == o.rows_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    /// Coordinates of v in this basis, or nullopt if v is outside.
    std::optional<Vec> coordinates(const Vec& v) const {
        if (v.size() != ambient_) throw std::invalid_argument("coordinates: wrong vector length");
        Vec w = v;
        Vec coef(rows_.size(), Rat(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            std::size_t p = pivot_col(rows_[i]);
            if (!is_zero(w[p])) {
                coef[i] = w[p];
                axpy(w, -coef[i], rows_[i]);
            }
        }
        if (!is_zero_vec(w)) return std::nullopt;
        return coef;
    }

  private:
    void reduce_against(Vec& w) const {
        for (const auto& row : rows_) {
            std::size_t p = pivot_col(row);
            if (!is_zero(w[p])) axpy(w, -w[p], row);
        }
    }

    static std::size_t pivot_col(const Vec& row) {
        for (std::size_t j = 0; j < row.size(); ++j)
            if (!is_zero(row[j])) return j;
        throw std::logic_error("pivot_col: zero row in echelon basis");
    }

    std::size_t ambient_ = 0;
    std::vector<Vec> rows_;
};

/// Kernel of M as a canonical subspace of the column coordinate space.
inline Subspace kernel_basis(const RatMatrix& m) {
    return Subspace::span(kernel_vectors(m), m.cols());
}

/// Image of a subspace under a matrix.
inline Subspace map_subspace(const RatMatrix& m, const Subspace& s) {
    if (s.ambient_dim() != m.cols()) throw std::invalid_argument("map_subspace: dimension mismatch");
    std::vector<Vec> imgs;
    imgs.reserve(s.dim());
    for (const auto& v : s.basis()) imgs.push_back(m.apply(v));
    return Subspace::span(std::move(imgs), m.rows());
}

/// Image of the whole domain under a matrix.
inline Subspace image(const RatMatrix& m) {
    std::vector<Vec> cols;
    RatMatrix t = m.transposed();
    for (std::size_t i = 0; i < t.rows(); ++i) cols.push_back(t.row(i));
    return Subspace::span(std::move(cols), m.rows());
}

/// (U cap V, U + V). dim(U cap V) + dim(U + V) = dim U + dim V.
inline std::pair<Subspace, Subspace> meet_join(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw std::invalid_argument("meet_join: ambient mismatch");
    std::size_t n = u.ambient_dim();

    std::vector<Vec> all = u.basis();
    for (const auto& r : v.basis()) all.push_back(r);
    Subspace join = Subspace::span(all, n);

    // x in U cap V  <=>  x = sum c_i u_i = sum d_j v_j: kernel of [U^T | -V^T].
    RatMatrix sys(n, u.dim() + v.dim());
    for (std::size_t j = 0; j < u.dim(); ++j)
        for (std::size_t i = 0; i < n; ++i) sys(i, j) = u.basis()[j][i];
    for (std::size_t j = 0; j < v.dim(); ++j)
        for (std::size_t i = 0; i < n; ++i) sys(i, u.dim() + j) = -v.basis()[j][i];
    std::vector<Vec> meet_vecs;
    for (const auto& k : kernel_vectors(sys)) {
        Vec x = zero_vec(n);
        for (std::size_t j = 0; j < u.dim(); ++j) axpy(x, k[j], u.basis()[j]);
        meet_vecs.push_back(std::move(x));
    }
    return {Subspace::span(std::move(meet_vecs), n), join};
}

/// Vectors of V projecting to a basis of V/U. Requires U <= V (checked).
/// Deterministic: representatives are chosen among V's echelon basis rows.
inline std::vector<Vec> quotient_representatives(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim())
        throw std::invalid_argument("quotient_representatives: ambient mismatch");
    if (!v.contains(u)) throw std::invalid_argument("quotient_representatives: U not contained in V");
    std::vector<Vec> acc = u.basis();
    std::size_t r = acc.size();
    std::vector<Vec> reps;
    for (const auto& row : v.basis()) {
        std::vector<Vec> trial = acc;
        trial.push_back(row);
        if (rref_in_place(trial, v.ambient_dim()).size() > r) {
            reps.push_back(row);
            acc = std::move(trial);
            ++r;
        }
    }
    return reps;
}

/// x in S with M x = b, or nullopt if no such x exists.
inline std::optional<Vec> solve_in_subspace(const RatMatrix& m, const Vec& b, const Subspace& s) {
    if (s.ambient_dim() != m.cols()) throw std::invalid_argument("solve_in_subspace: dimension mismatch");
    // Solve (M S^T) y = b and return S^T y.
    RatMatrix msT(m.rows(), s.dim());
    for (std::size_t j = 0; j < s.dim(); ++j) {
        Vec img = m.apply(s.basis()[j]);
        for (std::size_t i = 0; i < m.rows(); ++i) msT(i, j) = img[i];
    }
    auto y = solve(msT, b);
    if (!y) return std::nullopt;
    Vec x = zero_vec(m.cols());
    for (std::size_t j = 0; j < s.dim(); ++j) axpy(x, (*y)[j], s.basis()[j]);
    return x;
}

/// Preimage {x : M x in T}.
inline Subspace preimage(const RatMatrix& m, const Subspace& t) {
    if (t.ambient_dim() != m.rows()) throw std::invalid_argument("preimage: dimension mismatch");
    // Kernel of [M | -T^T], projected onto the x-coordinates.
    RatMatrix sys(m.rows(), m.cols() + t.dim());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) sys(i, j) = m(i, j);
    for (std::size_t j = 0; j < t.dim(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) sys(i, m.cols() + j) = -t.basis()[j][i];
    std::vector<Vec> xs;
    for (const auto& k : kernel_vectors(sys)) xs.push_back(Vec(k.begin(), k.begin() + m.cols()));
    return Subspace::span(std::move(xs), m.cols());
}

/// Internal direct sum embedding: S in Q^a placed at offset into Q^n.
inline Subspace embed(const Subspace& s, std::size_t ambient, std::size_t offset) {
    std::vector<Vec> rows;
    for (const auto& v : s.basis()) {
        Vec w = zero_vec(ambient);
        for (std::size_t i = 0; i < v.size(); ++i) w[offset + i] = v[i];
        rows.push_back(std::move(w));
    }
    return Subspace::span(std::move(rows), ambient);
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
    std::vector<Vec> all = a.basis();
    for (const auto& r : b.basis()) all.push_back(r);
    return Subspace::span(std::move(all), a.ambient_dim());
}

}  // namespace fdga
