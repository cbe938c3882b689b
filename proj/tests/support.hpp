#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "fdga/filtration.hpp"
#include "fdga/matrix.hpp"
#include "fdga/subspace.hpp"

// Shared randomized-test helpers. All generators take an explicit engine so
// suites stay deterministic under a fixed seed.
namespace fdga_test {

using fdga::Rat;
using fdga::RatMatrix;
using fdga::Subspace;
using fdga::Vec;

using Rng = std::mt19937;

inline Rat random_rat(Rng& rng, int num_range = 5, int den_range = 3) {
    std::uniform_int_distribution<int> num(-num_range, num_range);
    std::uniform_int_distribution<int> den(1, den_range);
    return fdga::rat(num(rng), den(rng));
}

inline Vec random_vec(Rng& rng, std::size_t n, int range = 5) {
    Vec v(n);
    for (auto& x : v) x = random_rat(rng, range, 1);
    return v;
}

inline RatMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int range = 5) {
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_rat(rng, range, 1);
    return m;
}

inline Subspace random_subspace(Rng& rng, std::size_t ambient, std::size_t generators) {
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < generators; ++i) vs.push_back(random_vec(rng, ambient, 3));
    return Subspace::span(std::move(vs), ambient);
}

// Inverse of a small invertible matrix, column by column.
inline RatMatrix inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
    RatMatrix inv(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Vec e = fdga::zero_vec(m.rows());
        e[j] = 1;
        auto x = fdga::solve(m, e);
        if (!x) throw std::invalid_argument("inverse: singular matrix");
        for (std::size_t i = 0; i < m.rows(); ++i) inv(i, j) = (*x)[i];
    }
    return inv;
}

// Zassenhaus double-echelon: rows (u | u) for u in U, (v | 0) for v in V.
// After elimination, rows with nonzero left half span U+V on the left;
// rows with zero left half carry U cap V on the right half.
inline std::pair<Subspace, Subspace> zassenhaus_meet_join(const Subspace& u, const Subspace& v) {
    std::size_t n = u.ambient_dim();
    std::vector<Vec> rows;
    for (const auto& b : u.basis()) {
        Vec r(2 * n, Rat(0));
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = b[i];
            r[n + i] = b[i];
        }
        rows.push_back(std::move(r));
    }
    for (const auto& b : v.basis()) {
        Vec r(2 * n, Rat(0));
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i];
        rows.push_back(std::move(r));
    }
    fdga::rref_in_place(rows, 2 * n);
    std::vector<Vec> join_vecs, meet_vecs;
    for (const auto& r : rows) {
        Vec left(r.begin(), r.begin() + n), right(r.begin() + n, r.end());
        if (!fdga::is_zero_vec(left))
            join_vecs.push_back(left);
        else
            meet_vecs.push_back(right);
    }
    return {Subspace::span(std::move(meet_vecs), n), Subspace::span(std::move(join_vecs), n)};
}

// Random filtered complex built from elementary pieces and conjugated by a
// filtered unit-triangular change of basis. Pieces are either a single Q at
// (degree, level) with zero differential, or a pair Q -> Q whose
// differential is the identity and whose target level drops by 0..2. This
// guarantees d о d = 0 and d W_p <= W_p exactly, with genuinely mixed
// matrices after conjugation.
inline fdga::FilteredComplex random_filtered_complex(Rng& rng, int top_degree, int n_pieces,
                                                     int max_dim_per_degree = 8) {
    using fdga::FilteredComplex;
    std::uniform_int_distribution<int> deg_dist(0, top_degree - 1);
    std::uniform_int_distribution<int> level_dist(-1, 1);
    std::uniform_int_distribution<int> drop_dist(0, 2);
    std::uniform_int_distribution<int> kind_dist(0, 2);

    // per degree: list of levels of the standard basis vectors
    std::vector<std::vector<int>> levels(top_degree + 1);
    struct Arrow {
        int degree, src, tgt;
    };
    std::vector<Arrow> arrows;
    for (int i = 0; i < n_pieces; ++i) {
        int n = deg_dist(rng);
        int p = level_dist(rng);
        if (kind_dist(rng) == 0 || n == top_degree) {
            if (static_cast<int>(levels[n].size()) >= max_dim_per_degree) continue;
            levels[n].push_back(p);
        } else {
            if (static_cast<int>(levels[n].size()) >= max_dim_per_degree ||
                static_cast<int>(levels[n + 1].size()) >= max_dim_per_degree)
                continue;
            int q = p - drop_dist(rng);
            levels[n].push_back(p);
            levels[n + 1].push_back(q);
            arrows.push_back({n, static_cast<int>(levels[n].size()) - 1,
                              static_cast<int>(levels[n + 1].size()) - 1});
        }
    }
    // sort each degree's basis by level so prefixes are filtration-adapted
    std::vector<std::vector<int>> order(top_degree + 1);
    for (int n = 0; n <= top_degree; ++n) {
        order[n].resize(levels[n].size());
        for (std::size_t i = 0; i < order[n].size(); ++i) order[n][i] = static_cast<int>(i);
        std::stable_sort(order[n].begin(), order[n].end(),
                         [&](int a, int b) { return levels[n][a] < levels[n][b]; });
    }

    FilteredComplex fc;
    fc.lo = 0;
    fc.dims.resize(top_degree + 1);
    for (int n = 0; n <= top_degree; ++n) fc.dims[n] = static_cast<int>(levels[n].size());
    fc.chains.resize(top_degree + 1);

    // plain differential in the sorted basis
    std::vector<RatMatrix> d;
    std::vector<std::vector<int>> pos(top_degree + 1);  // piece index -> sorted position
    for (int n = 0; n <= top_degree; ++n) {
        pos[n].resize(levels[n].size());
        for (std::size_t k = 0; k < order[n].size(); ++k) pos[n][order[n][k]] = static_cast<int>(k);
    }
    for (int n = 0; n < top_degree; ++n) d.push_back(RatMatrix(fc.dims[n + 1], fc.dims[n]));
    for (const auto& a : arrows) d[a.degree](pos[a.degree + 1][a.tgt], pos[a.degree][a.src]) = 1;

    // filtered unit-triangular conjugation per degree
    std::vector<RatMatrix> t, tinv;
    for (int n = 0; n <= top_degree; ++n) {
        RatMatrix m = RatMatrix::identity(fc.dims[n]);
        for (int i = 0; i < fc.dims[n]; ++i)
            for (int j = 0; j < i; ++j)
                if (rng() % 3 == 0) m(j, i) = random_rat(rng, 2, 1);
        t.push_back(m);
        tinv.push_back(inverse(m));
    }
    fc.d.clear();
    for (int n = 0; n < top_degree; ++n) fc.d.push_back(t[n + 1].mul(d[n].mul(tinv[n])));

    // slices: spans of level-sorted basis prefixes (unchanged by the
    // triangular conjugation)
    for (int n = 0; n <= top_degree; ++n) {
        std::vector<int> sorted_levels;
        for (int k : order[n]) sorted_levels.push_back(levels[n][k]);
        if (sorted_levels.empty()) continue;
        std::vector<Vec> basis;
        std::size_t i = 0;
        for (std::size_t k = 0; k < sorted_levels.size(); ++k) {
            Vec e = fdga::zero_vec(fc.dims[n]);
            e[k] = 1;
            basis.push_back(e);
            bool last_of_level =
                (k + 1 == sorted_levels.size()) || (sorted_levels[k + 1] != sorted_levels[k]);
            if (last_of_level) fc.chains[n][sorted_levels[k]] = Subspace::span(basis, fc.dims[n]);
            (void)i;
        }
    }
    return fc;
}

}  // namespace fdga_test
