#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fdga/matrix.hpp"
#include "fdga/subspace.hpp"

namespace fdga {

struct FdgaError : std::runtime_error {
    explicit FdgaError(const std::string& m) : std::runtime_error(m) {}
};
struct TruncationError : FdgaError {
    explicit TruncationError(const std::string& m) : FdgaError(m) {}
};
struct ValidationError : FdgaError {
    explicit ValidationError(const std::string& m) : FdgaError(m) {}
};

/// A named generator of a presentation. `weight` is the column coordinate
/// of the generator's bidegree, as in the blow-up tables: a class of
/// bidegree (-1,2) is declared with weight -1. The filtration level of a
/// monomial (the index p with x in W_p \ W_{p-1}) is minus its weight.
struct GeneratorSpec {
    std::string name;
    int degree = 0;
    int weight = 0;
};

/// Exponent vector over the generators, in declaration order. Odd
/// generators carry exponent 0 or 1; signs are normalized against the
/// declaration order and absorbed into coefficients.
using Monomial = std::vector<int>;

/// Homogeneous rational combination of normal-ordered monomials. No zero
/// coefficients are stored. The zero element has empty terms (its recorded
/// degree is whatever context produced it).
struct Element {
    int degree = 0;
    std::map<Monomial, Rat> terms;

    bool is_zero() const { return terms.empty(); }

    Element& operator+=(const Element& o) {
        if (!o.is_zero() && !is_zero() && degree != o.degree)
            throw ValidationError("element sum is not homogeneous");
        if (is_zero()) degree = o.degree;
        for (const auto& [m, c] : o.terms) {
            Rat& slot = terms[m];
            slot += c;
            if (fdga::is_zero(slot)) terms.erase(m);
        }
        return *this;
    }

    Element& operator*=(const Rat& c) {
        if (fdga::is_zero(c)) {
            terms.clear();
            return *this;
        }
        for (auto& [m, v] : terms) v *= c;
        return *this;
    }
};

inline Element operator+(Element a, const Element& b) { return a += b; }
inline Element operator*(const Rat& c, Element a) { return a *= c; }
inline Element operator-(Element a, const Element& b) {
    Element nb = b;
    nb *= Rat(-1);
    return a += nb;
}

/// Finitely presented graded-commutative differential algebra over Q with
/// Koszul signs, truncated at a fixed top degree. Degreewise data (free
/// monomial bases, relation spans, quotient bases, differential matrices,
/// filtration slices) is computed once at validation; instances are
/// immutable afterwards and safe to share across threads.
class AlgebraPresentation {
  public:
    AlgebraPresentation(std::vector<GeneratorSpec> gens, std::vector<Element> relations,
                        std::vector<Element> differential, int truncation)
        : gens_(std::move(gens)),
          relations_(std::move(relations)),
          diff_(std::move(differential)),
          trunc_(truncation) {
        validate_and_build();
    }

    const std::vector<GeneratorSpec>& generators() const { return gens_; }
    const std::vector<Element>& relations() const { return relations_; }
    int truncation() const { return trunc_; }
    std::size_t n_gens() const { return gens_.size(); }

    int gen_index(const std::string& name) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    const Element& gen_differential(std::size_t i) const { return diff_[i]; }

    int mono_degree(const Monomial& m) const {
        int d = 0;
        for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * gens_[i].degree;
        return d;
    }

    int mono_weight(const Monomial& m) const {
        int w = 0;
        for (std::size_t i = 0; i < m.size(); ++i) w += m[i] * gens_[i].weight;
        return w;
    }

    /// Filtration level: the index p with the monomial in W_p \ W_{p-1}.
    int mono_level(const Monomial& m) const { return -mono_weight(m); }

    /// Largest level among the terms of x (level of the zero element is
    /// minus infinity; callers guard). x need not be reduced.
    int element_level(const Element& x) const {
        int lv = INT_MIN;
        for (const auto& [m, c] : x.terms) lv = std::max(lv, mono_level(m));
        return lv;
    }

    Element unit() const {
        Element e;
        e.degree = 0;
        e.terms[Monomial(gens_.size(), 0)] = 1;
        return e;
    }

    Element gen_element(std::size_t i) const {
        Element e;
        e.degree = gens_[i].degree;
        Monomial m(gens_.size(), 0);
        m[i] = 1;
        e.terms[m] = 1;
        return e;
    }

    // ---- free (un-reduced) arithmetic -------------------------------

    /// Product of two normal-ordered monomials: Koszul sign, or nullopt
    /// when an odd generator squares to zero.
    std::optional<std::pair<int, Monomial>> free_mul_mono(const Monomial& a, const Monomial& b) const {
        Monomial out(gens_.size(), 0);
        long parity = 0;
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            out[i] = a[i] + b[i];
            if (gens_[i].degree % 2 != 0) {
                if (out[i] > 1) return std::nullopt;
                if (b[i]) {
                    // moving b's g_i past a's later odd generators
                    for (std::size_t j = i + 1; j < gens_.size(); ++j)
                        if (gens_[j].degree % 2 != 0) parity += static_cast<long>(a[j]) * b[i];
                }
            }
        }
        return std::make_pair(parity % 2 == 0 ? 1 : -1, out);
    }

    Element free_mul(const Element& x, const Element& y) const {
        Element out;
        if (x.is_zero() || y.is_zero()) {
            out.degree = x.degree + y.degree;
            return out;
        }
        out.degree = x.degree + y.degree;
        if (out.degree > trunc_)
            throw TruncationError("product degree " + std::to_string(out.degree) +
                                  " exceeds truncation " + std::to_string(trunc_));
        for (const auto& [ma, ca] : x.terms)
            for (const auto& [mb, cb] : y.terms) {
                auto sm = free_mul_mono(ma, mb);
                if (!sm) continue;
                Rat coeff = ca * cb * sm->first;
                Rat& slot = out.terms[sm->second];
                slot += coeff;
                if (fdga::is_zero(slot)) out.terms.erase(sm->second);
            }
        return out;
    }

    /// Leibniz differential in the free algebra (no reduction).
    Element free_differential(const Element& x) const {
        Element out;
        out.degree = x.degree + 1;
        if (x.is_zero()) return out;
        if (x.degree + 1 > trunc_)
            throw TruncationError("differential lands beyond truncation");
        for (const auto& [m, c] : x.terms) {
            int prefix_deg = 0;
            for (std::size_t i = 0; i < gens_.size(); ++i) {
                if (m[i] == 0) {
                    continue;
                }
                if (!diff_[i].is_zero()) {
                    Element prefix;
                    prefix.degree = prefix_deg;
                    Monomial pm(m.begin(), m.begin() + i);
                    pm.resize(gens_.size(), 0);
                    prefix.terms[pm] = c * m[i] * ((prefix_deg % 2 == 0) ? 1 : -1);

                    Element mid;  // g_i^{e_i - 1}
                    mid.degree = (m[i] - 1) * gens_[i].degree;
                    Monomial mm(gens_.size(), 0);
                    mm[i] = m[i] - 1;
                    mid.terms[mm] = 1;

                    Element suffix;
                    Monomial sm(gens_.size(), 0);
                    int suffix_deg = 0;
                    for (std::size_t j = i + 1; j < gens_.size(); ++j) {
                        sm[j] = m[j];
                        suffix_deg += m[j] * gens_[j].degree;
                    }
                    suffix.degree = suffix_deg;
                    suffix.terms[sm] = 1;

                    out += free_mul(free_mul(free_mul(prefix, mid), diff_[i]), suffix);
                }
                prefix_deg += m[i] * gens_[i].degree;
            }
        }
        return out;
    }

    // ---- degreewise quotient structure ------------------------------

    const std::vector<Monomial>& free_monomials(int n) const { return deg_at(n).monos; }

    /// Monomials whose normal forms span the degree-n slice of the quotient.
    std::vector<Monomial> degree_basis(int n) const {
        const Deg& d = deg_at(n);
        std::vector<Monomial> out;
        for (int idx : d.basis_monos) out.push_back(d.monos[idx]);
        return out;
    }

    int dim(int n) const {
        if (n < 0 || n > trunc_) return 0;
        return static_cast<int>(deg_at(n).basis_monos.size());
    }

    /// Normal form: reduce modulo the degreewise span of relation multiples.
    Element normal_form(const Element& x) const {
        if (x.is_zero()) return x;
        const Deg& d = deg_at(x.degree);
        Vec red = reduce_vec(d, free_coords(x));
        Element out;
        out.degree = x.degree;
        for (std::size_t i = 0; i < red.size(); ++i)
            if (!fdga::is_zero(red[i])) out.terms[d.monos[i]] = red[i];
        return out;
    }

    Element mul(const Element& x, const Element& y) const { return normal_form(free_mul(x, y)); }

    Element differential(const Element& x) const { return normal_form(free_differential(x)); }

    /// Coordinates of a (possibly unreduced) degree-n element in the
    /// quotient basis.
    Vec coords(const Element& x, int n) const {
        const Deg& d = deg_at(n);
        if (x.is_zero()) return zero_vec(d.basis_monos.size());
        if (x.degree != n) throw ValidationError("coords: degree mismatch");
        Vec red = reduce_vec(d, free_coords(x));
        Vec out(d.basis_monos.size(), Rat(0));
        for (std::size_t i = 0; i < d.basis_monos.size(); ++i) out[i] = red[d.basis_monos[i]];
        return out;
    }

    Element from_coords(const Vec& v, int n) const {
        const Deg& d = deg_at(n);
        if (v.size() != d.basis_monos.size()) throw ValidationError("from_coords: dimension mismatch");
        Element out;
        out.degree = n;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!fdga::is_zero(v[i])) out.terms[d.monos[d.basis_monos[i]]] = v[i];
        return out;
    }

    /// Differential in quotient coordinates: dim(n+1) x dim(n).
    const RatMatrix& d_matrix(int n) const {
        if (n < 0 || n + 1 > trunc_) throw TruncationError("d_matrix: degree out of range");
        return deg_at(n).d_mat;
    }

    /// Levels (= -weight) of the quotient basis monomials of degree n.
    std::vector<int> basis_levels(int n) const {
        const Deg& d = deg_at(n);
        std::vector<int> out;
        for (int idx : d.basis_monos) out.push_back(mono_level(d.monos[idx]));
        return out;
    }

    /// Engine filtration slice W_p in degree n: the span, in quotient
    /// coordinates, of normal forms of free monomials of level <= p.
    Subspace filtration_slice(int n, int p) const {
        const Deg& d = deg_at(n);
        std::vector<Vec> vecs;
        for (std::size_t i = 0; i < d.monos.size(); ++i) {
            if (mono_level(d.monos[i]) > p) continue;
            Vec unit = zero_vec(d.monos.size());
            unit[i] = 1;
            Vec red = reduce_vec(d, unit);
            Vec q(d.basis_monos.size(), Rat(0));
            for (std::size_t k = 0; k < d.basis_monos.size(); ++k) q[k] = red[d.basis_monos[k]];
            vecs.push_back(std::move(q));
        }
        return Subspace::span(std::move(vecs), d.basis_monos.size());
    }

    /// Declared-weight slice: span of normal forms of free monomials of
    /// weight <= p in degree n. This is the column-weight bookkeeping view;
    /// the spectral machinery runs on filtration_slice.
    Subspace weight_slice(int n, int p) const {
        const Deg& d = deg_at(n);
        std::vector<Vec> vecs;
        for (std::size_t i = 0; i < d.monos.size(); ++i) {
            if (mono_weight(d.monos[i]) > p) continue;
            Vec unit = zero_vec(d.monos.size());
            unit[i] = 1;
            Vec red = reduce_vec(d, unit);
            Vec q(d.basis_monos.size(), Rat(0));
            for (std::size_t k = 0; k < d.basis_monos.size(); ++k) q[k] = red[d.basis_monos[k]];
            vecs.push_back(std::move(q));
        }
        return Subspace::span(std::move(vecs), d.basis_monos.size());
    }

    /// Sorted distinct levels among degree-n free monomials.
    std::vector<int> levels_present(int n) const {
        const Deg& d = deg_at(n);
        std::vector<int> ls;
        for (const auto& m : d.monos) ls.push_back(mono_level(m));
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        return ls;
    }

    /// ker d_n / im d_{n-1}: dimension and representative cocycles.
    std::pair<int, std::vector<Element>> cohomology(int n) const {
        if (n + 1 > trunc_) throw TruncationError("cohomology: need degree n+1 <= truncation");
        Subspace ker = kernel_basis(d_matrix(n));
        Subspace im = (n == 0) ? Subspace::zero(dim(0)) : image(d_matrix(n - 1));
        auto reps = quotient_representatives(im, ker);
        std::vector<Element> out;
        for (const auto& r : reps) out.push_back(from_coords(r, n));
        return {static_cast<int>(reps.size()), out};
    }

    std::string mono_str(const Monomial& m) const {
        std::string s;
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (m[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += gens_[i].name;
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
        return s.empty() ? "1" : s;
    }

    std::string element_str(const Element& x) const {
        if (x.is_zero()) return "0";
        std::string s;
        // reverse map order = descending lex = declaration-order-first
        for (auto it = x.terms.rbegin(); it != x.terms.rend(); ++it) {
            const auto& [m, c] = *it;
            std::string cs = rat_str(c);
            bool neg = cs[0] == '-';
            if (neg) cs = cs.substr(1);
            s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            bool unit_mono = mono_degree(m) == 0;
            if (cs == "1" && !unit_mono)
                s += mono_str(m);
            else if (unit_mono)
                s += cs;
            else
                s += cs + "*" + mono_str(m);
        }
        return s;
    }

  private:
    struct Deg {
        std::vector<Monomial> monos;
        std::map<Monomial, int> index;
        std::vector<Vec> rel_rows;        // echelon rows of the relation span
        std::vector<std::size_t> pivots;  // pivot column per row
        Subspace rel_span;
        std::vector<int> basis_monos;  // indices of non-pivot monomials
        RatMatrix d_mat;
    };

    Vec free_coords(const Element& x) const {
        const Deg& d = deg_at(x.degree);
        Vec v = zero_vec(d.monos.size());
        for (const auto& [m, c] : x.terms) {
            auto it = d.index.find(m);
            if (it == d.index.end()) throw ValidationError("unknown monomial in element");
            v[it->second] = c;
        }
        return v;
    }

    static Vec reduce_vec(const Deg& d, Vec v) {
        for (std::size_t i = 0; i < d.rel_rows.size(); ++i) {
            const Rat& c = v[d.pivots[i]];
            if (!fdga::is_zero(c)) axpy(v, -c, d.rel_rows[i]);
        }
        return v;
    }

    const Deg& deg_at(int n) const {
        if (n < 0 || n > trunc_) throw TruncationError("degree " + std::to_string(n) + " out of range");
        return degs_[n];
    }

    void enumerate_monos(int n, std::size_t i, Monomial& cur, int remaining, std::vector<Monomial>& out) const {
        if (i == gens_.size()) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        int dg = gens_[i].degree;
        int cap;
        if (dg == 0)
            cap = 0;  // no degree-0 generators beyond the unit are supported
        else
            cap = remaining / dg;
        if (dg % 2 != 0) cap = std::min(cap, 1);
        // descending exponents: earlier generators lead, so degree_basis
        // lists u before v and a before b
        for (int e = cap; e >= 0; --e) {
            cur[i] = e;
            enumerate_monos(n, i + 1, cur, remaining - e * dg, out);
        }
        cur[i] = 0;
    }

    void validate_and_build() {
        if (trunc_ < 0) throw ValidationError("truncation must be non-negative");
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (gens_[i].degree <= 0)
                throw ValidationError("generator '" + gens_[i].name + "' must have positive degree");
            for (std::size_t j = i + 1; j < gens_.size(); ++j)
                if (gens_[i].name == gens_[j].name)
                    throw ValidationError("duplicate generator name '" + gens_[i].name + "'");
        }
        if (diff_.size() != gens_.size()) throw ValidationError("differential must cover every generator");
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (diff_[i].is_zero()) continue;
            if (diff_[i].degree != gens_[i].degree + 1)
                throw ValidationError("d(" + gens_[i].name + ") has wrong degree");
            if (diff_[i].degree > trunc_)
                throw ValidationError("d(" + gens_[i].name + ") lands beyond truncation");
        }
        for (const auto& r : relations_) {
            if (r.is_zero()) throw ValidationError("zero relation");
            if (r.degree > trunc_) throw ValidationError("relation degree exceeds truncation");
        }

        degs_.resize(trunc_ + 1);
        for (int n = 0; n <= trunc_; ++n) {
            Deg& d = degs_[n];
            Monomial cur(gens_.size(), 0);
            enumerate_monos(n, 0, cur, n, d.monos);
            for (std::size_t i = 0; i < d.monos.size(); ++i) d.index[d.monos[i]] = static_cast<int>(i);

            // span of relation * monomial in degree n
            std::vector<Vec> rows;
            for (const auto& rel : relations_) {
                if (rel.degree > n) continue;
                for (const auto& m : degs_[n - rel.degree].monos) {
                    Element mult;
                    mult.degree = n - rel.degree;
                    mult.terms[m] = 1;
                    Element prod = free_mul(rel, mult);
                    if (prod.is_zero()) continue;
                    Vec v = zero_vec(d.monos.size());
                    for (const auto& [pm, pc] : prod.terms) v[d.index.at(pm)] = pc;
                    rows.push_back(std::move(v));
                }
            }
            d.pivots = rref_in_place(rows, d.monos.size());
            d.rel_rows = rows;
            d.rel_span = Subspace::span(rows, d.monos.size());
            std::vector<bool> is_pivot(d.monos.size(), false);
            for (std::size_t c : d.pivots) is_pivot[c] = true;
            for (std::size_t i = 0; i < d.monos.size(); ++i)
                if (!is_pivot[i]) d.basis_monos.push_back(static_cast<int>(i));
        }

        // differential matrices in quotient coordinates
        for (int n = 0; n < trunc_; ++n) {
            Deg& d = degs_[n];
            RatMatrix m(degs_[n + 1].basis_monos.size(), d.basis_monos.size());
            for (std::size_t j = 0; j < d.basis_monos.size(); ++j) {
                Element x;
                x.degree = n;
                x.terms[d.monos[d.basis_monos[j]]] = 1;
                Vec img = coords(free_differential(x), n + 1);
                for (std::size_t i = 0; i < img.size(); ++i) m(i, j) = img[i];
            }
            d.d_mat = std::move(m);
        }

        // d of every relation lies in the relation ideal
        for (const auto& rel : relations_) {
            if (rel.degree + 1 > trunc_) continue;
            Element dr = normal_form(free_differential(rel));
            if (!dr.is_zero())
                throw ValidationError("d of a relation escapes the relation ideal: " + element_str(dr));
        }
        // d o d = 0 modulo relations
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (gens_[i].degree + 2 > trunc_) continue;
            Element dd = normal_form(free_differential(diff_[i]));
            if (!dd.is_zero())
                throw ValidationError("d^2(" + gens_[i].name + ") != 0: " + element_str(dd));
        }
    }

    std::vector<GeneratorSpec> gens_;
    std::vector<Element> relations_;
    std::vector<Element> diff_;
    int trunc_;
    std::vector<Deg> degs_;
};

using PresentationPtr = std::shared_ptr<const AlgebraPresentation>;

inline PresentationPtr make_presentation(std::vector<GeneratorSpec> gens, std::vector<Element> relations,
                                          std::vector<Element> differential, int truncation) {
    return std::make_shared<const AlgebraPresentation>(std::move(gens), std::move(relations),
                                                       std::move(differential), truncation);
}

/// Morphism of presentations, defined by generator images of equal degree.
struct DgaMorphism {
    PresentationPtr source;
    PresentationPtr target;
    std::vector<Element> images;  // reduced elements of the target

    int common_truncation() const { return std::min(source->truncation(), target->truncation()); }

    /// Push a source element through, reducing in the target.
    Element apply(const Element& x) const {
        Element out;
        out.degree = x.degree;
        if (x.is_zero()) return out;
        if (x.degree > target->truncation())
            throw TruncationError("morphism image degree exceeds target truncation");
        for (const auto& [m, c] : x.terms) {
            Element term = target->unit();
            term *= c;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (int k = 0; k < m[i]; ++k) term = target->mul(term, images[i]);
            out += term;
        }
        return target->normal_form(out);
    }

    Vec matrix_column_apply(const Vec& v, int n) const {
        return target->coords(apply(source->from_coords(v, n)), n);
    }

    /// Degreewise matrix in quotient coordinates: dim_target(n) x dim_source(n).
    RatMatrix matrix(int n) const {
        RatMatrix m(target->dim(n), source->dim(n));
        for (int j = 0; j < source->dim(n); ++j) {
            Vec unit = zero_vec(source->dim(n));
            unit[j] = 1;
            Vec img = target->coords(apply(source->from_coords(unit, n)), n);
            for (std::size_t i = 0; i < img.size(); ++i) m(i, j) = img[i];
        }
        return m;
    }
};

inline DgaMorphism identity_morphism(const PresentationPtr& a) {
    DgaMorphism f{a, a, {}};
    for (std::size_t i = 0; i < a->n_gens(); ++i) f.images.push_back(a->gen_element(i));
    return f;
}

inline DgaMorphism compose(const DgaMorphism& g, const DgaMorphism& f) {
    if (g.source != f.target) throw ValidationError("compose: source/target mismatch");
    DgaMorphism out{f.source, g.target, {}};
    for (const auto& img : f.images) out.images.push_back(g.apply(img));
    return out;
}

struct MorphismViolation {
    std::string what;  // human-readable description of the first failure
};

/// Checks relation preservation and d-commutation up to the common
/// truncation. Returns nullopt on pass.
inline std::optional<MorphismViolation> check_morphism(const DgaMorphism& f) {
    const auto& src = *f.source;
    const auto& tgt = *f.target;
    if (f.images.size() != src.n_gens())
        return MorphismViolation{"image list does not cover the generators"};
    int t = f.common_truncation();
    for (std::size_t i = 0; i < src.n_gens(); ++i) {
        if (!f.images[i].is_zero() && f.images[i].degree != src.generators()[i].degree)
            return MorphismViolation{"image of '" + src.generators()[i].name + "' has wrong degree"};
    }
    for (const auto& rel : src.relations()) {
        if (rel.degree > t) continue;
        Element img = f.apply(rel);
        if (!img.is_zero())
            return MorphismViolation{"relation " + src.element_str(rel) +
                                     " maps to nonzero element " + tgt.element_str(img)};
    }
    for (std::size_t i = 0; i < src.n_gens(); ++i) {
        if (src.generators()[i].degree + 1 > t) continue;
        Element lhs = f.apply(src.normal_form(src.gen_differential(i)));
        Element rhs = tgt.differential(f.images[i]);
        Element dif = lhs - rhs;
        if (!dif.is_zero())
            return MorphismViolation{"d does not commute on '" + src.generators()[i].name +
                                     "': f(d x) - d f(x) = " + tgt.element_str(dif)};
    }
    return std::nullopt;
}

}  // namespace fdga
