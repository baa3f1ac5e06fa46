#include "ainf/linalg.hpp"

#include <stdexcept>

namespace ainf {

namespace {

struct Elimination {
    std::vector<Vec> rows;       // reduced rows
    std::vector<Vec> transform;  // accumulated row operations
    std::vector<std::size_t> pivots;
};

// Gauss-Jordan on dense rows; the transform starts as the identity.
Elimination eliminate(const SparseMatrix& m, bool track_transform) {
    const Field f = m.field();
    Elimination e;
    e.rows = m.to_rows();
    const std::size_t nrows = m.rows(), ncols = m.cols();
    if (track_transform) {
        e.transform.reserve(nrows);
        for (std::size_t i = 0; i < nrows; ++i) e.transform.push_back(unit_vec(f, nrows, i));
    }
    std::size_t prow = 0;
    for (std::size_t c = 0; c < ncols && prow < nrows; ++c) {
        std::size_t sel = prow;
        while (sel < nrows && e.rows[sel][c].is_zero()) ++sel;
        if (sel == nrows) continue;
        std::swap(e.rows[sel], e.rows[prow]);
        if (track_transform) std::swap(e.transform[sel], e.transform[prow]);
        const Scalar inv = e.rows[prow][c].inverse();
        if (!inv.is_one()) {
            for (std::size_t k = c; k < ncols; ++k)
                if (!e.rows[prow][k].is_zero()) e.rows[prow][k] *= inv;
            if (track_transform)
                for (auto& s : e.transform[prow])
                    if (!s.is_zero()) s *= inv;
        }
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == prow || e.rows[r][c].is_zero()) continue;
            const Scalar factor = -e.rows[r][c];
            for (std::size_t k = c; k < ncols; ++k)
                if (!e.rows[prow][k].is_zero()) e.rows[r][k] += factor * e.rows[prow][k];
            if (track_transform) axpy(e.transform[r], factor, e.transform[prow]);
        }
        e.pivots.push_back(c);
        ++prow;
    }
    return e;
}

}  // namespace

RrefResult rref(const SparseMatrix& m) {
    Elimination e = eliminate(m, true);
    return RrefResult{SparseMatrix::from_rows(m.field(), m.cols(), e.rows), e.pivots,
                      SparseMatrix::from_rows(m.field(), m.rows(), e.transform)};
}

std::vector<Vec> kernel_basis(const SparseMatrix& m) {
    const Field f = m.field();
    Elimination e = eliminate(m, false);
    std::vector<char> is_pivot(m.cols(), 0);
    for (auto p : e.pivots) is_pivot[p] = 1;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vec v = unit_vec(f, m.cols(), free);
        for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.rows[k][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank(const SparseMatrix& m) { return eliminate(m, false).pivots.size(); }

std::optional<Vec> solve_preimage(const SparseMatrix& m, const Vec& b) { return PreimageSolver(m).solve(b); }

PreimageSolver::PreimageSolver(const SparseMatrix& m) : field_(m.field()), rows_(m.rows()), cols_(m.cols()) {
    Elimination e = eliminate(m, true);
    pivots_ = std::move(e.pivots);
    transform_ = std::move(e.transform);
}

std::optional<Vec> PreimageSolver::solve(const Vec& b) const {
    if (b.size() != rows_) throw std::invalid_argument("solve_preimage: right-hand side has wrong length");
    Vec x = zero_vec(field_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Scalar c = Scalar::zero(field_);
        const Vec& t = transform_[r];
        for (std::size_t k = 0; k < rows_; ++k)
            if (!b[k].is_zero() && !t[k].is_zero()) c += t[k] * b[k];
        if (r < pivots_.size())
            x[pivots_[r]] = std::move(c);
        else if (!c.is_zero())
            return std::nullopt;
    }
    return x;
}

bool PreimageSolver::in_image(const Vec& b) const { return solve(b).has_value(); }

std::size_t span_rank(Field f, std::size_t n, const std::vector<Vec>& vectors) {
    if (vectors.empty()) return 0;
    return rank(SparseMatrix::from_rows(f, n, vectors));
}

std::vector<Vec> intersect_spans(Field f, std::size_t n, const std::vector<Vec>& a, const std::vector<Vec>& b) {
    if (a.empty() || b.empty()) return {};
    // [A | -B] (x, y) = 0  =>  A x lies in both spans
    std::vector<Vec> cols;
    for (const auto& v : a) cols.push_back(v);
    for (const auto& v : b) {
        Vec neg = v;
        for (auto& s : neg) s = -s;
        cols.push_back(std::move(neg));
    }
    const SparseMatrix stacked = SparseMatrix::from_columns(f, n, cols);
    std::vector<Vec> out;
    for (const auto& k : kernel_basis(stacked)) {
        Vec v = zero_vec(f, n);
        for (std::size_t i = 0; i < a.size(); ++i) axpy(v, k[i], a[i]);
        if (!is_zero(v)) out.push_back(std::move(v));
    }
    // the kernel may contain directions that only move within ker A
    SpanBuilder span(f, n);
    std::vector<Vec> independent;
    for (auto& v : out)
        if (span.add(v)) independent.push_back(std::move(v));
    return independent;
}

Vec SpanBuilder::reduce(Vec v) const {
    if (v.size() != n_) throw std::invalid_argument("SpanBuilder: vector has the wrong length");
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (v[pivots_[k]].is_zero()) continue;
        const Scalar factor = -v[pivots_[k]];
        axpy(v, factor, rows_[k]);
    }
    return v;
}

bool SpanBuilder::contains(const Vec& v) const { return is_zero(reduce(v)); }

bool SpanBuilder::add(const Vec& v) {
    Vec w = reduce(v);
    std::size_t p = 0;
    while (p < n_ && w[p].is_zero()) ++p;
    if (p == n_) return false;
    const Scalar inv = w[p].inverse();
    for (auto& s : w)
        if (!s.is_zero()) s *= inv;
    for (auto& row : rows_) {
        if (row[p].is_zero()) continue;
        const Scalar factor = -row[p];
        axpy(row, factor, w);
    }
    rows_.push_back(std::move(w));
    pivots_.push_back(p);
    return true;
}

SparseMatrix inverse(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw std::domain_error("inverse of a non-square matrix");
    Elimination e = eliminate(m, true);
    if (e.pivots.size() != m.rows()) throw std::domain_error("inverse of a singular matrix");
    return SparseMatrix::from_rows(m.field(), m.rows(), e.transform);
}

}  // namespace ainf
