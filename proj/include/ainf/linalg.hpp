#pragma once

#include <optional>
#include <vector>

#include "ainf/sparse_matrix.hpp"

namespace ainf {

struct RrefResult {
    SparseMatrix reduced;             // R
    std::vector<std::size_t> pivots;  // strictly increasing pivot columns
    SparseMatrix transform;           // invertible T with T * M = R
};

RrefResult rref(const SparseMatrix& m);

/// Basis of ker M: one vector per non-pivot column, with a 1 in that column and
/// zeros in every other non-pivot column.
std::vector<Vec> kernel_basis(const SparseMatrix& m);

std::size_t rank(const SparseMatrix& m);

/// The solution of M x = b whose free (non-pivot) coordinates are all zero, or
/// nullopt when b is not in the image.
std::optional<Vec> solve_preimage(const SparseMatrix& m, const Vec& b);

/// Caches the elimination of one matrix for repeated preimage queries.
class PreimageSolver {
public:
    explicit PreimageSolver(const SparseMatrix& m);

    std::optional<Vec> solve(const Vec& b) const;
    bool in_image(const Vec& b) const;
    std::size_t rank() const { return pivots_.size(); }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    std::size_t cols() const { return cols_; }

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::size_t> pivots_;
    std::vector<Vec> transform_;  // dense rows of T
};

/// Rank of the span of a list of vectors of equal length n.
std::size_t span_rank(Field f, std::size_t n, const std::vector<Vec>& vectors);

/// Basis of the intersection of two subspaces given by spanning lists.
std::vector<Vec> intersect_spans(Field f, std::size_t n, const std::vector<Vec>& a, const std::vector<Vec>& b);

/// Incrementally grown subspace kept in fully reduced echelon form.
class SpanBuilder {
public:
    SpanBuilder(Field f, std::size_t n) : field_(f), n_(n) {}

    /// Adds v; returns false (and leaves the span unchanged) if v is already in it.
    bool add(const Vec& v);
    bool contains(const Vec& v) const;
    /// v minus its projection onto the span along the pivot coordinates.
    Vec reduce(Vec v) const;
    std::size_t rank() const { return rows_.size(); }
    const std::vector<Vec>& rows() const { return rows_; }

private:
    Field field_;
    std::size_t n_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> pivots_;
};

/// Inverse of a square matrix; throws std::domain_error if singular.
SparseMatrix inverse(const SparseMatrix& m);

}  // namespace ainf
