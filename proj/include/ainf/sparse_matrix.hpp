#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ainf/scalar.hpp"

namespace ainf {

using Vec = std::vector<Scalar>;

Vec zero_vec(Field f, std::size_t n);
bool is_zero(const Vec& v);
Vec unit_vec(Field f, std::size_t n, std::size_t i);
Vec& axpy(Vec& y, const Scalar& a, const Vec& x);  // y += a x

/// Sparse matrix stored by columns; entries are sorted by row and never zero.
class SparseMatrix {
public:
    using Entry = std::pair<std::size_t, Scalar>;
    using Column = std::vector<Entry>;

    SparseMatrix(Field f, std::size_t rows, std::size_t cols);
    static SparseMatrix identity(Field f, std::size_t n);
    /// rows.size() x cols, dense row-major input.
    static SparseMatrix from_rows(Field f, std::size_t cols, const std::vector<Vec>& rows);
    static SparseMatrix from_columns(Field f, std::size_t rows, const std::vector<Vec>& columns);

    Field field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }
    std::size_t nnz() const;
    bool is_zero() const { return nnz() == 0; }

    Scalar at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Scalar& value);
    void add_to(std::size_t r, std::size_t c, const Scalar& value);
    const Column& column(std::size_t c) const { return columns_.at(c); }
    void set_column(std::size_t c, const Vec& dense);
    Vec column_vec(std::size_t c) const;

    Vec apply(const Vec& x) const;
    SparseMatrix transpose() const;
    std::vector<Vec> to_rows() const;
    SparseMatrix scaled(const Scalar& s) const;

    SparseMatrix& operator+=(const SparseMatrix& o);
    SparseMatrix& operator-=(const SparseMatrix& o);
    friend SparseMatrix operator+(SparseMatrix a, const SparseMatrix& b) { return a += b; }
    friend SparseMatrix operator-(SparseMatrix a, const SparseMatrix& b) { return a -= b; }
    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

    std::string to_string() const;

private:
    Field field_;
    std::size_t rows_;
    std::vector<Column> columns_;
};

}  // namespace ainf
