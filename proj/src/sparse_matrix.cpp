#include "ainf/sparse_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ainf {

Vec zero_vec(Field f, std::size_t n) { return Vec(n, Scalar::zero(f)); }

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec unit_vec(Field f, std::size_t n, std::size_t i) {
    Vec v = zero_vec(f, n);
    v.at(i) = Scalar::one(f);
    return v;
}

Vec& axpy(Vec& y, const Scalar& a, const Vec& x) {
    if (y.size() != x.size()) throw std::invalid_argument("axpy: size mismatch");
    if (a.is_zero()) return y;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) y[i] += a * x[i];
    return y;
}

SparseMatrix::SparseMatrix(Field f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), columns_(cols) {}

SparseMatrix SparseMatrix::identity(Field f, std::size_t n) {
    SparseMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.columns_[i].emplace_back(i, Scalar::one(f));
    return m;
}

SparseMatrix SparseMatrix::from_rows(Field f, std::size_t cols, const std::vector<Vec>& rows) {
    SparseMatrix m(f, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("from_rows: ragged input");
        for (std::size_t c = 0; c < cols; ++c)
            if (!rows[r][c].is_zero()) m.columns_[c].emplace_back(r, rows[r][c]);
    }
    return m;
}

SparseMatrix SparseMatrix::from_columns(Field f, std::size_t rows, const std::vector<Vec>& columns) {
    SparseMatrix m(f, rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
    return m;
}

std::size_t SparseMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& col : columns_) n += col.size();
    return n;
}

Scalar SparseMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_) throw std::out_of_range("SparseMatrix::at row");
    const auto& col = columns_.at(c);
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, std::size_t row) { return e.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return Scalar::zero(field_);
}

void SparseMatrix::set(std::size_t r, std::size_t c, const Scalar& value) {
    if (r >= rows_) throw std::out_of_range("SparseMatrix::set row");
    auto& col = columns_.at(c);
    auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, std::size_t row) { return e.first < row; });
    const bool present = it != col.end() && it->first == r;
    if (value.is_zero()) {
        if (present) col.erase(it);
    } else if (present) {
        it->second = value;
    } else {
        col.insert(it, Entry{r, value});
    }
}

void SparseMatrix::add_to(std::size_t r, std::size_t c, const Scalar& value) {
    if (value.is_zero()) return;
    set(r, c, at(r, c) + value);
}

void SparseMatrix::set_column(std::size_t c, const Vec& dense) {
    if (dense.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
    auto& col = columns_.at(c);
    col.clear();
    for (std::size_t r = 0; r < rows_; ++r)
        if (!dense[r].is_zero()) col.emplace_back(r, dense[r]);
}

Vec SparseMatrix::column_vec(std::size_t c) const {
    Vec v = zero_vec(field_, rows_);
    for (const auto& [r, s] : columns_.at(c)) v[r] = s;
    return v;
}

Vec SparseMatrix::apply(const Vec& x) const {
    if (x.size() != cols()) throw std::invalid_argument("apply: dimension mismatch");
    Vec y = zero_vec(field_, rows_);
    for (std::size_t c = 0; c < cols(); ++c) {
        if (x[c].is_zero()) continue;
        for (const auto& [r, s] : columns_[c]) y[r] += s * x[c];
    }
    return y;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(field_, cols(), rows_);
    for (std::size_t c = 0; c < cols(); ++c)
        for (const auto& [r, s] : columns_[c]) t.columns_[r].emplace_back(c, s);
    return t;
}

std::vector<Vec> SparseMatrix::to_rows() const {
    std::vector<Vec> out(rows_, zero_vec(field_, cols()));
    for (std::size_t c = 0; c < cols(); ++c)
        for (const auto& [r, s] : columns_[c]) out[r][c] = s;
    return out;
}

SparseMatrix SparseMatrix::scaled(const Scalar& s) const {
    if (s.is_zero()) return SparseMatrix(field_, rows_, cols());
    SparseMatrix out(*this);
    for (auto& col : out.columns_)
        for (auto& e : col) e.second *= s;
    return out;
}

namespace {

SparseMatrix::Column merge(const SparseMatrix::Column& a, const SparseMatrix::Column& b, bool subtract) {
    SparseMatrix::Column out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, subtract ? -b[j].second : b[j].second);
            ++j;
        } else {
            Scalar s = subtract ? a[i].second - b[j].second : a[i].second + b[j].second;
            if (!s.is_zero()) out.emplace_back(a[i].first, std::move(s));
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

SparseMatrix& SparseMatrix::operator+=(const SparseMatrix& o) {
    if (rows_ != o.rows_ || cols() != o.cols()) throw std::invalid_argument("matrix sum: shape mismatch");
    for (std::size_t c = 0; c < cols(); ++c) columns_[c] = merge(columns_[c], o.columns_[c], false);
    return *this;
}

SparseMatrix& SparseMatrix::operator-=(const SparseMatrix& o) {
    if (rows_ != o.rows_ || cols() != o.cols()) throw std::invalid_argument("matrix difference: shape mismatch");
    for (std::size_t c = 0; c < cols(); ++c) columns_[c] = merge(columns_[c], o.columns_[c], true);
    return *this;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    SparseMatrix out(a.field(), a.rows(), b.cols());
    Vec acc = zero_vec(a.field(), a.rows());
    std::vector<char> touched(a.rows(), 0);
    for (std::size_t c = 0; c < b.cols(); ++c) {
        std::vector<std::size_t> rows_hit;
        for (const auto& [k, s] : b.columns_[c]) {
            for (const auto& [r, t] : a.columns_[k]) {
                if (!touched[r]) {
                    touched[r] = 1;
                    rows_hit.push_back(r);
                }
                acc[r] += t * s;
            }
        }
        std::sort(rows_hit.begin(), rows_hit.end());
        for (std::size_t r : rows_hit) {
            if (!acc[r].is_zero()) out.columns_[c].emplace_back(r, acc[r]);
            acc[r] = Scalar::zero(a.field());
            touched[r] = 0;
        }
    }
    return out;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.columns_ == b.columns_;
}

std::string SparseMatrix::to_string() const {
    std::ostringstream os;
    for (const auto& row : to_rows()) {
        os << '[';
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? " " : "") << row[c].to_string();
        os << "]\n";
    }
    return os.str();
}

}  // namespace ainf
