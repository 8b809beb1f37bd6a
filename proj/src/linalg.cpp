#include "pla/linalg.hpp"

#include <cassert>

namespace pla {

Matrix::Matrix(size_t rows, size_t cols, const FieldPtr& f)
    : rows_(rows), cols_(cols), a_(rows * cols, Scalar::zero(f)), field_(f) {}

Matrix Matrix::identity(size_t n, const FieldPtr& f) {
    Matrix m(n, n, f);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, size_t nrows, const FieldPtr& f) {
    Matrix m(nrows, cols.size(), f);
    for (size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != nrows) throw config_error("from_columns: inconsistent dimensions");
        for (size_t r = 0; r < nrows; ++r) m.at(r, c) = cols[c][r];
    }
    return m;
}

Vec Matrix::col(size_t c) const {
    Vec v;
    v.reserve(rows_);
    for (size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
    return v;
}

Matrix Matrix::transpose() const {
    Matrix m(cols_, rows_, field_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw config_error("matrix product: inconsistent dimensions");
    Matrix m(rows_, o.cols_, field_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t k = 0; k < cols_; ++k) {
            if (at(r, k).is_zero()) continue;
            for (size_t c = 0; c < o.cols_; ++c) {
                if (o.at(k, c).is_zero()) continue;
                m.at(r, c) += at(r, k) * o.at(k, c);
            }
        }
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw config_error("matrix sum: shape mismatch");
    Matrix m = *this;
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = m.a_[i] + o.a_[i];
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw config_error("matrix diff: shape mismatch");
    Matrix m = *this;
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = m.a_[i] - o.a_[i];
    return m;
}

Matrix Matrix::scaled(const Scalar& s) const {
    Matrix m = *this;
    for (auto& x : m.a_) x = x * s;
    return m;
}

bool Matrix::operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

bool Matrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = r + 1; c < cols_; ++c)
            if (at(r, c) != at(c, r)) return false;
    return true;
}

// row echelon in place; returns pivot column indices
static std::vector<size_t> echelon(Matrix& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t p = row;
        while (p < m.rows() && m.at(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (size_t c = 0; c < m.cols(); ++c) std::swap(m.at(p, c), m.at(row, c));
        Scalar pv = m.at(row, col);
        for (size_t c = col; c < m.cols(); ++c) m.at(row, c) = m.at(row, c) / pv;
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col).is_zero()) continue;
            Scalar f = m.at(r, col);
            for (size_t c = col; c < m.cols(); ++c)
                m.at(r, c) = m.at(r, c) - f * m.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

size_t rank(const Matrix& m) {
    Matrix w = m;
    return echelon(w).size();
}

std::vector<Vec> image_basis(const Matrix& m) {
    Matrix w = m;
    auto pivots = echelon(w);
    std::vector<Vec> basis;
    basis.reserve(pivots.size());
    for (size_t c : pivots) basis.push_back(m.col(c));
    return basis;
}

std::optional<Vec> solve_in_span(const std::vector<Vec>& basis, const Vec& target) {
    if (basis.empty()) return vec_is_zero(target) ? std::optional<Vec>(Vec{}) : std::nullopt;
    size_t n = basis[0].size();
    if (target.size() != n) throw config_error("solve_in_span: inconsistent dimensions");
    FieldPtr f = Field::rationals();
    for (const auto& v : basis)
        for (const auto& s : v)
            if (!s.field()->is_plain_rationals()) { f = s.field(); break; }
    for (const auto& s : target)
        if (!s.field()->is_plain_rationals()) f = s.field();
    Matrix m(n, basis.size() + 1, f);
    for (size_t c = 0; c < basis.size(); ++c) {
        if (basis[c].size() != n) throw config_error("solve_in_span: inconsistent dimensions");
        for (size_t r = 0; r < n; ++r) m.at(r, c) = basis[c][r];
    }
    for (size_t r = 0; r < n; ++r) m.at(r, basis.size()) = target[r];
    auto pivots = echelon(m);
    bool target_pivot = !pivots.empty() && pivots.back() == basis.size();
    if (target_pivot) return std::nullopt;
    if (pivots.size() != basis.size())
        throw config_error("solve_in_span: basis is not linearly independent");
    Vec coords(basis.size(), Scalar::zero(f));
    for (size_t i = 0; i < pivots.size(); ++i) coords[pivots[i]] = m.at(i, basis.size());
    return coords;
}

bool is_positive_semidefinite(const Matrix& g) {
    if (!g.is_symmetric()) throw config_error("is_positive_semidefinite: matrix not symmetric");
    Matrix w = g;
    size_t n = w.rows();
    std::vector<bool> active(n, true);
    for (size_t step = 0; step < n; ++step) {
        // zero-diagonal rows must vanish entirely; negative diagonal kills psd
        size_t pivot = n;
        for (size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            int s = w.at(i, i).sign();
            if (s < 0) return false;
            if (s == 0) {
                for (size_t j = 0; j < n; ++j)
                    if (active[j] && !w.at(i, j).is_zero()) return false;
                active[i] = false;
            } else if (pivot == n) {
                pivot = i;
            }
        }
        if (pivot == n) return true; // nothing left
        Scalar pv = w.at(pivot, pivot);
        for (size_t i = 0; i < n; ++i) {
            if (!active[i] || i == pivot) continue;
            Scalar f = w.at(i, pivot) / pv;
            if (f.is_zero()) continue;
            for (size_t j = 0; j < n; ++j) {
                if (!active[j] || j == pivot) continue;
                w.at(i, j) = w.at(i, j) - f * w.at(pivot, j);
            }
        }
        active[pivot] = false;
    }
    return true;
}

Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw config_error("vec_add: size mismatch");
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
    return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw config_error("vec_sub: size mismatch");
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] - b[i];
    return r;
}

Vec vec_scale(const Scalar& s, const Vec& a) {
    Vec r = a;
    for (auto& x : r) x = x * s;
    return r;
}

bool vec_eq(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

bool vec_is_zero(const Vec& a) {
    for (const auto& x : a)
        if (!x.is_zero()) return false;
    return true;
}

} // namespace pla
