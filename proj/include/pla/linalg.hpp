#pragma once

#include <optional>
#include <vector>

#include "pla/scalar.hpp"

namespace pla {

using Vec = std::vector<Scalar>;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0), field_(Field::rationals()) {}
    Matrix(size_t rows, size_t cols, const FieldPtr& f);
    static Matrix identity(size_t n, const FieldPtr& f);
    static Matrix from_columns(const std::vector<Vec>& cols, size_t nrows, const FieldPtr& f);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const FieldPtr& field() const { return field_; }

    Scalar& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const Scalar& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    Vec col(size_t c) const;
    Matrix transpose() const;
    Matrix operator*(const Matrix&) const;
    Matrix operator+(const Matrix&) const;
    Matrix operator-(const Matrix&) const;
    Matrix scaled(const Scalar& s) const;
    bool operator==(const Matrix&) const;
    bool is_symmetric() const;

private:
    size_t rows_, cols_;
    std::vector<Scalar> a_;
    FieldPtr field_;
};

size_t rank(const Matrix& m);

// exact basis of the column space; deterministic: leftmost pivot columns
std::vector<Vec> image_basis(const Matrix& m);

// exact coordinates of target in the span of the basis vectors, or nullopt;
// basis must be linearly independent
std::optional<Vec> solve_in_span(const std::vector<Vec>& basis, const Vec& target);

// decided exactly via fraction-free elimination with ordered-field sign tests
bool is_positive_semidefinite(const Matrix& g);

// convenience vector helpers
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Scalar& s, const Vec& a);
bool vec_eq(const Vec& a, const Vec& b);
bool vec_is_zero(const Vec& a);

} // namespace pla
