#pragma once

#include <vector>

#include "qve/errors.hpp"

namespace qve {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Everything in this project is small
/// (N up to a few hundred), so a flat std::vector is all the storage
/// strategy we need.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0);

    static Matrix identity(int n);

    double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    /// M * x
    Vector apply(const Vector& x) const;
    /// M^T * x
    Vector apply_transposed(const Vector& x) const;

    Matrix transposed() const;

    /// max_i sum_j |m_ij|
    double inf_norm() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> d_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(const Matrix& a, const Matrix& b);

// Small vector helpers used throughout the solvers.
Vector ones(int n);
double inf_norm(const Vector& v);
double l1_norm(const Vector& v);
double dot(const Vector& a, const Vector& b);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, Vector v);

void require_dim(bool ok, const char* what);

} // namespace qve
