#include "qve/matrix.hpp"

#include <cmath>
#include <cstdlib>

namespace qve {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw InputError("matrix dimensions must be nonnegative");
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::apply(const Vector& x) const {
    require_dim(static_cast<int>(x.size()) == cols_, "matrix-vector product");
    Vector y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double acc = 0.0;
        const double* row = d_.data() + static_cast<std::size_t>(i) * cols_;
        for (int j = 0; j < cols_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

Vector Matrix::apply_transposed(const Vector& x) const {
    require_dim(static_cast<int>(x.size()) == rows_, "transposed matrix-vector product");
    Vector y(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* row = d_.data() + static_cast<std::size_t>(i) * cols_;
        const double xi = x[i];
        for (int j = 0; j < cols_; ++j) y[j] += row[j] * xi;
    }
    return y;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        if (s > best) best = s;
    }
    return best;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_dim(rows_ == other.rows_ && cols_ == other.cols_, "matrix addition");
    for (std::size_t k = 0; k < d_.size(); ++k) d_[k] += other.d_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_dim(rows_ == other.rows_ && cols_ == other.cols_, "matrix subtraction");
    for (std::size_t k = 0; k < d_.size(); ++k) d_[k] -= other.d_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : d_) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { a += b; return a; }
Matrix operator-(Matrix a, const Matrix& b) { a -= b; return a; }
Matrix operator*(Matrix a, double s) { a *= s; return a; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_dim(a.cols() == b.rows(), "matrix-matrix product");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector ones(int n) { return Vector(static_cast<std::size_t>(n), 1.0); }

double inf_norm(const Vector& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

double l1_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double dot(const Vector& a, const Vector& b) {
    require_dim(a.size() == b.size(), "dot product");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector operator+(const Vector& a, const Vector& b) {
    require_dim(a.size() == b.size(), "vector addition");
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vector operator-(const Vector& a, const Vector& b) {
    require_dim(a.size() == b.size(), "vector subtraction");
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

Vector operator*(double s, Vector v) {
    for (double& x : v) x *= s;
    return v;
}

void require_dim(bool ok, const char* what) {
    if (!ok) throw InputError(std::string("dimension mismatch in ") + what);
}

} // namespace qve
