#include "qve/tensor.hpp"

namespace qve {

const char* variant_name(VariantKind kind) {
    switch (kind) {
        case VariantKind::original: return "original";
        case VariantKind::transpose: return "transpose";
        case VariantKind::symmetrize: return "symmetrize";
        case VariantKind::desym1: return "desym1";
        case VariantKind::desym2: return "desym2";
    }
    return "?";
}

VariantKind variant_from_name(const std::string& name) {
    if (name == "original") return VariantKind::original;
    if (name == "transpose") return VariantKind::transpose;
    if (name == "symmetrize") return VariantKind::symmetrize;
    if (name == "desym1") return VariantKind::desym1;
    if (name == "desym2") return VariantKind::desym2;
    throw InputError("unknown bilinear variant: " + name);
}

BilinearTensor::BilinearTensor(int n)
    : n_(n), c_(static_cast<std::size_t>(n) * n * n, 0.0) {
    if (n < 1) throw InputError("tensor dimension must be positive");
}

void BilinearTensor::set(int i, int j, int k, double v) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || k < 0 || k >= n_)
        throw InputError("tensor index out of range");
    if (v < 0.0) throw InputError("tensor coefficients must be nonnegative");
    c_[index(i, j, k)] = v;
}

Vector BilinearTensor::apply(const Vector& x, const Vector& y) const {
    require_dim(static_cast<int>(x.size()) == n_ && static_cast<int>(y.size()) == n_,
                "bilinear evaluation");
    Vector out(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n_; ++j) {
            const double xj = x[j];
            const double* row = c_.data() + index(i, j, 0);
            double inner = 0.0;
            for (int k = 0; k < n_; ++k) inner += row[k] * y[k];
            acc += xj * inner;
        }
        out[i] = acc;
    }
    return out;
}

Matrix BilinearTensor::left_matrix(const Vector& y) const {
    require_dim(static_cast<int>(y.size()) == n_, "left slice");
    Matrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const double* row = c_.data() + index(i, j, 0);
            double acc = 0.0;
            for (int k = 0; k < n_; ++k) acc += row[k] * y[k];
            m(i, j) = acc;
        }
    return m;
}

Matrix BilinearTensor::right_matrix(const Vector& x) const {
    require_dim(static_cast<int>(x.size()) == n_, "right slice");
    Matrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) acc += c_[index(i, j, k)] * x[j];
            m(i, k) = acc;
        }
    return m;
}

Vector BilinearTensor::row_sums() const {
    Vector s(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        const double* base = c_.data() + index(i, 0, 0);
        for (int jk = 0; jk < n_ * n_; ++jk) acc += base[jk];
        s[i] = acc;
    }
    return s;
}

BilinearTensor BilinearTensor::variant(VariantKind kind) const {
    if (kind == VariantKind::original) return *this;
    BilinearTensor out(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k) {
                const double bjk = at(i, j, k);
                const double bkj = at(i, k, j);
                double v = 0.0;
                switch (kind) {
                    case VariantKind::transpose: v = bkj; break;
                    case VariantKind::symmetrize: v = (bjk + bkj) / 2.0; break;
                    case VariantKind::desym1:
                        v = j < k ? bjk + bkj : (j == k ? bjk : 0.0);
                        break;
                    case VariantKind::desym2:
                        v = j > k ? bjk + bkj : (j == k ? bjk : 0.0);
                        break;
                    case VariantKind::original: break;
                }
                out.c_[out.index(i, j, k)] = v;
            }
    return out;
}

} // namespace qve
