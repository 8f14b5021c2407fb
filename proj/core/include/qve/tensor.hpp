#pragma once

#include <string>
#include <vector>

#include "qve/matrix.hpp"

namespace qve {

/// The four ways of rewriting the bilinear form without touching the
/// quadratic form b(t,t), plus the identity.
enum class VariantKind { original, transpose, symmetrize, desym1, desym2 };

const char* variant_name(VariantKind kind);
VariantKind variant_from_name(const std::string& name);

/// Dense order-3 coefficient array b_ijk >= 0 with the contractions the
/// solvers need. Storage is a flat n^3 buffer, k fastest; sparse input is
/// densified at the I/O boundary.
class BilinearTensor {
public:
    explicit BilinearTensor(int n);

    int dim() const { return n_; }

    double at(int i, int j, int k) const { return c_[index(i, j, k)]; }
    void set(int i, int j, int k, double v);

    /// b(x,y), components sum_jk b_ijk x_j y_k.
    Vector apply(const Vector& x, const Vector& y) const;

    /// Matrix M with M x = b(x,y) for all x, i.e. M_ij = sum_k b_ijk y_k.
    /// This is the one-argument slice b(.,y).
    Matrix left_matrix(const Vector& y) const;

    /// Matrix M with M y = b(x,y) for all y, i.e. M_ik = sum_j b_ijk x_j.
    /// This is the slice b(x,.).
    Matrix right_matrix(const Vector& x) const;

    /// Row sums over both trailing indices: (b(e,e))_i. Summation runs in
    /// the same lexicographic order as apply(), so a = e - row_sums() is
    /// consistent with later apply(e,e) evaluations to the last bit.
    Vector row_sums() const;

    BilinearTensor variant(VariantKind kind) const;

    bool operator==(const BilinearTensor& other) const = default;

private:
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }

    int n_ = 0;
    std::vector<double> c_;
};

} // namespace qve
