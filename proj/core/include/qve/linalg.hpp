#pragma once

#include <cstdint>
#include <vector>

#include "qve/matrix.hpp"

namespace qve::linalg {

/// Convergence threshold on successive normalized power iterates (inf-norm).
inline constexpr double kEigTol = 1e-13;
inline constexpr int kMaxEigIters = 100000;
/// Relative band around the shift s separating singular from nonsingular
/// M-matrices.
inline constexpr double kMmatrixTol = 1e-10;
/// Documented residual quality of linear_solve: ||Ax-rhs||inf <=
/// kSolveTol * ||A||inf * ||x||inf. Pivoted elimination achieves far less.
inline constexpr double kSolveTol = 1e-12;

/// Dominant eigenpair of a nonnegative matrix: value is the spectral
/// radius, vector is entrywise positive with ||.||_1 = 1.
struct EigenPair {
    double value = 0.0;
    Vector vector;
};

enum class MmatrixClass { nonsingular_m, singular_m, not_m };

const char* mmatrix_class_name(MmatrixClass c);

/// Outcome of writing a Z-matrix as sI - B with B >= 0 and comparing
/// rho(B) against s.
struct MmatrixVerdict {
    MmatrixClass cls = MmatrixClass::not_m;
    double rho_offdiag = 0.0;  // rho(B)
    double shift = 0.0;        // s = max_i Z_ii
};

/// Right Perron pair of a nonnegative matrix by power iteration with
/// l1 normalization from the all-ones start. Irreducibility is the
/// caller's responsibility (pre-screen with scc_partition); a computed
/// vector that collapses to a nonpositive entry raises StructureError.
/// Near-ties are retried once on the shifted matrix M + delta*I, which
/// shares eigenvectors with M.
EigenPair perron_right(const Matrix& m);

/// As perron_right on M^T.
EigenPair perron_left(const Matrix& m);

/// Spectral radius of an arbitrary nonnegative matrix: the pattern is
/// SCC-partitioned and each irreducible diagonal block is power-iterated,
/// so reducible and nilpotent inputs are handled exactly.
double spectral_radius(const Matrix& m);

/// M^+ X with the pseudo-inverse computed via one-sided Jacobi SVD;
/// singular values at or below rank_tol * sigma_max (rank_tol = N*eps)
/// are truncated to zero.
Matrix pseudo_inverse_apply(const Matrix& m, const Matrix& x);

/// Classify a Z-matrix (nonpositive off-diagonal entries; anything above
/// 1e-14 is rejected) as a nonsingular M-matrix, singular M-matrix, or
/// not an M-matrix.
MmatrixVerdict mmatrix_classify(const Matrix& z);

/// Square boolean adjacency pattern, edge i -> j iff at(i,j).
class BoolMatrix {
public:
    explicit BoolMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0) {}

    int dim() const { return n_; }
    bool at(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j] != 0; }
    void set(int i, int j, bool v) { d_[static_cast<std::size_t>(i) * n_ + j] = v ? 1 : 0; }

    /// Pattern of the strictly positive entries of a nonnegative matrix.
    static BoolMatrix nonzero_pattern(const Matrix& m);

private:
    int n_;
    std::vector<std::uint8_t> d_;
};

/// Strongly connected components of the pattern, ordered so that
/// relabeling indices by the concatenated order makes the matrix block
/// upper triangular (no edge from a later component into an earlier one).
/// Indices inside each component are ascending; ties between incomparable
/// components are broken by smallest member, so an already block-upper-
/// triangular pattern comes back in the identity order.
std::vector<std::vector<int>> scc_partition(const BoolMatrix& pattern);

/// Row-pivoted Gaussian elimination. Throws NumericError when a pivot
/// falls below N * eps * ||A||inf.
Vector linear_solve(Matrix a, Vector rhs);

/// Same elimination, many right-hand sides at once (columns of rhs).
Matrix linear_solve(Matrix a, Matrix rhs);

} // namespace qve::linalg
