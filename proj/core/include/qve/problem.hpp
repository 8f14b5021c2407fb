#pragma once

#include "qve/matrix.hpp"
#include "qve/tensor.hpp"

namespace qve {

/// Tolerance on || a + b(e,e) - e ||_inf when a problem claims to be a
/// proper branching process. Violations are rejected, not renormalized.
inline constexpr double kStochasticTol = 1e-8;

/// Validation level requested at construction. Reduction of a reducible
/// problem produces head equations where e is no longer a solution; those
/// only satisfy a + b(e,e) <= e and are tagged substochastic.
enum class ProblemKind { stochastic, substochastic };

/// The quadratic vector equation x = a + b(x,x).
///
/// Immutable after construction; a problem can be shared freely across
/// concurrent solver runs.
class QveProblem {
public:
    QveProblem(Vector a, BilinearTensor b, ProblemKind kind = ProblemKind::stochastic);

    int dim() const { return b_.dim(); }
    const Vector& a() const { return a_; }
    const BilinearTensor& b() const { return b_; }

    /// True when || a + b(e,e) - e ||_inf <= kStochasticTol held at
    /// construction, i.e. e is a solution and the survival form exists.
    bool stochastic() const { return stochastic_; }

    /// R = b(e,.) + b(.,e); its spectral radius classifies the process.
    Matrix mean_matrix() const;

    /// F(x) = x - a - b(x,x).
    Vector residual(const Vector& x) const;

    /// F'_x = I - b(x,.) - b(.,x).
    Matrix jacobian(const Vector& x) const;

    /// Same equation with the bilinear form rewritten; the quadratic form
    /// and therefore the solution set are unchanged.
    QveProblem with_variant(VariantKind kind) const;

private:
    Vector a_;
    BilinearTensor b_;
    bool stochastic_ = false;
};

} // namespace qve
