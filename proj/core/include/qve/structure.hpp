#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qve/linalg.hpp"
#include "qve/problem.hpp"

namespace qve::structure {

/// Band around rho(R) = 1 inside which a problem counts as critical;
/// sized to the accuracy ceiling of the power iteration.
inline constexpr double kCritTol = 1e-9;

enum class Criticality { subcritical, critical, supercritical };

const char* criticality_name(Criticality c);
Criticality criticality_of(double rho);

struct StructureReport {
    double rho_r = 0.0;
    Criticality criticality = Criticality::subcritical;
    std::vector<std::vector<int>> components;
    bool irreducible = false;
};

/// Spectral radius of the mean matrix R plus the SCC partition of its
/// pattern. Works for reducible R (rho is the max over diagonal blocks).
StructureReport classify(const QveProblem& p);

/// A reducible problem relabeled into block upper triangular form, with
/// the self-contained tail equation split off.
struct ReducedProblem {
    std::vector<int> permutation;  // new index -> original index
    int head_dim = 0;              // M, always >= 1
    QveProblem permuted;           // full problem in the new labeling
    QveProblem tail;               // x2 = a2 + b2(x2,x2) on the last block
};

/// Relabel indices by the SCC order so R becomes block upper triangular
/// and restrict to the last component. The zero pattern of b guarantees
/// the restriction loses nothing. Throws InputError when R is already
/// irreducible.
ReducedProblem split_reducible(const QveProblem& p);

/// Solves a problem to a solution vector; whatever solver and
/// configuration the caller wants, wrapped behind one signature.
using InnerSolver = std::function<Vector(const QveProblem&)>;

/// Given the minimal solution x2 of the tail equation, build the head
/// equation x1 = a_y + b_y(x1,x1), solve it with inner_solver, and
/// assemble the full solution back in the original index order. Throws
/// StructureError when T_{x2} fails to be a nonsingular M-matrix (the
/// x* > 0 assumption is violated).
Vector back_substitute(const ReducedProblem& rp, const Vector& x2,
                       const InnerSolver& inner_solver);

/// Minimality certificate for a computed solution: classify F'_x.
/// nonsingular_M or singular_M certifies minimality, not_M certifies
/// non-minimality (the iff needs irreducible R; for reducible R only the
/// minimal -> M-matrix direction applies). Throws InputError unless x is
/// a positive solution with ||F(x)||inf <= residual_tol.
linalg::MmatrixVerdict certify_minimal(const QveProblem& p, const Vector& x,
                                       double residual_tol = 1e-11);

} // namespace qve::structure
