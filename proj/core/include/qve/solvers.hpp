#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qve/linalg.hpp"
#include "qve/problem.hpp"

namespace qve::solvers {

inline constexpr double kDefaultTol = 1e-12;
inline constexpr int kLinearMaxIters = 10000;
inline constexpr int kNewtonMaxIters = 100;

enum class Status { converged, max_iters, numeric_failure };

const char* status_name(Status s);

struct SolverConfig {
    double tol = kDefaultTol;      // inf-norm residual threshold
    int max_iters = 0;             // 0 = per-method default
    VariantKind variant = VariantKind::original;
};

struct SolverReport {
    std::string solver;
    Vector solution;
    int iterations = 0;
    std::vector<double> residual_history;  // ||F||inf at x0 and after each step
    Status status = Status::numeric_failure;
    std::optional<linalg::MmatrixVerdict> minimality;  // filled on convergence
};

// --- classical fixed-point iterations and Newton --------------------------

/// One depth step: solve (I - b(.,x)) x' = a.
Vector depth_step(const QveProblem& p, const Vector& x);
/// One order step: solve (I - b(x,.)) x' = a.
Vector order_step(const QveProblem& p, const Vector& x);
/// One classical Newton step: solve (I - b(x,.) - b(.,x)) x' = a - b(x,x).
/// Assembled from the pair sums b_ijk + b_ikj, so the step is bit-for-bit
/// identical for every bilinear variant of the same quadratic form.
Vector newton_step(const QveProblem& p, const Vector& x);

SolverReport depth_solve(const QveProblem& p, const SolverConfig& cfg = {});
SolverReport order_solve(const QveProblem& p, const SolverConfig& cfg = {});
/// Alternates depth and order steps, depth first.
SolverReport thicknesses_solve(const QveProblem& p, const SolverConfig& cfg = {});
SolverReport newton_solve(const QveProblem& p, const SolverConfig& cfg = {});

// --- the survival-form (Perron) machinery ---------------------------------

/// H_y = b(.,e) + b(e-y,.).
Matrix survival_matrix(const QveProblem& p, const Vector& y);

/// Scale a positive Perron vector u so the survival-form residual of the
/// result is orthogonal to w: returns alpha*u with
/// alpha = w^T(b(u,e)+b(e,u)-u) / w^T b(u,u).
Vector normalize_perron(const QveProblem& p, const Vector& w, const Vector& u);

struct PerronStepTrace {
    double lambda = 0.0;   // rho(H_y) at the step
    Vector y_next;
    double residual_norm = 0.0;  // ||y_next - H_{y_next} y_next||inf
};

/// One application of the iteration map G: the right Perron vector of H_y,
/// renormalized against w.
PerronStepTrace perron_iteration_step(const QveProblem& p, const Vector& w,
                                      const Vector& y);

/// Explicit Jacobian of G at y:
///   JG_y = (I - u s1^T/(s1^T u)) (H_y - lambda I)^+ (I - u v^T/(v^T u)) b(.,u)
/// with u = G(y), v the left Perron vector of H_y and
/// s1^T = w^T (I - b(e-u,.) - b(.,e-u)).
Matrix perron_jacobian(const QveProblem& p, const Vector& w, const Vector& y);

/// Fixed-point iteration y_{k+1} = G(y_k) from y0 = e; the limit is
/// validated (0 <= y* <= e, rho(H_{y*}) = 1) and returned as x = e - y*.
/// Requires a stochastic problem with irreducible R; subcritical and
/// critical problems return x = e directly.
SolverReport perron_solve(const QveProblem& p, const SolverConfig& cfg = {});

/// Newton's method on y = G(y): y <- y - (I - JG_y)^{-1} (y - G(y)).
SolverReport perron_newton_solve(const QveProblem& p, const SolverConfig& cfg = {});

// --- structure-aware driver ------------------------------------------------

/// Classifies the problem, splits reducible R into irreducible pieces and
/// solves tail-first with back-substitution. Stochastic supercritical
/// pieces go to perron_newton_solve; reduction-produced head equations
/// where e is no longer a solution go to classical Newton. Throws
/// NoConvergenceError if any piece fails.
SolverReport auto_solve(const QveProblem& p, const SolverConfig& cfg = {});

/// Dispatch by name: depth | order | thicknesses | newton | perron |
/// perron-newton | auto.
SolverReport solve_by_name(const std::string& name, const QveProblem& p,
                           const SolverConfig& cfg = {});

} // namespace qve::solvers
