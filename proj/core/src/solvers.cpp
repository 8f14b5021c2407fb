#include "qve/solvers.hpp"

#include <cmath>
#include <utility>

#include "qve/errors.hpp"
#include "qve/structure.hpp"

namespace qve::solvers {

namespace {

int default_iters(int requested, int fallback) {
    return requested > 0 ? requested : fallback;
}

void clamp_unit_box(Vector& x, double slack) {
    for (double& v : x) {
        if (v < 0.0 && v > -slack) v = 0.0;
        if (v > 1.0 && v < 1.0 + slack) v = 1.0;
    }
}

linalg::MmatrixVerdict jacobian_verdict(const QveProblem& p, const Vector& x) {
    return linalg::mmatrix_classify(p.jacobian(x));
}

// x = e is the minimal solution of every subcritical or critical problem,
// so solvers hand it back without iterating. The classical methods only
// shortcut the critical case (a residual stop cannot pin the double root
// to full accuracy); the Perron methods also shortcut subcritical
// problems, where the normalization has no positive root.
std::optional<SolverReport> trivial_by_criticality(const QveProblem& p, const char* name,
                                                   bool include_subcritical) {
    if (!p.stochastic()) return std::nullopt;
    const auto cls = structure::criticality_of(linalg::spectral_radius(p.mean_matrix()));
    if (cls == structure::Criticality::supercritical) return std::nullopt;
    if (cls == structure::Criticality::subcritical && !include_subcritical) return std::nullopt;
    SolverReport rep;
    rep.solver = name;
    rep.solution = ones(p.dim());
    rep.iterations = 0;
    rep.residual_history = {inf_norm(p.residual(rep.solution))};
    rep.status = Status::converged;
    rep.minimality = jacobian_verdict(p, rep.solution);
    return rep;
}

using StepFn = Vector (*)(const QveProblem&, const Vector&);

// Shared driver for the monotone iterations from x0 = 0; `steps` cycles
// through the supplied step functions (two entries for thicknesses).
SolverReport run_fixed_point(const QveProblem& p, const SolverConfig& cfg, const char* name,
                             std::initializer_list<StepFn> steps, int fallback_iters) {
    const QveProblem pv = p.with_variant(cfg.variant);
    if (auto trivial = trivial_by_criticality(pv, name, false)) return *std::move(trivial);

    SolverReport rep;
    rep.solver = name;
    Vector x(static_cast<std::size_t>(pv.dim()), 0.0);
    rep.residual_history.push_back(inf_norm(pv.residual(x)));

    const int max_iters = default_iters(cfg.max_iters, fallback_iters);
    const StepFn* cycle = steps.begin();
    const std::size_t n_steps = steps.size();
    rep.status = Status::max_iters;
    for (int k = 1; k <= max_iters; ++k) {
        try {
            x = cycle[(k - 1) % n_steps](pv, x);
        } catch (const NumericError&) {
            rep.status = Status::numeric_failure;
            break;
        }
        const double res = inf_norm(pv.residual(x));
        rep.residual_history.push_back(res);
        rep.iterations = k;
        if (res <= cfg.tol) {
            rep.status = Status::converged;
            break;
        }
    }
    clamp_unit_box(x, 10.0 * cfg.tol);
    rep.solution = std::move(x);
    if (rep.status == Status::converged) rep.minimality = jacobian_verdict(pv, rep.solution);
    return rep;
}

} // namespace

const char* status_name(Status s) {
    switch (s) {
        case Status::converged: return "converged";
        case Status::max_iters: return "max_iters";
        case Status::numeric_failure: return "numeric_failure";
    }
    return "?";
}

Vector depth_step(const QveProblem& p, const Vector& x) {
    Matrix a = Matrix::identity(p.dim());
    a -= p.b().left_matrix(x);
    return linalg::linear_solve(std::move(a), p.a());
}

Vector order_step(const QveProblem& p, const Vector& x) {
    Matrix a = Matrix::identity(p.dim());
    a -= p.b().right_matrix(x);
    return linalg::linear_solve(std::move(a), p.a());
}

Vector newton_step(const QveProblem& p, const Vector& x) {
    const int n = p.dim();
    const BilinearTensor& b = p.b();
    // The Newton system uses b only through the pair sums
    // c_ijk = b_ijk + b_ikj, which every bilinear variant of the same
    // quadratic form leaves bitwise unchanged.
    Matrix a = Matrix::identity(n);
    Vector rhs = p.a();
    for (int i = 0; i < n; ++i) {
        double quad = 0.0;
        for (int j = 0; j < n; ++j) {
            const double bjj = b.at(i, j, j);
            quad += bjj * x[j] * x[j];
            a(i, j) -= 2.0 * bjj * x[j];
            for (int k = j + 1; k < n; ++k) {
                const double c = b.at(i, j, k) + b.at(i, k, j);
                quad += c * x[j] * x[k];
                a(i, j) -= c * x[k];
                a(i, k) -= c * x[j];
            }
        }
        rhs[i] -= quad;
    }
    return linalg::linear_solve(std::move(a), std::move(rhs));
}

SolverReport depth_solve(const QveProblem& p, const SolverConfig& cfg) {
    return run_fixed_point(p, cfg, "depth", {&depth_step}, kLinearMaxIters);
}

SolverReport order_solve(const QveProblem& p, const SolverConfig& cfg) {
    return run_fixed_point(p, cfg, "order", {&order_step}, kLinearMaxIters);
}

SolverReport thicknesses_solve(const QveProblem& p, const SolverConfig& cfg) {
    return run_fixed_point(p, cfg, "thicknesses", {&depth_step, &order_step}, kLinearMaxIters);
}

SolverReport newton_solve(const QveProblem& p, const SolverConfig& cfg) {
    return run_fixed_point(p, cfg, "newton", {&newton_step}, kNewtonMaxIters);
}

Matrix survival_matrix(const QveProblem& p, const Vector& y) {
    require_dim(static_cast<int>(y.size()) == p.dim(), "survival_matrix");
    const Vector e = ones(p.dim());
    Vector e_minus_y(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) e_minus_y[i] = 1.0 - y[i];
    return p.b().left_matrix(e) + p.b().right_matrix(e_minus_y);
}

Vector normalize_perron(const QveProblem& p, const Vector& w, const Vector& u) {
    require_dim(w.size() == u.size() && static_cast<int>(u.size()) == p.dim(),
                "normalize_perron");
    const Vector e = ones(p.dim());
    // b(u,e) + b(e,u) = R u; the orthogonality condition in alpha reads
    // alpha*c1 = alpha^2*c2.
    const Vector ru = p.b().apply(u, e) + p.b().apply(e, u);
    const double c1 = dot(w, ru - u);
    const double c2 = dot(w, p.b().apply(u, u));
    if (c2 <= 0.0)
        throw NumericError("normalize_perron: w^T b(u,u) is not positive");
    const double alpha = c1 / c2;
    if (alpha <= 0.0)
        throw NumericError("normalize_perron: no positive normalization exists "
                           "(problem not supercritical along u)");
    return alpha * Vector(u);
}

PerronStepTrace perron_iteration_step(const QveProblem& p, const Vector& w, const Vector& y) {
    const Matrix h = survival_matrix(p, y);
    const linalg::EigenPair pr = linalg::perron_right(h);
    PerronStepTrace trace;
    trace.lambda = pr.value;
    trace.y_next = normalize_perron(p, w, pr.vector);
    const Vector hy = survival_matrix(p, trace.y_next).apply(trace.y_next);
    trace.residual_norm = inf_norm(trace.y_next - hy);
    return trace;
}

namespace {

// JG_y assembled from precomputed pieces; u must already be the
// normalized iterate G(y) since the trailing factor b(.,u) is linear in u.
Matrix perron_jacobian_parts(const QveProblem& p, const Vector& w, const Matrix& h,
                             const Vector& u, const Vector& v, double lambda) {
    const int n = p.dim();

    const double vu = dot(v, u);
    if (std::abs(vu) < 1e-14 * l1_norm(v) * inf_norm(u))
        throw NumericError("perron_jacobian: v^T u vanishes, degenerate projection");

    // (I - u v^T / v^T u) b(.,u) as a rank-1 update of b(.,u).
    Matrix bu = p.b().left_matrix(u);
    Vector vtb = bu.apply_transposed(v);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bu(i, j) -= u[i] * vtb[j] / vu;

    Matrix a = h;
    for (int i = 0; i < n; ++i) a(i, i) -= lambda;
    Matrix core = linalg::pseudo_inverse_apply(a, bu);

    // sigma1^T = w^T (I - b(e-u,.) - b(.,e-u)) = w^T F'_{e-u}
    Vector e_minus_u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e_minus_u[i] = 1.0 - u[i];
    const Vector sigma1 = p.jacobian(e_minus_u).apply_transposed(w);
    const double su = dot(sigma1, u);
    if (std::abs(su) < 1e-14 * l1_norm(sigma1) * inf_norm(u))
        throw NumericError("perron_jacobian: sigma1^T u vanishes, degenerate projection");

    Vector stc = core.apply_transposed(sigma1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) core(i, j) -= u[i] * stc[j] / su;
    return core;
}

// The dominant eigenvalue refined with the two-sided Rayleigh quotient:
// its error is quadratic in the eigenvector errors, which pushes the null
// singular value of H - lambda*I below the pseudo-inverse truncation cut.
double rayleigh_two_sided(const Matrix& h, const Vector& u, const Vector& v) {
    return dot(v, h.apply(u)) / dot(v, u);
}

} // namespace

Matrix perron_jacobian(const QveProblem& p, const Vector& w, const Vector& y) {
    const Matrix h = survival_matrix(p, y);
    const linalg::EigenPair pr = linalg::perron_right(h);
    const linalg::EigenPair pl = linalg::perron_left(h);
    const Vector u = normalize_perron(p, w, pr.vector);
    const double lambda = rayleigh_two_sided(h, pr.vector, pl.vector);
    return perron_jacobian_parts(p, w, h, u, pl.vector, lambda);
}

namespace {

struct PerronSetup {
    Vector w;  // left Perron vector of R, ||.||_1 = 1
};

// Shared validation for both survival-form solvers. Returns the trivial
// report for subcritical/critical problems, otherwise the normalization
// vector w.
std::pair<std::optional<SolverReport>, PerronSetup> perron_precheck(const QveProblem& p,
                                                                    const char* name) {
    if (!p.stochastic())
        throw InputError("survival form needs a + b(e,e) = e; "
                         "reduction-produced head equations have no Perron form");
    if (auto trivial = trivial_by_criticality(p, name, true))
        return {std::move(trivial), PerronSetup{}};
    const Matrix r = p.mean_matrix();
    const auto comps = linalg::scc_partition(linalg::BoolMatrix::nonzero_pattern(r));
    if (comps.size() > 1)
        throw StructureError("R is reducible; split the problem with "
                             "structure::split_reducible (or use the auto solver)");
    return {std::nullopt, PerronSetup{linalg::perron_left(r).vector}};
}

// First survival step from y0 = e: H_e = b(.,e) can be reducible even for
// irreducible R. When the eigensolver flags a collapsed entry, restart
// from y0 = (1-eps)e, strictly inside the region where H_y is irreducible.
PerronStepTrace first_step(const QveProblem& p, const Vector& w, Vector& y) {
    try {
        return perron_iteration_step(p, w, y);
    } catch (const StructureError&) {
        for (double& v : y) v = 1.0 - 1e-6;
        return perron_iteration_step(p, w, y);
    }
}

void validate_survival_limit(const QveProblem& p, Vector& y, double tol, const char* name) {
    const double slack = 10.0 * tol;
    for (double& v : y) {
        if (v < -slack || v > 1.0 + slack)
            throw NoConvergenceError(std::string(name) +
                                     ": limit escaped [0, e], no convergence");
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
    }
    const double rho = linalg::perron_right(survival_matrix(p, y)).value;
    if (std::abs(rho - 1.0) > 1e-8)
        throw NoConvergenceError(std::string(name) + ": rho(H_y*) is not 1, limit rejected");
}

SolverReport finish_survival(const QveProblem& p, Vector y, SolverReport rep, double tol,
                             const char* name) {
    validate_survival_limit(p, y, tol, name);
    Vector x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = 1.0 - y[i];
    clamp_unit_box(x, 10.0 * tol);
    rep.minimality = jacobian_verdict(p, x);
    rep.solution = std::move(x);
    return rep;
}

} // namespace

SolverReport perron_solve(const QveProblem& p, const SolverConfig& cfg) {
    const QveProblem pv = p.with_variant(cfg.variant);
    auto [trivial, setup] = perron_precheck(pv, "perron");
    if (trivial) return *std::move(trivial);

    SolverReport rep;
    rep.solver = "perron";
    const int n = pv.dim();
    Vector y = ones(n);
    rep.residual_history.push_back(inf_norm(pv.residual(Vector(static_cast<std::size_t>(n), 0.0))));

    const int max_iters = default_iters(cfg.max_iters, kLinearMaxIters);
    rep.status = Status::max_iters;
    for (int k = 1; k <= max_iters; ++k) {
        const PerronStepTrace trace =
            k == 1 ? first_step(pv, setup.w, y) : perron_iteration_step(pv, setup.w, y);
        const double diff = inf_norm(trace.y_next - y);
        y = trace.y_next;
        Vector x(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = 1.0 - y[i];
        const double res = inf_norm(pv.residual(x));
        rep.residual_history.push_back(res);
        rep.iterations = k;
        if (diff <= cfg.tol && res <= cfg.tol) {
            rep.status = Status::converged;
            break;
        }
    }
    if (rep.status != Status::converged) {
        rep.solution = Vector(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) rep.solution[i] = 1.0 - y[i];
        return rep;
    }
    return finish_survival(pv, std::move(y), std::move(rep), cfg.tol, "perron");
}

SolverReport perron_newton_solve(const QveProblem& p, const SolverConfig& cfg) {
    const QveProblem pv = p.with_variant(cfg.variant);
    auto [trivial, setup] = perron_precheck(pv, "perron-newton");
    if (trivial) return *std::move(trivial);

    SolverReport rep;
    rep.solver = "perron-newton";
    const int n = pv.dim();
    Vector y = ones(n);
    Vector u;
    rep.residual_history.push_back(inf_norm(pv.residual(Vector(static_cast<std::size_t>(n), 0.0))));

    const int max_iters = default_iters(cfg.max_iters, kNewtonMaxIters);
    rep.status = Status::max_iters;
    for (int k = 1; k <= max_iters; ++k) {
        Matrix h = survival_matrix(pv, y);
        linalg::EigenPair pr;
        try {
            pr = linalg::perron_right(h);
        } catch (const StructureError&) {
            if (k > 1) throw;
            for (double& v : y) v = 1.0 - 1e-6;
            h = survival_matrix(pv, y);
            pr = linalg::perron_right(h);
        }
        u = normalize_perron(pv, setup.w, pr.vector);

        const double diff = inf_norm(y - u);
        Vector x(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) x[i] = 1.0 - u[i];
        const double res = inf_norm(pv.residual(x));
        rep.residual_history.push_back(res);
        rep.iterations = k;
        if (diff <= cfg.tol && res <= cfg.tol) {
            rep.status = Status::converged;
            break;
        }

        const linalg::EigenPair pl = linalg::perron_left(h);
        const double lambda = rayleigh_two_sided(h, pr.vector, pl.vector);
        const Matrix jg = perron_jacobian_parts(pv, setup.w, h, u, pl.vector, lambda);
        Matrix newton_mat = Matrix::identity(n);
        newton_mat -= jg;
        try {
            y = y - linalg::linear_solve(std::move(newton_mat), y - u);
        } catch (const NumericError&) {
            rep.status = Status::numeric_failure;
            break;
        }
    }
    if (rep.status != Status::converged) {
        rep.solution = Vector(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) rep.solution[i] = 1.0 - (u.empty() ? y[i] : u[i]);
        return rep;
    }
    // Report the last normalized iterate u: it satisfies the w-orthogonal
    // normalization to machine precision, the raw Newton update does not.
    return finish_survival(pv, std::move(u), std::move(rep), cfg.tol, "perron-newton");
}

namespace {

Vector auto_solve_piece(const QveProblem& p, const SolverConfig& cfg, int& iterations);

SolverReport checked_base_solve(const QveProblem& p, const SolverConfig& cfg, bool stochastic) {
    SolverReport rep = stochastic ? perron_newton_solve(p, cfg) : newton_solve(p, cfg);
    if (rep.status != Status::converged)
        throw NoConvergenceError(std::string("auto: ") + rep.solver + " piece failed (" +
                                 status_name(rep.status) + ")");
    return rep;
}

Vector auto_solve_piece(const QveProblem& p, const SolverConfig& cfg, int& iterations) {
    const auto srep = structure::classify(p);
    if (p.stochastic() && srep.criticality != structure::Criticality::supercritical)
        return ones(p.dim());
    if (srep.irreducible) {
        SolverReport rep = checked_base_solve(p, cfg, p.stochastic());
        iterations += rep.iterations;
        return rep.solution;
    }
    const structure::ReducedProblem red = structure::split_reducible(p);
    const Vector x2 = auto_solve_piece(red.tail, cfg, iterations);
    return structure::back_substitute(red, x2, [&](const QveProblem& head) {
        return auto_solve_piece(head, cfg, iterations);
    });
}

} // namespace

SolverReport auto_solve(const QveProblem& p, const SolverConfig& cfg) {
    const QveProblem pv = p.with_variant(cfg.variant);
    SolverReport rep;
    rep.solver = "auto";
    int iterations = 0;
    rep.solution = auto_solve_piece(pv, cfg, iterations);
    rep.iterations = iterations;
    rep.residual_history = {inf_norm(pv.residual(rep.solution))};
    rep.status = Status::converged;
    rep.minimality = jacobian_verdict(pv, rep.solution);
    return rep;
}

SolverReport solve_by_name(const std::string& name, const QveProblem& p,
                           const SolverConfig& cfg) {
    if (name == "depth") return depth_solve(p, cfg);
    if (name == "order") return order_solve(p, cfg);
    if (name == "thicknesses") return thicknesses_solve(p, cfg);
    if (name == "newton") return newton_solve(p, cfg);
    if (name == "perron") return perron_solve(p, cfg);
    if (name == "perron-newton") return perron_newton_solve(p, cfg);
    if (name == "auto") return auto_solve(p, cfg);
    throw InputError("unknown solver: " + name);
}

} // namespace qve::solvers
