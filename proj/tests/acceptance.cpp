// Acceptance suite: end-to-end checks of the solver library and CLI, one
// pass/fail line per criterion. Exits nonzero when any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "qve/instances.hpp"
#include "qve/linalg.hpp"
#include "qve/mc.hpp"
#include "qve/solvers.hpp"
#include "qve/structure.hpp"

using namespace qve;
using solvers::SolverConfig;
using solvers::SolverReport;
using solvers::Status;

namespace {

struct Check {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

using CriterionFn = std::function<void(Check&)>;

std::string g_cli;  // path to the qve binary, from QVE_CLI

const std::array<std::string, 6> kAllSolvers = {"depth",  "order",  "thicknesses",
                                                "newton", "perron", "perron-newton"};

QveProblem scalar_problem(double lambda) {
    return instances::generate_scalar({instances::Family::scalar, 1, lambda, 0});
}

QveProblem grid_problem(int n, double frac, std::uint64_t seed) {
    const double lc = instances::random_mbt_critical_lambda(n, seed);
    return instances::generate_random_mbt({instances::Family::random_mbt, n, frac * lc, seed});
}

std::string fnum(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// --- criterion 1: scalar exactness ----------------------------------------

void scalar_exactness(Check& c) {
    for (double lambda : {0.1, 0.25, 0.4}) {
        const QveProblem p = scalar_problem(lambda);
        const double expected = lambda / (1.0 - lambda);
        for (const auto& name : kAllSolvers) {
            const SolverReport rep = solvers::solve_by_name(name, p);
            c.require(rep.status == Status::converged,
                      name + " did not converge at lambda=" + fnum(lambda));
            c.require(std::abs(rep.solution[0] - expected) <= 1e-10,
                      name + " off by " + fnum(std::abs(rep.solution[0] - expected)) +
                          " at lambda=" + fnum(lambda));
        }
    }
}

// --- criterion 2: e-solution and criticality --------------------------------

void e_solution(Check& c) {
    const auto expect_class = [](double lambda) {
        return lambda == 0.5 ? structure::Criticality::critical
                             : structure::Criticality::subcritical;
    };
    for (double lambda : {0.5, 0.6}) {
        const QveProblem p = scalar_problem(lambda);
        c.require(structure::classify(p).criticality == expect_class(lambda),
                  "classify wrong at lambda=" + fnum(lambda));
        for (const auto& name : kAllSolvers) {
            const SolverReport rep = solvers::solve_by_name(name, p);
            c.require(rep.status == Status::converged,
                      name + " did not converge at lambda=" + fnum(lambda));
            c.require(std::abs(rep.solution[0] - 1.0) <= 1e-10,
                      name + " missed x*=1 at lambda=" + fnum(lambda));
        }
    }
}

// --- criterion 3: cross-solver agreement on the random grid ----------------

void cross_solver_agreement(Check& c) {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (double frac : {0.5, 0.99}) {
            const QveProblem p = grid_problem(20, frac, seed);
            std::vector<Vector> solutions;
            for (const auto& name : kAllSolvers) {
                const SolverReport rep = solvers::solve_by_name(name, p);
                c.require(rep.status == Status::converged,
                          name + " failed on seed " + std::to_string(seed) + " frac " +
                              fnum(frac));
                if (rep.status != Status::converged) continue;
                c.require(inf_norm(p.residual(rep.solution)) <= 1e-11,
                          name + " residual above 1e-11 on seed " + std::to_string(seed));
                const auto verdict = structure::certify_minimal(p, rep.solution);
                c.require(verdict.cls != linalg::MmatrixClass::not_m,
                          name + " produced a non-minimal solution on seed " +
                              std::to_string(seed));
                solutions.push_back(rep.solution);
            }
            for (std::size_t i = 0; i + 1 < solutions.size(); ++i)
                for (std::size_t j = i + 1; j < solutions.size(); ++j)
                    c.require(inf_norm(solutions[i] - solutions[j]) <= 1e-8,
                              "solver pair disagreement above 1e-8 on seed " +
                                  std::to_string(seed) + " frac " + fnum(frac));
        }
}

// --- criterion 4: minimality theorem on the scalar family ------------------

void minimality_theorem(Check& c) {
    for (int k = 1; k <= 20; ++k) {
        const double lambda = 0.024 * k;  // all < 0.5, supercritical
        const QveProblem p = scalar_problem(lambda);
        const double minimal = lambda / (1.0 - lambda);
        const auto at_min = structure::certify_minimal(p, {minimal}, 1e-9);
        c.require(at_min.cls == linalg::MmatrixClass::nonsingular_m,
                  "minimal solution not certified at lambda=" + fnum(lambda));
        const auto at_e = structure::certify_minimal(p, {1.0}, 1e-9);
        c.require(at_e.cls == linalg::MmatrixClass::not_m,
                  "x=e wrongly certified minimal at lambda=" + fnum(lambda));
    }
}

// --- criterion 5: survival-form limit certificates --------------------------

void perron_limit_certificates(Check& c) {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (double frac : {0.5, 0.99}) {
            const QveProblem p = grid_problem(20, frac, seed);
            const Vector w = linalg::perron_left(p.mean_matrix()).vector;
            const Vector e = ones(p.dim());
            for (const auto& name : {std::string("perron"), std::string("perron-newton")}) {
                const SolverReport rep = solvers::solve_by_name(name, p);
                c.require(rep.status == Status::converged,
                          name + " failed on seed " + std::to_string(seed));
                if (rep.status != Status::converged) continue;
                Vector y(rep.solution.size());
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0 - rep.solution[i];
                bool in_box = true;
                for (double v : y) in_box = in_box && v >= 0.0 && v <= 1.0;
                c.require(in_box, name + " limit escaped [0,e] on seed " +
                                      std::to_string(seed));
                const double rho =
                    linalg::perron_right(solvers::survival_matrix(p, y)).value;
                c.require(std::abs(rho - 1.0) <= 1e-8,
                          name + " rho(H_y*) != 1 on seed " + std::to_string(seed));
                const Vector resid =
                    y - p.b().apply(y, e) - p.b().apply(e, y) + p.b().apply(y, y);
                c.require(std::abs(dot(w, resid)) <= 1e-12 * l1_norm(w),
                          name + " normalization residual not orthogonal to w on seed " +
                              std::to_string(seed));
            }
        }
}

// --- criterion 6: Jacobian of the Perron map vs finite differences ---------

void perron_jacobian_fidelity(Check& c) {
    const double h = 1e-6;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const QveProblem p = grid_problem(5, 0.6, seed);
        const Vector w = linalg::perron_left(p.mean_matrix()).vector;
        for (double level : {0.9, 0.7, 0.5}) {
            const Vector y(5, level);
            const Matrix jg = solvers::perron_jacobian(p, w, y);
            double worst = 0.0;
            for (int col = 0; col < 5; ++col) {
                Vector hi = y, lo = y;
                hi[col] += h;
                lo[col] -= h;
                const Vector ghi = solvers::perron_iteration_step(p, w, hi).y_next;
                const Vector glo = solvers::perron_iteration_step(p, w, lo).y_next;
                for (int row = 0; row < 5; ++row)
                    worst = std::max(worst,
                                     std::abs(jg(row, col) - (ghi[row] - glo[row]) / (2 * h)));
            }
            c.require(worst <= 1e-5, "JG mismatch " + fnum(worst) + " on seed " +
                                         std::to_string(seed) + " at y=" + fnum(level) + "e");
        }
    }
}

// --- criterion 7: near-critical iteration counts ----------------------------

void near_critical_speed(Check& c) {
    const QveProblem near_p = grid_problem(20, 0.999, 0);
    const QveProblem far_p = grid_problem(20, 0.5, 0);

    const int newton_near = solvers::newton_solve(near_p).iterations;
    const int newton_far = solvers::newton_solve(far_p).iterations;
    c.require(newton_near > newton_far,
              "classical newton did not slow down near criticality (" +
                  std::to_string(newton_near) + " vs " + std::to_string(newton_far) + ")");

    const int perron_near = solvers::perron_solve(near_p).iterations;
    const int perron_far = solvers::perron_solve(far_p).iterations;
    c.require(perron_near <= perron_far + 1,
              "perron iteration slowed down near criticality (" +
                  std::to_string(perron_near) + " vs " + std::to_string(perron_far) + ")");

    const int pn_near = solvers::perron_newton_solve(near_p).iterations;
    c.require(pn_near <= perron_near,
              "perron-newton took more steps than the perron iteration (" +
                  std::to_string(pn_near) + " vs " + std::to_string(perron_near) + ")");
}

// --- criterion 8: bilinear variant invariance -------------------------------

void variant_invariance(Check& c) {
    const std::array<VariantKind, 5> kinds = {VariantKind::original, VariantKind::transpose,
                                              VariantKind::symmetrize, VariantKind::desym1,
                                              VariantKind::desym2};
    // solutions agree across variants on every grid instance
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (double frac : {0.5, 0.99}) {
            const QveProblem p = grid_problem(20, frac, seed);
            SolverConfig cfg;
            cfg.tol = 1e-13;
            std::vector<Vector> sols;
            for (VariantKind kind : kinds) {
                cfg.variant = kind;
                const SolverReport rep = solvers::perron_newton_solve(p, cfg);
                c.require(rep.status == Status::converged,
                          std::string("perron-newton/") + variant_name(kind) +
                              " failed on seed " + std::to_string(seed));
                sols.push_back(rep.solution);
            }
            for (std::size_t i = 1; i < sols.size(); ++i)
                c.require(inf_norm(sols[i] - sols[0]) <= 1e-10,
                          std::string("variant ") + variant_name(kinds[i]) +
                              " solution drifted on seed " + std::to_string(seed));
        }

    // classical Newton iterate sequences are identical across variants
    const QveProblem p = grid_problem(20, 0.9, 0);
    std::vector<Vector> iterates;
    {
        Vector x(20, 0.0);
        for (int k = 0; k < 30; ++k) {
            x = solvers::newton_step(p, x);
            iterates.push_back(x);
        }
    }
    for (VariantKind kind : kinds) {
        const QveProblem pv = p.with_variant(kind);
        Vector x(20, 0.0);
        for (int k = 0; k < 30; ++k) {
            x = solvers::newton_step(pv, x);
            c.require(inf_norm(x - iterates[static_cast<std::size_t>(k)]) <= 1e-14,
                      std::string("newton sequence differs under ") + variant_name(kind));
        }
    }

    // depth on b^T reproduces order on b iterate by iterate
    const QveProblem pt = p.with_variant(VariantKind::transpose);
    Vector xo(20, 0.0), xd(20, 0.0);
    for (int k = 0; k < 30; ++k) {
        xo = solvers::order_step(p, xo);
        xd = solvers::depth_step(pt, xd);
        c.require(inf_norm(xo - xd) <= 1e-14, "depth on b^T diverged from order on b");
    }
}

// --- criterion 9: reduction theorem -----------------------------------------

void reduction_theorem(Check& c) {
    const structure::InnerSolver newton_inner = [](const QveProblem& hp) {
        const SolverReport rep = solvers::newton_solve(hp);
        if (rep.status != Status::converged)
            throw NoConvergenceError("inner newton failed during reduction");
        return rep.solution;
    };
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const double lc = instances::block_triangular_tail_critical_lambda(6, seed);
        // seed 4 runs with a subcritical tail under a supercritical head
        const double lambda = seed == 4 ? 2.0 * lc : 0.5 * lc;
        const QveProblem p = instances::generate_block_triangular(
            {instances::Family::block_triangular, 6, lambda, seed});

        const structure::ReducedProblem red = structure::split_reducible(p);
        if (seed == 4)
            c.require(structure::classify(red.tail).criticality ==
                          structure::Criticality::subcritical,
                      "seed 4 tail is not subcritical");

        const Vector x2 = newton_inner(red.tail);
        const Vector assembled = structure::back_substitute(red, x2, newton_inner);
        const SolverReport direct = solvers::newton_solve(p);
        c.require(direct.status == Status::converged,
                  "direct solve failed on seed " + std::to_string(seed));
        c.require(inf_norm(assembled - direct.solution) <= 1e-10,
                  "reduction disagrees with the direct solve on seed " +
                      std::to_string(seed) + " by " +
                      fnum(inf_norm(assembled - direct.solution)));
        c.require(inf_norm(p.residual(assembled)) <= 1e-10,
                  "assembled solution residual too large on seed " + std::to_string(seed));

        const SolverReport auto_rep = solvers::auto_solve(p);
        c.require(inf_norm(auto_rep.solution - direct.solution) <= 1e-10,
                  "auto solver disagrees with the direct solve on seed " +
                      std::to_string(seed));
    }
}

// --- criterion 10: Monte Carlo oracle ---------------------------------------

void monte_carlo_oracle(Check& c) {
    {
        const QveProblem p = scalar_problem(0.25);
        const mc::McEstimate est = mc::estimate_extinction(p, {100000, 10000, 0, 0});
        c.require(std::abs(est.estimate - 1.0 / 3.0) <= 3.0 * est.std_error + 0.005,
                  "scalar estimate " + fnum(est.estimate) + " outside the band");
    }
    const QveProblem p = grid_problem(5, 0.5, 0);
    const SolverReport rep = solvers::newton_solve(p);
    c.require(rep.status == Status::converged, "newton failed on the N=5 instance");
    for (int s = 0; s < 5; ++s) {
        const mc::McEstimate est = mc::estimate_extinction(p, {100000, 10000, 0, s});
        c.require(std::abs(est.estimate - rep.solution[s]) <= 3.0 * est.std_error + 0.005,
                  "state " + std::to_string(s) + " estimate " + fnum(est.estimate) +
                      " vs x* " + fnum(rep.solution[s]));
    }
}

// --- criterion 11: byte-identical CLI output --------------------------------

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& tag) {
    const std::string out_path =
        (std::filesystem::temp_directory_path() / ("qve_acc_" + tag + ".out")).string();
    const std::string cmd = g_cli + " " + args + " > " + out_path + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    res.out = ss.str();
    std::filesystem::remove(out_path);
    return res;
}

void determinism(Check& c) {
    if (g_cli.empty()) {
        c.require(false, "QVE_CLI not set; cannot exercise the CLI");
        return;
    }
    const auto tmp = std::filesystem::temp_directory_path();

    // generate: identical files
    const std::string p1 = (tmp / "qve_acc_gen1.json").string();
    const std::string p2 = (tmp / "qve_acc_gen2.json").string();
    for (const auto& path : {p1, p2}) {
        const CliResult r = run_cli(
            "generate --family random_mbt --n 10 --lambda 1.5 --seed 3 --output " + path,
            "gen");
        c.require(r.exit_code == 0, "generate exited nonzero");
    }
    std::ifstream f1(p1), f2(p2);
    std::ostringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    c.require(!s1.str().empty() && s1.str() == s2.str(),
              "generated problem files differ between runs");
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);

    // solve: identical reports
    const CliResult a = run_cli("solve --generate random_mbt,8,1.0,5 --solver auto", "s1");
    const CliResult b = run_cli("solve --generate random_mbt,8,1.0,5 --solver auto", "s2");
    c.require(a.exit_code == 0 && a.out == b.out, "solve reports differ between runs");

    // bench: identical CSV
    const std::string bench_args =
        "bench --n 8 --seeds 0,1,2 --lambda-grid 0.5,0.9 --solvers newton,perron "
        "--variants original,symmetrize";
    const CliResult ba = run_cli(bench_args, "b1");
    const CliResult bb = run_cli(bench_args, "b2");
    c.require(ba.exit_code == 0 && !ba.out.empty() && ba.out == bb.out,
              "bench CSV differs between runs");
}

struct Criterion {
    int id;
    const char* name;
    CriterionFn fn;
    double time_limit;  // seconds, 0 = none
};

} // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("QVE_CLI")) g_cli = env;
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];

    const std::vector<Criterion> criteria = {
        {1, "scalar exactness under all six solvers", scalar_exactness, 1.0},
        {2, "e-solution and criticality classification", e_solution, 0.0},
        {3, "cross-solver agreement on the random grid", cross_solver_agreement, 30.0},
        {4, "M-matrix minimality certificates", minimality_theorem, 0.0},
        {5, "survival-form limit certificates", perron_limit_certificates, 0.0},
        {6, "Perron Jacobian vs finite differences", perron_jacobian_fidelity, 0.0},
        {7, "near-critical iteration counts", near_critical_speed, 0.0},
        {8, "bilinear variant invariance", variant_invariance, 0.0},
        {9, "reduction and back-substitution", reduction_theorem, 0.0},
        {10, "Monte Carlo extinction oracle", monte_carlo_oracle, 60.0},
        {11, "byte-identical CLI output", determinism, 0.0},
    };

    int failed = 0;
    for (const auto& crit : criteria) {
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            crit.fn(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (crit.time_limit > 0.0 && secs > crit.time_limit)
            check.failures.push_back("runtime " + fnum(secs) + " s exceeds " +
                                     fnum(crit.time_limit) + " s");
        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("[%s] criterion %2d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", crit.id,
                    crit.name, secs);
        for (const auto& f : check.failures) std::printf("       - %s\n", f.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
