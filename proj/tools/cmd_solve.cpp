#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "common.hpp"
#include "qve/errors.hpp"
#include "qve/solvers.hpp"

namespace qve::cli {

int run_solve(int argc, char** argv) {
    CLI::App app{"solve the quadratic vector equation x = a + b(x,x)"};
    app.name("qve solve");
    std::string input, generate_spec, output;
    std::string solver = "auto";
    std::string variant = "original";
    double tol = solvers::kDefaultTol;
    int max_iters = 0;
    bool renormalize = false;
    app.add_option("--input", input, "problem file (JSON)");
    app.add_option("--generate", generate_spec, "family,n,lambda,seed instead of a file");
    app.add_option("--solver", solver,
                   "depth|order|thicknesses|newton|perron|perron-newton|auto");
    app.add_option("--variant", variant, "original|transpose|symmetrize|desym1|desym2");
    app.add_option("--tol", tol, "residual threshold (inf-norm)");
    app.add_option("--max-iters", max_iters, "iteration cap (0 = per-method default)");
    app.add_flag("--renormalize", renormalize, "rescale inputs violating a + b(e,e) = e");
    app.add_option("--output", output, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    const QveProblem p = resolve_problem(input, generate_spec, renormalize);
    solvers::SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.variant = variant_from_name(variant);

    const solvers::SolverReport rep = solvers::solve_by_name(solver, p, cfg);
    const std::string text = instances::report_to_json_text(rep);
    if (output.empty())
        std::fputs(text.c_str(), stdout);
    else
        instances::save_report(rep, output);

    if (rep.status != solvers::Status::converged) {
        std::fprintf(stderr, "qve solve: %s did not converge (%s)\n", rep.solver.c_str(),
                     solvers::status_name(rep.status));
        return kExitNoConvergence;
    }
    return kExitOk;
}

} // namespace qve::cli
