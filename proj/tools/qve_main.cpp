#include <cstdio>
#include <exception>
#include <string>

#include "common.hpp"
#include "qve/errors.hpp"

namespace {

void print_usage() {
    std::fputs(
        "usage: qve <command> [options]\n"
        "\n"
        "commands:\n"
        "  solve     compute the minimal nonnegative solution of x = a + b(x,x)\n"
        "  analyze   criticality, spectral radius and reducibility structure\n"
        "  bench     sweep solvers over generated instances, CSV on stdout\n"
        "  validate  cross-check a solution against direct Monte Carlo simulation\n"
        "  generate  write a generated problem instance to a file\n"
        "\n"
        "run 'qve <command> --help' for the command's options\n",
        stderr);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        print_usage();
        return qve::cli::kExitInputError;
    }
    const std::string cmd = argv[1];
    try {
        if (cmd == "solve") return qve::cli::run_solve(argc - 1, argv + 1);
        if (cmd == "bench") return qve::cli::run_bench(argc - 1, argv + 1);
        if (cmd == "validate") return qve::cli::run_validate(argc - 1, argv + 1);
        if (cmd == "analyze") return qve::cli::run_analyze(argc - 1, argv + 1);
        if (cmd == "generate") return qve::cli::run_generate(argc - 1, argv + 1);
        if (cmd == "--help" || cmd == "-h" || cmd == "help") {
            print_usage();
            return qve::cli::kExitOk;
        }
        std::fprintf(stderr, "qve: unknown command '%s'\n", cmd.c_str());
        print_usage();
        return qve::cli::kExitInputError;
    } catch (const qve::InputError& e) {
        std::fprintf(stderr, "qve %s: %s\n", cmd.c_str(), e.what());
        return qve::cli::kExitInputError;
    } catch (const qve::StructureError& e) {
        std::fprintf(stderr, "qve %s: %s\n", cmd.c_str(), e.what());
        return qve::cli::kExitInputError;
    } catch (const qve::NoConvergenceError& e) {
        std::fprintf(stderr, "qve %s: %s\n", cmd.c_str(), e.what());
        return qve::cli::kExitNoConvergence;
    } catch (const qve::NumericError& e) {
        std::fprintf(stderr, "qve %s: %s\n", cmd.c_str(), e.what());
        return qve::cli::kExitNoConvergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qve %s: %s\n", cmd.c_str(), e.what());
        return qve::cli::kExitInputError;
    }
}
