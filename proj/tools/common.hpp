#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "qve/instances.hpp"
#include "qve/problem.hpp"

namespace qve::cli {

// stable exit-code contract
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitValidationFailure = 3;

/// Shortest round-trip representation; keeps every emitted file and CSV
/// byte-stable across runs.
inline std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// "family,n,lambda,seed" as taken by --generate.
instances::GeneratorSpec parse_generate_spec(const std::string& text);

/// Resolve the problem named by --input/--generate (exactly one of them).
QveProblem resolve_problem(const std::string& input_path, const std::string& generate_spec,
                           bool renormalize);

int run_solve(int argc, char** argv);
int run_bench(int argc, char** argv);
int run_validate(int argc, char** argv);
int run_analyze(int argc, char** argv);
int run_generate(int argc, char** argv);

} // namespace qve::cli
