#pragma once

#include <cstdint>
#include <string>

#include "qve/problem.hpp"
#include "qve/solvers.hpp"

namespace qve::instances {

/// SplitMix64. Fixed here, constants and all, so generated instances are
/// reproducible bit-for-bit across implementations and platforms.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1): the top 53 bits of the next word.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

enum class Family { random_mbt, scalar, block_triangular };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct GeneratorSpec {
    Family family = Family::random_mbt;
    int n = 1;
    /// random_mbt / block_triangular: immediate-death inflation added to
    /// the scaling constant K (block_triangular applies it to the tail
    /// block). scalar: the death probability a itself, 0 < lambda < 1.
    double lambda = 0.0;
    std::uint64_t seed = 0;
};

QveProblem generate(const GeneratorSpec& spec);

/// Random dense instance: fill b0 with uniform draws in lexicographic
/// (i,j,k) order, set K = max_i (b0(e,e))_i + lambda, then scale so that
/// a + b(e,e) = e.
QveProblem generate_random_mbt(const GeneratorSpec& spec);

/// N = 1, a = lambda, b = 1 - lambda; minimal solution min(1, lambda/(1-lambda)).
QveProblem generate_scalar(const GeneratorSpec& spec);

/// Reducible instance: the last ceil(n/2) indices form a self-contained
/// tail (b_ijk = 0 for tail i unless both j,k are in the tail) and the
/// head couples into everything. Head rows are scaled to sit at half
/// their critical inflation (supercritical); spec.lambda inflates the
/// tail exactly as in generate_random_mbt.
QveProblem generate_block_triangular(const GeneratorSpec& spec);

/// The inflation at which the random_mbt family crosses criticality:
/// rho(R0) - max_i (b0(e,e))_i for the unscaled tensor. Supercritical
/// iff lambda < this value.
double random_mbt_critical_lambda(int n, std::uint64_t seed);

/// Same crossing for the tail block of the block_triangular family.
double block_triangular_tail_critical_lambda(int n, std::uint64_t seed);

// --- file formats ----------------------------------------------------------
//
// Problems are JSON documents:
//   { "n": 2, "a": [0.25, 0.5], "b": [[i, j, k, value], ...], "meta": {...} }
// b lists the nonzero coefficients with 0-based indices; duplicates are
// rejected. Doubles round-trip exactly. Reports mirror SolverReport:
//   { "solver": ..., "solution": [...], "iterations": ...,
//     "residual_history": [...], "status": ..., "minimality": ... }

QveProblem load_problem(const std::string& path, bool renormalize = false);
QveProblem problem_from_json_text(const std::string& text, bool renormalize = false);

void save_problem(const QveProblem& p, const std::string& path,
                  const std::string& meta_json_text = "");
std::string problem_to_json_text(const QveProblem& p,
                                 const std::string& meta_json_text = "");

void save_report(const solvers::SolverReport& rep, const std::string& path);
std::string report_to_json_text(const solvers::SolverReport& rep);

} // namespace qve::instances
