#pragma once

#include <cstdint>

#include "qve/problem.hpp"

namespace qve::mc {

struct McConfig {
    long trials = 100000;
    long max_population = 10000;  // a generation beyond this counts as survival
    std::uint64_t seed = 0;
    int start_state = 0;
};

struct McEstimate {
    double estimate = 0.0;   // fraction of trials that went extinct
    double std_error = 0.0;  // binomial, sqrt(p(1-p)/trials)
};

/// Solver-free oracle: simulate the branching process directly. Each
/// individual in state i dies with probability a_i or is replaced by two
/// offspring in states (j,k) with probability b_ijk, decided by a single
/// uniform draw against the cumulative distribution over the 1 + N^2
/// outcomes. Generations are processed breadth-first; a trial whose live
/// population exceeds max_population counts as surviving, which biases
/// the extinction estimate downward, never upward. Trial t draws from
/// its own SplitMix64 stream derived from seed + t, so runs are
/// reproducible and trials order-independent.
McEstimate estimate_extinction(const QveProblem& p, const McConfig& cfg);

} // namespace qve::mc
