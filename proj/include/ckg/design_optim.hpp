#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ckg/domain.hpp"

namespace ckg {

struct OptimizerConfig {
    int starts = 5;
    int max_evals_per_start = 200;
    double tolerance = 1e-6;
    int screening_grid_size = 0; // 0 -> 100 * d
};

// Latin hypercube design: `count` points, one per equal-width stratum on
// every axis. Deterministic given seed.
std::vector<Vector> lhs_sample(const BoxDomain& domain, int count, std::uint64_t seed);

// Multistart bounded maximisation: screen an LHS set (plus any caller-supplied
// start points), then run a projected local search from the best `starts`
// screening points. Never returns a point outside the box, and the returned
// value is at least the best screening value.
struct OptResult {
    Vector argmax;
    double value;
};

OptResult maximize_bounded(const std::function<double(const Vector&)>& objective,
                           const BoxDomain& domain, const OptimizerConfig& config,
                           std::uint64_t seed,
                           const std::vector<Vector>& extra_starts = {});

} // namespace ckg
