#pragma once

#include <cstdint>
#include <vector>

#include "ckg/epigraph.hpp"
#include "ckg/feasibility.hpp"
#include "ckg/gp.hpp"

namespace ckg {

struct CkgConfig {
    int n_y = 9;                // objective quantile count
    int n_c_per_constraint = 3; // quantile count per constraint
    int mc_samples_nc = 20;     // Z_c draws in the outer Monte-Carlo average
    int candidate_count = 20;   // outer LHS candidates
    int top_subset = 3;         // candidates fine-optimised
    double dedup_tolerance = 1e-4;
    OptimizerConfig inner_optimizer{.starts = 1, .max_evals_per_start = 120,
                                    .tolerance = 1e-5, .screening_grid_size = 50};
    OptimizerConfig fine_optimizer{.starts = 1, .max_evals_per_start = 150,
                                   .tolerance = 1e-5, .screening_grid_size = 1};
};

// Inner-optimisation peak locations X_d used for the closed-form discrete KG.
struct Discretization {
    std::vector<Vector> points;
    double dedup_tolerance = 1e-4;

    // Adds x unless an existing point is within dedup_tolerance.
    void add(const Vector& x);
};

// Gaussian-quantile z values: n points spread over [0.1, 0.9] (a single
// point sits at the median, i.e. z = 0).
std::vector<double> quantile_z_values(int n);

// Builds X_d by solving the inner problem
//   max_x [mu_y(x) + sigma_tilde_y(x, x_new) z_y] * PF^{n+1}(x; x_new, z_c)
// for the Cartesian product of objective and per-constraint quantile
// z-tuples, each seeded from the best point of a shared screening grid.
// The current recommendation x_r is always appended.
Discretization build_discretization(const GpModel& objective,
                                    const ConstraintEnsemble& ensemble,
                                    const Vector& x_r, const Vector& x_new,
                                    const CkgConfig& config, const BoxDomain& domain,
                                    std::uint64_t seed = 0);

// Monte-Carlo cKG estimate at x_new over a fixed discretisation: the average
// over mc_samples_nc draws of Z_c of the discrete KG with
//   mu_i = mu_y(x_i) PF^{n+1}(x_i), sigma_i = sigma_tilde_y(x_i, x_new) PF^{n+1}(x_i)
// and baseline mu_y(x_r) PF^{n+1}(x_r). Deterministic given seed.
double ckg_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x_r, const Vector& x_new, const Discretization& disc,
                 const CkgConfig& config, std::uint64_t seed);

struct CkgMaximizeResult {
    Vector argmax;
    double value;
    bool exploration_fallback = false;
};

// Outer maximisation: score LHS candidates (each with its own discretisation),
// fine-optimise the best top_subset holding discretisation and Z_c draws
// fixed, return the overall argmax. Deterministic given seed.
CkgMaximizeResult ckg_maximize(const GpModel& objective, const ConstraintEnsemble& ensemble,
                               const BoxDomain& domain, const CkgConfig& config,
                               std::uint64_t seed, const OptimizerConfig& recommend_config);

// Standard (unconstrained) discrete KG sharing the same discretisation and
// baseline; the K = 0 reduction of ckg_value and the KG factor of pKG.
double standard_kg_value(const GpModel& objective, const Vector& x_r, const Vector& x_new,
                         const Discretization& disc);

} // namespace ckg
