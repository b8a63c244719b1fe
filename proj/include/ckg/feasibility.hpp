#pragma once

#include <cstdint>
#include <vector>

#include "ckg/gp.hpp"

namespace ckg {

// Independent constraint GPs sharing one domain; feasible iff c_k(x) <= 0
// for every k.
struct ConstraintEnsemble {
    std::vector<GpModel> models;

    int size() const { return static_cast<int>(models.size()); }
};

// Standard-normal draws parametrising one-step-ahead posteriors.
struct FantasySample {
    double z_y = 0.0;
    Vector z_c;
};

inline constexpr double kVarianceFloor = 1e-12;

// Product over constraints of Phi(-mu_k/sqrt(var_k)); indicator fallback
// when the posterior variance is resolved below the floor.
double pf_current(const ConstraintEnsemble& ensemble, const Vector& x);

// One-step-lookahead probability of feasibility under fantasy draws z_c.
double pf_future(const ConstraintEnsemble& ensemble, const Vector& x,
                 const Vector& x_new, const Vector& z_c);

// Recommendation utility mu_y^n(x) * PF^n(x).
double utility(const GpModel& objective, const ConstraintEnsemble& ensemble,
               const Vector& x);

// argmax of utility over the domain via seeded multistart search.
Vector recommend(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const BoxDomain& domain, const OptimizerConfig& config,
                 std::uint64_t seed = 0);

} // namespace ckg
