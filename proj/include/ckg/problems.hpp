#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ckg/domain.hpp"

namespace ckg {

// A constrained black-box benchmark problem (maximisation convention;
// feasible iff every constraint value <= 0).
struct ProblemSpec {
    std::string name;
    BoxDomain domain;
    std::function<double(const Vector&)> objective_fn;
    std::vector<std::function<double(const Vector&)>> constraint_fns;
    double noise_std = 0.0;
    double penalty_M = 0.0;

    int num_constraints() const { return static_cast<int>(constraint_fns.size()); }
    bool feasible(const Vector& x) const {
        for (const auto& c : constraint_fns)
            if (c(x) > 0.0) return false;
        return true;
    }
};

struct Observation {
    Vector x;
    double y;
    Vector c;
};

struct Optimum {
    Vector point;
    double value;
};

// Closed-form evaluation of the bundled 2-d test functions. Objectives are
// negated from their min-problem statements; constraints are verbatim.
struct EvalResult {
    double objective;
    Vector constraints;
};
EvalResult mystery(const Vector& x);
EvalResult new_branin(const Vector& x);
EvalResult test_function_2(const Vector& x);

// Seeded noisy objective observation; constraint values are deterministic.
Observation observe(const ProblemSpec& spec, const Vector& x, std::uint64_t seed);

// Exact (noiseless) opportunity cost of recommending x_r.
double opportunity_cost(const ProblemSpec& spec, const Optimum& opt, const Vector& x_r);

// Dense-grid feasible maximisation followed by penalised local refinement.
Optimum brute_force_optimum(const ProblemSpec& spec, int grid_per_axis = 2000);

// Registry of bundled problems: "mystery", "new-branin", "test-function-2".
std::vector<std::string> problem_names();
ProblemSpec get_problem(const std::string& name, double noise_std = 0.0);
// Cached brute-forced optimum for a registered problem.
const Optimum& get_optimum(const std::string& name);

} // namespace ckg
