#pragma once

#include <Eigen/Dense>

namespace ckg {

// A family of lines mu_i + sigma_i * Z and a baseline performance mu_star.
struct EpigraphInput {
    Eigen::VectorXd mu;    // intercepts
    Eigen::VectorXd sigma; // gradients (sigma-tilde over the discretisation)
    double mu_star = 0.0;
};

// Exact E_Z[max_i (mu_i + sigma_i Z)] - mu_star for Z ~ N(0,1), computed by
// the sorted upper-envelope sweep. Lines with (numerically) equal gradients
// are pre-filtered keeping the largest intercept.
double kg_discrete(const EpigraphInput& input);

} // namespace ckg
