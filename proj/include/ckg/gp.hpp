#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ckg/design_optim.hpp"
#include "ckg/domain.hpp"

namespace ckg {

// Squared-exponential kernel hyperparameters plus observation noise.
struct KernelParams {
    Vector lengthscales;       // length d, all > 0
    double signal_variance = 1.0;
    double noise_variance = 0.0; // sigma_eps^2

    void validate(int d) const;
};

double kernel_eval(const KernelParams& params, const Vector& a, const Vector& b);

struct FitConfig {
    std::optional<double> fixed_noise_variance; // set for deterministic outputs
    int multistarts = 8;
    std::uint64_t seed = 0;
    // Bounds in the (scaled) input space, log-space search.
    double lengthscale_lo = 1e-3, lengthscale_hi = 10.0;
    double signal_var_lo = 1e-3, signal_var_hi = 1e3;
    double noise_var_lo = 1e-8, noise_var_hi = 10.0;
    OptimizerConfig optimizer{.starts = 1, .max_evals_per_start = 400,
                              .tolerance = 1e-5, .screening_grid_size = 16};
};

// Immutable fitted Gaussian process. All posterior queries are pure.
class GpModel {
public:
    GpModel() = default; // empty prior model, params all-unit
    GpModel(KernelParams params, Matrix inputs, Vector outputs, double prior_mean = 0.0);

    int n() const { return static_cast<int>(outputs_.size()); }
    int dim() const { return static_cast<int>(params_.lengthscales.size()); }
    const KernelParams& params() const { return params_; }
    const Matrix& inputs() const { return inputs_; }
    const Vector& outputs() const { return outputs_; }
    double prior_mean() const { return prior_mean_; }
    double jitter() const { return jitter_; }

    double posterior_mean(const Vector& x) const;
    // Posterior covariance of the latent function between x and x2;
    // the x == x2 variance is clamped to >= 0.
    double posterior_cov(const Vector& x, const Vector& x2) const;

    // Future-posterior standard deviation of mu^{n+1}(x) given a pending
    // sample at x_new: k^n(x, x_new) / sqrt(k^n(x_new, x_new) + sigma_eps^2).
    double sigma_tilde(const Vector& x, const Vector& x_new) const;

    // One-step-ahead posterior at x after fantasising an observation at
    // x_new parametrised by the standard-normal draw z.
    struct MeanVar {
        double mean;
        double variance;
    };
    MeanVar fantasy_posterior(const Vector& x, const Vector& x_new, double z) const;

    // k^n(X*, x) against all training inputs (internal building block,
    // exposed for batched acquisition evaluation).
    Vector cross_kernel(const Vector& x) const;
    const Eigen::LLT<Matrix>& factorization() const { return llt_; }

private:
    KernelParams params_;
    Matrix inputs_;  // n x d
    Vector outputs_; // n
    double prior_mean_ = 0.0;
    double jitter_ = 0.0;
    Eigen::LLT<Matrix> llt_; // factor of K(X,X) + I*(noise + jitter)
    Vector alpha_;           // (K + I sigma^2)^{-1} (y - mu0)
};

// Maximum-likelihood fit over a multistart bounded search in log space.
GpModel gp_fit(const Matrix& inputs, const Vector& outputs, const BoxDomain& domain,
               const FitConfig& config = {});

// Log marginal likelihood of the data under the given hyperparameters.
double log_marginal_likelihood(const KernelParams& params, const Matrix& inputs,
                               const Vector& outputs, double prior_mean = 0.0);

} // namespace ckg
