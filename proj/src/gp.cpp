#include "ckg/gp.hpp"

#include <cmath>
#include <random>

#include "ckg/stats.hpp"

namespace ckg {

void KernelParams::validate(int d) const {
    if (lengthscales.size() != d)
        throw std::invalid_argument("KernelParams: lengthscale dimension mismatch");
    if ((lengthscales.array() <= 0.0).any())
        throw std::invalid_argument("KernelParams: lengthscales must be positive");
    if (signal_variance <= 0.0)
        throw std::invalid_argument("KernelParams: signal_variance must be positive");
    if (noise_variance < 0.0)
        throw std::invalid_argument("KernelParams: noise_variance must be nonnegative");
}

double kernel_eval(const KernelParams& params, const Vector& a, const Vector& b) {
    if (a.size() != b.size() || a.size() != params.lengthscales.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    double q = ((a - b).cwiseQuotient(params.lengthscales)).squaredNorm();
    return params.signal_variance * std::exp(-0.5 * q);
}

namespace {

Matrix gram(const KernelParams& params, const Matrix& X) {
    const int n = static_cast<int>(X.rows());
    Matrix K(n, n);
    for (int i = 0; i < n; ++i) {
        K(i, i) = params.signal_variance;
        for (int j = 0; j < i; ++j) {
            double v = kernel_eval(params, X.row(i).transpose(), X.row(j).transpose());
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

// Factor K + I*(noise + jitter), escalating jitter x10 from 1e-12*sv to
// 1e-4*sv until the factorisation succeeds.
Eigen::LLT<Matrix> factor_with_jitter(const Matrix& K, double noise_variance,
                                      double signal_variance, double& jitter_out) {
    const int n = static_cast<int>(K.rows());
    for (double jitter = 1e-12 * signal_variance; jitter <= 1.0000001e-4 * signal_variance;
         jitter *= 10.0) {
        Matrix A = K;
        A.diagonal().array() += noise_variance + jitter;
        Eigen::LLT<Matrix> llt(A);
        if (llt.info() == Eigen::Success) {
            jitter_out = jitter;
            return llt;
        }
    }
    (void)n;
    throw std::runtime_error("GpModel: Gram matrix not positive definite after max jitter");
}

} // namespace

GpModel::GpModel(KernelParams params, Matrix inputs, Vector outputs, double prior_mean)
    : params_(std::move(params)), inputs_(std::move(inputs)), outputs_(std::move(outputs)),
      prior_mean_(prior_mean) {
    if (inputs_.rows() != outputs_.size())
        throw std::invalid_argument("GpModel: inputs/outputs length mismatch");
    params_.validate(static_cast<int>(inputs_.cols() > 0 ? inputs_.cols()
                                                         : params_.lengthscales.size()));
    if (n() > 0) {
        llt_ = factor_with_jitter(gram(params_, inputs_), params_.noise_variance,
                                  params_.signal_variance, jitter_);
        alpha_ = llt_.solve((outputs_.array() - prior_mean_).matrix());
    }
}

Vector GpModel::cross_kernel(const Vector& x) const {
    Vector k(n());
    for (int i = 0; i < n(); ++i)
        k[i] = kernel_eval(params_, x, inputs_.row(i).transpose());
    return k;
}

double GpModel::posterior_mean(const Vector& x) const {
    if (n() == 0) return prior_mean_;
    return prior_mean_ + cross_kernel(x).dot(alpha_);
}

double GpModel::posterior_cov(const Vector& x, const Vector& x2) const {
    const bool same = (&x == &x2) || (x - x2).squaredNorm() == 0.0;
    double prior = kernel_eval(params_, x, x2);
    double v = prior;
    if (n() > 0) {
        Vector kx = cross_kernel(x);
        if (same) {
            Vector w = llt_.matrixL().solve(kx);
            v = prior - w.squaredNorm();
        } else {
            Vector kx2 = cross_kernel(x2);
            Vector w = llt_.matrixL().solve(kx);
            Vector w2 = llt_.matrixL().solve(kx2);
            v = prior - w.dot(w2);
        }
    }
    if (same && v < 0.0) {
        if (v < -1e-9)
            throw std::runtime_error("GpModel: posterior variance below clamp threshold");
        v = 0.0;
    }
    return v;
}

double GpModel::sigma_tilde(const Vector& x, const Vector& x_new) const {
    double denom2 = posterior_cov(x_new, x_new) + params_.noise_variance + jitter_;
    if (denom2 <= 1e-300)
        throw std::runtime_error("sigma_tilde: zero predictive variance at x_new");
    return posterior_cov(x, x_new) / std::sqrt(denom2);
}

GpModel::MeanVar GpModel::fantasy_posterior(const Vector& x, const Vector& x_new,
                                            double z) const {
    double st = sigma_tilde(x, x_new);
    double mean = posterior_mean(x) + st * z;
    double variance = posterior_cov(x, x) - st * st;
    if (variance < 0.0) variance = 0.0;
    return {mean, variance};
}

double log_marginal_likelihood(const KernelParams& params, const Matrix& inputs,
                               const Vector& outputs, double prior_mean) {
    const int n = static_cast<int>(outputs.size());
    if (n == 0) return 0.0;
    double jitter = 0.0;
    Eigen::LLT<Matrix> llt = factor_with_jitter(gram(params, inputs), params.noise_variance,
                                                params.signal_variance, jitter);
    Vector r = outputs.array() - prior_mean;
    Vector alpha = llt.solve(r);
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(llt.matrixLLT()(i, i));
    return -0.5 * r.dot(alpha) - logdet - 0.5 * n * std::log(2.0 * M_PI);
}

GpModel gp_fit(const Matrix& inputs, const Vector& outputs, const BoxDomain& domain,
               const FitConfig& config) {
    const int n = static_cast<int>(outputs.size());
    if (n < 1) throw std::invalid_argument("gp_fit: need at least one observation");
    if (!outputs.allFinite()) throw std::invalid_argument("gp_fit: non-finite outputs");
    const int d = domain.dim();
    const bool learn_noise = !config.fixed_noise_variance.has_value();
    const int p = d + 1 + (learn_noise ? 1 : 0);

    // Search space: log of each hyperparameter.
    Vector lo(p), hi(p);
    for (int i = 0; i < d; ++i) {
        lo[i] = std::log(config.lengthscale_lo);
        hi[i] = std::log(config.lengthscale_hi);
    }
    lo[d] = std::log(config.signal_var_lo);
    hi[d] = std::log(config.signal_var_hi);
    if (learn_noise) {
        lo[d + 1] = std::log(config.noise_var_lo);
        hi[d + 1] = std::log(config.noise_var_hi);
    }
    BoxDomain logspace(lo, hi);

    auto unpack = [&](const Vector& theta) {
        KernelParams kp;
        kp.lengthscales = theta.head(d).array().exp();
        kp.signal_variance = std::exp(theta[d]);
        kp.noise_variance = learn_noise ? std::exp(theta[d + 1])
                                        : *config.fixed_noise_variance;
        return kp;
    };
    auto objective = [&](const Vector& theta) -> double {
        try {
            return log_marginal_likelihood(unpack(theta), inputs, outputs);
        } catch (const std::runtime_error&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    OptimizerConfig oc = config.optimizer;
    oc.starts = config.multistarts;
    oc.screening_grid_size = std::max(oc.screening_grid_size, 2 * config.multistarts);
    OptResult best = maximize_bounded(objective, logspace, oc, mix_seed(config.seed, 17));
    return GpModel(unpack(best.argmax), inputs, outputs, 0.0);
}

} // namespace ckg
