#include "ckg/baselines.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ckg/stats.hpp"

namespace ckg {

double expected_improvement(double mean, double std, double incumbent) {
    if (std < 0.0) throw std::invalid_argument("expected_improvement: negative std");
    double diff = mean - incumbent;
    if (std <= 1e-12) return std::max(diff, 0.0);
    double z = diff / std;
    return diff * norm_cdf(z) + std * norm_pdf(z);
}

double cei_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x, double incumbent) {
    double pf = pf_current(ensemble, x);
    if (incumbent == -std::numeric_limits<double>::infinity())
        return pf; // no feasible observation yet: pure PF maximisation
    if (pf == 0.0) return 0.0;
    double mu = objective.posterior_mean(x);
    double sd = std::sqrt(objective.posterior_cov(x, x));
    return expected_improvement(mu, sd, incumbent) * pf;
}

namespace {

// One joint posterior realisation of the latent function at `points`,
// via eigendecomposition (robust to degenerate posteriors).
Vector sample_joint(const GpModel& model, const std::vector<Vector>& points,
                    std::mt19937_64& rng) {
    const int m = static_cast<int>(points.size());
    Vector mean(m);
    Matrix cov(m, m);
    for (int i = 0; i < m; ++i) {
        mean[i] = model.posterior_mean(points[i]);
        for (int j = 0; j <= i; ++j) {
            double v = model.posterior_cov(points[i], points[j]);
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    Vector lam = es.eigenvalues().cwiseMax(0.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector xi(m);
    for (int i = 0; i < m; ++i) xi[i] = gauss(rng);
    return mean + es.eigenvectors() * lam.cwiseSqrt().cwiseProduct(xi);
}

} // namespace

double nei_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x, int sample_count, std::uint64_t seed) {
    const int n = objective.n();
    if (n < 1) throw std::invalid_argument("nei_value: model has no data");
    if (sample_count < 1) throw std::invalid_argument("nei_value: sample_count must be >= 1");

    std::vector<Vector> obs_points(n);
    for (int i = 0; i < n; ++i) obs_points[i] = objective.inputs().row(i).transpose();

    std::mt19937_64 rng(mix_seed(seed, 47));
    const int K = ensemble.size();
    double acc = 0.0;
    for (int s = 0; s < sample_count; ++s) {
        Vector f = sample_joint(objective, obs_points, rng);
        std::vector<char> feasible(n, 1);
        for (int k = 0; k < K; ++k) {
            Vector c = sample_joint(ensemble.models[k], obs_points, rng);
            for (int i = 0; i < n; ++i)
                if (c[i] > 0.0) feasible[i] = 0;
        }
        double incumbent = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            if (feasible[i]) incumbent = std::max(incumbent, f[i]);
        acc += cei_value(objective, ensemble, x, incumbent);
    }
    return acc / sample_count;
}

double pkg_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x_new, const Discretization& disc, const Vector& x_r) {
    double pf = pf_current(ensemble, x_new);
    if (pf == 0.0) return 0.0;
    return standard_kg_value(objective, x_r, x_new, disc) * pf;
}

Vector cts_next(const GpModel& objective, const ConstraintEnsemble& ensemble,
                const BoxDomain& domain, int candidate_count, std::uint64_t seed) {
    if (candidate_count < 1) throw std::invalid_argument("cts_next: need >= 1 candidate");
    std::vector<Vector> candidates = lhs_sample(domain, candidate_count, mix_seed(seed, 53));
    std::mt19937_64 rng(mix_seed(seed, 59));

    Vector f = sample_joint(objective, candidates, rng);
    const int K = ensemble.size();
    Matrix c(K, candidate_count);
    for (int k = 0; k < K; ++k)
        c.row(k) = sample_joint(ensemble.models[k], candidates, rng).transpose();

    int best_feasible = -1;
    double best_f = -std::numeric_limits<double>::infinity();
    int best_violation = 0;
    double min_violation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < candidate_count; ++i) {
        double violation = 0.0;
        for (int k = 0; k < K; ++k) violation += std::max(c(k, i), 0.0);
        if (violation == 0.0 && f[i] > best_f) {
            best_f = f[i];
            best_feasible = i;
        }
        if (violation < min_violation) {
            min_violation = violation;
            best_violation = i;
        }
    }
    return candidates[best_feasible >= 0 ? best_feasible : best_violation];
}

} // namespace ckg
