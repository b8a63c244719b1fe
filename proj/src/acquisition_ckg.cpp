#include "ckg/acquisition_ckg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ckg/stats.hpp"

namespace ckg {

void Discretization::add(const Vector& x) {
    for (const auto& p : points)
        if ((p - x).norm() <= dedup_tolerance) return;
    points.push_back(x);
}

std::vector<double> quantile_z_values(int n) {
    if (n < 1) throw std::invalid_argument("quantile_z_values: n must be >= 1");
    std::vector<double> z(n);
    if (n == 1) {
        z[0] = 0.0;
        return z;
    }
    for (int i = 0; i < n; ++i)
        z[i] = norm_ppf(0.1 + 0.8 * i / (n - 1));
    return z;
}

namespace {

// Per-point posterior quantities reused across z-tuples and Z_c draws.
struct LookaheadTable {
    Vector mu_y, st_y;              // objective mean and sigma-tilde
    Matrix mu_c, st_c, var_c;       // K x m constraint tables
};

LookaheadTable tabulate(const GpModel& objective, const ConstraintEnsemble& ensemble,
                        const std::vector<Vector>& points, const Vector& x_new) {
    const int m = static_cast<int>(points.size());
    const int K = ensemble.size();
    LookaheadTable t;
    t.mu_y.resize(m);
    t.st_y.resize(m);
    t.mu_c.resize(K, m);
    t.st_c.resize(K, m);
    t.var_c.resize(K, m);
    for (int i = 0; i < m; ++i) {
        t.mu_y[i] = objective.posterior_mean(points[i]);
        t.st_y[i] = objective.sigma_tilde(points[i], x_new);
        for (int k = 0; k < K; ++k) {
            const GpModel& gm = ensemble.models[k];
            t.mu_c(k, i) = gm.posterior_mean(points[i]);
            t.st_c(k, i) = gm.sigma_tilde(points[i], x_new);
            t.var_c(k, i) = gm.posterior_cov(points[i], points[i]);
        }
    }
    return t;
}

double pf_from_table(const LookaheadTable& t, int i, const Vector& z_c) {
    double pf = 1.0;
    for (int k = 0; k < z_c.size(); ++k) {
        double mean = t.mu_c(k, i) + t.st_c(k, i) * z_c[k];
        double var = t.var_c(k, i) - t.st_c(k, i) * t.st_c(k, i);
        if (var <= kVarianceFloor)
            pf *= (mean <= 0.0) ? 1.0 : 0.0;
        else
            pf *= norm_cdf(-mean / std::sqrt(var));
        if (pf == 0.0) break;
    }
    return pf;
}

} // namespace

Discretization build_discretization(const GpModel& objective,
                                    const ConstraintEnsemble& ensemble,
                                    const Vector& x_r, const Vector& x_new,
                                    const CkgConfig& config, const BoxDomain& domain,
                                    std::uint64_t seed) {
    const int K = ensemble.size();
    Discretization disc;
    disc.dedup_tolerance = config.dedup_tolerance;
    disc.points.push_back(domain.clamp(x_r)); // baseline always present

    std::vector<Vector> screen =
        lhs_sample(domain, std::max(1, config.inner_optimizer.screening_grid_size),
                   mix_seed(seed, 3));
    LookaheadTable table = tabulate(objective, ensemble, screen, x_new);

    std::vector<double> zy = quantile_z_values(config.n_y);
    std::vector<double> zc = quantile_z_values(config.n_c_per_constraint);

    // Odometer over the Cartesian product of one objective quantile and one
    // quantile per constraint.
    std::vector<int> idx(K, 0);
    for (int iy = 0; iy < config.n_y; ++iy) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            Vector z_c(K);
            for (int k = 0; k < K; ++k) z_c[k] = zc[idx[k]];
            double z_y = zy[iy];

            // Screen, then refine the best screening point continuously.
            int best_i = 0;
            double best_v = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < static_cast<int>(screen.size()); ++i) {
                double v = (table.mu_y[i] + table.st_y[i] * z_y) * pf_from_table(table, i, z_c);
                if (v > best_v) {
                    best_v = v;
                    best_i = i;
                }
            }
            auto inner = [&](const Vector& x) {
                double mu = objective.posterior_mean(x);
                double st = objective.sigma_tilde(x, x_new);
                return (mu + st * z_y) * pf_future(ensemble, x, x_new, z_c);
            };
            Vector peak = screen[best_i];
            try {
                OptimizerConfig oc = config.inner_optimizer;
                oc.screening_grid_size = 1;
                peak = maximize_bounded(inner, domain, oc, mix_seed(seed, 7),
                                        {screen[best_i]})
                           .argmax;
            } catch (const std::runtime_error&) {
                // keep the screening argmax for this tuple
            }
            disc.add(peak);

            int k = 0;
            for (; k < K; ++k) {
                if (++idx[k] < config.n_c_per_constraint) break;
                idx[k] = 0;
            }
            if (k == K) break;
        }
    }
    return disc;
}

double ckg_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x_r, const Vector& x_new, const Discretization& disc,
                 const CkgConfig& config, std::uint64_t seed) {
    if (disc.points.empty())
        throw std::invalid_argument("ckg_value: empty discretisation");
    const int K = ensemble.size();
    const int m = static_cast<int>(disc.points.size());

    LookaheadTable table = tabulate(objective, ensemble, disc.points, x_new);
    double mu_y_r = objective.posterior_mean(x_r);
    LookaheadTable rtab = tabulate(objective, ensemble, {x_r}, x_new);

    EpigraphInput input;
    input.mu.resize(m);
    input.sigma.resize(m);

    if (K == 0) {
        input.mu = table.mu_y;
        input.sigma = table.st_y;
        input.mu_star = mu_y_r;
        return kg_discrete(input);
    }

    std::mt19937_64 rng(mix_seed(seed, 29));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double acc = 0.0;
    Vector z_c(K);
    for (int s = 0; s < config.mc_samples_nc; ++s) {
        for (int k = 0; k < K; ++k) z_c[k] = gauss(rng);
        for (int i = 0; i < m; ++i) {
            double pf = pf_from_table(table, i, z_c);
            input.mu[i] = table.mu_y[i] * pf;
            input.sigma[i] = table.st_y[i] * pf;
        }
        input.mu_star = mu_y_r * pf_from_table(rtab, 0, z_c);
        acc += kg_discrete(input);
    }
    return acc / config.mc_samples_nc;
}

double standard_kg_value(const GpModel& objective, const Vector& x_r, const Vector& x_new,
                         const Discretization& disc) {
    const int m = static_cast<int>(disc.points.size());
    EpigraphInput input;
    input.mu.resize(m);
    input.sigma.resize(m);
    for (int i = 0; i < m; ++i) {
        input.mu[i] = objective.posterior_mean(disc.points[i]);
        input.sigma[i] = objective.sigma_tilde(disc.points[i], x_new);
    }
    input.mu_star = objective.posterior_mean(x_r);
    return kg_discrete(input);
}

CkgMaximizeResult ckg_maximize(const GpModel& objective, const ConstraintEnsemble& ensemble,
                               const BoxDomain& domain, const CkgConfig& config,
                               std::uint64_t seed, const OptimizerConfig& recommend_config) {
    Vector x_r = recommend(objective, ensemble, domain, recommend_config, mix_seed(seed, 11));
    std::vector<Vector> candidates =
        lhs_sample(domain, config.candidate_count, mix_seed(seed, 13));

    struct Scored {
        int index;
        double value;
        Discretization disc;
    };
    std::vector<Scored> scored;
    scored.reserve(candidates.size());
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        Discretization disc = build_discretization(objective, ensemble, x_r, candidates[i],
                                                   config, domain, mix_seed(seed, 1000 + i));
        double v = ckg_value(objective, ensemble, x_r, candidates[i], disc, config,
                             mix_seed(seed, 2000 + i));
        scored.push_back({i, v, std::move(disc)});
    }

    // Values below this are numerical residue of an already-resolved model
    // (sigma-tilde at the jitter floor), not an actual improvement signal.
    constexpr double kExhaustedTolerance = 1e-6;
    bool any_positive = std::any_of(scored.begin(), scored.end(), [](const Scored& s) {
        return s.value > kExhaustedTolerance;
    });
    if (!any_positive) {
        // Exhausted model: fall back to the candidate with the largest
        // posterior-variance product.
        int best_i = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
            double v = objective.posterior_cov(candidates[i], candidates[i]);
            for (const auto& gm : ensemble.models)
                v *= gm.posterior_cov(candidates[i], candidates[i]);
            if (v > best_v) {
                best_v = v;
                best_i = i;
            }
        }
        return {candidates[best_i], scored[best_i].value, true};
    }

    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.index < b.index;
    });

    CkgMaximizeResult best{candidates[scored[0].index], scored[0].value, false};
    int n_fine = std::min<int>(config.top_subset, static_cast<int>(scored.size()));
    for (int t = 0; t < n_fine; ++t) {
        const Scored& s = scored[t];
        std::uint64_t value_seed = mix_seed(seed, 2000 + s.index);
        // Discretisation and Z_c draws held fixed: the surface is
        // deterministic and smooth in x_new.
        auto fn = [&](const Vector& x) {
            return ckg_value(objective, ensemble, x_r, x, s.disc, config, value_seed);
        };
        try {
            OptimizerConfig oc = config.fine_optimizer;
            oc.screening_grid_size = 1;
            OptResult r =
                maximize_bounded(fn, domain, oc, mix_seed(seed, 31), {candidates[s.index]});
            if (r.value > best.value) best = {r.argmax, r.value, false};
        } catch (const std::runtime_error&) {
            // keep the coarse candidate
        }
    }
    return best;
}

} // namespace ckg
