#include "ckg/design_optim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ckg/stats.hpp"

namespace ckg {

std::vector<Vector> lhs_sample(const BoxDomain& domain, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("lhs_sample: count must be >= 1");
    const int d = domain.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Per axis: a random permutation of strata, jittered within each stratum.
    Matrix u(count, d);
    std::vector<int> perm(count);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < count; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < count; ++i)
            u(i, j) = (perm[i] + unif(rng)) / count;
    }
    std::vector<Vector> points(count);
    for (int i = 0; i < count; ++i)
        points[i] = domain.from_unit(u.row(i).transpose());
    return points;
}

namespace {

// Compass (pattern) search with per-axis steps and box projection.
OptResult local_search(const std::function<double(const Vector&)>& objective,
                       const BoxDomain& domain, Vector x, double fx,
                       int max_evals, double tolerance) {
    const int d = domain.dim();
    Vector range = domain.upper - domain.lower;
    Vector step = 0.1 * range;
    const double min_rel_step = std::max(tolerance, 1e-12);
    int evals = 0;
    while (evals < max_evals) {
        bool improved = false;
        for (int j = 0; j < d && evals < max_evals; ++j) {
            for (double sgn : {+1.0, -1.0}) {
                Vector cand = x;
                cand[j] = std::min(std::max(x[j] + sgn * step[j], domain.lower[j]),
                                   domain.upper[j]);
                if (cand[j] == x[j]) continue;
                double fc = objective(cand);
                ++evals;
                if (std::isfinite(fc) && fc > fx) {
                    x = cand;
                    fx = fc;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
            if ((step.cwiseQuotient(range)).maxCoeff() < min_rel_step) break;
        }
    }
    return {x, fx};
}

} // namespace

OptResult maximize_bounded(const std::function<double(const Vector&)>& objective,
                           const BoxDomain& domain, const OptimizerConfig& config,
                           std::uint64_t seed, const std::vector<Vector>& extra_starts) {
    const int d = domain.dim();
    int grid = config.screening_grid_size > 0 ? config.screening_grid_size : 100 * d;

    std::vector<Vector> screen = lhs_sample(domain, grid, mix_seed(seed, 0));
    for (const auto& s : extra_starts) screen.push_back(domain.clamp(s));

    std::vector<std::pair<double, int>> scored;
    scored.reserve(screen.size());
    for (int i = 0; i < static_cast<int>(screen.size()); ++i) {
        double f = objective(screen[i]);
        if (std::isfinite(f)) scored.emplace_back(f, i);
    }
    if (scored.empty())
        throw std::runtime_error("maximize_bounded: objective non-finite on every screening point");

    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    OptResult best{screen[scored[0].second], scored[0].first};
    int n_starts = std::min<int>(config.starts, static_cast<int>(scored.size()));
    for (int s = 0; s < n_starts; ++s) {
        OptResult r = local_search(objective, domain, screen[scored[s].second],
                                   scored[s].first, config.max_evals_per_start,
                                   config.tolerance);
        if (r.value > best.value) best = r;
    }
    return best;
}

} // namespace ckg
