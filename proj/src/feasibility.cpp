#include "ckg/feasibility.hpp"

#include <cmath>

#include "ckg/stats.hpp"

namespace ckg {

double pf_current(const ConstraintEnsemble& ensemble, const Vector& x) {
    double pf = 1.0;
    for (const auto& model : ensemble.models) {
        double mu = model.posterior_mean(x);
        double var = model.posterior_cov(x, x);
        if (var <= kVarianceFloor)
            pf *= (mu <= 0.0) ? 1.0 : 0.0;
        else
            pf *= norm_cdf(-mu / std::sqrt(var));
        if (pf == 0.0) break;
    }
    return pf;
}

double pf_future(const ConstraintEnsemble& ensemble, const Vector& x,
                 const Vector& x_new, const Vector& z_c) {
    if (z_c.size() != ensemble.size())
        throw std::invalid_argument("pf_future: z_c length must equal constraint count");
    double pf = 1.0;
    for (int k = 0; k < ensemble.size(); ++k) {
        auto [mu, var] = ensemble.models[k].fantasy_posterior(x, x_new, z_c[k]);
        if (var <= kVarianceFloor)
            pf *= (mu <= 0.0) ? 1.0 : 0.0;
        else
            pf *= norm_cdf(-mu / std::sqrt(var));
        if (pf == 0.0) break;
    }
    return pf;
}

double utility(const GpModel& objective, const ConstraintEnsemble& ensemble,
               const Vector& x) {
    return objective.posterior_mean(x) * pf_current(ensemble, x);
}

Vector recommend(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const BoxDomain& domain, const OptimizerConfig& config,
                 std::uint64_t seed) {
    auto fn = [&](const Vector& x) { return utility(objective, ensemble, x); };
    return maximize_bounded(fn, domain, config, mix_seed(seed, 101)).argmax;
}

} // namespace ckg
