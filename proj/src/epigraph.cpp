#include "ckg/epigraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ckg/stats.hpp"

namespace ckg {

double kg_discrete(const EpigraphInput& input) {
    const auto m = input.mu.size();
    if (m < 1 || input.sigma.size() != m)
        throw std::invalid_argument("kg_discrete: mu and sigma must be nonempty, equal length");
    if (!input.mu.allFinite() || !input.sigma.allFinite() || !std::isfinite(input.mu_star))
        throw std::invalid_argument("kg_discrete: non-finite input");

    // Sort by increasing gradient; among (near-)equal gradients keep only the
    // largest intercept to avoid zero division at intersections.
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (input.sigma[a] != input.sigma[b]) return input.sigma[a] < input.sigma[b];
        return input.mu[a] < input.mu[b];
    });
    const double sigma_tie_tol = 1e-12;
    std::vector<double> mu, sg;
    mu.reserve(m);
    sg.reserve(m);
    for (int idx : order) {
        if (!sg.empty() && input.sigma[idx] - sg.back() <= sigma_tie_tol) {
            // same gradient: keep max intercept (sorted ascending, so replace)
            if (input.mu[idx] > mu.back()) mu.back() = input.mu[idx];
            continue;
        }
        mu.push_back(input.mu[idx]);
        sg.push_back(input.sigma[idx]);
    }

    const double inf = std::numeric_limits<double>::infinity();
    const int k = static_cast<int>(mu.size());
    // Upper-envelope sweep: I holds envelope line indices, Z the breakpoints.
    std::vector<int> I{0};
    std::vector<double> Z{-inf};
    for (int j = 1; j < k; ++j) {
        while (true) {
            int i = I.back();
            double z = (mu[i] - mu[j]) / (sg[j] - sg[i]);
            if (z <= Z.back() && I.size() > 1) {
                I.pop_back();
                Z.pop_back();
                continue;
            }
            if (z <= Z.back()) {
                // j dominates the single remaining line everywhere
                I.back() = j;
                break;
            }
            I.push_back(j);
            Z.push_back(z);
            break;
        }
    }
    Z.push_back(inf);

    double expectation = 0.0;
    for (size_t t = 0; t < I.size(); ++t) {
        double dPhi = norm_cdf(Z[t + 1]) - norm_cdf(Z[t]);
        double dphi = norm_pdf(Z[t + 1]) - norm_pdf(Z[t]);
        expectation += mu[I[t]] * dPhi - sg[I[t]] * dphi;
    }
    return expectation - input.mu_star;
}

} // namespace ckg
