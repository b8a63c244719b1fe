#include "ckg/problems.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "ckg/design_optim.hpp"
#include "ckg/stats.hpp"

namespace ckg {

namespace {

void check_domain(const BoxDomain& domain, const Vector& x, const char* name) {
    if (!domain.contains(x))
        throw std::invalid_argument(std::string(name) + ": point outside domain");
}

BoxDomain mystery_domain() {
    Vector lo(2), hi(2);
    lo << 0.0, 0.0;
    hi << 5.0, 5.0;
    return {lo, hi};
}

BoxDomain new_branin_domain() {
    Vector lo(2), hi(2);
    lo << -5.0, 0.0;
    hi << 10.0, 15.0;
    return {lo, hi};
}

BoxDomain tf2_domain() {
    return BoxDomain::unit_cube(2);
}

} // namespace

EvalResult mystery(const Vector& x) {
    check_domain(mystery_domain(), x, "mystery");
    double x1 = x[0], x2 = x[1];
    double raw = 2.0 + 0.01 * std::pow(x2 - x1 * x1, 2) + std::pow(1.0 - x1, 2) +
                 2.0 * std::pow(2.0 - x2, 2) +
                 7.0 * std::sin(0.5 * x1) * std::sin(0.7 * x1 * x2);
    Vector c(1);
    c[0] = -std::sin(x1 - x2 - M_PI / 8.0);
    return {-raw, c};
}

EvalResult new_branin(const Vector& x) {
    check_domain(new_branin_domain(), x, "new_branin");
    double x1 = x[0], x2 = x[1];
    double raw = -std::pow(x1 - 10.0, 2) - std::pow(x2 - 15.0, 2);
    double branin = std::pow(x2 - 5.1 / (4.0 * M_PI * M_PI) * x1 * x1 +
                                 5.0 / M_PI * x1 - 6.0,
                             2) +
                    10.0 * (1.0 - 1.0 / (8.0 * M_PI)) * std::cos(x1) + 5.0;
    Vector c(1);
    c[0] = branin;
    return {-raw, c};
}

EvalResult test_function_2(const Vector& x) {
    check_domain(tf2_domain(), x, "test_function_2");
    double x1 = x[0], x2 = x[1];
    double raw = -std::pow(x1 - 1.0, 2) - std::pow(x2 - 0.5, 2);
    Vector c(3);
    c[0] = std::pow(x1 - 3.0, 2) + std::pow(x2 + 2.0, 2) - 12.0;
    c[1] = 10.0 * x1 + x2 - 7.0;
    c[2] = std::pow(x1 - 0.5, 2) + std::pow(x2 - 0.5, 2) - 0.2;
    return {-raw, c};
}

Observation observe(const ProblemSpec& spec, const Vector& x, std::uint64_t seed) {
    if (!spec.domain.contains(x))
        throw std::invalid_argument("observe: point outside domain");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Observation obs;
    obs.x = x;
    obs.y = spec.objective_fn(x) + spec.noise_std * gauss(rng);
    obs.c.resize(spec.num_constraints());
    for (int k = 0; k < spec.num_constraints(); ++k) obs.c[k] = spec.constraint_fns[k](x);
    return obs;
}

double opportunity_cost(const ProblemSpec& spec, const Optimum& opt, const Vector& x_r) {
    if (!spec.domain.contains(x_r))
        throw std::invalid_argument("opportunity_cost: point outside domain");
    if (spec.feasible(x_r)) return opt.value - spec.objective_fn(x_r);
    return opt.value - spec.penalty_M;
}

Optimum brute_force_optimum(const ProblemSpec& spec, int grid_per_axis) {
    const int d = spec.domain.dim();
    if (d > 3) throw std::invalid_argument("brute_force_optimum: d <= 3 only");

    // Dense feasible grid scan.
    Vector best_x;
    double best_f = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(d, 0);
    Vector x(d);
    while (true) {
        for (int j = 0; j < d; ++j)
            x[j] = spec.domain.lower[j] + (spec.domain.upper[j] - spec.domain.lower[j]) *
                                              idx[j] / (grid_per_axis - 1);
        if (spec.feasible(x)) {
            double f = spec.objective_fn(x);
            if (f > best_f) {
                best_f = f;
                best_x = x;
            }
        }
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[j] < grid_per_axis) break;
            idx[j] = 0;
        }
        if (j == d) break;
    }
    if (!best_x.size())
        throw std::runtime_error("brute_force_optimum: no feasible grid point");

    // Local refinement with a feasibility-penalised objective.
    auto penalised = [&](const Vector& p) {
        double v = spec.objective_fn(p);
        for (const auto& c : spec.constraint_fns) v -= 1e8 * std::max(c(p), 0.0);
        return v;
    };
    OptimizerConfig oc{.starts = 1, .max_evals_per_start = 2000, .tolerance = 1e-9,
                       .screening_grid_size = 1};
    OptResult r = maximize_bounded(penalised, spec.domain, oc, 0, {best_x});
    if (spec.feasible(r.argmax) && spec.objective_fn(r.argmax) > best_f)
        return {r.argmax, spec.objective_fn(r.argmax)};
    return {best_x, best_f};
}

std::vector<std::string> problem_names() {
    return {"mystery", "new-branin", "test-function-2"};
}

ProblemSpec get_problem(const std::string& name, double noise_std) {
    ProblemSpec spec;
    spec.name = name;
    spec.noise_std = noise_std;
    if (name == "mystery") {
        spec.domain = mystery_domain();
        spec.objective_fn = [](const Vector& x) { return mystery(x).objective; };
        spec.constraint_fns = {[](const Vector& x) { return mystery(x).constraints[0]; }};
    } else if (name == "new-branin") {
        spec.domain = new_branin_domain();
        spec.objective_fn = [](const Vector& x) { return new_branin(x).objective; };
        spec.constraint_fns = {[](const Vector& x) { return new_branin(x).constraints[0]; }};
    } else if (name == "test-function-2") {
        spec.domain = tf2_domain();
        spec.objective_fn = [](const Vector& x) { return test_function_2(x).objective; };
        for (int k = 0; k < 3; ++k)
            spec.constraint_fns.push_back(
                [k](const Vector& x) { return test_function_2(x).constraints[k]; });
    } else {
        throw std::invalid_argument("unknown problem: " + name);
    }
    return spec;
}

const Optimum& get_optimum(const std::string& name) {
    static std::map<std::string, Optimum> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, brute_force_optimum(get_problem(name))).first;
    return it->second;
}

} // namespace ckg
