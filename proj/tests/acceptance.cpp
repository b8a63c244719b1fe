// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run a single criterion by passing its number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "ckg/acquisition_ckg.hpp"
#include "ckg/baselines.hpp"
#include "ckg/harness.hpp"
#include "ckg/stats.hpp"

using namespace ckg;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

KernelParams params1d(double ls, double sv, double noise) {
    KernelParams p;
    p.lengthscales = Vector::Constant(1, ls);
    p.signal_variance = sv;
    p.noise_variance = noise;
    return p;
}

Vector v1(double x) {
    Vector v(1);
    v << x;
    return v;
}

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// ---------------------------------------------------------------------------
// 1. Discrete-KG exactness against a 10^6-draw MC oracle.
void criterion_1() {
    double t0 = now_seconds();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        int m = 1 + static_cast<int>(rng() % 10);
        Vector mu(m), sigma(m);
        for (int i = 0; i < m; ++i) {
            mu[i] = unif(rng);
            sigma[i] = std::abs(unif(rng));
        }
        double mu_star = unif(rng);
        double exact = kg_discrete({mu, sigma, mu_star});

        // Antithetic draws plus a control variate (the line with the largest
        // intercept, whose expectation is exact) keep the 10^6-draw oracle
        // well inside the 3e-3 budget.
        int j = 0;
        for (int i = 1; i < m; ++i)
            if (mu[i] > mu[j]) j = i;
        double acc = 0.0;
        const int N = 1000000;
        auto envelope = [&](double z) {
            double best = -1e300;
            for (int i = 0; i < m; ++i) best = std::max(best, mu[i] + sigma[i] * z);
            return best - (mu[j] + sigma[j] * z);
        };
        for (int s = 0; s < N / 2; ++s) {
            double z = gauss(rng);
            acc += envelope(z) + envelope(-z);
        }
        double mc = acc / N + mu[j] - mu_star;
        worst = std::max(worst, std::abs(exact - mc));
    }
    double dt = now_seconds() - t0;
    std::ostringstream d;
    d << "max |exact - MC| = " << worst << ", " << dt << " s";
    report(1, "discrete-KG exactness", worst <= 3e-3 && dt < 30.0, d.str());
}

// ---------------------------------------------------------------------------
// 2. Factored GP queries vs dense-solve formulas; noise-free interpolation.
void criterion_2() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0, worst_interp = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        int d = 1 + static_cast<int>(rng() % 3);
        bool noise_free = trial % 2 == 0;
        // noise-free trials use few, well-separated points and short
        // lengthscales: the interpolation check needs a Gram matrix that is
        // actually invertible at double precision
        int n = noise_free ? 2 + static_cast<int>(rng() % 5)
                           : 2 + static_cast<int>(rng() % 11);
        double sep = noise_free ? 0.15 : 0.0;
        KernelParams p;
        p.lengthscales = Vector::Constant(d, noise_free ? 0.1 + 0.15 * unif(rng)
                                                        : 0.2 + 0.3 * unif(rng));
        p.signal_variance = 0.5 + unif(rng);
        p.noise_variance = noise_free ? 0.0 : 0.1 * unif(rng);
        Matrix X(n, d);
        Vector y(n);
        for (int i = 0; i < n; ++i) {
            while (true) {
                for (int j = 0; j < d; ++j) X(i, j) = unif(rng);
                bool ok = true;
                for (int j2 = 0; j2 < i; ++j2)
                    if ((X.row(i) - X.row(j2)).norm() < sep) ok = false;
                if (ok) break;
            }
            y[i] = std::sin(5.0 * X(i, 0)) + 0.2 * unif(rng);
        }
        GpModel m(p, X, y);

        // dense formulas via a stable pivoted solve
        Matrix K(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                K(i, j) = kernel_eval(p, X.row(i).transpose(), X.row(j).transpose());
        Matrix Kn = K;
        Kn.diagonal().array() += p.noise_variance + m.jitter();
        Eigen::FullPivLU<Matrix> lu(Kn);

        for (int q = 0; q < 5; ++q) {
            Vector x(d), x2(d);
            for (int j = 0; j < d; ++j) {
                x[j] = unif(rng);
                x2[j] = unif(rng);
            }
            Vector kx(n), kx2(n);
            for (int i = 0; i < n; ++i) {
                kx[i] = kernel_eval(p, x, X.row(i).transpose());
                kx2[i] = kernel_eval(p, x2, X.row(i).transpose());
            }
            double mean_dense = kx.dot(lu.solve(y));
            double cov_dense = kernel_eval(p, x, x2) - kx.dot(lu.solve(kx2));
            worst = std::max(worst, std::abs(m.posterior_mean(x) - mean_dense));
            worst = std::max(worst, std::abs(m.posterior_cov(x, x2) - cov_dense));
        }
        if (p.noise_variance == 0.0)
            for (int i = 0; i < n; ++i)
                worst_interp = std::max(
                    worst_interp, std::abs(m.posterior_mean(X.row(i).transpose()) - y[i]));
    }
    std::ostringstream d;
    d << "max dense gap = " << worst << ", max interpolation error = " << worst_interp;
    report(2, "GP factored vs dense-solve", worst <= 1e-8 && worst_interp <= 1e-6, d.str());
}

// ---------------------------------------------------------------------------
// 3. sigma_tilde^2 vs simulated Var[mu^{n+1}(x)] over 10^5 resampled obs.
void criterion_3() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst_rel = 0.0;

    KernelParams p = params1d(0.3, 1.0, 0.15);
    const int n = 7;
    Matrix X(n, 1);
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = unif(rng);
        y[i] = std::sin(6.0 * X(i, 0));
    }
    GpModel m(p, X, y);

    for (int pair = 0; pair < 20; ++pair) {
        Vector x = v1(unif(rng)), x_new = v1(unif(rng));

        // Independent path: the exact update is affine in the observation;
        // obtain the coefficient by two dense refits.
        Matrix X2(n + 1, 1);
        X2.topRows(n) = X;
        X2(n, 0) = x_new[0];
        auto mean_after = [&](double y_new) {
            Vector y2(n + 1);
            y2.head(n) = y;
            y2[n] = y_new;
            GpModel m2(p, X2, y2);
            return m2.posterior_mean(x);
        };
        double a = mean_after(0.0);
        double b = mean_after(1.0) - a;

        double mu_pred = m.posterior_mean(x_new);
        double sd_pred = std::sqrt(m.posterior_cov(x_new, x_new) + p.noise_variance);
        double acc = 0.0, acc2 = 0.0;
        const int N = 100000;
        for (int s = 0; s < N; ++s) {
            double v = a + b * (mu_pred + sd_pred * gauss(rng));
            acc += v;
            acc2 += v * v;
        }
        double var = (acc2 - acc * acc / N) / (N - 1);
        double st2 = std::pow(m.sigma_tilde(x, x_new), 2);
        if (st2 > 1e-12)
            worst_rel = std::max(worst_rel, std::abs(var - st2) / st2);
    }
    std::ostringstream d;
    d << "max relative error = " << worst_rel;
    report(3, "sigma-tilde simulation oracle", worst_rel <= 0.02, d.str());
}

// ---------------------------------------------------------------------------
// 4. Nonnegativity: ckg_value >= -1e-6 on 100 random fitted-model/candidate pairs.
void criterion_4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    BoxDomain dom = BoxDomain::unit_cube(1);
    CkgConfig cfg;
    cfg.mc_samples_nc = 8;
    for (int model_i = 0; model_i < 10; ++model_i) {
        int n = 5 + static_cast<int>(rng() % 6);
        Matrix X(n, 1);
        Vector y(n), c(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = unif(rng);
            y[i] = std::sin(7.0 * X(i, 0)) + 0.3 * unif(rng);
            c[i] = std::cos(4.0 * X(i, 0));
        }
        FitConfig fc;
        fc.seed = model_i;
        GpModel obj = gp_fit(X, y, dom, fc);
        FitConfig cc;
        cc.fixed_noise_variance = 1e-6;
        cc.seed = model_i + 50;
        ConstraintEnsemble ens;
        ens.models.push_back(gp_fit(X, c, dom, cc));

        Vector x_r = recommend(obj, ens, dom, {}, model_i);
        for (int q = 0; q < 10; ++q) {
            Vector x_new = v1(unif(rng));
            Discretization disc =
                build_discretization(obj, ens, x_r, x_new, cfg, dom, 10 * model_i + q);
            double v = ckg_value(obj, ens, x_r, x_new, disc, cfg, 10 * model_i + q);
            worst = std::min(worst, v);
        }
    }
    std::ostringstream d;
    d << "min ckg_value = " << worst;
    report(4, "cKG nonnegativity", worst >= -1e-6, d.str());
}

// ---------------------------------------------------------------------------
// 5. Deterministic problem, cKG at an observed point ~ 0.
void criterion_5() {
    Matrix X(6, 1);
    X << 0.1, 0.25, 0.4, 0.6, 0.75, 0.9;
    Vector y(6), c(6);
    for (int i = 0; i < 6; ++i) {
        y[i] = std::sin(5.0 * X(i, 0));
        c[i] = std::cos(3.0 * X(i, 0)) - 0.5;
    }
    GpModel obj(params1d(0.2, 1.0, 0.0), X, y);
    ConstraintEnsemble ens;
    ens.models.emplace_back(params1d(0.25, 1.0, 0.0), X, c);
    BoxDomain dom = BoxDomain::unit_cube(1);
    CkgConfig cfg;
    Vector x_r = recommend(obj, ens, dom, {}, 5);

    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
        Vector x_obs = X.row(i).transpose();
        Discretization disc = build_discretization(obj, ens, x_r, x_obs, cfg, dom, i);
        worst = std::max(worst, std::abs(ckg_value(obj, ens, x_r, x_obs, disc, cfg, i)));
    }
    std::ostringstream d;
    d << "max |ckg| at observed points = " << worst;
    report(5, "vanishing at resolved points", worst <= 1e-4, d.str());
}

// ---------------------------------------------------------------------------
// 6. K = 0 reduction: cKG pipeline equals standalone standard KG, 1e-10.
void criterion_6() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    BoxDomain dom = BoxDomain::unit_cube(1);
    CkgConfig cfg;
    ConstraintEnsemble none;
    for (int trial = 0; trial < 50; ++trial) {
        int n = 4 + static_cast<int>(rng() % 8);
        Matrix X(n, 1);
        Vector y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = unif(rng);
            y[i] = std::sin(8.0 * X(i, 0));
        }
        GpModel obj(params1d(0.15 + 0.3 * unif(rng), 1.0, 0.05 * unif(rng)), X, y);
        Vector x_r = v1(unif(rng));
        Vector x_new = v1(unif(rng));
        Discretization disc = build_discretization(obj, none, x_r, x_new, cfg, dom, trial);
        double a = ckg_value(obj, none, x_r, x_new, disc, cfg, trial);
        double b = standard_kg_value(obj, x_r, x_new, disc);
        worst = std::max(worst, std::abs(a - b));
    }
    std::ostringstream d;
    d << "max |cKG - KG| = " << worst;
    report(6, "unconstrained reduction to standard KG", worst <= 1e-10, d.str());
}

// ---------------------------------------------------------------------------
// 7. NEI degenerate limit: zero noise -> |NEI - cEI| <= 1e-6 at 20 points.
void criterion_7() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix X(8, 1);
    Vector y(8), c(8);
    for (int i = 0; i < 8; ++i) {
        X(i, 0) = unif(rng);
        y[i] = std::sin(6.0 * X(i, 0));
        c[i] = std::cos(5.0 * X(i, 0));
    }
    GpModel obj(params1d(0.25, 1.0, 0.0), X, y);
    ConstraintEnsemble ens;
    ens.models.emplace_back(params1d(0.25, 1.0, 0.0), X, c);

    double incumbent = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 8; ++i)
        if (c[i] <= 0.0) incumbent = std::max(incumbent, y[i]);

    double worst = 0.0;
    for (int q = 0; q < 20; ++q) {
        Vector x = v1(unif(rng));
        worst = std::max(worst, std::abs(nei_value(obj, ens, x, 32, q) -
                                         cei_value(obj, ens, x, incumbent)));
    }
    std::ostringstream d;
    d << "max |NEI - cEI| = " << worst;
    report(7, "NEI degenerate limit", worst <= 1e-6, d.str());
}

// ---------------------------------------------------------------------------
// 8. cKG vs a full simulation oracle with exact GP updates on a 400-grid.
void criterion_8() {
    double t0 = now_seconds();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int n = 6;
    KernelParams py = params1d(0.25, 1.0, 0.1);
    KernelParams pc = params1d(0.3, 1.0, 1e-6);
    Matrix X(n, 1);
    Vector y(n), c(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = unif(rng);
        y[i] = std::sin(6.0 * X(i, 0));
        c[i] = std::cos(4.0 * X(i, 0)) - 0.3;
    }
    GpModel obj(py, X, y);
    GpModel con(pc, X, c);
    ConstraintEnsemble ens;
    ens.models.push_back(con);

    // Shared 400-point grid discretisation; x_r = grid argmax of mu*PF.
    const int G = 400;
    Discretization disc;
    disc.dedup_tolerance = 0.0;
    std::vector<Vector> grid(G);
    for (int g = 0; g < G; ++g) grid[g] = v1(g / (G - 1.0));
    disc.points = grid;
    int r_idx = 0;
    double r_best = -1e300;
    for (int g = 0; g < G; ++g) {
        double u = obj.posterior_mean(grid[g]) * pf_current(ens, grid[g]);
        if (u > r_best) {
            r_best = u;
            r_idx = g;
        }
    }
    Vector x_r = grid[r_idx];

    CkgConfig cfg;
    cfg.mc_samples_nc = 20000;

    double worst = 0.0;
    for (int q = 0; q < 10; ++q) {
        Vector x_new = v1((q + 0.5) / 10.0);

        double est = ckg_value(obj, ens, x_r, x_new, disc, cfg, 80 + q);

        // Oracle: exact dense GP refits with the fantasised sample, affine in
        // the observed values; 10^5 joint simulations of (y^{n+1}, c^{n+1}).
        Matrix X2(n + 1, 1);
        X2.topRows(n) = X;
        X2(n, 0) = x_new[0];
        auto grid_means = [&](const KernelParams& p, const Vector& base, double obs) {
            Vector z(n + 1);
            z.head(n) = base;
            z[n] = obs;
            GpModel m2(p, X2, z);
            Vector out(G);
            for (int g = 0; g < G; ++g) out[g] = m2.posterior_mean(grid[g]);
            return out;
        };
        Vector ay = grid_means(py, y, 0.0);
        Vector by = grid_means(py, y, 1.0) - ay;
        Vector ac = grid_means(pc, c, 0.0);
        Vector bc = grid_means(pc, c, 1.0) - ac;
        Vector var_c1(G);
        {
            Vector z(n + 1);
            z.head(n) = c;
            z[n] = 0.0;
            GpModel m2(pc, X2, z);
            for (int g = 0; g < G; ++g) var_c1[g] = m2.posterior_cov(grid[g], grid[g]);
        }
        double mu_y_pred = obj.posterior_mean(x_new);
        double sd_y_pred = std::sqrt(obj.posterior_cov(x_new, x_new) + py.noise_variance);
        double mu_c_pred = con.posterior_mean(x_new);
        double sd_c_pred = std::sqrt(con.posterior_cov(x_new, x_new) + pc.noise_variance);
        double mu_y_r = obj.posterior_mean(x_r);

        Vector sd_c1 = var_c1.cwiseMax(0.0).cwiseSqrt();
        double acc = 0.0;
        const int N = 100000;
        for (int s = 0; s < N; ++s) {
            double y_obs = mu_y_pred + sd_y_pred * gauss(rng);
            double c_obs = mu_c_pred + sd_c_pred * gauss(rng);
            double best = -1e300;
            double baseline = 0.0;
            for (int g = 0; g < G; ++g) {
                double muc = ac[g] + bc[g] * c_obs;
                double pf = var_c1[g] <= kVarianceFloor
                                ? (muc <= 0.0 ? 1.0 : 0.0)
                                : norm_cdf(-muc / sd_c1[g]);
                double v = (ay[g] + by[g] * y_obs) * pf;
                if (v > best) best = v;
                if (g == r_idx) baseline = mu_y_r * pf;
            }
            acc += best - baseline;
        }
        double oracle = acc / N;
        worst = std::max(worst, std::abs(est - oracle));
    }
    double dt = now_seconds() - t0;
    std::ostringstream d;
    d << "max |cKG - oracle| = " << worst << ", " << dt << " s";
    report(8, "cKG simulation-oracle equivalence", worst <= 5e-3 && dt < 300.0, d.str());
}

// ---------------------------------------------------------------------------
// 9 & 10. End-to-end convergence on Mystery (deterministic and noisy).
void convergence_criterion(int number, double noise_std) {
    double t0 = now_seconds();
    RunConfig ckg_cfg;
    ckg_cfg.problem = "mystery";
    ckg_cfg.acquisition = Acquisition::cKG;
    ckg_cfg.budget_B = 40;
    ckg_cfg.init_count = 10;
    ckg_cfg.noise_std = noise_std;
    ckg_cfg.replications = 10;
    ckg_cfg.base_seed = 1000 + number;

    RunConfig rnd_cfg = ckg_cfg;
    rnd_cfg.acquisition = Acquisition::random;

    auto results = benchmark({ckg_cfg, rnd_cfg}, 0);
    const auto& ckg_res = results[0];
    const auto& rnd_res = results[1];

    bool no_failures =
        ckg_res.failed_replications == 0 && rnd_res.failed_replications == 0;
    double ckg_init = ckg_res.aggregate.front().mean_oc;
    double ckg_final = ckg_res.aggregate.back().mean_oc;
    double rnd_final = rnd_res.aggregate.back().mean_oc;
    double dt = now_seconds() - t0;

    std::ostringstream d;
    d << "cKG OC " << ckg_init << " -> " << ckg_final << ", random final " << rnd_final
      << ", failures " << ckg_res.failed_replications + rnd_res.failed_replications
      << ", " << dt << " s";
    if (number == 9)
        report(9, "deterministic Mystery convergence",
               no_failures && ckg_final < 0.2 * ckg_init && ckg_final < rnd_final,
               d.str());
    else
        report(10, "noisy Mystery sanity", no_failures && ckg_final < rnd_final, d.str());
}

// ---------------------------------------------------------------------------
// 11. Byte-identical trace CSV bodies under a repeated seed.
void criterion_11() {
    namespace fs = std::filesystem;
    RunConfig cfg;
    cfg.problem = "mystery";
    cfg.acquisition = Acquisition::cKG;
    cfg.budget_B = 3;
    cfg.init_count = 6;
    cfg.replications = 2;
    cfg.base_seed = 7;
    cfg.ckg.candidate_count = 8;
    cfg.ckg.mc_samples_nc = 6;

    fs::path dir = fs::temp_directory_path() / "ckg_acceptance_11";
    fs::remove_all(dir);
    std::string bodies[2];
    for (int round = 0; round < 2; ++round) {
        cfg.output_path = (dir / std::to_string(round)).string();
        auto results = benchmark({cfg}, 2);
        emit_results(results[0]);
        std::ifstream f(fs::path(cfg.output_path) / "mystery_cKG_trace.csv");
        std::stringstream ss;
        ss << f.rdbuf();
        bodies[round] = ss.str();
    }
    bool pass = !bodies[0].empty() && bodies[0] == bodies[1];
    fs::remove_all(dir);
    report(11, "seeded determinism of trace CSV", pass,
           pass ? "bodies byte-identical" : "bodies differ");
}

// ---------------------------------------------------------------------------
// 12. Problem-formula fidelity and brute-force resolution doubling.
void criterion_12() {
    double worst = 0.0;
    auto gap = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };

    Vector x(2);
    x << 0.0, 0.0;
    gap(mystery(x).objective, -11.0);
    gap(mystery(x).constraints[0], std::sin(M_PI / 8.0));
    x << 1.0, 2.0;
    gap(mystery(x).objective,
        -(2.0 + 0.01 + 7.0 * std::sin(0.5) * std::sin(1.4)));
    x << 0.0, 0.0;
    gap(new_branin(x).objective, 325.0); // negated raw -325
    gap(new_branin(x).constraints[0], 36.0 + 10.0 * (1.0 - 1.0 / (8.0 * M_PI)) + 5.0);
    x << -5.0, 0.0;
    {
        double t = -5.1 / (4 * M_PI * M_PI) * 25.0 - 25.0 / M_PI - 6.0;
        gap(new_branin(x).constraints[0],
            t * t + 10.0 * (1.0 - 1.0 / (8 * M_PI)) * std::cos(-5.0) + 5.0);
    }
    x << 0.5, 0.5;
    gap(test_function_2(x).objective, 0.25);
    gap(test_function_2(x).constraints[0], 0.5);
    gap(test_function_2(x).constraints[1], -1.5);
    gap(test_function_2(x).constraints[2], -0.2);

    double worst_df = 0.0;
    for (const auto& name : problem_names()) {
        ProblemSpec spec = get_problem(name);
        Optimum coarse = brute_force_optimum(spec, 2000);
        Optimum fine = brute_force_optimum(spec, 4000);
        worst_df = std::max(worst_df, std::abs(coarse.value - fine.value));
    }
    std::ostringstream d;
    d << "max formula gap = " << worst << ", max |f*_2000 - f*_4000| = " << worst_df;
    report(12, "problem-formula fidelity", worst <= 1e-9 && worst_df <= 1e-4, d.str());
}

} // namespace

int main(int argc, char** argv) {
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    auto want = [&](int n) { return only == 0 || only == n; };

    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) convergence_criterion(9, 0.0);
    if (want(10)) convergence_criterion(10, 1.0);
    if (want(11)) criterion_11();
    if (want(12)) criterion_12();

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
