#include "ckg/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "ckg/baselines.hpp"
#include "ckg/stats.hpp"

namespace ckg {

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double column_scale(const Vector& v) {
    if (v.size() < 2) return 1.0;
    double mean = v.mean();
    double sd = std::sqrt((v.array() - mean).square().sum() / (v.size() - 1));
    return sd > 1e-12 ? sd : 1.0;
}

struct FittedModels {
    GpModel objective; // standardised outputs
    ConstraintEnsemble ensemble; // scale-normalised outputs, threshold preserved
    double y_mean = 0.0;
    double y_std = 1.0;
};

FittedModels fit_models(const Matrix& X, const Vector& y, const Matrix& C,
                        const BoxDomain& unit, double noise_std, std::uint64_t seed) {
    FittedModels fm;
    fm.y_mean = y.mean();
    double sd = column_scale(y);
    fm.y_std = sd;
    Vector ys = (y.array() - fm.y_mean) / sd;

    FitConfig oc;
    oc.seed = mix_seed(seed, 1);
    if (noise_std == 0.0) oc.fixed_noise_variance = 1e-6;
    fm.objective = gp_fit(X, ys, unit, oc);

    for (int k = 0; k < C.cols(); ++k) {
        Vector ck = C.col(k);
        ck /= column_scale(ck);
        FitConfig cc;
        cc.seed = mix_seed(seed, 2 + k);
        cc.fixed_noise_variance = 1e-6; // bundled constraints are deterministic
        fm.ensemble.models.push_back(gp_fit(X, ck, unit, cc));
    }
    return fm;
}

double best_feasible_standardised(const Vector& y, const Matrix& C, double y_mean,
                                  double y_std) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < y.size(); ++i) {
        bool ok = true;
        for (int k = 0; k < C.cols(); ++k)
            if (C(i, k) > 0.0) { ok = false; break; }
        if (ok) best = std::max(best, (y[i] - y_mean) / y_std);
    }
    return best;
}

Vector pkg_maximize(const GpModel& objective, const ConstraintEnsemble& ensemble,
                    const BoxDomain& domain, const CkgConfig& config, std::uint64_t seed,
                    const OptimizerConfig& rec_cfg) {
    ConstraintEnsemble none;
    Vector x_star = recommend(objective, none, domain, rec_cfg, mix_seed(seed, 3));
    std::vector<Vector> candidates =
        lhs_sample(domain, config.candidate_count, mix_seed(seed, 5));

    struct Scored { int index; double value; Discretization disc; };
    std::vector<Scored> scored;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        Discretization disc = build_discretization(objective, none, x_star, candidates[i],
                                                   config, domain, mix_seed(seed, 300 + i));
        scored.push_back({i, pkg_value(objective, ensemble, candidates[i], disc, x_star),
                          std::move(disc)});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.index < b.index;
    });
    Vector best = candidates[scored[0].index];
    double best_v = scored[0].value;
    int n_fine = std::min<int>(config.top_subset, static_cast<int>(scored.size()));
    for (int t = 0; t < n_fine; ++t) {
        const Scored& s = scored[t];
        auto fn = [&](const Vector& x) {
            return pkg_value(objective, ensemble, x, s.disc, x_star);
        };
        OptimizerConfig oc = config.fine_optimizer;
        oc.screening_grid_size = 1;
        OptResult r = maximize_bounded(fn, domain, oc, mix_seed(seed, 9), {candidates[s.index]});
        if (r.value > best_v) { best_v = r.value; best = r.argmax; }
    }
    return best;
}

} // namespace

Acquisition acquisition_from_string(const std::string& name) {
    if (name == "cKG") return Acquisition::cKG;
    if (name == "cEI") return Acquisition::cEI;
    if (name == "NEI") return Acquisition::NEI;
    if (name == "pKG") return Acquisition::pKG;
    if (name == "cTS") return Acquisition::cTS;
    if (name == "random") return Acquisition::random;
    throw std::invalid_argument("unknown acquisition: " + name);
}

std::string to_string(Acquisition a) {
    switch (a) {
        case Acquisition::cKG: return "cKG";
        case Acquisition::cEI: return "cEI";
        case Acquisition::NEI: return "NEI";
        case Acquisition::pKG: return "pKG";
        case Acquisition::cTS: return "cTS";
        case Acquisition::random: return "random";
    }
    return "?";
}

ReplicationRecord bo_run(const RunConfig& config, std::uint64_t replication_seed) {
    ReplicationRecord record;
    record.seed = replication_seed;

    ProblemSpec spec = get_problem(config.problem, config.noise_std);
    const Optimum& opt = get_optimum(config.problem);
    const int d = spec.domain.dim();
    const int K = spec.num_constraints();
    BoxDomain unit = BoxDomain::unit_cube(d);

    if (config.acquisition == Acquisition::cEI && config.noise_std > 0.0)
        std::cerr << "warning: cEI was designed for deterministic problems; "
                     "consider NEI for noise_std > 0\n";

    try {
        // Initial design.
        std::vector<Vector> init =
            lhs_sample(spec.domain, config.init_count, mix_seed(replication_seed, 1));
        const int total = config.init_count + config.budget_B;
        Matrix X(total, d); // unit-cube coordinates
        Vector y(total);
        Matrix C(total, K);
        int n = 0;
        for (const auto& p : init) {
            Observation obs = observe(spec, p, mix_seed(replication_seed, 5000 + n));
            X.row(n) = spec.domain.to_unit(p).transpose();
            y[n] = obs.y;
            C.row(n) = obs.c.transpose();
            ++n;
        }

        FittedModels fm = fit_models(X.topRows(n), y.head(n), C.topRows(n), unit,
                                     config.noise_std, mix_seed(replication_seed, 9000));
        Vector xr0 = recommend(fm.objective, fm.ensemble, unit, config.recommend_optimizer,
                               mix_seed(replication_seed, 9500));
        record.initial_oc = opportunity_cost(spec, opt, spec.domain.from_unit(xr0));

        for (int b = 1; b <= config.budget_B; ++b) {
            auto t0 = std::chrono::steady_clock::now();
            std::uint64_t it_seed = mix_seed(replication_seed, 100 + b);

            Vector x_next; // unit space
            switch (config.acquisition) {
                case Acquisition::cKG:
                    x_next = ckg_maximize(fm.objective, fm.ensemble, unit, config.ckg,
                                          it_seed, config.recommend_optimizer)
                                 .argmax;
                    break;
                case Acquisition::cEI: {
                    double incumbent =
                        best_feasible_standardised(y.head(n), C.topRows(n), fm.y_mean, fm.y_std);
                    auto fn = [&](const Vector& x) {
                        return cei_value(fm.objective, fm.ensemble, x, incumbent);
                    };
                    x_next = maximize_bounded(fn, unit, config.acq_optimizer, it_seed).argmax;
                    break;
                }
                case Acquisition::NEI: {
                    auto fn = [&](const Vector& x) {
                        return nei_value(fm.objective, fm.ensemble, x, config.nei_samples,
                                         it_seed);
                    };
                    x_next = maximize_bounded(fn, unit, config.acq_optimizer, it_seed).argmax;
                    break;
                }
                case Acquisition::pKG:
                    x_next = pkg_maximize(fm.objective, fm.ensemble, unit, config.ckg,
                                          it_seed, config.recommend_optimizer);
                    break;
                case Acquisition::cTS:
                    x_next = cts_next(fm.objective, fm.ensemble, unit, config.cts_candidates,
                                      it_seed);
                    break;
                case Acquisition::random: {
                    std::mt19937_64 rng(it_seed);
                    std::uniform_real_distribution<double> unif(0.0, 1.0);
                    x_next.resize(d);
                    for (int j = 0; j < d; ++j) x_next[j] = unif(rng);
                    break;
                }
            }

            Vector x_orig = spec.domain.from_unit(unit.clamp(x_next));
            Observation obs = observe(spec, x_orig, mix_seed(replication_seed, 7000 + b));
            X.row(n) = unit.clamp(x_next).transpose();
            y[n] = obs.y;
            C.row(n) = obs.c.transpose();
            ++n;

            if (config.refit_every_iteration || b == config.budget_B)
                fm = fit_models(X.topRows(n), y.head(n), C.topRows(n), unit,
                                config.noise_std, mix_seed(replication_seed, 9000 + b));

            Vector xr = recommend(fm.objective, fm.ensemble, unit, config.recommend_optimizer,
                                  mix_seed(replication_seed, 9500 + b));
            Vector xr_orig = spec.domain.from_unit(xr);
            double oc = opportunity_cost(spec, opt, xr_orig);

            auto t1 = std::chrono::steady_clock::now();
            record.iterations.push_back(
                {b, x_orig, obs.y, obs.c, xr_orig, oc,
                 std::chrono::duration<double>(t1 - t0).count()});
        }
    } catch (const std::exception& e) {
        record.failed = true;
        record.failure_reason = e.what();
    }
    return record;
}

void aggregate_records(BenchmarkResult& result) {
    result.aggregate.clear();
    result.failed_replications = 0;
    std::vector<const ReplicationRecord*> ok;
    for (const auto& r : result.records) {
        if (r.failed)
            ++result.failed_replications;
        else
            ok.push_back(&r);
    }
    if (ok.empty()) return;
    result.ci_degenerate = ok.size() == 1;

    const int B = result.config.budget_B;
    for (int it = 0; it <= B; ++it) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto* r : ok) {
            double oc = it == 0 ? r->initial_oc : r->iterations[it - 1].oc;
            sum += oc;
            sumsq += oc * oc;
        }
        double nrep = static_cast<double>(ok.size());
        double mean = sum / nrep;
        double hw = 0.0;
        if (ok.size() > 1) {
            double var = (sumsq - nrep * mean * mean) / (nrep - 1.0);
            hw = 1.96 * std::sqrt(std::max(var, 0.0) / nrep);
        }
        result.aggregate.push_back({it, mean, hw, static_cast<int>(ok.size())});
    }
}

std::vector<BenchmarkResult> benchmark(const std::vector<RunConfig>& configs,
                                       int parallelism) {
    if (configs.empty()) throw std::invalid_argument("benchmark: no configs");

    // Brute-force optima once, before worker threads start.
    for (const auto& c : configs) (void)get_optimum(c.problem);

    std::vector<BenchmarkResult> results(configs.size());
    struct Cell { int config; int rep; };
    std::vector<Cell> cells;
    for (int i = 0; i < static_cast<int>(configs.size()); ++i) {
        results[i].config = configs[i];
        results[i].records.resize(configs[i].replications);
        for (int r = 0; r < configs[i].replications; ++r) cells.push_back({i, r});
    }

    int threads = parallelism;
    if (threads <= 0) {
        if (const char* env = std::getenv("CKG_THREADS")) threads = std::atoi(env);
        if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min<int>(threads, static_cast<int>(cells.size()));

    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= static_cast<int>(cells.size())) return;
            const Cell& cell = cells[i];
            const RunConfig& cfg = configs[cell.config];
            std::uint64_t seed = static_cast<std::uint64_t>(cfg.base_seed) + cell.rep;
            ReplicationRecord rec = bo_run(cfg, seed);
            rec.replication = cell.rep;
            results[cell.config].records[cell.rep] = std::move(rec);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (auto& r : results) aggregate_records(r);
    return results;
}

namespace {

std::string result_stem(const RunConfig& config) {
    return config.problem + "_" + to_string(config.acquisition);
}

void write_config_echo(std::ostream& os, const RunConfig& c) {
    os << "problem = " << c.problem << "\n"
       << "acquisition = " << to_string(c.acquisition) << "\n"
       << "budget_B = " << c.budget_B << "\n"
       << "init_count = " << c.init_count << "\n"
       << "noise_std = " << fmt(c.noise_std) << "\n"
       << "replications = " << c.replications << "\n"
       << "base_seed = " << c.base_seed << "\n"
       << "output_path = " << c.output_path << "\n"
       << "nei_samples = " << c.nei_samples << "\n"
       << "cts_candidates = " << c.cts_candidates << "\n"
       << "refit_every_iteration = " << (c.refit_every_iteration ? 1 : 0) << "\n"
       << "ckg.n_y = " << c.ckg.n_y << "\n"
       << "ckg.n_c_per_constraint = " << c.ckg.n_c_per_constraint << "\n"
       << "ckg.mc_samples_nc = " << c.ckg.mc_samples_nc << "\n"
       << "ckg.candidate_count = " << c.ckg.candidate_count << "\n"
       << "ckg.top_subset = " << c.ckg.top_subset << "\n";
}

} // namespace

void emit_results(const BenchmarkResult& result, std::ostream* echo) {
    if (result.records.empty()) throw std::invalid_argument("emit_results: no records");
    namespace fs = std::filesystem;
    fs::path dir(result.config.output_path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::string stem = result_stem(result.config);

    const int d = get_problem(result.config.problem).domain.dim();
    const int K = get_problem(result.config.problem).num_constraints();

    {
        std::ofstream f(dir / (stem + "_trace.csv"));
        if (!f) throw std::runtime_error("emit_results: cannot write trace CSV");
        f << "replication,iteration";
        for (int j = 0; j < d; ++j) f << ",x" << j;
        f << ",y";
        for (int k = 0; k < K; ++k) f << ",c" << k;
        for (int j = 0; j < d; ++j) f << ",xr" << j;
        f << ",oc\n";
        for (const auto& rec : result.records) {
            if (rec.failed) continue;
            for (const auto& it : rec.iterations) {
                f << rec.replication << "," << it.iteration;
                for (int j = 0; j < d; ++j) f << "," << fmt(it.x[j]);
                f << "," << fmt(it.y);
                for (int k = 0; k < K; ++k) f << "," << fmt(it.c[k]);
                for (int j = 0; j < d; ++j) f << "," << fmt(it.x_r[j]);
                // wall-clock seconds stay out of the trace so repeated seeds
                // produce byte-identical bodies; totals go to the meta file
                f << "," << fmt(it.oc) << "\n";
            }
        }
    }
    {
        std::ofstream f(dir / (stem + "_aggregate.csv"));
        if (!f) throw std::runtime_error("emit_results: cannot write aggregate CSV");
        f << "iteration,mean_oc,ci95_halfwidth,n_replications\n";
        for (const auto& row : result.aggregate)
            f << row.iteration << "," << fmt(row.mean_oc) << "," << fmt(row.ci95_halfwidth)
              << "," << row.n_replications << "\n";
    }
    {
        std::ofstream f(dir / (stem + "_meta.txt"));
        if (!f) throw std::runtime_error("emit_results: cannot write metadata");
        f << "artifact_version = " << kArtifactVersion << "\n";
        auto now = std::chrono::system_clock::now().time_since_epoch();
        f << "timestamp_unix = "
          << std::chrono::duration_cast<std::chrono::seconds>(now).count() << "\n";
        f << "failed_replications = " << result.failed_replications << "\n";
        double total_seconds = 0.0;
        for (const auto& rec : result.records)
            for (const auto& it : rec.iterations) total_seconds += it.seconds;
        f << "total_iteration_seconds = " << total_seconds << "\n";
        if (result.ci_degenerate)
            f << "warning = single replication, ci95_halfwidth reported as 0\n";
        for (const auto& rec : result.records)
            if (rec.failed)
                f << "failure." << rec.replication << " = " << rec.failure_reason << "\n";
        write_config_echo(f, result.config);
    }
    if (echo) {
        *echo << "# " << stem << "\niteration,mean_oc,ci95_halfwidth,n_replications\n";
        for (const auto& row : result.aggregate)
            *echo << row.iteration << "," << fmt(row.mean_oc) << ","
                  << fmt(row.ci95_halfwidth) << "," << row.n_replications << "\n";
    }
}

std::vector<RunConfig> parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);

    RunConfig base;
    std::vector<std::string> problems{base.problem};
    std::vector<std::string> acquisitions{to_string(base.acquisition)};

    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r\n");
        size_t b = s.find_last_not_of(" \t\r\n");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    auto split_list = [&](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(trim(item));
        return out;
    };

    std::string line;
    while (std::getline(f, line)) {
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: malformed line: " + line);
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key == "problem") problems = split_list(val);
        else if (key == "acquisition") acquisitions = split_list(val);
        else if (key == "budget_B") base.budget_B = std::stoi(val);
        else if (key == "init_count") base.init_count = std::stoi(val);
        else if (key == "noise_std") base.noise_std = std::stod(val);
        else if (key == "replications") base.replications = std::stoi(val);
        else if (key == "base_seed") base.base_seed = std::stoll(val);
        else if (key == "output_path") base.output_path = val;
        else if (key == "nei_samples") base.nei_samples = std::stoi(val);
        else if (key == "cts_candidates") base.cts_candidates = std::stoi(val);
        else if (key == "refit_every_iteration") base.refit_every_iteration = std::stoi(val) != 0;
        else if (key == "ckg.n_y") base.ckg.n_y = std::stoi(val);
        else if (key == "ckg.n_c_per_constraint") base.ckg.n_c_per_constraint = std::stoi(val);
        else if (key == "ckg.mc_samples_nc") base.ckg.mc_samples_nc = std::stoi(val);
        else if (key == "ckg.candidate_count") base.ckg.candidate_count = std::stoi(val);
        else if (key == "ckg.top_subset") base.ckg.top_subset = std::stoi(val);
        else throw std::runtime_error("config: unknown key: " + key);
    }
    if (base.budget_B < 1 || base.replications < 1)
        throw std::runtime_error("config: budget_B and replications must be >= 1");

    std::vector<RunConfig> configs;
    for (const auto& p : problems)
        for (const auto& a : acquisitions) {
            RunConfig c = base;
            c.problem = p;
            c.acquisition = acquisition_from_string(a);
            configs.push_back(c);
        }
    return configs;
}

} // namespace ckg
