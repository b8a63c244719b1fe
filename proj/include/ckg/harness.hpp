#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ckg/acquisition_ckg.hpp"
#include "ckg/problems.hpp"

namespace ckg {

enum class Acquisition { cKG, cEI, NEI, pKG, cTS, random };

Acquisition acquisition_from_string(const std::string& name);
std::string to_string(Acquisition a);

struct RunConfig {
    std::string problem = "mystery";
    Acquisition acquisition = Acquisition::cKG;
    int budget_B = 40;
    int init_count = 10;
    double noise_std = 0.0;
    int replications = 1;
    std::int64_t base_seed = 0;
    CkgConfig ckg;
    int nei_samples = 32;
    int cts_candidates = 2000;
    bool refit_every_iteration = true;
    std::string output_path = "results";
    OptimizerConfig recommend_optimizer{.starts = 5, .max_evals_per_start = 200,
                                        .tolerance = 1e-6, .screening_grid_size = 200};
    OptimizerConfig acq_optimizer{.starts = 5, .max_evals_per_start = 200,
                                  .tolerance = 1e-6, .screening_grid_size = 200};
};

struct IterationTrace {
    int iteration; // 1-based
    Vector x;      // sampled design (original units)
    double y;      // noisy observation
    Vector c;      // constraint values
    Vector x_r;    // recommendation after this iteration (original units)
    double oc;     // noiseless opportunity cost of x_r
    double seconds;
};

struct ReplicationRecord {
    int replication = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string failure_reason;
    double initial_oc = 0.0; // OC of the recommendation from the initial design
    std::vector<IterationTrace> iterations;
};

struct AggregateRow {
    int iteration; // 0 = initial design
    double mean_oc;
    double ci95_halfwidth;
    int n_replications;
};

struct BenchmarkResult {
    RunConfig config;
    std::vector<ReplicationRecord> records;
    std::vector<AggregateRow> aggregate;
    int failed_replications = 0;
    bool ci_degenerate = false; // single replication: half-width reported as 0
};

// One replication of the overall BO loop: LHS initial design, fit, then
// budget_B rounds of acquire/observe/refit, recommending after every round.
ReplicationRecord bo_run(const RunConfig& config, std::uint64_t replication_seed);

// All (config, replication) cells with seeds base_seed + replication index;
// cells run on `parallelism` worker threads (0 = hardware concurrency,
// overridable via the CKG_THREADS environment variable).
std::vector<BenchmarkResult> benchmark(const std::vector<RunConfig>& configs,
                                       int parallelism = 0);

// Aggregates mean OC and 95% normal-approximation CI over non-failed
// replications.
void aggregate_records(BenchmarkResult& result);

// Writes <stem>_trace.csv, <stem>_aggregate.csv and <stem>_meta.txt under
// config.output_path, and echoes the aggregate to `echo` when non-null.
void emit_results(const BenchmarkResult& result, std::ostream* echo = nullptr);

// Flat key-value config file (key = value, '#' comments). Unknown keys are
// an error. `problem` and `acquisition` accept comma-separated lists, which
// expand to the config matrix.
std::vector<RunConfig> parse_config_file(const std::string& path);

} // namespace ckg
