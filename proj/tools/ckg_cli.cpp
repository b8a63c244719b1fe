#include <iostream>

#include <CLI11.hpp>

#include "ckg/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Constrained Bayesian optimisation benchmark (cKG and baselines)"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;

    auto* run = app.add_subcommand("run", "Run one configuration from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--threads", threads, "worker threads (0 = auto)");

    auto* bench = app.add_subcommand(
        "benchmark", "Run a matrix of problems/acquisitions from a config file");
    bench->add_option("config", config_path, "config file")->required();
    bench->add_option("--threads", threads, "worker threads (0 = auto)");

    auto* list = app.add_subcommand("list-problems", "List bundled problems");

    std::string problem_name;
    auto* show = app.add_subcommand("show-optimum", "Print brute-forced x*, f*");
    show->add_option("problem", problem_name, "problem name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& name : ckg::problem_names()) std::cout << name << "\n";
        } else if (*show) {
            const ckg::Optimum& opt = ckg::get_optimum(problem_name);
            std::cout << "problem: " << problem_name << "\nx*:";
            for (int j = 0; j < opt.point.size(); ++j) std::cout << " " << opt.point[j];
            std::cout << "\nf*: " << opt.value << "\n";
        } else {
            std::vector<ckg::RunConfig> configs = ckg::parse_config_file(config_path);
            if (*run && configs.size() != 1)
                throw std::runtime_error(
                    "run expects a single problem/acquisition; use benchmark for a matrix");
            auto results = ckg::benchmark(configs, threads);
            for (const auto& r : results) ckg::emit_results(r, &std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
