// bayesphase: command-line runner.
//
//   bayesphase run --config <path> [--seed N] [--out DIR]
//   bayesphase table1 [--trajectories N] [--seed N] [--out DIR]
//   bayesphase width --probe <spec> [--candidates LIST]
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
// 4 unsupported combination, 1 anything else.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "bayesphase/config.hpp"
#include "bayesphase/errors.hpp"
#include "bayesphase/experiment.hpp"
#include "bayesphase/parallel.hpp"

using namespace bayesphase;

namespace {

std::vector<double> parse_candidates(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_angle(item));
    if (out.empty()) throw ConfigError("empty candidate list");
    return out;
}

int run_command(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                const std::optional<std::string>& out_dir) {
    ExperimentConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.out_path = *out_dir;
    const auto bundle = run_experiment(config, RunOptions{default_workers(), &std::cerr});
    write_bundle(bundle, config.out_path);
    const int mu_max = config.schedule().back();
    std::cout << "probe " << bundle.curve.probe_id << "\n";
    std::cout << "W0 " << width_label(bundle.w0) << (config.prior_width ? "" : " (intrinsic)") << "\n";
    std::cout << "mu_tau " << mu_tau_label(bundle.mu_tau, mu_max) << " at epsilon_tau " << config.epsilon_tau << "\n";
    std::cout << "wrote " << (std::filesystem::path(config.out_path) / "result.csv").string() << "\n";
    return 0;
}

int table1_command(const Table1Options& options, const std::string& out_dir) {
    const auto table = reproduce_table1(options);
    write_table1(table, out_dir);
    std::cout << table1_csv(table);
    return 0;
}

int width_command(const std::string& probe_arg, const std::optional<std::string>& candidates, int trials,
                  std::uint64_t seed) {
    const ProbeSpec spec = parse_probe_argument(probe_arg);
    if (!spec.two_mode()) throw UnsupportedError("width search needs a two-mode probe");
    std::optional<int> noon_n;
    if (spec.family == ProbeFamily::Noon) noon_n = spec.noon_n;
    const auto list = candidates ? parse_candidates(*candidates) : default_width_candidates(noon_n);
    IntrinsicWidthOptions wo;
    wo.trials = trials;
    wo.seed = seed;
    wo.workers = default_workers();
    const auto report = intrinsic_width(make_probe(spec), spec.generator(), list, wo, spec.id());
    for (const auto& c : report.candidates)
        std::cout << width_label(c.width) << " unique_fraction " << format_double(c.unique_fraction) << "\n";
    std::cout << "W_int " << (report.width ? width_label(*report.width) : std::string("none")) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian phase estimation: MSE curves, bounds and thresholds"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one configured experiment");
    std::string config_path;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::string> run_out;
    run->add_option("--config", config_path, "Config file (key = value)")->required();
    run->add_option("--seed", run_seed, "Override run.seed");
    run->add_option("--out", run_out, "Override out.path");

    auto* table1 = app.add_subcommand("table1", "Reproduce the W_int / mu_tau table");
    Table1Options t1;
    std::string t1_out = "table1_out";
    table1->add_option("--trajectories", t1.trajectories, "Trajectories per true-phase node");
    table1->add_option("--theta-nodes", t1.theta_nodes, "True-phase quadrature nodes");
    table1->add_option("--mu-max", t1.mu_max, "Largest number of observations");
    table1->add_option("--width-trials", t1.width_trials, "Trials per candidate width");
    table1->add_option("--seed", t1.seed, "Master seed");
    table1->add_option("--out", t1_out, "Output directory");

    auto* width = app.add_subcommand("width", "Intrinsic width search for one probe");
    std::string probe_arg;
    std::optional<std::string> candidates;
    int trials = 200;
    std::uint64_t width_seed = 1;
    width->add_option("--probe", probe_arg, "coherent:2, noon:3, tsv:2, ses:2")->required();
    width->add_option("--candidates", candidates, "Comma-separated widths, e.g. pi,pi/2,pi/3");
    width->add_option("--trials", trials, "Trials per candidate");
    width->add_option("--seed", width_seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) return run_command(config_path, run_seed, run_out);
        if (*table1) {
            t1.workers = default_workers();
            t1.log = &std::cerr;
            return table1_command(t1, t1_out);
        }
        if (*width) return width_command(probe_arg, candidates, trials, width_seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const TruncationError& e) {
        std::cerr << "truncation failure: " << e.what() << " (norm deficit " << e.deficit() << ")\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
