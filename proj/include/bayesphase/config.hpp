// config.hpp
// Flat key=value experiment configuration.
//
//   probe.family   coherent | noon | tsv | ses | delta
//   probe.nbar     mean photon number (coherent, tsv, ses)
//   probe.N        photon number (noon; delta family mean photon number)
//   probe.delta    delta family parameter in (0, 1)
//   prior.width    radians, an expression like pi/3 or 2pi, or "intrinsic"
//   run.mu_max     largest number of observations (>= 1)
//   run.mu_schedule  "default" or a comma-separated list of mu values
//   run.trajectories, run.grid_size, run.theta_nodes, run.epsilon_tau
//   run.seed       required; there is no clock-based seeding
//   run.bounds     subset of qcrb,zzb,wwb (qcrb is always computed)
//   width.trials   trials per candidate width when prior.width = intrinsic
//   out.path       output directory
//
// Lines starting with '#' and blank lines are ignored.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bayesphase/grid.hpp"
#include "bayesphase/probes.hpp"

namespace bayesphase {

struct ExperimentConfig {
    ProbeSpec probe;
    std::optional<double> prior_width;  // nullopt: intrinsic width
    std::string prior_width_text = "intrinsic";
    int mu_max = 1000;
    std::vector<int> mu_schedule;  // empty: default schedule up to mu_max
    int trajectories = 1000;
    int grid_size = kDefaultGridSize;
    int theta_nodes = 51;
    double epsilon_tau = 5.0;
    std::uint64_t seed = 0;
    bool zzb = true;
    bool wwb = true;
    int width_trials = 200;
    std::string out_path = "out";

    // Throws ConfigError when an invariant is violated.
    void validate() const;
    // Schedule actually used: explicit list or the default one.
    std::vector<int> schedule() const;
};

// Parses config text; every key is checked, unknown or repeated keys and a
// missing run.seed are errors (ConfigError).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical text form; parse_config(echo_config(c)) reproduces c.
std::string echo_config(const ExperimentConfig& config);

// {1, ..., 20} together with round(10^(k/10)) for k >= 14, cut at mu_max,
// and mu_max itself.
std::vector<int> default_mu_schedule(int mu_max);

// "pi", "pi/3", "2pi", "2*pi/3", or a plain number of radians.
double parse_angle(const std::string& text);

// Probe given on the command line: coherent:2, noon:3, tsv:2, ses:2, delta:2:0.5.
ProbeSpec parse_probe_argument(const std::string& text);

// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace bayesphase
