// experiment.hpp
// End-to-end runs: probe -> width -> likelihood table -> MSE curve -> bounds
// -> mu_tau, plus the reference-table reproduction and file output.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bayesphase/bayes.hpp"
#include "bayesphase/bounds.hpp"
#include "bayesphase/config.hpp"

namespace bayesphase {

inline constexpr int kResultFormatVersion = 1;

struct ResultBundle {
    ExperimentConfig config;
    std::optional<IntrinsicWidthReport> width_report;
    double w0 = 0.0;
    int cutoff = 0;
    double discarded_mass = 0.0;
    MseCurve curve;
    std::optional<int> mu_tau;
    double wall_seconds = 0.0;
};

struct RunOptions {
    unsigned workers = 0;
    std::ostream* log = nullptr;
};

// Runs the full pipeline for one probe and prior. The delta family has no
// photon-counting model and is rejected with UnsupportedError.
ResultBundle run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Writes <dir>/<stem>.csv, <stem>.json, <stem>.config and <stem>.timing.json.
// Only the timing file depends on the machine.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir, const std::string& stem = "result");

// mu, mse, mse_stderr, qcrb, zzb, wwb, rel_err (percent); LF line endings.
std::string curve_csv(const MseCurve& curve);
void emit_curves(const ResultBundle& bundle, const std::filesystem::path& path);

// Deterministic metadata document (no timings).
std::string bundle_json(const ResultBundle& bundle);

struct Table1Options {
    int trajectories = 1000;
    int theta_nodes = 51;
    int mu_max = 1000;
    int grid_size = kDefaultGridSize;
    int width_trials = 200;
    double epsilon_tau = 5.0;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::ostream* log = nullptr;
};

struct Table1Cell {
    bool applicable = true;
    std::optional<int> mu_tau;
    std::string reference;  // published value
    double rel_stderr_percent = 0.0;  // 100 stderr/mse at mu_tau (or at mu_max)
    ResultBundle bundle;
};

struct Table1Row {
    std::string label;
    ProbeSpec probe;
    IntrinsicWidthReport width;
    std::string reference_width;
    Table1Cell intrinsic;
    Table1Cell third_pi;
};

struct Table1 {
    Table1Options options;
    std::vector<Table1Row> rows;
};

Table1 reproduce_table1(const Table1Options& options);

// Comparison table with this run's values next to the published ones.
std::string table1_csv(const Table1& table);

// Writes table1.csv, the per-curve CSVs and metadata under dir.
void write_table1(const Table1& table, const std::filesystem::path& dir);

// Label such as "pi/2" when w is a simple fraction of pi, else the number.
std::string width_label(double w);

std::string mu_tau_label(const std::optional<int>& mu_tau, int mu_max);

}  // namespace bayesphase
