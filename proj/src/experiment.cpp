// experiment.cpp

#include "bayesphase/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bayesphase/errors.hpp"
#include "bayesphase/interferometer.hpp"

namespace bayesphase {

namespace {

using nlohmann::json;

void log_line(std::ostream* log, const std::string& msg) {
    if (log) *log << msg << '\n' << std::flush;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

json width_json(const IntrinsicWidthReport& r) {
    json j;
    j["probe"] = r.probe_id;
    j["width"] = r.width ? json(*r.width) : json(nullptr);
    j["width_label"] = r.width ? json(width_label(*r.width)) : json(nullptr);
    j["trials"] = r.trials;
    j["mu"] = r.mu;
    json cands = json::array();
    for (const auto& c : r.candidates)
        cands.push_back({{"width", c.width}, {"label", width_label(c.width)}, {"unique_fraction", c.unique_fraction}});
    j["candidates"] = cands;
    return j;
}

double rel_stderr_at(const MseCurve& curve, const std::optional<int>& mu) {
    for (const auto& r : curve.records)
        if (mu && r.mu == *mu) return 100.0 * r.mse_stderr / r.mse;
    const auto& last = curve.records.back();
    return 100.0 * last.mse_stderr / last.mse;
}

}  // namespace

std::string width_label(double w) {
    for (int q = 1; q <= 16; ++q)
        for (int p = 1; p <= 2 * q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            if (std::abs(w - std::numbers::pi * p / q) < 1e-12) {
                std::string s = (p == 1 ? std::string() : std::to_string(p)) + "pi";
                return q == 1 ? s : s + "/" + std::to_string(q);
            }
        }
    return format_double(w);
}

std::string mu_tau_label(const std::optional<int>& mu_tau, int mu_max) {
    return mu_tau ? std::to_string(*mu_tau) : ">" + std::to_string(mu_max);
}

ResultBundle run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    if (!config.probe.two_mode())
        throw UnsupportedError("the delta family is one-mode; the photon-counting MSE pipeline needs a two-mode probe");

    ResultBundle bundle;
    bundle.config = config;
    const std::string id = config.probe.id();
    const TwoModeState probe = make_probe(config.probe);
    const GeneratorSpec gen = config.probe.generator();
    bundle.cutoff = probe.cutoff();

    if (config.prior_width) {
        bundle.w0 = *config.prior_width;
    } else {
        log_line(options.log, id + ": searching intrinsic width");
        IntrinsicWidthOptions wo;
        wo.trials = config.width_trials;
        wo.grid_size = config.grid_size;
        wo.seed = config.seed;
        wo.workers = options.workers;
        std::optional<int> noon_n;
        if (config.probe.family == ProbeFamily::Noon) noon_n = config.probe.noon_n;
        const auto candidates = default_width_candidates(noon_n);
        bundle.width_report = intrinsic_width(probe, gen, candidates, wo, id);
        if (!bundle.width_report->width) throw NumericalError(id + ": no candidate width has a unique likelihood peak");
        bundle.w0 = *bundle.width_report->width;
    }
    log_line(options.log, id + ": W0 = " + width_label(bundle.w0) + ", cutoff " + std::to_string(bundle.cutoff));

    const PhaseGrid grid(0.0, bundle.w0, config.grid_size);
    const auto table = LikelihoodTable::build(probe, gen, grid, kOutcomeFloor, options.workers);
    bundle.discarded_mass = table.discarded_mass();
    const Prior prior = Prior::flat(grid);

    MonteCarloOptions mc;
    mc.trajectories = config.trajectories;
    mc.theta_nodes = config.theta_nodes;
    mc.seed = config.seed;
    mc.workers = options.workers;
    const auto schedule = config.schedule();
    const auto points = mse_curve(prior, table, schedule, mc);

    std::optional<FidelityProfile> profile;
    if (config.zzb || config.wwb) profile.emplace(fidelity_function(probe, gen), bundle.w0);
    bundle.curve = assemble_curve(id, bundle.w0, qfi(probe, gen), points, profile ? &*profile : nullptr,
                                  BoundSelection{config.zzb, config.wwb});
    bundle.mu_tau = mu_threshold(bundle.curve, config.epsilon_tau);
    bundle.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log_line(options.log, id + ": W0 = " + width_label(bundle.w0) + ", mu_tau = " +
                              mu_tau_label(bundle.mu_tau, schedule.back()));
    return bundle;
}

std::string curve_csv(const MseCurve& curve) {
    std::string out = "mu,mse,mse_stderr,qcrb,zzb,wwb,rel_err\n";
    for (const auto& r : curve.records) {
        out += std::to_string(r.mu);
        out += ',' + format_double(r.mse);
        out += ',' + format_double(r.mse_stderr);
        out += ',' + format_double(r.qcrb);
        out += ',' + (r.zzb ? format_double(*r.zzb) : std::string());
        out += ',' + (r.wwb ? format_double(*r.wwb) : std::string());
        out += ',' + format_double(r.rel_err_percent);
        out += '\n';
    }
    return out;
}

void emit_curves(const ResultBundle& bundle, const std::filesystem::path& path) {
    write_file(path, curve_csv(bundle.curve));
}

std::string bundle_json(const ResultBundle& b) {
    json j;
    j["format_version"] = kResultFormatVersion;
    j["config"] = echo_config(b.config);
    j["probe"] = b.curve.probe_id;
    j["cutoff"] = b.cutoff;
    j["discarded_mass"] = b.discarded_mass;
    j["qfi"] = b.curve.qfi;
    j["w0"] = b.w0;
    j["w0_label"] = width_label(b.w0);
    j["width_report"] = b.width_report ? width_json(*b.width_report) : json(nullptr);
    j["epsilon_tau"] = b.config.epsilon_tau;
    j["mu_tau"] = b.mu_tau ? json(*b.mu_tau) : json(nullptr);
    j["mu_tau_label"] = mu_tau_label(b.mu_tau, b.curve.records.empty() ? 0 : b.curve.records.back().mu);
    j["budget"] = {{"trajectories", b.config.trajectories},
                   {"theta_nodes", b.config.theta_nodes},
                   {"grid_size", b.config.grid_size},
                   {"seed", b.config.seed},
                   {"mu_points", b.curve.records.size()}};
    return j.dump(2) + "\n";
}

void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir, const std::string& stem) {
    std::filesystem::create_directories(dir);
    emit_curves(bundle, dir / (stem + ".csv"));
    write_file(dir / (stem + ".json"), bundle_json(bundle));
    write_file(dir / (stem + ".config"), echo_config(bundle.config));
    json t = {{"wall_seconds", bundle.wall_seconds}};
    write_file(dir / (stem + ".timing.json"), t.dump(2) + "\n");
}

Table1 reproduce_table1(const Table1Options& o) {
    struct RowSpec {
        std::string label;
        ProbeSpec probe;
        std::string reference_width, reference_intrinsic, reference_third;
        bool third_applicable;
    };
    const std::vector<RowSpec> specs{
        {"coherent nbar=2", ProbeSpec::coherent(2.0), "pi", "39", "497", true},
        {"NOON even nbar=2", ProbeSpec::noon(2), "pi/2", "115", "267", true},
        {"NOON odd nbar=1", ProbeSpec::noon(1), "pi/2", "526", "-", false},
        {"TSV nbar=2", ProbeSpec::tsv(2.0), "pi/2", "874", "595", true},
        {"SES nbar=2", ProbeSpec::ses(2.0), "pi/2", ">1000", ">1000", true},
    };

    Table1 table{o, {}};
    for (const auto& s : specs) {
        Table1Row row;
        row.label = s.label;
        row.probe = s.probe;
        row.reference_width = s.reference_width;

        ExperimentConfig base;
        base.probe = s.probe;
        base.mu_max = o.mu_max;
        base.trajectories = o.trajectories;
        base.theta_nodes = o.theta_nodes;
        base.grid_size = o.grid_size;
        base.epsilon_tau = o.epsilon_tau;
        base.seed = o.seed;
        base.width_trials = o.width_trials;

        log_line(o.log, s.label + ": searching intrinsic width");
        IntrinsicWidthOptions wo;
        wo.trials = o.width_trials;
        wo.grid_size = o.grid_size;
        wo.seed = o.seed;
        wo.workers = o.workers;
        std::optional<int> noon_n;
        if (s.probe.family == ProbeFamily::Noon) noon_n = s.probe.noon_n;
        const auto probe = make_probe(s.probe);
        const auto candidates = default_width_candidates(noon_n);
        row.width = intrinsic_width(probe, s.probe.generator(), candidates, wo, s.probe.id());

        auto run_cell = [&](Table1Cell& cell, double w0, const std::string& reference) {
            cell.reference = reference;
            ExperimentConfig c = base;
            c.prior_width = w0;
            c.prior_width_text = width_label(w0);
            cell.bundle = run_experiment(c, RunOptions{o.workers, o.log});
            cell.mu_tau = cell.bundle.mu_tau;
            cell.rel_stderr_percent = rel_stderr_at(cell.bundle.curve, cell.mu_tau);
        };

        row.intrinsic.reference = s.reference_intrinsic;
        if (row.width.width) run_cell(row.intrinsic, *row.width.width, s.reference_intrinsic);
        else row.intrinsic.applicable = false;

        row.third_pi.reference = s.reference_third;
        if (s.third_applicable) run_cell(row.third_pi, std::numbers::pi / 3.0, s.reference_third);
        else row.third_pi.applicable = false;

        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string table1_csv(const Table1& table) {
    std::string out =
        "probe,w_int,w_int_ref,mu_tau_wint,mu_tau_wint_ref,rel_stderr_wint,mu_tau_pi3,mu_tau_pi3_ref,"
        "rel_stderr_pi3\n";
    auto cell_text = [&](const Table1Cell& c) {
        if (!c.applicable) return std::string("-,") + c.reference + ",";
        return mu_tau_label(c.mu_tau, table.options.mu_max) + "," + c.reference + "," + format_double(c.rel_stderr_percent);
    };
    for (const auto& r : table.rows) {
        out += r.label + ",";
        out += (r.width.width ? width_label(*r.width.width) : std::string("none")) + "," + r.reference_width + ",";
        out += cell_text(r.intrinsic) + "," + cell_text(r.third_pi) + "\n";
    }
    return out;
}

void write_table1(const Table1& table, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "curves");
    write_file(dir / "table1.csv", table1_csv(table));
    json widths = json::array();
    for (const auto& r : table.rows) {
        widths.push_back(width_json(r.width));
        if (r.intrinsic.applicable) write_bundle(r.intrinsic.bundle, dir / "curves", r.probe.id() + "_wint");
        if (r.third_pi.applicable) write_bundle(r.third_pi.bundle, dir / "curves", r.probe.id() + "_pi3");
    }
    write_file(dir / "widths.json", widths.dump(2) + "\n");
}

}  // namespace bayesphase
