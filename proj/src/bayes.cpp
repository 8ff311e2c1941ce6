// bayes.cpp

#include "bayesphase/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bayesphase/errors.hpp"
#include "bayesphase/parallel.hpp"
#include "bayesphase/rng.hpp"

namespace bayesphase {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp() of anything below this contributes nothing at double precision.
constexpr double kExpCut = -708.0;

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

// Mean and variance of the density proportional to exp(log_density) under
// the grid's quadrature, centred on the arg-max node for stability.
Moments log_density_moments(const PhaseGrid& grid, std::span<const double> log_density) {
    const auto it = std::max_element(log_density.begin(), log_density.end());
    const double top = *it;
    if (!(top > kNegInf)) throw NumericalError("posterior underflow: every grid node has zero likelihood");
    const double centre = grid.node(static_cast<std::size_t>(it - log_density.begin()));
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < log_density.size(); ++j) {
        const double z = log_density[j] - top;
        if (z < kExpCut) continue;
        const double e = std::exp(z) * weights[j];
        const double d = nodes[j] - centre;
        s0 += e;
        s1 += e * d;
        s2 += e * d * d;
    }
    if (!(s0 > 1e-300)) throw NumericalError("posterior normalizer underflow");
    const double m1 = s1 / s0;
    return {centre + m1, std::max(0.0, s2 / s0 - m1 * m1)};
}

void check_shared_grid(const Prior& prior, const LikelihoodTable& table) {
    const auto& a = prior.grid();
    const auto& b = table.grid();
    if (a.size() != b.size() || a.lower() != b.lower() || a.upper() != b.upper())
        throw InconsistencyError("prior and likelihood table use different grids");
}

void check_schedule(std::span<const int> schedule) {
    if (schedule.empty()) throw ParameterError("empty mu schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 0) throw ParameterError("mu must be non-negative");
        if (i > 0 && schedule[i] <= schedule[i - 1]) throw ParameterError("mu schedule must be strictly increasing");
    }
}

inline void add_row(std::vector<double>& acc, std::span<const double> row) {
    double* a = acc.data();
    const double* r = row.data();
    const std::size_t n = acc.size();
    for (std::size_t j = 0; j < n; ++j) a[j] += r[j];
}

// Posterior variance of one simulated trajectory at each scheduled mu.
void run_trajectory(const Prior& prior, const LikelihoodTable& table, const OutcomeSampler& sampler,
                    std::span<const int> schedule, RngStream& stream, std::vector<double>& acc, double* out) {
    const auto log_prior = prior.log_density();
    acc.assign(log_prior.begin(), log_prior.end());
    int drawn = 0;
    for (std::size_t s = 0; s < schedule.size(); ++s) {
        for (; drawn < schedule[s]; ++drawn) add_row(acc, table.log_probabilities(sampler.draw(stream)));
        out[s] = schedule[s] == 0 ? prior.variance() : log_density_moments(prior.grid(), acc).variance;
    }
}

CurvePoint summarize(int mu, std::span<const double> samples) {
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mu, mean, sd / std::sqrt(n)};
}

}  // namespace

Prior::Prior(PhaseGrid grid, std::vector<double> density) : grid_(std::move(grid)), density_(std::move(density)) {
    if (density_.size() != grid_.size()) throw ParameterError("prior density does not match grid size");
    for (double d : density_)
        if (!(d >= 0.0) || !std::isfinite(d)) throw ParameterError("prior density must be finite and non-negative");
    const double z = grid_.integrate(density_);
    if (!(z > 0.0)) throw ParameterError("prior density integrates to zero");
    for (auto& d : density_) d /= z;
    log_density_.resize(density_.size());
    for (std::size_t j = 0; j < density_.size(); ++j)
        log_density_[j] = density_[j] > 0.0 ? std::log(density_[j]) : kNegInf;
    variance_ = log_density_moments(grid_, log_density_).variance;
}

Prior Prior::flat(PhaseGrid grid) {
    const double w = grid.width();
    const std::size_t n = grid.size();
    Prior p(std::move(grid), std::vector<double>(n, 1.0 / w));
    p.flat_ = true;
    return p;
}

Posterior posterior(const Prior& prior, const LikelihoodTable& table, std::span<const Outcome> outcomes) {
    check_shared_grid(prior, table);
    const auto log_prior = prior.log_density();
    std::vector<double> acc(log_prior.begin(), log_prior.end());
    for (const auto& o : outcomes) {
        const auto row = table.index_of(o);
        if (!row)
            throw InconsistencyError("outcome (" + std::to_string(o.n1) + "," + std::to_string(o.n2) +
                                     ") is not in the likelihood table");
        add_row(acc, table.log_probabilities(*row));
    }
    const double top = *std::max_element(acc.begin(), acc.end());
    if (!(top > kNegInf))
        throw NumericalError("posterior underflow after " + std::to_string(outcomes.size()) +
                             " outcomes: likelihood vanishes on every grid node");
    std::vector<double> density(acc.size());
    for (std::size_t j = 0; j < acc.size(); ++j) density[j] = acc[j] - top < kExpCut ? 0.0 : std::exp(acc[j] - top);
    const double z = prior.grid().integrate(density);
    if (!(z > 1e-300)) throw NumericalError("posterior normalizer underflow");
    for (auto& d : density) d /= z;
    return Posterior(prior.grid(), std::move(density));
}

double posterior_mean(const Posterior& post) {
    const auto nodes = post.grid().nodes();
    const auto weights = post.grid().weights();
    const auto density = post.density();
    double s = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) s += weights[j] * density[j] * nodes[j];
    return s;
}

double posterior_variance(const Posterior& post) {
    const double mean = posterior_mean(post);
    const auto nodes = post.grid().nodes();
    const auto weights = post.grid().weights();
    const auto density = post.density();
    double s = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) {
        const double d = nodes[j] - mean;
        s += weights[j] * density[j] * d * d;
    }
    return std::max(0.0, s);
}

std::vector<CurvePoint> error_given_truth(const Prior& prior, const LikelihoodTable& table, std::size_t true_node,
                                          std::span<const int> schedule, int trajectories, std::uint64_t seed,
                                          std::uint64_t stream_index, unsigned workers) {
    check_shared_grid(prior, table);
    check_schedule(schedule);
    if (trajectories < 1) throw ParameterError("need at least one trajectory");
    if (true_node >= table.node_count()) throw RangeError("true phase node outside grid");
    const OutcomeSampler sampler(table, true_node);
    const std::size_t ns = schedule.size();
    std::vector<double> results(static_cast<std::size_t>(trajectories) * ns);
    parallel_for(static_cast<std::size_t>(trajectories), workers, [&](std::size_t t) {
        RngStream stream(seed, stream_index, t);
        std::vector<double> acc;
        run_trajectory(prior, table, sampler, schedule, stream, acc, results.data() + t * ns);
    });
    std::vector<CurvePoint> out;
    std::vector<double> column(static_cast<std::size_t>(trajectories));
    for (std::size_t s = 0; s < ns; ++s) {
        for (int t = 0; t < trajectories; ++t) column[t] = results[t * ns + s];
        out.push_back(schedule[s] == 0 ? CurvePoint{0, prior.variance(), 0.0} : summarize(schedule[s], column));
    }
    return out;
}

Estimate error_given_truth(const Prior& prior, const LikelihoodTable& table, double theta_true, int mu,
                           int trajectories, std::uint64_t seed, std::uint64_t stream_index, unsigned workers) {
    if (trajectories < 2) throw ParameterError("need at least two trajectories for an error bar");
    const int schedule[] = {mu};
    const auto pts = error_given_truth(prior, table, table.grid().nearest(theta_true), schedule, trajectories, seed,
                                       stream_index, workers);
    return {pts[0].value, pts[0].std_error};
}

TruthQuadrature truth_quadrature(const Prior& prior, int count) {
    const auto& grid = prior.grid();
    const auto rule = gauss_legendre(count, grid.lower(), grid.upper());
    TruthQuadrature q;
    const auto density = prior.density();
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const std::size_t node = grid.nearest(rule.nodes[i]);
        const double w = rule.weights[i] * density[node];
        q.nodes.push_back(node);
        q.weights.push_back(w);
        total += w;
    }
    if (!(total > 0.0)) throw NumericalError("prior has no mass at the truth quadrature nodes");
    for (auto& w : q.weights) w /= total;
    return q;
}

std::vector<CurvePoint> mse_curve(const Prior& prior, const LikelihoodTable& table, std::span<const int> schedule,
                                  const MonteCarloOptions& options) {
    check_shared_grid(prior, table);
    check_schedule(schedule);
    if (options.trajectories < 2) throw ParameterError("need at least two trajectories per node");
    const auto quad = truth_quadrature(prior, options.theta_nodes);
    const std::size_t nn = quad.nodes.size();
    const std::size_t nt = static_cast<std::size_t>(options.trajectories);
    const std::size_t ns = schedule.size();

    std::vector<OutcomeSampler> samplers;
    samplers.reserve(nn);
    for (std::size_t i = 0; i < nn; ++i) samplers.emplace_back(table, quad.nodes[i]);

    std::vector<double> results(nn * nt * ns);
    parallel_for(nn * nt, options.workers, [&](std::size_t task) {
        const std::size_t i = task / nt;
        const std::size_t t = task % nt;
        RngStream stream(options.seed, i, t);
        std::vector<double> acc;
        run_trajectory(prior, table, samplers[i], schedule, stream, acc, results.data() + task * ns);
    });

    std::vector<CurvePoint> curve;
    std::vector<double> column(nt);
    for (std::size_t s = 0; s < ns; ++s) {
        if (schedule[s] == 0) {
            curve.push_back({0, prior.variance(), 0.0});
            continue;
        }
        double value = 0.0, var = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            for (std::size_t t = 0; t < nt; ++t) column[t] = results[(i * nt + t) * ns + s];
            const auto pt = summarize(schedule[s], column);
            value += quad.weights[i] * pt.value;
            var += quad.weights[i] * quad.weights[i] * pt.std_error * pt.std_error;
        }
        curve.push_back({schedule[s], value, std::sqrt(var)});
    }
    return curve;
}

Estimate mse(const Prior& prior, const LikelihoodTable& table, int mu, const MonteCarloOptions& options) {
    const int schedule[] = {mu};
    const auto c = mse_curve(prior, table, schedule, options);
    return {c[0].value, c[0].std_error};
}

std::vector<double> default_width_candidates(std::optional<int> noon_n) {
    using std::numbers::pi;
    std::vector<double> c = {2 * pi, pi, pi / 2, pi / 3, pi / 4, pi / 8};
    if (noon_n) {
        c.push_back(pi / *noon_n);
        c.push_back(pi / (2.0 * *noon_n));
    }
    std::sort(c.begin(), c.end(), std::greater<>());
    c.erase(std::unique(c.begin(), c.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), c.end());
    return c;
}

int count_peak_runs(std::span<const double> log_density, double peak_tolerance) {
    const double top = *std::max_element(log_density.begin(), log_density.end());
    const double cut = top + std::log1p(-peak_tolerance);
    int runs = 0;
    bool inside = false;
    for (double v : log_density) {
        const bool hit = v >= cut;
        if (hit && !inside) ++runs;
        inside = hit;
    }
    return runs;
}

IntrinsicWidthReport intrinsic_width(const TwoModeState& probe, GeneratorSpec gen, std::span<const double> candidates,
                                     const IntrinsicWidthOptions& options, std::string probe_id) {
    if (options.trials < 1) throw ParameterError("need at least one trial");
    if (options.mu_probe < 1) throw ParameterError("need at least one observation per trial");
    IntrinsicWidthReport report;
    report.probe_id = std::move(probe_id);
    report.trials = options.trials;
    report.mu = options.mu_probe;
    // Kept apart from the streams used by the MSE simulation.
    const std::uint64_t seed = options.seed ^ 0x9e3779b97f4a7c15ULL;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        const double w = candidates[ci];
        if (!(w > 0.0 && w <= 2 * std::numbers::pi + 1e-12))
            throw ParameterError("width candidates must lie in (0, 2pi]");
        const PhaseGrid grid(0.0, w, options.grid_size);
        const auto table = LikelihoodTable::build(probe, gen, grid, kOutcomeFloor, options.workers);
        std::vector<int> unique(static_cast<std::size_t>(options.trials), 0);
        parallel_for(unique.size(), options.workers, [&](std::size_t t) {
            RngStream stream(seed, ci, t);
            const std::size_t node = grid.nearest(w * stream.uniform());
            const OutcomeSampler sampler(table, node);
            std::vector<double> acc(grid.size(), 0.0);  // flat prior
            for (int m = 0; m < options.mu_probe; ++m) add_row(acc, table.log_probabilities(sampler.draw(stream)));
            unique[t] = count_peak_runs(acc, options.peak_tolerance) == 1 ? 1 : 0;
        });
        int hits = 0;
        for (int u : unique) hits += u;
        const double fraction = static_cast<double>(hits) / options.trials;
        report.candidates.push_back({w, fraction});
        if (fraction >= options.acceptance && (!report.width || w > *report.width)) report.width = w;
    }
    return report;
}

double periodic_prior_error(double w0) {
    if (!(w0 > 0.0 && w0 <= 2 * std::numbers::pi + 1e-12)) throw ParameterError("prior width must lie in (0, 2pi]");
    const double x = 0.5 * w0;
    // 1 - sin(x)/x, by series where the direct form cancels.
    double one_minus_sinc;
    if (x < 1e-2) {
        const double x2 = x * x;
        one_minus_sinc = x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    } else {
        one_minus_sinc = 1.0 - std::sin(x) / x;
    }
    return 2.0 * one_minus_sinc;
}

double asymptotic_normality_report(const Prior& prior, const LikelihoodTable& table, double theta_true, int mu,
                                   double fisher, int trajectories, std::uint64_t seed, unsigned workers) {
    if (mu < 1) throw ParameterError("asymptotic normality check needs mu >= 1");
    if (!(fisher > 0.0)) throw ParameterError("Fisher information must be positive");
    if (trajectories < 1) throw ParameterError("need at least one trajectory");
    check_shared_grid(prior, table);
    const double target = 1.0 / (mu * fisher);
    const OutcomeSampler sampler(table, table.grid().nearest(theta_true));
    const int schedule[] = {mu};
    std::vector<int> within(static_cast<std::size_t>(trajectories), 0);
    parallel_for(within.size(), workers, [&](std::size_t t) {
        RngStream stream(seed, 0, t);
        std::vector<double> acc;
        double v = 0.0;
        run_trajectory(prior, table, sampler, schedule, stream, acc, &v);
        within[t] = std::abs(v - target) <= 0.1 * target ? 1 : 0;
    });
    int hits = 0;
    for (int w : within) hits += w;
    return static_cast<double>(hits) / trajectories;
}

}  // namespace bayesphase
