// bayes.hpp
// Exact Bayesian mean square error by simulation: posterior updates on a
// phase grid, outcome-averaged posterior variance per true phase, and the
// prior average over true phases.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bayesphase/grid.hpp"
#include "bayesphase/interferometer.hpp"

namespace bayesphase {

class Prior {
public:
    // Density sampled on the grid; rescaled to integrate to one.
    Prior(PhaseGrid grid, std::vector<double> density);
    // p(theta) = 1/W on the grid's interval.
    static Prior flat(PhaseGrid grid);

    const PhaseGrid& grid() const { return grid_; }
    std::span<const double> density() const { return density_; }
    std::span<const double> log_density() const { return log_density_; }
    double support_width() const { return grid_.width(); }
    // Prior variance by quadrature (W^2/12 for the flat prior).
    double variance() const { return variance_; }
    bool is_flat() const { return flat_; }

private:
    PhaseGrid grid_;
    std::vector<double> density_;
    std::vector<double> log_density_;
    double variance_ = 0.0;
    bool flat_ = false;
};

class Posterior {
public:
    Posterior(PhaseGrid grid, std::vector<double> density) : grid_(std::move(grid)), density_(std::move(density)) {}
    const PhaseGrid& grid() const { return grid_; }
    std::span<const double> density() const { return density_; }

private:
    PhaseGrid grid_;
    std::vector<double> density_;
};

// p(theta|n) from prior x prod_i p(n_i|theta), accumulated in log space and
// max-shifted before exponentiation. The prior and table must share a grid.
// Throws InconsistencyError for outcomes missing from the table and
// NumericalError when every node underflows.
Posterior posterior(const Prior& prior, const LikelihoodTable& table, std::span<const Outcome> outcomes);

// Posterior mean, the optimal estimator under quadratic loss.
double posterior_mean(const Posterior& post);
// Posterior variance; negative round-off is clamped to zero.
double posterior_variance(const Posterior& post);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct CurvePoint {
    int mu = 0;
    double value = 0.0;
    double std_error = 0.0;
};

// Mean posterior variance over `trajectories` simulated outcome sequences
// drawn at grid node `true_node`, for each mu in `schedule` (strictly
// increasing, >= 0). Trajectory t uses the stream (seed, stream_index, t)
// and the result for mu reuses the first mu draws of each trajectory.
std::vector<CurvePoint> error_given_truth(const Prior& prior, const LikelihoodTable& table, std::size_t true_node,
                                          std::span<const int> schedule, int trajectories, std::uint64_t seed,
                                          std::uint64_t stream_index = 0, unsigned workers = 0);

Estimate error_given_truth(const Prior& prior, const LikelihoodTable& table, double theta_true, int mu,
                           int trajectories, std::uint64_t seed, std::uint64_t stream_index = 0,
                           unsigned workers = 0);

struct MonteCarloOptions {
    int trajectories = 1000;
    int theta_nodes = 51;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

// Gauss-Legendre nodes on the prior support snapped to the nearest grid
// nodes, weighted by the prior density (weights sum to one).
struct TruthQuadrature {
    std::vector<std::size_t> nodes;
    std::vector<double> weights;
};
TruthQuadrature truth_quadrature(const Prior& prior, int count);

// Prior-averaged mean square error for every mu in the schedule. mu = 0
// yields the prior variance with zero error. Truth node i uses stream index i.
std::vector<CurvePoint> mse_curve(const Prior& prior, const LikelihoodTable& table, std::span<const int> schedule,
                                  const MonteCarloOptions& options);

Estimate mse(const Prior& prior, const LikelihoodTable& table, int mu, const MonteCarloOptions& options);

// Intrinsic width search.
struct WidthCandidate {
    double width = 0.0;
    double unique_fraction = 0.0;
};

struct IntrinsicWidthReport {
    std::string probe_id;
    std::optional<double> width;  // absent when no candidate passes
    int trials = 0;
    int mu = 0;
    std::vector<WidthCandidate> candidates;
};

struct IntrinsicWidthOptions {
    int mu_probe = 100;
    int trials = 200;
    double peak_tolerance = 1e-2;
    double acceptance = 0.95;
    int grid_size = kDefaultGridSize;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

// {2pi, pi, pi/2, pi/3, pi/4, pi/8}, plus {pi/N, pi/(2N)} for a NOON probe,
// deduplicated and sorted in descending order.
std::vector<double> default_width_candidates(std::optional<int> noon_n = std::nullopt);

// For each candidate W: trials with theta' uniform on [0, W], a flat prior
// of width W and mu_probe observations. A trial counts when exactly one
// connected run of grid nodes reaches (1 - peak_tolerance) of the maximum.
// The intrinsic width is the largest candidate whose unique fraction meets
// `acceptance`.
IntrinsicWidthReport intrinsic_width(const TwoModeState& probe, GeneratorSpec gen, std::span<const double> candidates,
                                     const IntrinsicWidthOptions& options, std::string probe_id = {});

// Number of connected runs of nodes whose log density is within
// log(1 - peak_tolerance) of the maximum.
int count_peak_runs(std::span<const double> log_density, double peak_tolerance);

// Prior risk of the error 4 sin^2[(g - theta)/2] for a flat prior on [0, W0]
// with the optimal constant estimate g = W0/2: 2[1 - (2/W0) sin(W0/2)].
double periodic_prior_error(double w0);

// Fraction of trajectories whose posterior variance lies within 10% of
// 1/(mu F). Requires mu >= 1 and F > 0.
double asymptotic_normality_report(const Prior& prior, const LikelihoodTable& table, double theta_true, int mu,
                                   double fisher, int trajectories, std::uint64_t seed, unsigned workers = 0);

}  // namespace bayesphase
