// interferometer.hpp
// Measurement model: photon counting after a 50:50 beam splitter.

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bayesphase/fock.hpp"
#include "bayesphase/grid.hpp"
#include "bayesphase/rng.hpp"

namespace bayesphase {

inline constexpr double kOutcomeFloor = 1e-12;

struct Outcome {
    int n1 = 0;
    int n2 = 0;
    friend auto operator<=>(const Outcome&, const Outcome&) = default;
};

// p(n1, n2 | theta) = |<n1, n2| U_BS U(theta) |psi0>|^2 over every outcome of
// the sectors the probe occupies. Throws UnsupportedError for one-mode probes.
std::map<Outcome, double> outcome_distribution(const TwoModeState& probe, GeneratorSpec gen, double theta);

// Single-shot likelihood p(outcome | theta_j) on a phase grid, together with
// the exact derivative d p / d theta (from the amplitudes, not differences).
// Rows are outcomes, columns are grid nodes. Immutable once built.
class LikelihoodTable {
public:
    // Keeps every outcome whose largest probability over the grid exceeds
    // `floor`. Throws UnsupportedError for one-mode probes.
    static LikelihoodTable build(const TwoModeState& probe, GeneratorSpec gen, const PhaseGrid& grid,
                                 double floor = kOutcomeFloor, unsigned workers = 0);

    const PhaseGrid& grid() const { return grid_; }
    std::size_t outcome_count() const { return outcomes_.size(); }
    std::size_t node_count() const { return grid_.size(); }
    std::span<const Outcome> outcomes() const { return outcomes_; }
    const Outcome& outcome(std::size_t row) const { return outcomes_[row]; }
    std::optional<std::size_t> index_of(const Outcome& o) const;

    std::span<const double> probabilities(std::size_t row) const { return row_span(probs_, row); }
    std::span<const double> log_probabilities(std::size_t row) const { return row_span(log_probs_, row); }
    std::span<const double> derivatives(std::size_t row) const { return row_span(derivs_, row); }
    double probability(std::size_t row, std::size_t node) const { return probs_[row * node_count() + node]; }
    double derivative(std::size_t row, std::size_t node) const { return derivs_[row * node_count() + node]; }
    // (dp/dtheta)^2 / p from the amplitudes: 4 Re(A^* A')^2 / |A|^2, or its
    // limit 4 |A'|^2 where |A| is at round-off level (dark outcomes).
    double fisher_density(std::size_t row, std::size_t node) const { return fisher_[row * node_count() + node]; }

    double column_sum(std::size_t node) const;
    // Largest probability mass dropped below the floor at any node.
    double discarded_mass() const { return discarded_mass_; }

private:
    LikelihoodTable(PhaseGrid grid) : grid_(std::move(grid)) {}
    std::span<const double> row_span(const std::vector<double>& v, std::size_t row) const {
        return std::span<const double>(v).subspan(row * node_count(), node_count());
    }

    PhaseGrid grid_;
    std::vector<Outcome> outcomes_;
    std::vector<double> probs_;
    std::vector<double> log_probs_;
    std::vector<double> derivs_;
    std::vector<double> fisher_;
    double discarded_mass_ = 0.0;
};

// Inverse-CDF sampler for the column of one grid node.
class OutcomeSampler {
public:
    OutcomeSampler(const LikelihoodTable& table, std::size_t node);
    // Row index of the drawn outcome.
    std::size_t draw(RngStream& stream) const;

private:
    std::vector<double> cdf_;
};

// mu independent draws from p(. | theta') using the nearest grid node.
// Throws RangeError when theta' is outside the grid.
std::vector<Outcome> sample_outcomes(const LikelihoodTable& table, double theta_true, int mu, RngStream& stream);

using FidelityFn = std::function<complex(double)>;

// f(theta) = <psi0| U(theta) |psi0>.
complex fidelity(const TwoModeState& probe, GeneratorSpec gen, double theta);

// Reusable f(theta); groups amplitudes by generator eigenvalue.
FidelityFn fidelity_function(const TwoModeState& probe, GeneratorSpec gen);

}  // namespace bayesphase
