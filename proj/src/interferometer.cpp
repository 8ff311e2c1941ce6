// interferometer.cpp

#include "bayesphase/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bayesphase/errors.hpp"
#include "bayesphase/parallel.hpp"

namespace bayesphase {

namespace {

struct SectorInput {
    int total = 0;
    std::vector<int> columns;  // input n1
    std::vector<complex> amplitudes;
    std::vector<double> eigenvalues;
};

std::vector<SectorInput> split_sectors(const TwoModeState& probe, GeneratorSpec gen) {
    if (probe.mode_count() != 2) throw UnsupportedError("photon-counting model needs a two-mode probe");
    if (gen.required_modes() != 2) throw ConfigurationError("two-mode probe needs the phase-difference generator");
    std::vector<SectorInput> sectors;
    for (const auto& e : probe.entries()) {
        if (sectors.empty() || sectors.back().total != e.occ.total()) sectors.push_back({e.occ.total(), {}, {}, {}});
        auto& s = sectors.back();
        s.columns.push_back(e.occ.n1);
        s.amplitudes.push_back(e.value);
        s.eigenvalues.push_back(gen.eigenvalue(e.occ));
    }
    return sectors;
}

// Output amplitudes of one sector at phase theta, optionally with d/dtheta.
void sector_amplitudes(const SectorInput& s, double theta, std::vector<complex>& out, std::vector<complex>* dout) {
    const auto& block = beam_splitter_sector(s.total);
    out.assign(static_cast<std::size_t>(s.total) + 1, complex(0.0, 0.0));
    if (dout) dout->assign(out.size(), complex(0.0, 0.0));
    for (std::size_t k = 0; k < s.columns.size(); ++k) {
        const double g = s.eigenvalues[k];
        const complex c = s.amplitudes[k] * std::polar(1.0, -g * theta);
        const complex dc = c * complex(0.0, -g);
        const auto col = block.column(s.columns[k]);
        for (int m = 0; m <= s.total; ++m) out[m] += col[m] * c;
        if (dout)
            for (int m = 0; m <= s.total; ++m) (*dout)[m] += col[m] * dc;
    }
}

}  // namespace

std::map<Outcome, double> outcome_distribution(const TwoModeState& probe, GeneratorSpec gen, double theta) {
    std::map<Outcome, double> dist;
    std::vector<complex> amps;
    for (const auto& s : split_sectors(probe, gen)) {
        sector_amplitudes(s, theta, amps, nullptr);
        for (int m = 0; m <= s.total; ++m) dist[{m, s.total - m}] = std::norm(amps[m]);
    }
    return dist;
}

LikelihoodTable LikelihoodTable::build(const TwoModeState& probe, GeneratorSpec gen, const PhaseGrid& grid,
                                       double floor, unsigned workers) {
    const auto sectors = split_sectors(probe, gen);
    const std::size_t nodes = grid.size();

    struct SectorRows {
        std::vector<Outcome> outcomes;
        std::vector<double> probs;
        std::vector<double> derivs;
        std::vector<double> fisher;
        std::vector<double> dropped;  // per node
    };
    std::vector<SectorRows> parts(sectors.size());

    parallel_for(sectors.size(), workers, [&](std::size_t si) {
        const auto& s = sectors[si];
        const std::size_t dim = static_cast<std::size_t>(s.total) + 1;
        std::vector<double> p(dim * nodes), dp(dim * nodes), fi(dim * nodes);
        std::vector<complex> amps, damps;
        double scale = 0.0;
        for (const auto& a : s.amplitudes) scale += std::norm(a);
        const double dark = 1e-24 * scale;
        for (std::size_t j = 0; j < nodes; ++j) {
            sector_amplitudes(s, grid.node(j), amps, &damps);
            for (std::size_t m = 0; m < dim; ++m) {
                p[m * nodes + j] = std::norm(amps[m]);
                const double d = 2.0 * std::real(std::conj(amps[m]) * damps[m]);
                dp[m * nodes + j] = d;
                fi[m * nodes + j] = p[m * nodes + j] > dark ? d * d / p[m * nodes + j] : 4.0 * std::norm(damps[m]);
            }
        }
        auto& part = parts[si];
        part.dropped.assign(nodes, 0.0);
        for (std::size_t m = 0; m < dim; ++m) {
            const auto row = std::span<const double>(p).subspan(m * nodes, nodes);
            if (*std::max_element(row.begin(), row.end()) > floor) {
                part.outcomes.push_back({static_cast<int>(m), s.total - static_cast<int>(m)});
                part.probs.insert(part.probs.end(), row.begin(), row.end());
                part.derivs.insert(part.derivs.end(), dp.begin() + m * nodes, dp.begin() + (m + 1) * nodes);
                part.fisher.insert(part.fisher.end(), fi.begin() + m * nodes, fi.begin() + (m + 1) * nodes);
            } else {
                for (std::size_t j = 0; j < nodes; ++j) part.dropped[j] += row[j];
            }
        }
    });

    LikelihoodTable table(grid);
    std::vector<double> dropped(nodes, 0.0);
    for (auto& part : parts) {
        table.outcomes_.insert(table.outcomes_.end(), part.outcomes.begin(), part.outcomes.end());
        table.probs_.insert(table.probs_.end(), part.probs.begin(), part.probs.end());
        table.derivs_.insert(table.derivs_.end(), part.derivs.begin(), part.derivs.end());
        table.fisher_.insert(table.fisher_.end(), part.fisher.begin(), part.fisher.end());
        for (std::size_t j = 0; j < nodes; ++j) dropped[j] += part.dropped[j];
    }
    table.discarded_mass_ = dropped.empty() ? 0.0 : *std::max_element(dropped.begin(), dropped.end());
    table.log_probs_.resize(table.probs_.size());
    for (std::size_t i = 0; i < table.probs_.size(); ++i)
        table.log_probs_[i] = table.probs_[i] > 0.0 ? std::log(table.probs_[i])
                                                    : -std::numeric_limits<double>::infinity();
    return table;
}

std::optional<std::size_t> LikelihoodTable::index_of(const Outcome& o) const {
    auto less = [](const Outcome& a, const Outcome& b) {
        const int ta = a.n1 + a.n2, tb = b.n1 + b.n2;
        return ta != tb ? ta < tb : a.n1 < b.n1;
    };
    auto it = std::lower_bound(outcomes_.begin(), outcomes_.end(), o, less);
    if (it != outcomes_.end() && *it == o) return static_cast<std::size_t>(it - outcomes_.begin());
    return std::nullopt;
}

double LikelihoodTable::column_sum(std::size_t node) const {
    double s = 0.0;
    for (std::size_t r = 0; r < outcome_count(); ++r) s += probability(r, node);
    return s;
}

OutcomeSampler::OutcomeSampler(const LikelihoodTable& table, std::size_t node) {
    cdf_.resize(table.outcome_count());
    double acc = 0.0;
    for (std::size_t r = 0; r < cdf_.size(); ++r) {
        acc += table.probability(r, node);
        cdf_[r] = acc;
    }
    if (!(acc > 0.0)) throw NumericalError("empty likelihood column");
}

std::size_t OutcomeSampler::draw(RngStream& stream) const {
    const double u = stream.uniform() * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::size_t>(it - cdf_.begin());
}

std::vector<Outcome> sample_outcomes(const LikelihoodTable& table, double theta_true, int mu, RngStream& stream) {
    if (mu < 1) throw ParameterError("need at least one observation");
    const OutcomeSampler sampler(table, table.grid().nearest(theta_true));
    std::vector<Outcome> out;
    out.reserve(mu);
    for (int i = 0; i < mu; ++i) out.push_back(table.outcome(sampler.draw(stream)));
    return out;
}

complex fidelity(const TwoModeState& probe, GeneratorSpec gen, double theta) {
    return inner(probe, apply_phase(probe, gen, theta));
}

FidelityFn fidelity_function(const TwoModeState& probe, GeneratorSpec gen) {
    if (gen.required_modes() != probe.mode_count())
        throw ConfigurationError("generator does not match the probe's mode count");
    std::map<double, double> weight_by_eigenvalue;
    for (const auto& e : probe.entries()) weight_by_eigenvalue[gen.eigenvalue(e.occ)] += std::norm(e.value);
    std::vector<std::pair<double, double>> groups(weight_by_eigenvalue.begin(), weight_by_eigenvalue.end());
    return [groups = std::move(groups)](double theta) {
        complex f(0.0, 0.0);
        for (const auto& [g, w] : groups) f += w * std::polar(1.0, -g * theta);
        return f;
    };
}

}  // namespace bayesphase
