// fock.cpp

#include "bayesphase/fock.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "bayesphase/errors.hpp"

namespace bayesphase {

TwoModeState::TwoModeState(int mode_count, int cutoff, std::vector<Amplitude> entries)
    : mode_count_(mode_count), cutoff_(cutoff) {
    if (mode_count != 1 && mode_count != 2) throw ParameterError("mode_count must be 1 or 2");
    if (cutoff < 0) throw ParameterError("cutoff must be non-negative");
    for (const auto& e : entries) {
        const auto [n1, n2] = e.occ;
        if (n1 < 0 || n2 < 0) throw ParameterError("negative photon number");
        if (n1 + n2 > cutoff)
            throw ParameterError("occupation (" + std::to_string(n1) + "," + std::to_string(n2) +
                                 ") exceeds cutoff " + std::to_string(cutoff));
        if (mode_count == 1 && n2 != 0) throw ParameterError("one-mode state with n2 != 0");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Amplitude& a, const Amplitude& b) { return sector_order(a.occ, b.occ); });
    for (auto& e : entries) {
        if (!entries_.empty() && entries_.back().occ == e.occ) {
            entries_.back().value += e.value;
        } else {
            entries_.push_back(e);
        }
    }
}

TwoModeState TwoModeState::normalized(int mode_count, int cutoff, std::vector<Amplitude> entries) {
    TwoModeState s(mode_count, cutoff, std::move(entries));
    const double n2 = s.norm_squared();
    if (!(n2 > 0.0)) throw NumericalError("cannot normalize a zero state");
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& e : s.entries_) e.value *= scale;
    return s;
}

complex TwoModeState::amplitude(Occupation occ) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), occ,
                               [](const Amplitude& a, const Occupation& o) { return sector_order(a.occ, o); });
    if (it != entries_.end() && it->occ == occ) return it->value;
    return {0.0, 0.0};
}

double TwoModeState::norm_squared() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e.value);
    return s;
}

int TwoModeState::max_total() const { return entries_.empty() ? 0 : entries_.back().occ.total(); }

namespace {

void check_generator(const TwoModeState& state, GeneratorSpec gen) {
    if (gen.required_modes() != state.mode_count())
        throw ConfigurationError("generator requires " + std::to_string(gen.required_modes()) +
                                 " mode(s), state has " + std::to_string(state.mode_count()));
}

// The sector Hamiltonian a1^dag a2 + a2^dag a1 is real tridiagonal with
// eigenvalues -N, -N+2, ..., N; U_BS = V exp(-i pi/4 Lambda) V^T.
SectorMatrix make_sector(int n) {
    const int dim = n + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < n; ++m) h(m + 1, m) = h(m, m + 1) = std::sqrt((m + 1.0) * (n - m));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    if (eig.info() != Eigen::Success) throw NumericalError("beam-splitter diagonalization failed");
    const Eigen::MatrixXd& v = eig.eigenvectors();
    std::vector<complex> phase(dim);
    for (int k = 0; k < dim; ++k) {
        // eigenvalues are exact integers of the same parity as n
        const double lambda = 2.0 * std::round((eig.eigenvalues()(k) + n) / 2.0) - n;
        phase[k] = std::polar(1.0, -std::numbers::pi / 4.0 * lambda);
    }
    std::vector<complex> data(static_cast<std::size_t>(dim) * dim);
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) {
            complex acc(0.0, 0.0);
            for (int k = 0; k < dim; ++k) acc += v(r, k) * v(c, k) * phase[k];
            data[static_cast<std::size_t>(c) * dim + r] = acc;
        }
    return SectorMatrix(n, std::move(data));
}

}  // namespace

const SectorMatrix& beam_splitter_sector(int total) {
    if (total < 0) throw ParameterError("negative sector");
    static std::mutex mutex;
    static std::deque<SectorMatrix> cache;
    std::lock_guard lock(mutex);
    if (cache.empty()) cache.emplace_back(0, std::vector<complex>{complex(1.0, 0.0)});
    while (static_cast<int>(cache.size()) <= total) cache.push_back(make_sector(static_cast<int>(cache.size())));
    return cache[static_cast<std::size_t>(total)];
}

TwoModeState apply_phase(const TwoModeState& state, GeneratorSpec gen, double theta) {
    check_generator(state, gen);
    if (!std::isfinite(theta)) throw ParameterError("phase must be finite");
    std::vector<Amplitude> out(state.entries().begin(), state.entries().end());
    for (auto& e : out) e.value *= std::polar(1.0, -gen.eigenvalue(e.occ) * theta);
    return TwoModeState(state.mode_count(), state.cutoff(), std::move(out));
}

TwoModeState apply_beam_splitter(const TwoModeState& state) {
    if (state.mode_count() != 2) throw UnsupportedError("beam splitter needs a two-mode state");
    std::vector<Amplitude> out;
    const auto entries = state.entries();
    std::size_t i = 0;
    while (i < entries.size()) {
        const int n = entries[i].occ.total();
        const auto& block = beam_splitter_sector(n);
        std::vector<complex> acc(static_cast<std::size_t>(n) + 1);
        for (; i < entries.size() && entries[i].occ.total() == n; ++i) {
            const auto col = block.column(entries[i].occ.n1);
            for (int m1 = 0; m1 <= n; ++m1) acc[m1] += col[m1] * entries[i].value;
        }
        for (int m1 = 0; m1 <= n; ++m1)
            if (acc[m1] != complex(0.0, 0.0)) out.push_back({{m1, n - m1}, acc[m1]});
    }
    return TwoModeState(2, state.cutoff(), std::move(out));
}

complex inner(const TwoModeState& a, const TwoModeState& b) {
    if (a.mode_count() != b.mode_count()) throw ParameterError("inner product of states with different mode counts");
    complex sum(0.0, 0.0);
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    while (ia != a.entries().end() && ib != b.entries().end()) {
        if (sector_order(ia->occ, ib->occ)) {
            ++ia;
        } else if (sector_order(ib->occ, ia->occ)) {
            ++ib;
        } else {
            sum += std::conj(ia->value) * ib->value;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

GeneratorMoments generator_moments(const TwoModeState& state, GeneratorSpec gen) {
    check_generator(state, gen);
    double w = 0.0, mean = 0.0;
    for (const auto& e : state.entries()) {
        const double p = std::norm(e.value);
        w += p;
        mean += p * gen.eigenvalue(e.occ);
    }
    mean /= w;
    double var = 0.0;
    for (const auto& e : state.entries()) {
        const double d = gen.eigenvalue(e.occ) - mean;
        var += std::norm(e.value) * d * d;
    }
    return {mean, std::max(0.0, var / w)};
}

double mean_photons(const TwoModeState& state) {
    double s = 0.0;
    for (const auto& e : state.entries()) s += std::norm(e.value) * e.occ.total();
    return s;
}

}  // namespace bayesphase
