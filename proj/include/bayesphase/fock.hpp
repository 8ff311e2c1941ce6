// fock.hpp
// Truncated two-mode Fock space: sparse states, phase encoding, the 50:50
// beam splitter and generator statistics.

#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace bayesphase {

using complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;

struct Occupation {
    int n1 = 0;
    int n2 = 0;

    int total() const { return n1 + n2; }
    friend auto operator<=>(const Occupation&, const Occupation&) = default;
};

// Canonical storage order: by total photon number, then by n1.
inline bool sector_order(const Occupation& a, const Occupation& b) {
    return a.total() != b.total() ? a.total() < b.total() : a.n1 < b.n1;
}

enum class GeneratorKind {
    PhaseDifference,  // G = (n1 - n2) / 2, two modes
    SingleMode,       // G = n, one mode
};

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::PhaseDifference;

    static GeneratorSpec phase_difference() { return {GeneratorKind::PhaseDifference}; }
    static GeneratorSpec single_mode() { return {GeneratorKind::SingleMode}; }

    double eigenvalue(const Occupation& occ) const {
        return kind == GeneratorKind::PhaseDifference ? 0.5 * (occ.n1 - occ.n2)
                                                      : static_cast<double>(occ.n1);
    }
    int required_modes() const { return kind == GeneratorKind::PhaseDifference ? 2 : 1; }
};

struct Amplitude {
    Occupation occ;
    complex value;
};

// Immutable pure state over occupations with n1 + n2 <= cutoff. One-mode
// states keep n2 == 0.
class TwoModeState {
public:
    // Entries are sorted into sector order and merged; duplicates are summed.
    // Throws ParameterError on negative or out-of-cutoff occupations, or on
    // an n2 != 0 entry of a one-mode state. Does not normalize.
    TwoModeState(int mode_count, int cutoff, std::vector<Amplitude> entries);

    // Same as above but rescaled to unit norm. Throws NumericalError for the
    // zero vector.
    static TwoModeState normalized(int mode_count, int cutoff, std::vector<Amplitude> entries);

    int mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    std::span<const Amplitude> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    // Zero when the occupation is not stored.
    complex amplitude(Occupation occ) const;
    double norm_squared() const;
    // Largest total photon number that carries amplitude.
    int max_total() const;

private:
    int mode_count_;
    int cutoff_;
    std::vector<Amplitude> entries_;
};

// Multiplies each amplitude by exp(-i g theta).
// Throws ConfigurationError when gen does not match the state's mode count.
TwoModeState apply_phase(const TwoModeState& state, GeneratorSpec gen, double theta);

// U_BS = exp[-i (a1^dag a2 + a2^dag a1) pi/4], applied sector by sector.
// Throws UnsupportedError for one-mode states.
TwoModeState apply_beam_splitter(const TwoModeState& state);

// <a|b>; occupations missing from either side count as zero.
complex inner(const TwoModeState& a, const TwoModeState& b);

struct GeneratorMoments {
    double mean = 0.0;
    double variance = 0.0;
};

GeneratorMoments generator_moments(const TwoModeState& state, GeneratorSpec gen);

double mean_photons(const TwoModeState& state);

// Dense (N+1)x(N+1) beam-splitter block for the total-N sector, column-major:
// element (row m1, column k1) is <m1, N-m1| U_BS |k1, N-k1>.
class SectorMatrix {
public:
    SectorMatrix(int total, std::vector<complex> data) : total_(total), data_(std::move(data)) {}

    int total() const { return total_; }
    int dim() const { return total_ + 1; }
    complex operator()(int row, int col) const { return data_[col * dim() + row]; }
    std::span<const complex> column(int col) const {
        return std::span<const complex>(data_).subspan(static_cast<std::size_t>(col) * dim(), dim());
    }

private:
    int total_;
    std::vector<complex> data_;
};

// Cached sector blocks; thread-safe. References stay valid for the lifetime
// of the program.
const SectorMatrix& beam_splitter_sector(int total);

}  // namespace bayesphase
