// probes.hpp
// Constructors for the probe families: coherent, NOON, twin squeezed vacuum,
// squeezed entangled and the one-mode delta family.

#pragma once

#include <optional>
#include <string>

#include "bayesphase/fock.hpp"

namespace bayesphase {

// Norm deficit a truncated probe may carry before it is renormalized.
inline constexpr double kTruncationTolerance = 1e-10;

enum class ProbeFamily { Coherent, Noon, TwinSqueezedVacuum, SqueezedEntangled, DeltaOneMode };

struct ProbeSpec {
    ProbeFamily family = ProbeFamily::Coherent;
    double nbar = 2.0;           // Coherent, TwinSqueezedVacuum, SqueezedEntangled
    int noon_n = 2;              // Noon
    double delta_n = 1.0;        // DeltaOneMode: N (= mean photon number)
    double delta = 0.5;          // DeltaOneMode
    std::optional<int> cutoff;   // unset: smallest cutoff meeting the deficit policy

    static ProbeSpec coherent(double nbar) {
        ProbeSpec s;
        s.family = ProbeFamily::Coherent;
        s.nbar = nbar;
        return s;
    }
    static ProbeSpec noon(int n) {
        ProbeSpec s;
        s.family = ProbeFamily::Noon;
        s.noon_n = n;
        return s;
    }
    static ProbeSpec tsv(double nbar) {
        ProbeSpec s;
        s.family = ProbeFamily::TwinSqueezedVacuum;
        s.nbar = nbar;
        return s;
    }
    static ProbeSpec ses(double nbar) {
        ProbeSpec s;
        s.family = ProbeFamily::SqueezedEntangled;
        s.nbar = nbar;
        return s;
    }
    static ProbeSpec delta_family(double n, double delta) {
        ProbeSpec s;
        s.family = ProbeFamily::DeltaOneMode;
        s.delta_n = n;
        s.delta = delta;
        return s;
    }

    // Mean photon number the probe is built for.
    double mean_photon_target() const;
    GeneratorSpec generator() const;
    bool two_mode() const { return family != ProbeFamily::DeltaOneMode; }
    // Short stable identifier, e.g. "noon_N2" or "tsv_nbar2".
    std::string id() const;
};

std::string to_string(ProbeFamily family);
// Accepts coherent, noon, tsv, ses, delta (and the long family names).
ProbeFamily parse_family(const std::string& name);

// |sqrt(nbar/2), -i sqrt(nbar/2)>. Throws TruncationError when the cutoff
// leaves a norm deficit >= kTruncationTolerance.
TwoModeState coherent_probe(double nbar, int cutoff);
TwoModeState coherent_probe(double nbar);

// (|N,0> + |0,N>)/sqrt2.
TwoModeState noon_probe(int n);

// S1(r) S2(r)|0,0> with nbar = 2 sinh^2 r.
TwoModeState tsv_probe(double nbar, int cutoff);
TwoModeState tsv_probe(double nbar);

// Norm * (|r,0> + |0,r>), Norm = [2 + 2/cosh r]^{-1/2}, nbar = 2 Norm^2 sinh^2 r.
TwoModeState ses_probe(double nbar, int cutoff);
TwoModeState ses_probe(double nbar);

// One-mode sqrt(1-delta)|0> + sqrt(delta)|N/delta>; N/delta must be an integer.
TwoModeState delta_probe(double n, double delta);

TwoModeState make_probe(const ProbeSpec& spec);

// Squeezing parameter of the SES probe for a given mean photon number.
// Bisection to 1e-10 on nbar; throws NumericalError on non-convergence.
double ses_squeezing_for(double nbar);

// Single-mode squeezed vacuum amplitude <2k|S(r)|0>.
double squeezed_vacuum_amplitude(double r, int k);

}  // namespace bayesphase
