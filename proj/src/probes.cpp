// probes.cpp

#include "bayesphase/probes.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "bayesphase/errors.hpp"

namespace bayesphase {

namespace {

void require_positive_nbar(double nbar) {
    if (!(nbar > 0.0) || !std::isfinite(nbar)) throw ParameterError("mean photon number must be positive");
}

std::string compact(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Renormalizes a truncated expansion after checking the deficit policy.
TwoModeState finish_truncated(const char* name, int cutoff, std::vector<Amplitude> entries) {
    TwoModeState raw(2, cutoff, std::move(entries));
    const double deficit = 1.0 - raw.norm_squared();
    if (deficit >= kTruncationTolerance)
        throw TruncationError(std::string(name) + " probe: cutoff " + std::to_string(cutoff) +
                                  " leaves norm deficit " + compact(deficit),
                              deficit);
    return TwoModeState::normalized(2, cutoff, {raw.entries().begin(), raw.entries().end()});
}

// Smallest cutoff (stepping by `step`) for which `build` meets the policy.
TwoModeState with_auto_cutoff(int start, int step, const std::function<TwoModeState(int)>& build) {
    for (int cutoff = start; cutoff < 4096; cutoff += step) {
        try {
            return build(cutoff);
        } catch (const TruncationError&) {
        }
    }
    throw NumericalError("no Fock cutoff below 4096 meets the truncation policy");
}

std::vector<Amplitude> coherent_entries(double nbar, int cutoff) {
    const double log_half = std::log(nbar / 2.0);
    std::vector<Amplitude> out;
    const complex phase_step(0.0, -1.0);
    for (int n1 = 0; n1 <= cutoff; ++n1) {
        complex phase(1.0, 0.0);
        for (int n2 = 0; n1 + n2 <= cutoff; ++n2) {
            const double log_mag = 0.5 * (n1 + n2) * log_half - 0.5 * nbar -
                                   0.5 * (std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0));
            out.push_back({{n1, n2}, std::exp(log_mag) * phase});
            phase *= phase_step;
        }
    }
    return out;
}

// <n|S(r)|0> for n = 0..max_n (odd entries zero).
std::vector<double> squeezed_column(double r, int max_n) {
    std::vector<double> c(static_cast<std::size_t>(max_n) + 1, 0.0);
    for (int k = 0; 2 * k <= max_n; ++k) c[2 * k] = squeezed_vacuum_amplitude(r, k);
    return c;
}

}  // namespace

double squeezed_vacuum_amplitude(double r, int k) {
    const double t = std::tanh(r);
    const double log_mag = 0.5 * std::lgamma(2.0 * k + 1.0) - k * std::log(2.0) - std::lgamma(k + 1.0) -
                           0.5 * std::log(std::cosh(r)) + k * std::log(std::abs(t));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (k > 0 && t == 0.0) return 0.0;
    return sign * std::exp(log_mag);
}

double ProbeSpec::mean_photon_target() const {
    switch (family) {
        case ProbeFamily::Noon: return noon_n;
        case ProbeFamily::DeltaOneMode: return delta_n;
        default: return nbar;
    }
}

GeneratorSpec ProbeSpec::generator() const {
    return two_mode() ? GeneratorSpec::phase_difference() : GeneratorSpec::single_mode();
}

std::string ProbeSpec::id() const {
    switch (family) {
        case ProbeFamily::Coherent: return "coherent_nbar" + compact(nbar);
        case ProbeFamily::Noon: return "noon_N" + std::to_string(noon_n);
        case ProbeFamily::TwinSqueezedVacuum: return "tsv_nbar" + compact(nbar);
        case ProbeFamily::SqueezedEntangled: return "ses_nbar" + compact(nbar);
        case ProbeFamily::DeltaOneMode: return "delta_N" + compact(delta_n) + "_d" + compact(delta);
    }
    return "unknown";
}

std::string to_string(ProbeFamily family) {
    switch (family) {
        case ProbeFamily::Coherent: return "coherent";
        case ProbeFamily::Noon: return "noon";
        case ProbeFamily::TwinSqueezedVacuum: return "tsv";
        case ProbeFamily::SqueezedEntangled: return "ses";
        case ProbeFamily::DeltaOneMode: return "delta";
    }
    return "unknown";
}

ProbeFamily parse_family(const std::string& name) {
    if (name == "coherent") return ProbeFamily::Coherent;
    if (name == "noon") return ProbeFamily::Noon;
    if (name == "tsv" || name == "twin_squeezed_vacuum") return ProbeFamily::TwinSqueezedVacuum;
    if (name == "ses" || name == "squeezed_entangled") return ProbeFamily::SqueezedEntangled;
    if (name == "delta" || name == "delta_one_mode") return ProbeFamily::DeltaOneMode;
    throw ConfigError("unknown probe family '" + name + "'");
}

TwoModeState coherent_probe(double nbar, int cutoff) {
    require_positive_nbar(nbar);
    return finish_truncated("coherent", cutoff, coherent_entries(nbar, cutoff));
}

TwoModeState coherent_probe(double nbar) {
    require_positive_nbar(nbar);
    return with_auto_cutoff(static_cast<int>(std::ceil(nbar)), 1,
                            [nbar](int c) { return coherent_probe(nbar, c); });
}

TwoModeState noon_probe(int n) {
    if (n < 1) throw ParameterError("NOON probe needs N >= 1");
    const double a = 1.0 / std::sqrt(2.0);
    return TwoModeState(2, n, {{{n, 0}, a}, {{0, n}, a}});
}

TwoModeState tsv_probe(double nbar, int cutoff) {
    require_positive_nbar(nbar);
    const double r = std::asinh(std::sqrt(nbar / 2.0));
    const auto c = squeezed_column(r, cutoff);
    std::vector<Amplitude> entries;
    for (int n1 = 0; n1 <= cutoff; n1 += 2)
        for (int n2 = 0; n1 + n2 <= cutoff; n2 += 2) entries.push_back({{n1, n2}, c[n1] * c[n2]});
    return finish_truncated("twin squeezed vacuum", cutoff, std::move(entries));
}

TwoModeState tsv_probe(double nbar) {
    require_positive_nbar(nbar);
    return with_auto_cutoff(2, 2, [nbar](int c) { return tsv_probe(nbar, c); });
}

double ses_squeezing_for(double nbar) {
    require_positive_nbar(nbar);
    auto mean = [](double r) {
        const double s = std::sinh(r);
        return 2.0 * s * s / (2.0 + 2.0 / std::cosh(r));
    };
    double lo = 0.0, hi = 1.0;
    while (mean(hi) < nbar) {
        hi *= 2.0;
        if (hi > 64.0) throw NumericalError("SES squeezing search diverged");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean(mid) < nbar ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    if (std::abs(mean(r) - nbar) > 1e-10) throw NumericalError("SES squeezing bisection did not converge");
    return r;
}

TwoModeState ses_probe(double nbar, int cutoff) {
    const double r = ses_squeezing_for(nbar);
    const double norm = 1.0 / std::sqrt(2.0 + 2.0 / std::cosh(r));
    const auto c = squeezed_column(r, cutoff);
    std::vector<Amplitude> entries;
    for (int n = 0; n <= cutoff; n += 2) {
        entries.push_back({{n, 0}, norm * c[n]});
        entries.push_back({{0, n}, norm * c[n]});  // (0,0) merges with the line above
    }
    return finish_truncated("squeezed entangled", cutoff, std::move(entries));
}

TwoModeState ses_probe(double nbar) {
    require_positive_nbar(nbar);
    return with_auto_cutoff(2, 2, [nbar](int c) { return ses_probe(nbar, c); });
}

TwoModeState delta_probe(double n, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (!(n > 0.0)) throw ParameterError("delta family needs N > 0");
    const double ratio = n / delta;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0)
        throw ParameterError("delta family needs N/delta to be an integer, got " + compact(ratio));
    const int high = static_cast<int>(rounded);
    return TwoModeState(1, high, {{{0, 0}, std::sqrt(1.0 - delta)}, {{high, 0}, std::sqrt(delta)}});
}

TwoModeState make_probe(const ProbeSpec& spec) {
    switch (spec.family) {
        case ProbeFamily::Coherent:
            return spec.cutoff ? coherent_probe(spec.nbar, *spec.cutoff) : coherent_probe(spec.nbar);
        case ProbeFamily::Noon: return noon_probe(spec.noon_n);
        case ProbeFamily::TwinSqueezedVacuum:
            return spec.cutoff ? tsv_probe(spec.nbar, *spec.cutoff) : tsv_probe(spec.nbar);
        case ProbeFamily::SqueezedEntangled:
            return spec.cutoff ? ses_probe(spec.nbar, *spec.cutoff) : ses_probe(spec.nbar);
        case ProbeFamily::DeltaOneMode: return delta_probe(spec.delta_n, spec.delta);
    }
    throw ParameterError("unknown probe family");
}

}  // namespace bayesphase
