// bounds.cpp

#include "bayesphase/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bayesphase/errors.hpp"

namespace bayesphase {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t interior_node(const LikelihoodTable& table, double theta) {
    const std::size_t j = table.grid().nearest(theta);
    if (j == 0 || j + 1 >= table.node_count()) throw RangeError("Fisher information needs an interior grid node");
    return j;
}

double log_abs(complex z) {
    const double a = std::abs(z);
    return a > 0.0 ? std::log(a) : kNegInf;
}

// |f|^{k mu} from log|f|; mu = 0 gives 1 even where f vanishes.
double power_of_abs(double log_abs_f, double k, int mu) {
    if (mu == 0) return 1.0;
    if (log_abs_f == kNegInf) return 0.0;
    return std::exp(std::min(0.0, k * mu * log_abs_f));
}

}  // namespace

double cfi(const LikelihoodTable& table, double theta) {
    const std::size_t j = interior_node(table, theta);
    double f = 0.0;
    for (std::size_t r = 0; r < table.outcome_count(); ++r) f += table.fisher_density(r, j);
    return f;
}

double cfi_finite_difference(const LikelihoodTable& table, double theta, double floor) {
    const std::size_t j = interior_node(table, theta);
    const double h = table.grid().spacing();
    double f = 0.0;
    for (std::size_t r = 0; r < table.outcome_count(); ++r) {
        const double p = table.probability(r, j);
        if (p <= floor) continue;
        const double dp = (table.probability(r, j + 1) - table.probability(r, j - 1)) / (2.0 * h);
        f += dp * dp / p;
    }
    return f;
}

double qfi(const TwoModeState& probe, GeneratorSpec gen) { return 4.0 * generator_moments(probe, gen).variance; }

double qcrb(double fisher, int mu) {
    if (mu < 1) throw ParameterError("quantum Cramer-Rao bound is undefined for mu < 1");
    if (!(fisher > 0.0)) throw ParameterError("Fisher information must be positive");
    return 1.0 / (mu * fisher);
}

FidelityProfile::FidelityProfile(const FidelityFn& f, double w0, int zzb_nodes, int wwb_points)
    : w0_(w0), zzb_rule_(simpson(zzb_nodes, 0.0, w0)) {
    if (!(w0 > 0.0)) throw ParameterError("prior width must be positive");
    if (wwb_points < 1) throw ParameterError("need at least one search point");
    zzb_log_abs_.reserve(zzb_rule_.nodes.size());
    for (double t : zzb_rule_.nodes) zzb_log_abs_.push_back(log_abs(f(t)));
    for (int k = 1; k <= wwb_points; ++k) {
        const double t = w0 * k / (wwb_points + 1.0);
        const complex f1 = f(t);
        const complex f2 = f(2.0 * t);
        wwb_theta_.push_back(t);
        wwb_log_abs_.push_back(log_abs(f1));
        wwb_log_abs_double_.push_back(log_abs(f2));
        wwb_phase_.push_back(2.0 * std::arg(f1) - std::arg(f2));
    }
}

double FidelityProfile::zzb(int mu) const {
    if (mu < 0) throw ParameterError("mu must be non-negative");
    double s = 0.0;
    for (std::size_t k = 0; k < zzb_rule_.nodes.size(); ++k) {
        const double t = zzb_rule_.nodes[k];
        const double x = power_of_abs(zzb_log_abs_[k], 2.0, mu);
        // 1 - sqrt(1 - x) without cancellation for small x
        const double bracket = x / (1.0 + std::sqrt(std::max(0.0, 1.0 - x)));
        s += zzb_rule_.weights[k] * 0.5 * t * (1.0 - t / w0_) * bracket;
    }
    return s;
}

double FidelityProfile::wwb(int mu) const {
    if (mu < 1) throw ParameterError("Weiss-Weinstein bound needs mu >= 1");
    // Numerator and denominator are both divided by |f(theta)|^{2 mu}.
    double best = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < wwb_theta_.size(); ++k) {
        if (wwb_log_abs_[k] == kNegInf) continue;
        const double t = wwb_theta_[k];
        const double f2mu = power_of_abs(wwb_log_abs_[k], 2.0, mu);
        const double g_mu = power_of_abs(wwb_log_abs_double_[k], 1.0, mu);
        const double denom = 1.0 - (1.0 - 2.0 * t / w0_) * g_mu * std::cos(mu * wwb_phase_[k]);
        const double valley = t * (1.0 - t / w0_);
        const double numer = 0.5 * valley * valley * f2mu;
        if (!(denom > 1e-14)) continue;
        any = true;
        best = std::max(best, numer / denom);
    }
    if (!any) throw NumericalError("Weiss-Weinstein search: every point is singular");
    return best;
}

double zzb(const FidelityFn& f, double w0, int mu, int nodes) { return FidelityProfile(f, w0, nodes, 1).zzb(mu); }

double wwb(const FidelityFn& f, double w0, int mu, int search_points) {
    return FidelityProfile(f, w0, 3, search_points).wwb(mu);
}

double relative_error(double mse, double crb) {
    if (!(mse != 0.0)) throw ParameterError("relative error is undefined for zero mean square error");
    return 100.0 * std::abs(mse - crb) / mse;
}

MseCurve assemble_curve(std::string probe_id, double w0, double fisher, std::span<const CurvePoint> points,
                        const FidelityProfile* profile, BoundSelection bounds) {
    MseCurve curve{std::move(probe_id), w0, fisher, {}};
    for (const auto& p : points) {
        if (p.mu < 1) throw ParameterError("curves start at mu = 1");
        MseRecord r;
        r.mu = p.mu;
        r.mse = p.value;
        r.mse_stderr = p.std_error;
        r.qcrb = qcrb(fisher, p.mu);
        if (profile && bounds.zzb) r.zzb = profile->zzb(p.mu);
        if (profile && bounds.wwb) r.wwb = profile->wwb(p.mu);
        r.rel_err_percent = relative_error(r.mse, r.qcrb);
        curve.records.push_back(r);
    }
    return curve;
}

std::optional<int> mu_threshold(const MseCurve& curve, double eps_tau) {
    std::optional<int> result;
    for (auto it = curve.records.rbegin(); it != curve.records.rend(); ++it) {
        if (it->rel_err_percent > eps_tau) break;
        result = it->mu;
    }
    return result;
}

double min_observations(double fisher, double prior_variance) {
    if (!(fisher > 0.0) || !(prior_variance > 0.0))
        throw ParameterError("Fisher information and prior variance must be positive");
    return 1.0 / (prior_variance * fisher);
}

double delta_state_min_observations(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    return 3.0 / (4.0 * std::numbers::pi * std::numbers::pi * delta * (1.0 - delta));
}

}  // namespace bayesphase
