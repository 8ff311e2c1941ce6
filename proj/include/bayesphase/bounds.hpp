// bounds.hpp
// Fisher information, Cramer-Rao, Ziv-Zakai and Weiss-Weinstein bounds, and
// the threshold analyses built on them.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bayesphase/bayes.hpp"
#include "bayesphase/fock.hpp"
#include "bayesphase/interferometer.hpp"

namespace bayesphase {

// Classical Fisher information sum_n (dp/dtheta)^2 / p at the grid node
// nearest theta, from the table's exact amplitude derivatives (dark outcomes
// enter through their limit). Throws RangeError on boundary nodes.
double cfi(const LikelihoodTable& table, double theta);

// Same quantity with central differences over neighbouring grid nodes and a
// probability floor (default 1e-10). Kept as an independent cross-check.
double cfi_finite_difference(const LikelihoodTable& table, double theta, double floor = 1e-10);

// 4 Var(G) for a pure probe under unitary encoding.
double qfi(const TwoModeState& probe, GeneratorSpec gen);

// 1/(mu F_q). Throws ParameterError for mu < 1 or F_q <= 0.
double qcrb(double fisher, int mu);

// f(theta) sampled once so the bounds can be evaluated for many mu.
class FidelityProfile {
public:
    FidelityProfile(const FidelityFn& f, double w0, int zzb_nodes = 2049, int wwb_points = 4096);

    double w0() const { return w0_; }
    double zzb(int mu) const;
    double wwb(int mu) const;

private:
    double w0_;
    QuadratureRule zzb_rule_;
    std::vector<double> zzb_log_abs_;
    std::vector<double> wwb_theta_;
    std::vector<double> wwb_log_abs_;
    std::vector<double> wwb_log_abs_double_;
    std::vector<double> wwb_phase_;
};

// 1/2 int_0^W0 dtheta theta (1 - theta/W0) [1 - sqrt(1 - |f|^{2 mu})] by
// Simpson quadrature (nodes odd, >= 3).
double zzb(const FidelityFn& f, double w0, int mu, int nodes = 2049);

// sup over theta in (0, W0) of
//   theta^2 (1 - theta/W0)^2 |f|^{4 mu} / 2
//   / (|f|^{2 mu} - (1 - 2 theta/W0) Re{[f(theta)^2 f(2 theta)^*]^mu})
// on a uniform search grid. Throws NumericalError if every point is singular.
double wwb(const FidelityFn& f, double w0, int mu, int search_points = 4096);

// 100 |mse - crb| / mse, in percent.
double relative_error(double mse, double crb);

struct MseRecord {
    int mu = 0;
    double mse = 0.0;
    double mse_stderr = 0.0;
    double qcrb = 0.0;
    std::optional<double> zzb;
    std::optional<double> wwb;
    double rel_err_percent = 0.0;
};

struct MseCurve {
    std::string probe_id;
    double w0 = 0.0;
    double qfi = 0.0;
    std::vector<MseRecord> records;
};

struct BoundSelection {
    bool zzb = true;
    bool wwb = true;
};

// Joins simulated MSE points with the bounds. Points with mu < 1 are rejected.
MseCurve assemble_curve(std::string probe_id, double w0, double fisher, std::span<const CurvePoint> points,
                        const FidelityProfile* profile, BoundSelection bounds);

// Smallest computed mu from which rel_err stays <= eps_tau for every larger
// computed mu; nullopt if the last point is still above the threshold.
std::optional<int> mu_threshold(const MseCurve& curve, double eps_tau);

// 1/(prior_var F_q): observations needed before the data beats the prior.
double min_observations(double fisher, double prior_variance);

// 3/(4 pi^2 delta (1 - delta)) for the one-mode delta family.
double delta_state_min_observations(double delta);

}  // namespace bayesphase
