// Fisher information and the Bayesian lower bounds.

#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "bayesphase/bounds.hpp"
#include "bayesphase/errors.hpp"
#include "bayesphase/probes.hpp"

using namespace bayesphase;

namespace {

const auto kPd = GeneratorSpec::phase_difference();
const double kPi = std::numbers::pi;

MseCurve curve_from(std::vector<double> rel) {
    MseCurve c;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        MseRecord r;
        r.mu = static_cast<int>(i + 1) * 10;
        r.rel_err_percent = rel[i];
        c.records.push_back(r);
    }
    return c;
}

}  // namespace

TEST_CASE("classical Fisher information examples") {
    PhaseGrid grid(0.0, kPi / 2);
    auto noon1 = LikelihoodTable::build(noon_probe(1), kPd, grid);
    for (std::size_t j = 1; j + 1 < grid.size(); j += 50) CHECK(cfi(noon1, grid.node(j)) == doctest::Approx(1.0).epsilon(1e-12));

    auto coh = LikelihoodTable::build(coherent_probe(2.0), kPd, PhaseGrid(0.0, kPi));
    auto tsv = LikelihoodTable::build(tsv_probe(2.0), kPd, grid);
    for (double th : {0.3, 0.8, 1.2}) {
        CHECK(std::abs(cfi(coh, th) - 2.0) < 1e-4);
        CHECK(std::abs(cfi(tsv, th) - 8.0) < 1e-4);
    }
    CHECK_THROWS_AS(cfi(noon1, 0.0), RangeError);
    CHECK_THROWS_AS(cfi(noon1, kPi / 2), RangeError);
    CHECK_THROWS_AS(cfi(noon1, 3.0), RangeError);
}

TEST_CASE("coherent CFI agrees with the Poisson-product oracle") {
    // F = sum over outcomes of (dp/dtheta)^2 / p with analytic Poisson derivatives
    const double nbar = 2.0;
    for (double th : {0.4, 1.1, 2.3}) {
        const double l1 = nbar * std::pow(std::sin(th / 2), 2), l2 = nbar * std::pow(std::cos(th / 2), 2);
        const double d1 = nbar * std::sin(th / 2) * std::cos(th / 2), d2 = -d1;
        double f = 0.0;
        for (int a = 0; a < 40; ++a)
            for (int b = 0; b < 40; ++b) {
                const double p = oracle::poisson(a, l1) * oracle::poisson(b, l2);
                if (p < 1e-300) continue;
                const double dp = p * ((a / l1 - 1.0) * d1 + (b / l2 - 1.0) * d2);
                f += dp * dp / p;
            }
        CHECK(f == doctest::Approx(nbar).epsilon(1e-10));
    }
}

TEST_CASE("finite-difference CFI agrees with the exact one away from dark points") {
    PhaseGrid grid(0.0, kPi / 2);
    auto tsv = LikelihoodTable::build(tsv_probe(2.0), kPd, grid);
    auto noon2 = LikelihoodTable::build(noon_probe(2), kPd, grid);
    for (double th : {0.33, 0.71, 1.13}) {
        CHECK(cfi_finite_difference(noon2, th) == doctest::Approx(cfi(noon2, th)).epsilon(1e-5));
        CHECK(cfi_finite_difference(tsv, th) == doctest::Approx(cfi(tsv, th)).epsilon(5e-2));
    }
    CHECK_THROWS_AS(cfi_finite_difference(tsv, 0.0), RangeError);
}

TEST_CASE("QFI and QCRB") {
    for (int n = 1; n <= 5; ++n) CHECK(qfi(noon_probe(n), kPd) == doctest::Approx(n * n));
    CHECK(qfi(coherent_probe(3.0), kPd) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(qfi(delta_probe(1.0, 0.25), GeneratorSpec::single_mode()) == doctest::Approx(12.0));

    CHECK(qcrb(4.0, 100) == doctest::Approx(2.5e-3).epsilon(1e-15));
    CHECK(qcrb(2.0, 1000) == doctest::Approx(5e-4).epsilon(1e-15));
    CHECK(qcrb(4.0, 200) == doctest::Approx(qcrb(4.0, 100) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(qcrb(4.0, 0), ParameterError);
    CHECK_THROWS_AS(qcrb(0.0, 10), ParameterError);
}

TEST_CASE("Ziv-Zakai bound") {
    auto fn = fidelity_function(noon_probe(2), kPd);
    for (double w0 : {kPi / 3, kPi / 2, kPi, 2 * kPi}) CHECK(zzb(fn, w0, 0) == doctest::Approx(w0 * w0 / 12).epsilon(1e-8));

    // NOON with f = cos(N theta/2) written out in the test
    auto cosf = [](double t) { return complex(std::cos(t), 0.0); };
    const double w0 = kPi / 2;
    for (int mu : {1, 10, 100}) {
        auto integrand = [&](double t) {
            const double x = std::pow(std::cos(t), 2.0 * mu);
            return 0.5 * t * (1 - t / w0) * (1 - std::sqrt(1 - x));
        };
        CHECK(zzb(cosf, w0, mu) == doctest::Approx(oracle::simpson(integrand, 0.0, w0, 20000)).epsilon(1e-7));
        CHECK(zzb(fn, w0, mu) == doctest::Approx(zzb(cosf, w0, mu)).epsilon(1e-12));
    }

    // large mu: no underflow, positive, below the QCRB scale with margin
    auto coh = fidelity_function(coherent_probe(2.0), kPd);
    const double z = zzb(coh, kPi, 1000);
    CHECK(z > 0.0);
    CHECK(z < 1.0 / (1000 * 2.0) * 1.05);
    CHECK(zzb(coh, kPi, 100000) > 0.0);

    // decreasing in mu
    double prev = zzb(coh, kPi, 0);
    for (int mu : {1, 2, 5, 10, 50, 200}) {
        const double v = zzb(coh, kPi, mu);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("Weiss-Weinstein bound") {
    auto noon2 = fidelity_function(noon_probe(2), kPd);
    for (int mu : {1, 5, 100, 1000}) {
        const double v = wwb(noon2, kPi / 2, mu);
        CHECK(v > 0.0);
        CHECK(std::isfinite(v));
    }
    for (auto spec : {ProbeSpec::coherent(2.0), ProbeSpec::tsv(2.0), ProbeSpec::ses(2.0)}) {
        const double v = wwb(fidelity_function(make_probe(spec), kPd), kPi / 2, 1);
        CHECK(v > 0.0);
        CHECK(std::isfinite(v));
    }
    CHECK_THROWS_AS(wwb(noon2, kPi / 2, 0), ParameterError);
    // f identically zero away from the origin: every search point is singular
    auto zero = [](double t) { return t == 0.0 ? complex(1.0, 0.0) : complex(0.0, 0.0); };
    CHECK_THROWS_AS(wwb(zero, 1.0, 3), NumericalError);

    // direct evaluation of the unfactored ratio at a few points is never above the sup
    const double w0 = kPi / 2;
    const int mu = 7;
    const double sup = wwb(noon2, w0, mu, 4096);
    for (int k = 1; k <= 4096; k += 211) {
        const double t = w0 * k / 4097.0;
        const complex f1 = std::cos(t), f2 = std::cos(2 * t);
        const double num = t * t * std::pow(1 - t / w0, 2) * std::pow(std::abs(f1), 4 * mu) / 2;
        const double den = std::pow(std::abs(f1), 2 * mu) - (1 - 2 * t / w0) * std::real(std::pow(f1 * f1 * std::conj(f2), mu));
        if (den > 1e-14) CHECK(num / den <= sup * (1 + 1e-9));
    }
}

TEST_CASE("relative error and thresholds") {
    CHECK(relative_error(2.0, 1.0) == 50.0);
    CHECK(relative_error(1.5, 1.5) == 0.0);
    CHECK(relative_error(1.0, 1.5) == 50.0);
    CHECK_THROWS_AS(relative_error(0.0, 1.0), ParameterError);

    CHECK(mu_threshold(curve_from({0, 0, 0}), 5.0) == 10);
    CHECK(mu_threshold(curve_from({30, 4, 6, 3, 2}), 5.0) == 40);
    CHECK_FALSE(mu_threshold(curve_from({30, 10, 6}), 5.0).has_value());
    CHECK(mu_threshold(curve_from({30, 10, 6}), 6.0) == 30);

    // larger thresholds never give a larger mu_tau
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> rel(15);
        for (auto& v : rel) v = u(rng);
        auto c = curve_from(rel);
        std::optional<int> prev;
        for (double eps = 0.5; eps <= 21.0; eps += 0.5) {
            auto m = mu_threshold(c, eps);
            if (prev) {
                REQUIRE(m.has_value());
                CHECK(*m <= *prev);
            }
            if (m) prev = m;
        }
    }
}

TEST_CASE("assembled curves") {
    std::vector<CurvePoint> pts{{1, 0.2, 0.01}, {10, 0.05, 0.002}, {100, 0.003, 1e-4}};
    auto fn = fidelity_function(noon_probe(2), kPd);
    FidelityProfile prof(fn, kPi / 2);
    auto c = assemble_curve("noon_N2", kPi / 2, 4.0, pts, &prof, {});
    REQUIRE(c.records.size() == 3);
    for (const auto& r : c.records) {
        CHECK(r.qcrb == 1.0 / (r.mu * 4.0));
        CHECK(r.rel_err_percent == relative_error(r.mse, r.qcrb));
        CHECK(*r.zzb == zzb(fn, kPi / 2, r.mu));
        CHECK(*r.wwb == wwb(fn, kPi / 2, r.mu));
    }
    auto bare = assemble_curve("noon_N2", kPi / 2, 4.0, pts, nullptr, {});
    CHECK_FALSE(bare.records[0].zzb.has_value());
    std::vector<CurvePoint> zero{{0, 0.2, 0.0}};
    CHECK_THROWS_AS(assemble_curve("x", 1.0, 4.0, zero, nullptr, {}), ParameterError);
}

TEST_CASE("feasibility criteria") {
    CHECK(min_observations(4.0, kPi * kPi / 48) == doctest::Approx(48.0 / (4 * kPi * kPi)).epsilon(1e-15));
    CHECK(min_observations(4.0, 0.5 * kPi * kPi / 48) == doctest::Approx(2 * 48.0 / (4 * kPi * kPi)));
    CHECK(min_observations(1e300, 1.0) < 1e-299);
    CHECK_THROWS_AS(min_observations(0.0, 1.0), ParameterError);

    CHECK(delta_state_min_observations(0.5) == doctest::Approx(3.0 / (kPi * kPi)).epsilon(1e-15));
    CHECK(delta_state_min_observations(0.1) == doctest::Approx(0.8444).epsilon(1e-4));
    for (double d : {0.01, 0.2, 0.37}) CHECK(delta_state_min_observations(d) == doctest::Approx(delta_state_min_observations(1 - d)).epsilon(1e-14));
    CHECK_THROWS_AS(delta_state_min_observations(0.0), ParameterError);
    CHECK_THROWS_AS(delta_state_min_observations(1.0), ParameterError);

    for (double nbar : {0.5, 1.0, 2.0, 7.0})
        for (double d : {0.1, 0.25, 0.5, 0.8}) {
            const double f = 4 * nbar * nbar * (1 - d) / d;
            const double v = kPi * kPi * d * d / (3 * nbar * nbar);
            CHECK(min_observations(f, v) == doctest::Approx(delta_state_min_observations(d)).epsilon(1e-14));
        }
}
