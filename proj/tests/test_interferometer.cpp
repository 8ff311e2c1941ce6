// Photon-counting likelihoods, sampling and the fidelity function.

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "oracles.hpp"

#include "bayesphase/errors.hpp"
#include "bayesphase/grid.hpp"
#include "bayesphase/interferometer.hpp"
#include "bayesphase/probes.hpp"

using namespace bayesphase;

namespace {

const auto kPd = GeneratorSpec::phase_difference();
const double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("NOON N=1 outcome distribution") {
    for (double th : {0.0, 0.3, 1.1, 2.0, 4.5}) {
        auto d = outcome_distribution(noon_probe(1), kPd, th);
        REQUIRE(d.size() == 2);
        CHECK(d[{1, 0}] == doctest::Approx(oracle::noon1_p10(th)).epsilon(1e-14));
        CHECK(d[{0, 1}] == doctest::Approx(1.0 - oracle::noon1_p10(th)).epsilon(1e-14));
    }
}

TEST_CASE("coherent outcome distribution matches the Poisson product") {
    auto s = coherent_probe(2.0);
    for (double th : {0.0, 0.7, kPi / 2, 2.5}) {
        auto d = outcome_distribution(s, kPd, th);
        double worst = 0.0;
        for (const auto& [o, p] : d) worst = std::max(worst, std::abs(p - oracle::coherent_p(o.n1, o.n2, 2.0, th)));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("completeness and non-negativity") {
    for (auto spec : {ProbeSpec::coherent(2.0), ProbeSpec::noon(3), ProbeSpec::tsv(2.0), ProbeSpec::ses(2.0)}) {
        auto probe = make_probe(spec);
        double total = 0.0;
        for (const auto& [o, p] : outcome_distribution(probe, spec.generator(), 0.4)) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(std::abs(total - 1.0) < 1e-8);

        PhaseGrid grid(0.0, kPi / 2, 65);
        auto table = LikelihoodTable::build(probe, spec.generator(), grid);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double s = table.column_sum(j);
            CHECK(s <= 1.0 + 1e-12);
            CHECK(s >= 1.0 - 1e-8);
        }
        CHECK(table.discarded_mass() < 1e-8);
    }
    CHECK_THROWS_AS(outcome_distribution(delta_probe(1.0, 0.5), GeneratorSpec::single_mode(), 0.1),
                    UnsupportedError);
}

TEST_CASE("likelihood table structure") {
    PhaseGrid grid(0.0, kPi / 2, 33);
    auto table = LikelihoodTable::build(noon_probe(2), kPd, grid);
    REQUIRE(table.outcome_count() == 3);
    CHECK(table.index_of({2, 0}).has_value());
    CHECK(table.index_of({1, 1}).has_value());
    CHECK(table.index_of({0, 2}).has_value());
    CHECK_FALSE(table.index_of({1, 0}).has_value());

    // columns equal outcome_distribution at the node
    auto coh = coherent_probe(2.0);
    auto t2 = LikelihoodTable::build(coh, kPd, grid);
    for (std::size_t j : {0u, 7u, 32u}) {
        auto d = outcome_distribution(coh, kPd, grid.node(j));
        for (std::size_t r = 0; r < t2.outcome_count(); ++r) CHECK(t2.probability(r, j) == d[t2.outcome(r)]);
    }
    // exact derivatives agree with the analytic NOON N=1 slope cos(theta)/2
    auto t3 = LikelihoodTable::build(noon_probe(1), kPd, grid);
    const auto r10 = *t3.index_of({1, 0});
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(t3.derivative(r10, j) == doctest::Approx(0.5 * std::cos(grid.node(j))).epsilon(1e-13));
}

TEST_CASE("NOON single-shot distribution has period 2pi/N") {
    for (int n = 1; n <= 4; ++n) {
        auto s = noon_probe(n);
        for (double th : {0.2, 1.0, 2.2}) {
            auto a = outcome_distribution(s, kPd, th);
            auto b = outcome_distribution(s, kPd, th + 2 * kPi / n);
            for (const auto& [o, p] : a) CHECK(std::abs(p - b[o]) < 1e-12);
        }
    }
}

TEST_CASE("sampling: NOON N=1 at pi/2 is deterministic") {
    PhaseGrid grid(0.0, kPi / 2, 65);
    auto table = LikelihoodTable::build(noon_probe(1), kPd, grid);
    RngStream stream(1, 0, 0);
    for (const auto& o : sample_outcomes(table, kPi / 2, 200, stream)) CHECK(o == Outcome{1, 0});
    CHECK_THROWS_AS(sample_outcomes(table, 2.0, 5, stream), RangeError);
}

TEST_CASE("sampling: binomial frequency and reproducibility") {
    PhaseGrid grid(0.0, kPi / 2, 65);
    auto table = LikelihoodTable::build(noon_probe(1), kPd, grid);
    const double th = grid.node(13);
    RngStream stream(42, 3, 9);
    const int n = 100000;
    auto draws = sample_outcomes(table, th, n, stream);
    const double hits = std::count(draws.begin(), draws.end(), Outcome{1, 0});
    const double p = oracle::noon1_p10(th);
    CHECK(std::abs(hits - n * p) < 5.0 * std::sqrt(n * p * (1 - p)));

    RngStream again(42, 3, 9);
    CHECK(sample_outcomes(table, th, n, again) == draws);
}

TEST_CASE("sampling: chi-squared goodness of fit") {
    PhaseGrid grid(0.0, kPi / 2, 65);
    for (auto spec : {ProbeSpec::coherent(2.0), ProbeSpec::noon(2), ProbeSpec::noon(1), ProbeSpec::tsv(2.0),
                      ProbeSpec::ses(2.0)}) {
        auto table = LikelihoodTable::build(make_probe(spec), spec.generator(), grid);
        for (std::size_t node : {5u, 32u, 59u}) {
            const int n = 100000;
            RngStream stream(7, node, 0);
            std::vector<double> counts(table.outcome_count(), 0.0);
            OutcomeSampler sampler(table, node);
            for (int i = 0; i < n; ++i) counts[sampler.draw(stream)] += 1.0;
            // pool outcomes with small expectation into one bin
            double chi2 = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
            int bins = 0;
            for (std::size_t r = 0; r < counts.size(); ++r) {
                const double e = n * table.probability(r, node);
                if (e < 5.0) {
                    pooled_obs += counts[r];
                    pooled_exp += e;
                    continue;
                }
                chi2 += (counts[r] - e) * (counts[r] - e) / e;
                ++bins;
            }
            if (pooled_exp >= 5.0) {
                chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
                ++bins;
            }
            if (bins < 2) continue;
            boost::math::chi_squared dist(bins - 1);
            const double pvalue = 1.0 - boost::math::cdf(dist, chi2);
            CHECK_MESSAGE(pvalue > 0.01, spec.id() << " node " << node << " chi2 " << chi2 << " bins " << bins);
        }
    }
}

TEST_CASE("fidelity function") {
    for (int n = 1; n <= 4; ++n) {
        auto f = fidelity_function(noon_probe(n), kPd);
        for (double th : {0.0, 0.5, 1.7, 3.0}) CHECK(std::abs(f(th) - std::cos(n * th / 2)) < 1e-14);
    }
    auto coh = coherent_probe(2.0);
    auto fc = fidelity_function(coh, kPd);
    for (double th : {0.0, 0.5, 1.7, 3.0, 6.0})
        CHECK(std::abs(std::abs(fc(th)) - std::exp(2.0 * (std::cos(th / 2) - 1.0))) < 1e-9);

    for (double delta : {0.5, 0.25}) {
        auto s = delta_probe(1.0, delta);
        auto fd = fidelity_function(s, GeneratorSpec::single_mode());
        for (double th : {0.0, 0.3, 2.0})
            CHECK(std::abs(fd(th) - ((1.0 - delta) + delta * std::polar(1.0, -th / delta))) < 1e-14);
        CHECK(std::abs(fidelity(s, GeneratorSpec::single_mode(), 0.3) - fd(0.3)) < 1e-15);
    }

    for (auto spec : {ProbeSpec::tsv(2.0), ProbeSpec::ses(2.0)}) {
        auto s = make_probe(spec);
        auto f = fidelity_function(s, kPd);
        CHECK(std::abs(f(0.0) - 1.0) < 1e-10);
        for (int k = 0; k <= 100; ++k) {
            const double th = 2 * kPi * k / 100;
            CHECK(std::abs(f(th)) <= 1.0 + 1e-12);
            CHECK(std::abs(f(th) - fidelity(s, kPd, th)) < 1e-12);
        }
    }
}
