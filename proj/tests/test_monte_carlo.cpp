#include <doctest.h>

#include <cmath>
#include <vector>

#include "sdmt/bounds.hpp"
#include "sdmt/diversity.hpp"
#include "sdmt/errors.hpp"
#include "sdmt/monte_carlo.hpp"

using namespace sdmt;

namespace {

double db(double v) { return std::pow(10.0, v / 10.0); }

// Array gains close to the simulated values for these configurations.
constexpr double kGain321 = 4.28;
constexpr double kGain421 = 5.61;

const WiretapConfig k421 = make_config(4, 2, 1);
const WiretapConfig k321 = make_config(3, 2, 1);

}  // namespace

TEST_CASE("estimate bookkeeping") {
    const auto e = make_outage_estimate(250, 1000, 3, 2.0, 0.5);
    CHECK(e.probability == 0.25);
    CHECK(e.std_err == doctest::Approx(std::sqrt(0.25 * 0.75 / 1000.0)).epsilon(1e-15));
    CHECK(e.seed == 3);
    CHECK(e.failures == 250);
    CHECK(make_outage_estimate(0, 1000, 3, 2.0, 0.5).std_err == 0.0);
}

TEST_CASE("trivial rates") {
    const auto zero = simulate_outage(k421, make_schedule(k421, 0.0, kGain421), 10.0, 10'000, 1);
    CHECK(zero.failures == 0);
    CHECK(zero.probability == 0.0);
    const auto sure = simulate_outage_at_rate(k421, 1e6, 10.0, 10'000, 1);
    CHECK(sure.probability == 1.0);
    CHECK(std::isnan(sure.r_s));
}

TEST_CASE("argument checks") {
    const auto sched = make_schedule(k421, 0.5, kGain421);
    CHECK_THROWS_AS(simulate_outage(k421, sched, 10.0, 999, 1), ValidationError);
    CHECK_THROWS_AS(simulate_outage(make_config(2, 2, 2), sched, 10.0, 10'000, 1), InfeasibleError);
    CHECK_THROWS_AS(empirical_diversity(k421, sched, 1.0, 10'000, 1, 0.005), ValidationError);
    CHECK_THROWS_AS(empirical_diversity(k421, sched, 1.0, 10'000, 1, 0.6), ValidationError);
}

TEST_CASE("outage lies between the bounds") {
    const auto sched = make_schedule(k421, 0.5, kGain421);
    const double eta = db(10.0);
    const auto mc = simulate_outage(k421, sched, eta, 1'000'000, 20240601);
    const double lo = optimize_lower_bound(k421, sched, eta).probability;
    const double up = optimize_upper_bound(k421, sched, eta).probability;
    CHECK(mc.failures > 100);
    CHECK(mc.probability >= lo - 3.0 * mc.std_err);
    CHECK(mc.probability <= up + 3.0 * mc.std_err);
}

TEST_CASE("results do not depend on the worker count") {
    const auto sched = make_schedule(k321, 1.0, kGain321);
    const auto one = simulate_outage(k321, sched, 10.0, 50'000, 9, 1);
    for (unsigned w : {2u, 3u, 8u}) {
        const auto many = simulate_outage(k321, sched, 10.0, 50'000, 9, w);
        CHECK(many.failures == one.failures);
        CHECK(many.probability == one.probability);
    }
    const auto a = empirical_diversity(k321, sched, 10.0, 50'000, 9, kDefaultSlopeStep, 1);
    const auto b = empirical_diversity(k321, sched, 10.0, 50'000, 9, kDefaultSlopeStep, 4);
    CHECK(a.value == b.value);
    CHECK(a.std_err == b.std_err);
    CHECK(simulate_outage(k321, sched, 10.0, 50'000, 10).failures != one.failures);
}

TEST_CASE("standard errors follow the square-root law") {
    const auto sched = make_schedule(k321, 1.0, kGain321);
    const double eta = db(5.0);
    const auto n1 = empirical_diversity(k321, sched, eta, 100'000, 5);
    const auto n2 = empirical_diversity(k321, sched, eta, 200'000, 5);
    const auto n4 = empirical_diversity(k321, sched, eta, 400'000, 5);
    CHECK(n1.std_err / n4.std_err == doctest::Approx(2.0).epsilon(0.2));
    CHECK(n1.std_err / n2.std_err == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
    const auto p1 = simulate_outage(k321, sched, eta, 100'000, 5);
    const auto p4 = simulate_outage(k321, sched, eta, 400'000, 5);
    CHECK(p1.std_err / p4.std_err == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("outage is nonincreasing in SNR") {
    const std::vector<double> rates{0.5, 1.0};
    for (const auto& [cfg, g] : {std::pair{k321, kGain321}, std::pair{k421, kGain421}}) {
        std::vector<OutageEstimate> prev;
        for (double snr = 0.0; snr <= 20.0; snr += 5.0) {
            const auto cur = simulate_outage_rates(cfg, g, rates, db(snr), 100'000, 11);
            for (std::size_t i = 0; i < prev.size(); ++i)
                CHECK(cur[i].probability <= prev[i].probability + 3.0 * std::hypot(cur[i].std_err, prev[i].std_err));
            prev = cur;
        }
    }
}

TEST_CASE("batched rates match single-rate runs") {
    const std::vector<double> rates{0.5, 1.0, 1.5};
    const double eta = db(5.0);
    const auto batch = simulate_outage_rates(k421, kGain421, rates, eta, 20'000, 13);
    const auto slopes = empirical_diversity_rates(k421, kGain421, rates, eta, 20'000, 13);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const auto sched = make_schedule(k421, rates[i], kGain421);
        CHECK(batch[i].failures == simulate_outage(k421, sched, eta, 20'000, 13).failures);
        try {
            const auto single = empirical_diversity(k421, sched, eta, 20'000, 13);
            REQUIRE(slopes[i].has_value());
            CHECK(slopes[i]->value == single.value);
            CHECK(slopes[i]->std_err == single.std_err);
        } catch (const InsufficientFailuresError&) {
            CHECK_FALSE(slopes[i].has_value());
        }
    }
}

TEST_CASE("too few outages near zero rate") {
    // Outage is around 1e-7 here; a slope needs far more draws.
    const auto sched = make_schedule(k321, 0.05, kGain321);
    CHECK_THROWS_AS(empirical_diversity(k321, sched, db(10.0), 1'000'000, 3), InsufficientFailuresError);
}

TEST_CASE("empirical slope agrees with the lower-bound estimate at low rate") {
    const auto sched = make_schedule(k321, 0.2, kGain321);
    const double eta = 1.0;
    const auto emp = empirical_diversity(k321, sched, eta, 1'000'000, 7);
    const double est = diversity_lower_estimate(k321, sched, eta, optimize_lower_bound(k321, sched, eta).allocation).value;
    CHECK(emp.value > 0.0);
    CHECK(emp.estimator == Estimator::empirical);
    CHECK(std::abs(emp.value - est) <= 3.0 * emp.std_err);
}
