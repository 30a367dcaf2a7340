#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdmt/channel_model.hpp"
#include "sdmt/diversity.hpp"

namespace sdmt {

// Ground-truth secrecy outage of the zero-forcing scheme by simulation.
// Trial t draws (H_m, H_e) from the counter-based stream (seed, t), so any
// worker count yields bit-identical results.

struct OutageEstimate {
    double probability = 0.0;  // failures / trials
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    double std_err = 0.0;  // sqrt(p (1 - p) / trials)
    std::uint64_t seed = 0;
    double eta = 0.0;
    double r_s = 0.0;
};

OutageEstimate make_outage_estimate(std::uint64_t failures, std::uint64_t trials,
                                    std::uint64_t seed, double eta, double r_s);

// One threshold test per trial: log det(I + eta/(n_t-n_e) H_eq H_eq^H) < rate.
struct OutageQuery {
    double eta;
    double rate;  // nats per channel use
};

// Failure counts for every query, all evaluated on the same channel draws.
std::vector<std::uint64_t> count_outages(const WiretapConfig& cfg,
                                         std::span<const OutageQuery> queries,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers = 0);

OutageEstimate simulate_outage(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

// Same as simulate_outage with R_s given directly in nats (r_s is reported as
// NaN in the estimate).
OutageEstimate simulate_outage_at_rate(const WiretapConfig& cfg, double rate, double eta,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned workers = 0);

// Outage for several multiplexing gains at one SNR from one batch of draws.
std::vector<OutageEstimate> simulate_outage_rates(const WiretapConfig& cfg, double g,
                                                  std::span<const double> r_s, double eta,
                                                  std::uint64_t trials, std::uint64_t seed,
                                                  unsigned workers = 0);

inline constexpr std::uint64_t kMinSlopeFailures = 100;
inline constexpr double kDefaultSlopeStep = 0.12;

// Two-point log-log slope -d log P / d log eta between eta(1 - rel_step) and
// eta(1 + rel_step), both endpoints on the same draws. InsufficientFailuresError
// when either endpoint has fewer than 100 outages.
DiversityPoint empirical_diversity(const WiretapConfig& cfg, const RateSchedule& sched,
                                   double eta, std::uint64_t trials, std::uint64_t seed,
                                   double rel_step = kDefaultSlopeStep, unsigned workers = 0);

// empirical_diversity for several multiplexing gains on one batch of draws;
// nullopt where an endpoint has fewer than 100 outages.
std::vector<std::optional<DiversityPoint>> empirical_diversity_rates(
    const WiretapConfig& cfg, double g, std::span<const double> r_s, double eta,
    std::uint64_t trials, std::uint64_t seed, double rel_step = kDefaultSlopeStep,
    unsigned workers = 0);

}  // namespace sdmt
