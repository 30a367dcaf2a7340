#include "sdmt/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdmt/errors.hpp"
#include "sdmt/parallel.hpp"

namespace sdmt {

namespace {

void check_run(const WiretapConfig& cfg, std::uint64_t trials, const char* who) {
    cfg.require_feasible(who);
    if (trials < 1000) throw ValidationError(std::string(who) + ": trials must be >= 10^3");
}

}  // namespace

OutageEstimate make_outage_estimate(std::uint64_t failures, std::uint64_t trials,
                                    std::uint64_t seed, double eta, double r_s) {
    OutageEstimate e;
    e.trials = trials;
    e.failures = failures;
    e.probability = static_cast<double>(failures) / static_cast<double>(trials);
    e.std_err = std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(trials));
    e.seed = seed;
    e.eta = eta;
    e.r_s = r_s;
    return e;
}

std::vector<std::uint64_t> count_outages(const WiretapConfig& cfg,
                                         std::span<const OutageQuery> queries,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers) {
    check_run(cfg, trials, "count_outages");
    for (const auto& q : queries)
        if (!(q.eta > 0.0)) throw DomainError("count_outages: eta must be > 0");

    // Each distinct SNR needs one log-det per trial.
    std::vector<double> rhos;
    std::vector<std::size_t> rho_of_query(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const double rho = queries[i].eta / cfg.streams();
        auto it = std::find(rhos.begin(), rhos.end(), rho);
        if (it == rhos.end()) it = rhos.insert(rhos.end(), rho);
        rho_of_query[i] = static_cast<std::size_t>(it - rhos.begin());
    }

    using Counts = std::vector<std::uint64_t>;
    const auto partials = run_trial_blocks<Counts>(
        trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
            Counts counts(queries.size(), 0);
            std::vector<double> psi(rhos.size());
            for (std::uint64_t t = begin; t < end; ++t) {
                RngStream stream(seed, t, StreamDomain::outage);
                const ComplexMatrix h_eq = sample_equivalent_channel(cfg, stream);
                for (std::size_t r = 0; r < rhos.size(); ++r)
                    psi[r] = log_det_mutual_info(h_eq, rhos[r]);
                for (std::size_t i = 0; i < queries.size(); ++i)
                    if (psi[rho_of_query[i]] < queries[i].rate) ++counts[i];
            }
            return counts;
        });

    Counts total(queries.size(), 0);
    for (const auto& p : partials)
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += p[i];
    return total;
}

OutageEstimate simulate_outage(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    const OutageQuery query{eta, secrecy_rate(sched, eta)};
    const auto counts = count_outages(cfg, {&query, 1}, trials, seed, workers);
    return make_outage_estimate(counts[0], trials, seed, eta, sched.r_s);
}

OutageEstimate simulate_outage_at_rate(const WiretapConfig& cfg, double rate, double eta,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned workers) {
    const OutageQuery query{eta, rate};
    const auto counts = count_outages(cfg, {&query, 1}, trials, seed, workers);
    return make_outage_estimate(counts[0], trials, seed, eta,
                                std::numeric_limits<double>::quiet_NaN());
}

std::vector<OutageEstimate> simulate_outage_rates(const WiretapConfig& cfg, double g,
                                                  std::span<const double> r_s, double eta,
                                                  std::uint64_t trials, std::uint64_t seed,
                                                  unsigned workers) {
    std::vector<OutageQuery> queries;
    queries.reserve(r_s.size());
    for (double r : r_s) queries.push_back({eta, secrecy_rate(make_schedule(cfg, r, g), eta)});
    const auto counts = count_outages(cfg, queries, trials, seed, workers);
    std::vector<OutageEstimate> out;
    out.reserve(r_s.size());
    for (std::size_t i = 0; i < r_s.size(); ++i)
        out.push_back(make_outage_estimate(counts[i], trials, seed, eta, r_s[i]));
    return out;
}

namespace {

void check_slope_step(double rel_step) {
    if (!(rel_step >= 0.01 && rel_step <= 0.5))
        throw ValidationError("empirical_diversity: rel_step must lie in [0.01, 0.5]");
}

DiversityPoint slope_from_counts(std::uint64_t lo_count, std::uint64_t hi_count, std::uint64_t trials,
                                 std::uint64_t seed, double eta, double r_s, double rel_step) {
    const auto lo = make_outage_estimate(lo_count, trials, seed, eta * (1.0 - rel_step), r_s);
    const auto hi = make_outage_estimate(hi_count, trials, seed, eta * (1.0 + rel_step), r_s);
    const double span = std::log1p(rel_step) - std::log1p(-rel_step);
    const double slope = -(std::log(hi.probability) - std::log(lo.probability)) / span;
    // Delta method, treating the endpoints as independent (conservative on
    // shared draws).
    const double rel_lo = lo.std_err / lo.probability;
    const double rel_hi = hi.std_err / hi.probability;
    DiversityPoint out{r_s, eta, slope, Estimator::empirical};
    out.std_err = std::sqrt(rel_lo * rel_lo + rel_hi * rel_hi) / span;
    return out;
}

}  // namespace

DiversityPoint empirical_diversity(const WiretapConfig& cfg, const RateSchedule& sched,
                                   double eta, std::uint64_t trials, std::uint64_t seed,
                                   double rel_step, unsigned workers) {
    check_slope_step(rel_step);
    const double eta_lo = eta * (1.0 - rel_step);
    const double eta_hi = eta * (1.0 + rel_step);
    const OutageQuery queries[] = {{eta_lo, secrecy_rate(sched, eta_lo)},
                                   {eta_hi, secrecy_rate(sched, eta_hi)}};
    const auto counts = count_outages(cfg, queries, trials, seed, workers);
    if (counts[0] < kMinSlopeFailures || counts[1] < kMinSlopeFailures) {
        std::ostringstream msg;
        msg << "empirical_diversity: " << counts[0] << " and " << counts[1]
            << " outages in " << trials << " trials at " << cfg.label() << ", r_s=" << sched.r_s
            << "; at least " << kMinSlopeFailures << " needed at each endpoint";
        throw InsufficientFailuresError(msg.str());
    }
    return slope_from_counts(counts[0], counts[1], trials, seed, eta, sched.r_s, rel_step);
}

std::vector<std::optional<DiversityPoint>> empirical_diversity_rates(
    const WiretapConfig& cfg, double g, std::span<const double> r_s, double eta,
    std::uint64_t trials, std::uint64_t seed, double rel_step, unsigned workers) {
    check_slope_step(rel_step);
    const double eta_lo = eta * (1.0 - rel_step);
    const double eta_hi = eta * (1.0 + rel_step);
    std::vector<OutageQuery> queries;
    for (double r : r_s) {
        const auto sched = make_schedule(cfg, r, g);
        queries.push_back({eta_lo, secrecy_rate(sched, eta_lo)});
        queries.push_back({eta_hi, secrecy_rate(sched, eta_hi)});
    }
    const auto counts = count_outages(cfg, queries, trials, seed, workers);
    std::vector<std::optional<DiversityPoint>> out;
    for (std::size_t i = 0; i < r_s.size(); ++i) {
        const auto lo = counts[2 * i];
        const auto hi = counts[2 * i + 1];
        if (lo < kMinSlopeFailures || hi < kMinSlopeFailures)
            out.emplace_back(std::nullopt);
        else
            out.emplace_back(slope_from_counts(lo, hi, trials, seed, eta, r_s[i], rel_step));
    }
    return out;
}

}  // namespace sdmt
