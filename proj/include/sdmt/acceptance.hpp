#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdmt {

// Release-gate checks, numbered 1..9. Each produces one verdict line; the
// detail text names the worst offending point so a failure is reproducible.

struct AcceptanceOptions {
    std::uint64_t trials = 1'000'000;       // Monte-Carlo outage and moments
    std::uint64_t gain_trials = 1'000'000;  // array gain per configuration
    std::uint64_t seed = 20240601;
    unsigned workers = 0;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
};

CriterionResult check_sandwich(const AcceptanceOptions& opts);
CriterionResult check_single_stream_coincidence(const AcceptanceOptions& opts);
CriterionResult check_estimator_slopes(const AcceptanceOptions& opts);
CriterionResult check_high_snr_limits(const AcceptanceOptions& opts);
CriterionResult check_low_rate_limits(const AcceptanceOptions& opts);
CriterionResult check_gaussian_low_snr(const AcceptanceOptions& opts);
CriterionResult check_optimizer(const AcceptanceOptions& opts);
CriterionResult check_array_gain_and_determinism(const AcceptanceOptions& opts);
CriterionResult check_special_functions(const AcceptanceOptions& opts);

// Runs every criterion in order, printing one line per criterion to `out`
// as soon as it completes ("criterion N PASS|FAIL title: detail").
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& out);

std::string format_result(const CriterionResult& r);

}  // namespace sdmt
