#pragma once

#include <string_view>

#include "sdmt/bounds.hpp"

namespace sdmt {

// Finite-SNR secrecy diversity d_s(r_s, eta) = -eta * d(log P_out)/d(eta) and
// its analytic estimates. Allocations are held fixed when differentiating a
// bound, so each estimate is exactly the log-slope of its generating bound.

enum class Estimator { upper, lower, exact_m1, asymptotic, gaussian, empirical };

std::string_view to_string(Estimator e);

struct DiversityPoint {
    double r_s = 0.0;
    double eta = 0.0;
    double value = 0.0;
    Estimator estimator = Estimator::upper;
    double std_err = 0.0;  // nonzero for Monte-Carlo slopes only
};

// f_j(x) = ((1+g eta)^x - x g eta (1+g eta)^(x-1) - 1) * p_a(xi(x)) / P(a, xi(x))
// with a = k - j + 1 and p_a the Gamma(a,1) density. j may be <= 0; DomainError
// when k - j < 0. At x = 0 the continuous limit
// a * eta/(n_t-n_e) * (1 - g eta / ((1+g eta) ln(1+g eta))) is returned.
// (n_t-n_e)/eta * f_j(x) equals -eta d/d(eta) log P(a, xi(x)).
double f_factor(int j, double x, double eta, const RateSchedule& sched, const WiretapConfig& cfg);

// -eta d/d(eta) of log outage_upper_bound at fixed b. At r_s = 0 the r_s -> 0
// limit is returned.
DiversityPoint diversity_upper_estimate(const WiretapConfig& cfg, const RateSchedule& sched,
                                        double eta, const Allocation& alloc);

// -eta d/d(eta) of log outage_lower_bound at fixed a:
// (n_t-n_e)/eta * sum_l f_{2l-m}(a_l).
DiversityPoint diversity_lower_estimate(const WiretapConfig& cfg, const RateSchedule& sched,
                                        double eta, const Allocation& alloc);

// Exact diversity when m = 1 (the two bounds coincide). DomainError otherwise.
DiversityPoint diversity_exact_m1(const WiretapConfig& cfg, const RateSchedule& sched, double eta);

// High-SNR secrecy DMT: piecewise-linear through (l, (n_t-n_e-l)(n_m-l)),
// l = 0..m. Zero for infeasible configurations.
double asymptotic_dmt(const WiretapConfig& cfg, double r_s);

struct MaxDiversity {
    double upper;
    double lower;
};

// r_s -> 0 limits of the two estimates:
//   upper = m k (1 - (m-1)/(2k)) * c,  lower = m k * c,
//   c = 1 - g eta / ((1 + g eta) ln(1 + g eta)).
MaxDiversity max_diversity_estimates(const WiretapConfig& cfg, const RateSchedule& sched,
                                     double eta);

// eta -> infinity limit of the upper-bound estimate under the optimal
// allocation. Two linear branches meeting at r_s = 1.
double high_snr_upper_dmt(const WiretapConfig& cfg, double r_s);

// Same limit on [0, 1) assembled from its two diversity contributions,
// (1 - r_s) sum_l (k-l+1) + delta(r_s); used to cross-check the branch above.
double high_snr_upper_dmt_components(const WiretapConfig& cfg, double r_s);

}  // namespace sdmt
