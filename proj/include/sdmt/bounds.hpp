#pragma once

#include <vector>

#include "sdmt/channel_model.hpp"

namespace sdmt {

// Analytic bounds on the zero-forcing secrecy outage probability
// P[log det(I + eta/(n_t-n_e) H_eq H_eq^H) < R_s].
//
// Both bounds split the multiplexing gain r_s over the m diagonal entries of
// the QR factor R of H_eq. |R(l,l)|^2 is Gamma(k-l+1, 1), and the l-th diagonal
// of R R^H is Gamma(k+m-2l+1, 1); the bounds are products of the
// corresponding CDFs evaluated at channel_gain_threshold(x).

enum class AllocationKind { upper, lower };

// Rate split b (upper bound) or a (lower bound): nonincreasing, nonnegative,
// summing to r_s.
struct Allocation {
    std::vector<double> values;
    AllocationKind kind = AllocationKind::upper;

    double total() const;
};

// ValidationError unless values are nonincreasing, >= 0 and sum to r_s
// within 1e-12.
Allocation make_allocation(std::vector<double> values, double r_s, AllocationKind kind);
Allocation equal_split(const WiretapConfig& cfg, double r_s, AllocationKind kind);

struct BoundValue {
    double probability = 0.0;
    double log_probability = 0.0;  // natural log; -inf when probability == 0
    Allocation allocation;
    double eta = 0.0;
    double r_s = 0.0;
    // Filled in by the optimizers only.
    double stationarity = 0.0;
    int iterations = 0;
};

// Value of |R(l,l)|^2 below which stream l cannot carry rate x*log(1+g*eta):
// (n_t-n_e)/eta * ((1+g*eta)^x - 1).
double channel_gain_threshold(double x, double eta, const RateSchedule& sched,
                              const WiretapConfig& cfg);
// d/dx of channel_gain_threshold.
double channel_gain_threshold_slope(double x, double eta, const RateSchedule& sched,
                                    const WiretapConfig& cfg);

// prod_l P_l(xi(r_s)) * (1 - prod_l [1 - P_l(xi(b_l)) / P_l(xi(r_s))]) with
// P_l = P(k-l+1, .). Zero at r_s = 0.
BoundValue outage_upper_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                              const Allocation& alloc);

// prod_l P(k+m-2l+1, xi(a_l)). Zero at r_s = 0.
BoundValue outage_lower_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                              const Allocation& alloc);

// prod_l P(k-l+1, xi(r_s)): the upper bound without the correction term.
double naive_upper_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta);

// Minimizes the upper bound (maximizes the lower bound) over the ordered
// simplex. OptimizerError if the projected-gradient stationarity does not
// reach 1e-8 within 10^4 iterations.
BoundValue optimize_upper_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta);
BoundValue optimize_lower_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta);

enum class HighSnrRegime { below_one, above_one };

// Closed-form minimizer of the upper bound as eta -> infinity:
//   below_one, r_s in (0,1):  b_l = r_s - delta/(k-l+1), delta = (m-1) r_s / S
//   above_one, r_s in [1,m]:  b_l = 1 - gamma/(k-l+1),   gamma = (m-r_s) / S
// with S = sum_l 1/(k-l+1). DomainError outside those ranges, or when the
// closed form leaves the nonnegative orthant.
Allocation high_snr_allocation(const WiretapConfig& cfg, double r_s, HighSnrRegime regime);

// sum_{l=1}^m 1/(k-l+1)
double harmonic_weight(const WiretapConfig& cfg);

}  // namespace sdmt
