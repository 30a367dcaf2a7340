#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdmt/channel_model.hpp"
#include "sdmt/diversity.hpp"

namespace sdmt {

// Gaussian approximation of the zero-forcing mutual information
// Psi = log det(I + rho H_eq H_eq^H), rho = eta/(n_t-n_e), with H_eq an
// n_m x (n_t-n_e) i.i.d. CN(0,1) matrix. The nonzero eigenvalues of
// H_eq H_eq^H form an m x k Laguerre ensemble, a determinantal process with
// kernel K(x,y) = sum_{i<m} phi_i(x) phi_i(y),
//     phi_i(x) = sqrt(i!/(i+k-m)!) L_i^(k-m)(x) x^((k-m)/2) e^(-x/2).
// Hence, with f(x) = ln(1 + rho x),
//     E[Psi]   = int f K(x,x) dx,
//     Var[Psi] = int f^2 K(x,x) dx - sum_ij (int f phi_i phi_j dx)^2.

enum class MomentMethod { quadrature, monte_carlo };

struct MomentPair {
    double mean = 0.0;      // nats
    double variance = 0.0;  // nats^2
    MomentMethod method = MomentMethod::quadrature;
    // Monte-Carlo standard errors; zero for quadrature.
    double mean_std_err = 0.0;
    double variance_std_err = 0.0;
};

struct MonteCarloMomentOptions {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

// Marginal density of one unordered nonzero eigenvalue, K(x,x)/m.
double eigen_density_marginal(const WiretapConfig& cfg, double lambda);

// QuadratureError if two successive step refinements disagree by more than
// 1e-6 relative.
MomentPair mutual_info_moments(const WiretapConfig& cfg, double eta,
                               MomentMethod method = MomentMethod::quadrature,
                               const MonteCarloMomentOptions& mc = {});

// Monte-Carlo moments for several SNRs from one batch of channel draws.
std::vector<MomentPair> monte_carlo_moments(const WiretapConfig& cfg, std::span<const double> etas,
                                            const MonteCarloMomentOptions& mc);

// Q((mean - R_s) / sqrt(variance)).
double outage_gaussian_approx(const MomentPair& moments, double rate);
double outage_gaussian_approx(const WiretapConfig& cfg, const RateSchedule& sched, double eta);

struct MomentDerivatives {
    double mean;      // d mean / d eta
    double variance;  // d variance / d eta
};

inline constexpr double kMomentStep = 1e-3;

// Richardson-extrapolated central differences of the quadrature moments in
// log eta with relative step rel_step.
MomentDerivatives moment_derivatives(const WiretapConfig& cfg, double eta,
                                     double rel_step = kMomentStep);

// -eta d/d(eta) log of the Gaussian outage approximation, assembled from the
// moments, their derivatives and R_s' = r_s g / (1 + g eta).
DiversityPoint diversity_gaussian_estimate(const WiretapConfig& cfg, const RateSchedule& sched,
                                           double eta);

}  // namespace sdmt
