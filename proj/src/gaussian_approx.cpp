#include "sdmt/gaussian_approx.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sdmt/errors.hpp"
#include "sdmt/parallel.hpp"
#include "sdmt/special_functions.hpp"

namespace sdmt {

namespace {

constexpr double kBaseStep = 1.0 / 16.0;
constexpr double kQuadratureTolerance = 1e-6;
// exp(kUpperLog) = 800; every kernel term is below e^-700 beyond it.
constexpr double kUpperLog = 6.6846117276679271;
constexpr double kLowerMargin = 45.0;

// phi_0..phi_{m-1} at x.
void kernel_functions(int m, int alpha, double x, double* phi) {
    const double log_x = std::log(x);
    const double envelope = 0.5 * alpha * log_x - 0.5 * x;
    for (int i = 0; i < m; ++i) {
        const double log_norm = 0.5 * (std::lgamma(i + 1.0) - std::lgamma(i + alpha + 1.0));
        phi[i] = laguerre(i, alpha, x) * std::exp(log_norm + envelope);
    }
}

struct QuadratureMoments {
    double mean;
    double variance;
};

// Trapezoidal rule in s = ln x on [lo, kUpperLog]. Double-exponential decay
// at both ends keeps the rule spectrally accurate.
QuadratureMoments quadrature_moments(const WiretapConfig& cfg, double rho, double step) {
    const int m = cfg.m();
    const int alpha = cfg.k() - m;
    const double lo = -kLowerMargin - std::max(0.0, std::log(rho));
    const auto nodes = static_cast<int>(std::ceil((kUpperLog - lo) / step));

    std::vector<double> phi(static_cast<std::size_t>(m));
    std::vector<double> xs, fs, ws;
    std::vector<double> phis;
    xs.reserve(nodes + 1);
    double mean = 0.0;
    for (int n = 0; n <= nodes; ++n) {
        const double x = std::exp(kUpperLog - n * step);
        const double f = std::log1p(rho * x);
        kernel_functions(m, alpha, x, phi.data());
        double diag = 0.0;
        for (double p : phi) diag += p * p;
        const double w = step * x * ((n == 0 || n == nodes) ? 0.5 : 1.0);
        mean += w * f * diag;
        xs.push_back(x);
        fs.push_back(f);
        ws.push_back(w);
        phis.insert(phis.end(), phi.begin(), phi.end());
    }

    // Var is invariant under f -> f - c (the eigenvalue count is fixed), and
    // centering on the per-eigenvalue mean limits cancellation.
    const double c = mean / m;
    double second = 0.0;
    std::vector<double> overlap(static_cast<std::size_t>(m * m), 0.0);
    for (std::size_t n = 0; n < xs.size(); ++n) {
        const double f = fs[n] - c;
        const double* p = &phis[n * m];
        double diag = 0.0;
        for (int i = 0; i < m; ++i) diag += p[i] * p[i];
        second += ws[n] * f * f * diag;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) overlap[i * m + j] += ws[n] * f * p[i] * p[j];
    }
    double projected = 0.0;
    for (double o : overlap) projected += o * o;
    return {mean, std::max(0.0, second - projected)};
}

bool close(double a, double b) {
    return std::abs(a - b) <= kQuadratureTolerance * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

MomentPair quadrature_pair(const WiretapConfig& cfg, double eta) {
    const double rho = eta / cfg.streams();
    const auto coarse = quadrature_moments(cfg, rho, kBaseStep);
    const auto fine = quadrature_moments(cfg, rho, 0.5 * kBaseStep);
    if (!close(coarse.mean, fine.mean) || !close(coarse.variance, fine.variance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "mutual_info_moments: refinements disagree at eta=" << eta << " (mean " << coarse.mean
            << " vs " << fine.mean << ", variance " << coarse.variance << " vs " << fine.variance
            << ")";
        throw QuadratureError(msg.str());
    }
    MomentPair out;
    out.mean = fine.mean;
    out.variance = fine.variance;
    out.method = MomentMethod::quadrature;
    return out;
}

// Running central moments for the pairwise merge of Monte-Carlo blocks.
struct CentralSums {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;

    void push(double x) {
        const double n1 = n;
        n += 1.0;
        const double delta = x - mean;
        const double delta_n = delta / n;
        const double delta_n2 = delta_n * delta_n;
        const double term = delta * delta_n * n1;
        mean += delta_n;
        m4 += term * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
        m3 += term * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
        m2 += term;
    }

    void merge(const CentralSums& b) {
        if (b.n == 0.0) return;
        if (n == 0.0) {
            *this = b;
            return;
        }
        const double na = n, nb = b.n, nt = na + nb;
        const double d = b.mean - mean;
        const double d2 = d * d;
        const double new_m4 = m4 + b.m4 + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (nt * nt * nt) +
                              6.0 * d2 * (na * na * b.m2 + nb * nb * m2) / (nt * nt) +
                              4.0 * d * (na * b.m3 - nb * m3) / nt;
        const double new_m3 = m3 + b.m3 + d2 * d * na * nb * (na - nb) / (nt * nt) +
                              3.0 * d * (na * b.m2 - nb * m2) / nt;
        m2 += b.m2 + d2 * na * nb / nt;
        mean += d * nb / nt;
        m3 = new_m3;
        m4 = new_m4;
        n = nt;
    }
};

}  // namespace

double eigen_density_marginal(const WiretapConfig& cfg, double lambda) {
    cfg.require_feasible("eigen_density_marginal");
    if (!(lambda >= 0.0)) throw DomainError("eigen_density_marginal: lambda must be >= 0");
    const int m = cfg.m();
    const int alpha = cfg.k() - m;
    if (lambda == 0.0) return alpha == 0 ? 1.0 : 0.0;
    std::vector<double> phi(static_cast<std::size_t>(m));
    kernel_functions(m, alpha, lambda, phi.data());
    double diag = 0.0;
    for (double p : phi) diag += p * p;
    return diag / m;
}

std::vector<MomentPair> monte_carlo_moments(const WiretapConfig& cfg, std::span<const double> etas,
                                            const MonteCarloMomentOptions& mc) {
    cfg.require_feasible("monte_carlo_moments");
    if (mc.trials < 1000) throw ValidationError("monte_carlo_moments: trials must be >= 10^3");
    std::vector<double> rhos;
    for (double eta : etas) {
        if (!(eta > 0.0)) throw DomainError("monte_carlo_moments: eta must be > 0");
        rhos.push_back(eta / cfg.streams());
    }

    using Sums = std::vector<CentralSums>;
    const auto partials = run_trial_blocks<Sums>(
        mc.trials, mc.workers, [&](std::uint64_t begin, std::uint64_t end) {
            Sums sums(rhos.size());
            for (std::uint64_t t = begin; t < end; ++t) {
                RngStream stream(mc.seed, t, StreamDomain::moments);
                const ComplexMatrix h = sample_complex_gaussian(cfg.n_m(), cfg.streams(), stream);
                const RealVector lambda = gram_eigenvalues(h);
                for (std::size_t r = 0; r < rhos.size(); ++r) {
                    double psi = 0.0;
                    for (Eigen::Index i = 0; i < lambda.size(); ++i)
                        psi += std::log1p(rhos[r] * std::max(0.0, lambda[i]));
                    sums[r].push(psi);
                }
            }
            return sums;
        });

    Sums total(rhos.size());
    for (const auto& p : partials)
        for (std::size_t r = 0; r < total.size(); ++r) total[r].merge(p[r]);

    std::vector<MomentPair> out;
    out.reserve(rhos.size());
    for (const auto& s : total) {
        MomentPair pair;
        pair.method = MomentMethod::monte_carlo;
        pair.mean = s.mean;
        pair.variance = s.m2 / (s.n - 1.0);
        pair.mean_std_err = std::sqrt(pair.variance / s.n);
        const double mu4 = s.m4 / s.n;
        const double var_pop = s.m2 / s.n;
        pair.variance_std_err = std::sqrt(std::max(0.0, mu4 - var_pop * var_pop) / s.n);
        out.push_back(pair);
    }
    return out;
}

MomentPair mutual_info_moments(const WiretapConfig& cfg, double eta, MomentMethod method,
                               const MonteCarloMomentOptions& mc) {
    cfg.require_feasible("mutual_info_moments");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw DomainError("mutual_info_moments: eta must be positive and finite");
    if (method == MomentMethod::monte_carlo) return monte_carlo_moments(cfg, {&eta, 1}, mc)[0];
    return quadrature_pair(cfg, eta);
}

double outage_gaussian_approx(const MomentPair& moments, double rate) {
    if (!(moments.variance > 0.0))
        throw NumericalDegeneracyError("outage_gaussian_approx: variance must be > 0");
    return gauss_q((moments.mean - rate) / std::sqrt(moments.variance));
}

double outage_gaussian_approx(const WiretapConfig& cfg, const RateSchedule& sched, double eta) {
    return outage_gaussian_approx(mutual_info_moments(cfg, eta), secrecy_rate(sched, eta));
}

MomentDerivatives moment_derivatives(const WiretapConfig& cfg, double eta, double rel_step) {
    if (!(rel_step > 0.0 && rel_step <= 0.1))
        throw ValidationError("moment_derivatives: rel_step must lie in (0, 0.1]");
    auto central = [&](double h) {
        const auto hi = mutual_info_moments(cfg, eta * std::exp(h));
        const auto lo = mutual_info_moments(cfg, eta * std::exp(-h));
        return MomentDerivatives{(hi.mean - lo.mean) / (2.0 * h),
                                 (hi.variance - lo.variance) / (2.0 * h)};
    };
    const auto wide = central(rel_step);
    const auto narrow = central(0.5 * rel_step);
    // Richardson: the O(h^2) terms cancel. Results are d/d(ln eta); divide by eta.
    return {(4.0 * narrow.mean - wide.mean) / (3.0 * eta),
            (4.0 * narrow.variance - wide.variance) / (3.0 * eta)};
}

DiversityPoint diversity_gaussian_estimate(const WiretapConfig& cfg, const RateSchedule& sched,
                                           double eta) {
    const auto moments = mutual_info_moments(cfg, eta);
    const auto slope = moment_derivatives(cfg, eta);
    if (!(moments.variance > 0.0))
        throw NumericalDegeneracyError("diversity_gaussian_estimate: variance must be > 0");
    const double sigma = std::sqrt(moments.variance);
    const double rate = secrecy_rate(sched, eta);
    const double rate_slope = secrecy_rate_derivative(sched, eta);
    const double t = (moments.mean - rate) / sigma;
    // h = d t / d eta.
    const double h = (rate - moments.mean) * slope.variance / (2.0 * sigma * sigma * sigma) -
                     (rate_slope - slope.mean) / sigma;
    const double log_pdf = -0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi);
    const double hazard = std::exp(log_pdf - log_gauss_q(t));
    return {sched.r_s, eta, eta * hazard * h, Estimator::gaussian};
}

}  // namespace sdmt
