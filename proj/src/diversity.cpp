#include "sdmt/diversity.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sdmt/errors.hpp"
#include "sdmt/special_functions.hpp"

namespace sdmt {

namespace {

void check_point(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                 const char* who) {
    cfg.require_feasible(who);
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw DomainError(std::string(who) + ": eta must be a positive finite SNR");
    if (!(sched.r_s >= 0.0) || sched.r_s > cfg.m() + 1e-12)
        throw DomainError(std::string(who) + ": r_s outside [0, m]");
}

void check_allocation(const WiretapConfig& cfg, const RateSchedule& sched,
                      const Allocation& alloc, AllocationKind kind, const char* who) {
    if (alloc.kind != kind || static_cast<int>(alloc.values.size()) != cfg.m())
        throw ValidationError(std::string(who) + ": allocation does not match the bound");
    if (std::abs(alloc.total() - sched.r_s) > 1e-12 * std::max(1.0, sched.r_s))
        throw ValidationError(std::string(who) + ": allocation does not sum to r_s");
}

// 1 - g eta / ((1 + g eta) ln(1 + g eta))
double snr_factor(double g, double eta) {
    const double ge = g * eta;
    return 1.0 - ge / ((1.0 + ge) * std::log1p(ge));
}

double upper_sum_of_shapes(const WiretapConfig& cfg) {
    const double m = cfg.m();
    const double k = cfg.k();
    return m * k * (1.0 - (m - 1.0) / (2.0 * k));
}

}  // namespace

std::string_view to_string(Estimator e) {
    switch (e) {
        case Estimator::upper: return "upper";
        case Estimator::lower: return "lower";
        case Estimator::exact_m1: return "exact-m1";
        case Estimator::asymptotic: return "asymptotic";
        case Estimator::gaussian: return "gaussian";
        case Estimator::empirical: return "empirical";
    }
    return "unknown";
}

double f_factor(int j, double x, double eta, const RateSchedule& sched, const WiretapConfig& cfg) {
    const int shape = cfg.k() - j + 1;
    if (shape < 1) throw DomainError("f_factor: index j exceeds k");
    if (!(x >= 0.0)) throw DomainError("f_factor: x must be >= 0");
    const double ge = sched.g * eta;
    const double log_gain = std::log1p(ge);
    const double limit = shape * eta / cfg.streams() * snr_factor(sched.g, eta);
    if (x == 0.0) return limit;

    const double threshold = channel_gain_threshold(x, eta, sched, cfg);
    if (threshold == 0.0) return limit;
    const double growth = std::exp(x * log_gain);
    const double prefactor = std::expm1(x * log_gain) - x * ge / (1.0 + ge) * growth;
    const double hazard =
        std::exp(log_gamma_density(threshold, shape) - log_reg_lower_inc_gamma(threshold, shape));
    return prefactor * hazard;
}

DiversityPoint diversity_upper_estimate(const WiretapConfig& cfg, const RateSchedule& sched,
                                        double eta, const Allocation& alloc) {
    check_point(cfg, sched, eta, "diversity_upper_estimate");
    check_allocation(cfg, sched, alloc, AllocationKind::upper, "diversity_upper_estimate");
    if (sched.r_s == 0.0)
        return {0.0, eta, max_diversity_estimates(cfg, sched, eta).upper, Estimator::upper};

    const int m = cfg.m();
    const double rs_threshold = channel_gain_threshold(sched.r_s, eta, sched, cfg);
    std::vector<double> ratio(m);
    double log_keep = 0.0;
    for (int l = 0; l < m; ++l) {
        const int shape = cfg.k() - l;
        const double log_alpha = log_reg_lower_inc_gamma(rs_threshold, shape);
        const double log_beta =
            log_reg_lower_inc_gamma(channel_gain_threshold(alloc.values[l], eta, sched, cfg), shape);
        ratio[l] = std::min(1.0, std::exp(log_beta - log_alpha));
        log_keep += std::log1p(-ratio[l]);
    }
    const double one_minus_keep = -std::expm1(log_keep);

    double sum = 0.0;
    for (int l = 0; l < m; ++l) {
        const int j = l + 1;
        const double f_rs = f_factor(j, sched.r_s, eta, sched, cfg);
        sum += f_rs;
        if (ratio[l] == 0.0) continue;
        double others = 1.0;
        for (int i = 0; i < m; ++i)
            if (i != l) others *= 1.0 - ratio[i];
        sum += ratio[l] * (f_factor(j, alloc.values[l], eta, sched, cfg) - f_rs) * others /
               one_minus_keep;
    }
    return {sched.r_s, eta, cfg.streams() / eta * sum, Estimator::upper};
}

DiversityPoint diversity_lower_estimate(const WiretapConfig& cfg, const RateSchedule& sched,
                                        double eta, const Allocation& alloc) {
    check_point(cfg, sched, eta, "diversity_lower_estimate");
    check_allocation(cfg, sched, alloc, AllocationKind::lower, "diversity_lower_estimate");
    if (sched.r_s == 0.0)
        return {0.0, eta, max_diversity_estimates(cfg, sched, eta).lower, Estimator::lower};

    double sum = 0.0;
    for (int l = 1; l <= cfg.m(); ++l)
        sum += f_factor(2 * l - cfg.m(), alloc.values[l - 1], eta, sched, cfg);
    return {sched.r_s, eta, cfg.streams() / eta * sum, Estimator::lower};
}

DiversityPoint diversity_exact_m1(const WiretapConfig& cfg, const RateSchedule& sched, double eta) {
    check_point(cfg, sched, eta, "diversity_exact_m1");
    if (cfg.m() != 1) throw DomainError("diversity_exact_m1: requires m = 1, got " + cfg.label());
    return {sched.r_s, eta, cfg.streams() / eta * f_factor(1, sched.r_s, eta, sched, cfg),
            Estimator::exact_m1};
}

double asymptotic_dmt(const WiretapConfig& cfg, double r_s) {
    if (!cfg.feasible()) return 0.0;
    const int m = cfg.m();
    if (!(r_s >= 0.0) || r_s > m) throw DomainError("asymptotic_dmt: r_s outside [0, m]");
    auto anchor = [&](int l) { return static_cast<double>(cfg.streams() - l) * (cfg.n_m() - l); };
    const int l = std::min(static_cast<int>(std::floor(r_s)), m - 1);
    return anchor(l) + (r_s - l) * (anchor(l + 1) - anchor(l));
}

MaxDiversity max_diversity_estimates(const WiretapConfig& cfg, const RateSchedule& sched,
                                     double eta) {
    cfg.require_feasible("max_diversity_estimates");
    if (!(eta > 0.0)) throw DomainError("max_diversity_estimates: eta must be > 0");
    const double c = snr_factor(sched.g, eta);
    return {upper_sum_of_shapes(cfg) * c, static_cast<double>(cfg.m()) * cfg.k() * c};
}

double high_snr_upper_dmt(const WiretapConfig& cfg, double r_s) {
    cfg.require_feasible("high_snr_upper_dmt");
    const int m = cfg.m();
    if (!(r_s >= 0.0) || r_s > m) throw DomainError("high_snr_upper_dmt: r_s outside [0, m]");
    const double weight = harmonic_weight(cfg);
    if (r_s < 1.0) {
        const double peak = upper_sum_of_shapes(cfg);
        return peak - (peak - (m - 1) / weight) * r_s;
    }
    return (m - r_s) / weight;
}

double high_snr_upper_dmt_components(const WiretapConfig& cfg, double r_s) {
    cfg.require_feasible("high_snr_upper_dmt_components");
    if (!(r_s >= 0.0) || r_s >= 1.0)
        throw DomainError("high_snr_upper_dmt_components: r_s outside [0, 1)");
    const double delta = (cfg.m() - 1) * r_s / harmonic_weight(cfg);
    return (1.0 - r_s) * upper_sum_of_shapes(cfg) + delta;
}

}  // namespace sdmt
