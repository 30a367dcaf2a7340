#include "sdmt/bounds.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sdmt/errors.hpp"
#include "sdmt/simplex_optimizer.hpp"
#include "sdmt/special_functions.hpp"

namespace sdmt {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                  const char* who) {
    cfg.require_feasible(who);
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw DomainError(std::string(who) + ": eta must be a positive finite SNR");
    if (!(sched.r_s >= 0.0) || sched.r_s > cfg.m() + kSumTolerance)
        throw DomainError(std::string(who) + ": r_s outside [0, m]");
}

void check_allocation(const WiretapConfig& cfg, const RateSchedule& sched,
                      const Allocation& alloc, AllocationKind kind, const char* who) {
    if (alloc.kind != kind)
        throw ValidationError(std::string(who) + ": allocation of the wrong kind");
    if (static_cast<int>(alloc.values.size()) != cfg.m())
        throw ValidationError(std::string(who) + ": allocation must have m entries");
    if (std::abs(alloc.total() - sched.r_s) > kSumTolerance * std::max(1.0, sched.r_s))
        throw ValidationError(std::string(who) + ": allocation does not sum to r_s");
}

// Shape of the Gamma law for stream l (0-based) in each bound.
int upper_shape(const WiretapConfig& cfg, int l) { return cfg.k() - l; }
int lower_shape(const WiretapConfig& cfg, int l) { return cfg.k() + cfg.m() - 2 * (l + 1) + 1; }

// log of the upper bound as a function of b, with log P_l(xi(r_s)) cached.
// Ratios beta_l/alpha_l are formed in log space so nothing underflows at
// high SNR.
class UpperBoundModel {
public:
    UpperBoundModel(const WiretapConfig& cfg, const RateSchedule& sched, double eta)
        : cfg_(cfg), sched_(sched), eta_(eta), log_alpha_(cfg.m()) {
        const double threshold = channel_gain_threshold(sched.r_s, eta, sched, cfg);
        for (int l = 0; l < cfg.m(); ++l)
            log_alpha_[l] = log_reg_lower_inc_gamma(threshold, upper_shape(cfg, l));
    }

    double log_naive() const { return std::accumulate(log_alpha_.begin(), log_alpha_.end(), 0.0); }

    double log_value(std::span<const double> b, std::span<double> grad) const {
        const int m = cfg_.m();
        std::vector<double> ratio(m);
        double log_keep = 0.0;  // log prod_l (1 - ratio_l)
        for (int l = 0; l < m; ++l) {
            const double beta_threshold = channel_gain_threshold(b[l], eta_, sched_, cfg_);
            const double log_beta = log_reg_lower_inc_gamma(beta_threshold, upper_shape(cfg_, l));
            ratio[l] = std::min(1.0, std::exp(log_beta - log_alpha_[l]));
            log_keep += std::log1p(-ratio[l]);
        }
        const double one_minus_keep = -std::expm1(log_keep);
        if (!(one_minus_keep > 0.0)) {
            std::fill(grad.begin(), grad.end(), 0.0);
            return -kInf;
        }
        if (!grad.empty()) {
            for (int l = 0; l < m; ++l) {
                double others = 1.0;
                for (int j = 0; j < m; ++j)
                    if (j != l) others *= 1.0 - ratio[j];
                const double x = channel_gain_threshold(b[l], eta_, sched_, cfg_);
                const double d_ratio =
                    std::exp(log_gamma_density(x, upper_shape(cfg_, l)) +
                             std::log(channel_gain_threshold_slope(b[l], eta_, sched_, cfg_)) -
                             log_alpha_[l]);
                grad[l] = others * d_ratio / one_minus_keep;
            }
        }
        return log_naive() + std::log(one_minus_keep);
    }

private:
    const WiretapConfig& cfg_;
    const RateSchedule& sched_;
    double eta_;
    std::vector<double> log_alpha_;
};

double lower_log_value(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                       std::span<const double> a, std::span<double> grad) {
    double total = 0.0;
    for (int l = 0; l < cfg.m(); ++l) {
        const double x = channel_gain_threshold(a[l], eta, sched, cfg);
        const int shape = lower_shape(cfg, l);
        const double log_p = log_reg_lower_inc_gamma(x, shape);
        total += log_p;
        if (!grad.empty()) {
            grad[l] = std::isfinite(log_p)
                          ? std::exp(log_gamma_density(x, shape) +
                                     std::log(channel_gain_threshold_slope(a[l], eta, sched, cfg)) -
                                     log_p)
                          : kInf;
        }
    }
    return total;
}

BoundValue zero_rate_bound(const WiretapConfig& cfg, double eta, AllocationKind kind) {
    BoundValue out;
    out.probability = 0.0;
    out.log_probability = -kInf;
    out.allocation = {std::vector<double>(cfg.m(), 0.0), kind};
    out.eta = eta;
    out.r_s = 0.0;
    return out;
}

BoundValue finish(double log_p, Allocation alloc, double eta, double r_s) {
    BoundValue out;
    out.log_probability = log_p;
    out.probability = std::exp(log_p);
    out.allocation = std::move(alloc);
    out.eta = eta;
    out.r_s = r_s;
    return out;
}

}  // namespace

double Allocation::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

Allocation make_allocation(std::vector<double> values, double r_s, AllocationKind kind) {
    for (std::size_t l = 0; l < values.size(); ++l) {
        if (!(values[l] >= 0.0))
            throw ValidationError("allocation entries must be nonnegative");
        if (l + 1 < values.size() && values[l] + kSumTolerance < values[l + 1])
            throw ValidationError("allocation entries must be nonincreasing");
    }
    Allocation out{std::move(values), kind};
    if (std::abs(out.total() - r_s) > kSumTolerance * std::max(1.0, r_s)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "allocation sums to " << out.total() << ", expected " << r_s;
        throw ValidationError(msg.str());
    }
    return out;
}

Allocation equal_split(const WiretapConfig& cfg, double r_s, AllocationKind kind) {
    if (cfg.m() < 1) throw InfeasibleError("equal_split: configuration has m = 0");
    return {std::vector<double>(cfg.m(), r_s / cfg.m()), kind};
}

double channel_gain_threshold(double x, double eta, const RateSchedule& sched,
                              const WiretapConfig& cfg) {
    return cfg.streams() / eta * std::expm1(x * std::log1p(sched.g * eta));
}

double channel_gain_threshold_slope(double x, double eta, const RateSchedule& sched,
                                    const WiretapConfig& cfg) {
    const double log_gain = std::log1p(sched.g * eta);
    return cfg.streams() / eta * log_gain * std::exp(x * log_gain);
}

BoundValue outage_upper_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                              const Allocation& alloc) {
    check_inputs(cfg, sched, eta, "outage_upper_bound");
    check_allocation(cfg, sched, alloc, AllocationKind::upper, "outage_upper_bound");
    if (sched.r_s == 0.0) return zero_rate_bound(cfg, eta, AllocationKind::upper);
    const UpperBoundModel model(cfg, sched, eta);
    return finish(model.log_value(alloc.values, {}), alloc, eta, sched.r_s);
}

BoundValue outage_lower_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta,
                              const Allocation& alloc) {
    check_inputs(cfg, sched, eta, "outage_lower_bound");
    check_allocation(cfg, sched, alloc, AllocationKind::lower, "outage_lower_bound");
    if (sched.r_s == 0.0) return zero_rate_bound(cfg, eta, AllocationKind::lower);
    return finish(lower_log_value(cfg, sched, eta, alloc.values, {}), alloc, eta, sched.r_s);
}

double naive_upper_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta) {
    check_inputs(cfg, sched, eta, "naive_upper_bound");
    if (sched.r_s == 0.0) return 0.0;
    return std::exp(UpperBoundModel(cfg, sched, eta).log_naive());
}

BoundValue optimize_upper_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta) {
    check_inputs(cfg, sched, eta, "optimize_upper_bound");
    if (sched.r_s == 0.0) return zero_rate_bound(cfg, eta, AllocationKind::upper);
    const Allocation start = equal_split(cfg, sched.r_s, AllocationKind::upper);
    if (cfg.m() == 1) return outage_upper_bound(cfg, sched, eta, start);

    const UpperBoundModel model(cfg, sched, eta);
    const SimplexSolution sol = minimize_on_ordered_simplex(
        [&](std::span<const double> b, std::span<double> grad) { return model.log_value(b, grad); },
        start.values, sched.r_s);
    if (!sol.converged) {
        std::ostringstream msg;
        msg << "bounds: upper-bound optimizer stalled at stationarity " << sol.stationarity
            << " after " << sol.iterations << " iterations (" << cfg.label() << ", r_s=" << sched.r_s
            << ", eta=" << eta << ")";
        throw OptimizerError(msg.str());
    }
    BoundValue out = finish(sol.value, {sol.x, AllocationKind::upper}, eta, sched.r_s);
    out.stationarity = sol.stationarity;
    out.iterations = sol.iterations;
    return out;
}

BoundValue optimize_lower_bound(const WiretapConfig& cfg, const RateSchedule& sched, double eta) {
    check_inputs(cfg, sched, eta, "optimize_lower_bound");
    if (sched.r_s == 0.0) return zero_rate_bound(cfg, eta, AllocationKind::lower);
    const Allocation start = equal_split(cfg, sched.r_s, AllocationKind::lower);
    if (cfg.m() == 1) return outage_lower_bound(cfg, sched, eta, start);

    const SimplexSolution sol = minimize_on_ordered_simplex(
        [&](std::span<const double> a, std::span<double> grad) {
            const double value = lower_log_value(cfg, sched, eta, a, grad);
            for (double& g : grad) g = -g;
            return -value;
        },
        start.values, sched.r_s);
    if (!sol.converged) {
        std::ostringstream msg;
        msg << "bounds: lower-bound optimizer stalled at stationarity " << sol.stationarity
            << " after " << sol.iterations << " iterations (" << cfg.label() << ", r_s=" << sched.r_s
            << ", eta=" << eta << ")";
        throw OptimizerError(msg.str());
    }
    BoundValue out = finish(-sol.value, {sol.x, AllocationKind::lower}, eta, sched.r_s);
    out.stationarity = sol.stationarity;
    out.iterations = sol.iterations;
    return out;
}

double harmonic_weight(const WiretapConfig& cfg) {
    double s = 0.0;
    for (int l = 1; l <= cfg.m(); ++l) s += 1.0 / (cfg.k() - l + 1);
    return s;
}

Allocation high_snr_allocation(const WiretapConfig& cfg, double r_s, HighSnrRegime regime) {
    cfg.require_feasible("high_snr_allocation");
    const int m = cfg.m();
    const double weight = harmonic_weight(cfg);
    std::vector<double> b(m);
    if (regime == HighSnrRegime::below_one) {
        if (!(r_s > 0.0 && r_s < 1.0))
            throw DomainError("high_snr_allocation: below_one needs r_s in (0, 1)");
        const double delta = (m - 1) * r_s / weight;
        for (int l = 1; l <= m; ++l) b[l - 1] = r_s - delta / (cfg.k() - l + 1);
    } else {
        if (!(r_s >= 1.0 && r_s <= m))
            throw DomainError("high_snr_allocation: above_one needs r_s in [1, m]");
        const double gamma = (m - r_s) / weight;
        for (int l = 1; l <= m; ++l) b[l - 1] = 1.0 - gamma / (cfg.k() - l + 1);
    }
    if (b.back() < -kSumTolerance)
        throw DomainError("high_snr_allocation: closed form leaves b >= 0 for " + cfg.label());
    b.back() = std::max(b.back(), 0.0);
    return make_allocation(std::move(b), r_s, AllocationKind::upper);
}

}  // namespace sdmt
