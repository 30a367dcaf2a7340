#include "sdmt/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "sdmt/errors.hpp"
#include "sdmt/parallel.hpp"

namespace sdmt {

WiretapConfig::WiretapConfig(int n_t, int n_m, int n_e)
    : n_t_(n_t),
      n_m_(n_m),
      n_e_(n_e),
      m_(std::max(0, std::min(n_t - n_e, n_m))),
      k_(std::max(n_t - n_e, n_m)) {}

WiretapConfig WiretapConfig::make(int n_t, int n_m, int n_e) {
    auto in_range = [](int v) { return v >= 0 && v <= kMaxDim; };
    if (!in_range(n_t) || !in_range(n_m) || !in_range(n_e) || n_t < 1 || n_m < 1) {
        std::ostringstream msg;
        msg << "invalid antenna configuration (" << n_t << "," << n_m << "," << n_e
            << "): counts must lie in [0, " << kMaxDim << "] with n_t, n_m >= 1";
        throw ValidationError(msg.str());
    }
    return WiretapConfig(n_t, n_m, n_e);
}

void WiretapConfig::require_feasible(const char* who) const {
    if (!feasible()) {
        throw InfeasibleError(std::string(who) + ": configuration " + label() +
                              " has n_e >= n_t, zero-forcing is impossible");
    }
}

std::string WiretapConfig::label() const {
    std::ostringstream s;
    s << "(" << n_t_ << "," << n_m_ << "," << n_e_ << ")";
    return s.str();
}

RateSchedule make_schedule(const WiretapConfig& cfg, double r_s, double g) {
    if (!(r_s >= 0.0) || r_s > cfg.m()) {
        std::ostringstream msg;
        msg << "multiplexing gain " << r_s << " outside [0, " << cfg.m() << "]";
        throw ValidationError(msg.str());
    }
    if (!(g > 0.0) || !std::isfinite(g)) throw ValidationError("array gain must be > 0");
    return {r_s, g};
}

double secrecy_rate(const RateSchedule& sched, double eta) {
    if (!(eta > 0.0)) throw DomainError("secrecy_rate: eta must be > 0");
    return sched.r_s * std::log1p(sched.g * eta);
}

double secrecy_rate_derivative(const RateSchedule& sched, double eta) {
    return sched.r_s * sched.g / (1.0 + sched.g * eta);
}

ArrayGainEstimate estimate_array_gain(const WiretapConfig& cfg, std::uint64_t trials,
                                      std::uint64_t seed, unsigned workers) {
    if (trials < 10'000) throw ValidationError("estimate_array_gain: trials must be >= 10^4");

    struct Moments {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    auto partials = run_trial_blocks<Moments>(trials, workers, [&](std::uint64_t begin,
                                                                   std::uint64_t end) {
        Moments acc;
        for (std::uint64_t t = begin; t < end; ++t) {
            RngStream stream(seed, t, StreamDomain::array_gain);
            const ComplexMatrix h_m = sample_complex_gaussian(cfg.n_m(), cfg.n_t(), stream);
            ComplexMatrix diff = h_m.adjoint() * h_m;
            if (cfg.n_e() > 0) {
                const ComplexMatrix h_e = sample_complex_gaussian(cfg.n_e(), cfg.n_t(), stream);
                diff -= h_e.adjoint() * h_e;
            }
            const double lambda = std::max(0.0, max_eigenvalue_hermitian(diff));
            acc.sum += lambda;
            acc.sum_sq += lambda * lambda;
        }
        return acc;
    });

    Moments total;
    for (const auto& p : partials) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(trials);
    const double mean = total.sum / n;
    const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), trials, seed};
}

ComplexMatrix equivalent_channel(const ComplexMatrix& h_m, const ComplexMatrix& h_e) {
    if (h_e.rows() == 0) return h_m;
    if (h_m.cols() != h_e.cols())
        throw ValidationError("equivalent_channel: H_m and H_e disagree on n_t");
    return h_m * null_space_basis(h_e);
}

ComplexMatrix sample_equivalent_channel(const WiretapConfig& cfg, RngStream& stream) {
    const ComplexMatrix h_m = sample_complex_gaussian(cfg.n_m(), cfg.n_t(), stream);
    if (cfg.n_e() == 0) return h_m;
    const ComplexMatrix h_e = sample_complex_gaussian(cfg.n_e(), cfg.n_t(), stream);
    return equivalent_channel(h_m, h_e);
}

RunManifest RunManifest::from(const WiretapConfig& cfg, const ArrayGainEstimate& gain) {
    return {cfg.n_t(), cfg.n_m(), cfg.n_e(), gain.g, gain.std_err, gain.trials, gain.seed};
}

void write_manifest(std::ostream& out, const RunManifest& m) {
    const auto old_precision = out.precision(17);
    out << "n_t = " << m.n_t << '\n'
        << "n_m = " << m.n_m << '\n'
        << "n_e = " << m.n_e << '\n'
        << "g = " << m.g << '\n'
        << "g_std_err = " << m.g_std_err << '\n'
        << "g_trials = " << m.g_trials << '\n'
        << "seed = " << m.seed << '\n';
    out.precision(old_precision);
}

RunManifest read_manifest(std::istream& in) {
    std::map<std::string, std::string> fields;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("manifest line " + std::to_string(line_no) + ": missing '='");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        fields[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    auto get = [&](const char* key) -> const std::string& {
        const auto it = fields.find(key);
        if (it == fields.end()) throw ValidationError(std::string("manifest: missing key ") + key);
        return it->second;
    };
    try {
        RunManifest m;
        m.n_t = std::stoi(get("n_t"));
        m.n_m = std::stoi(get("n_m"));
        m.n_e = std::stoi(get("n_e"));
        m.g = std::stod(get("g"));
        m.g_std_err = std::stod(get("g_std_err"));
        m.g_trials = std::stoull(get("g_trials"));
        m.seed = std::stoull(get("seed"));
        return m;
    } catch (const std::logic_error& e) {
        throw ValidationError(std::string("manifest: malformed value (") + e.what() + ")");
    }
}

}  // namespace sdmt
