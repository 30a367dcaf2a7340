#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sdmt/matrix_kernel.hpp"

namespace sdmt {

// Antenna triple of the wiretap channel. m and k are the dimensions of the
// equivalent zero-forcing channel: min/max of (n_t - n_e, n_m).
class WiretapConfig {
public:
    // Counts in [0, 16] with n_t, n_m >= 1; ValidationError otherwise.
    static WiretapConfig make(int n_t, int n_m, int n_e);

    int n_t() const noexcept { return n_t_; }
    int n_m() const noexcept { return n_m_; }
    int n_e() const noexcept { return n_e_; }
    int m() const noexcept { return m_; }
    int k() const noexcept { return k_; }
    // Zero-forcing has a nontrivial null space only when n_e < n_t.
    bool feasible() const noexcept { return n_e_ < n_t_; }
    // n_t - n_e: the number of transmit dimensions left after zero-forcing.
    int streams() const noexcept { return n_t_ - n_e_; }

    // Throws InfeasibleError when !feasible().
    void require_feasible(const char* who) const;

    std::string label() const;
    friend bool operator==(const WiretapConfig&, const WiretapConfig&) = default;

private:
    WiretapConfig(int n_t, int n_m, int n_e);
    int n_t_, n_m_, n_e_, m_, k_;
};

inline WiretapConfig make_config(int n_t, int n_m, int n_e) {
    return WiretapConfig::make(n_t, n_m, n_e);
}

// Secrecy multiplexing gain r_s together with the array gain g that
// normalizes it: R_s = r_s * log(1 + g * eta).
struct RateSchedule {
    double r_s;
    double g;
};

// ValidationError unless 0 <= r_s <= cfg.m() and g > 0.
RateSchedule make_schedule(const WiretapConfig& cfg, double r_s, double g);

// Secrecy rate in nats per channel use.
double secrecy_rate(const RateSchedule& sched, double eta);

// dR_s/d eta.
double secrecy_rate_derivative(const RateSchedule& sched, double eta);

struct ArrayGainEstimate {
    double g;
    double std_err;
    std::uint64_t trials;
    std::uint64_t seed;
};

inline constexpr std::uint64_t kReferenceGainTrials = 1'000'000;

// Monte-Carlo estimate of E{[lambda_max(Hm^H Hm - He^H He)]^+}. With n_e = 0
// the eavesdropper term is zero. Deterministic in (seed, trials) for any
// worker count.
ArrayGainEstimate estimate_array_gain(const WiretapConfig& cfg, std::uint64_t trials,
                                      std::uint64_t seed, unsigned workers = 0);

// H_m * A, A an orthonormal basis of ker(H_e); H_m itself when H_e has no rows.
ComplexMatrix equivalent_channel(const ComplexMatrix& h_m, const ComplexMatrix& h_e);

// Draws (H_m, H_e) from `stream` and returns the zero-forcing equivalent
// channel, n_m x (n_t - n_e).
ComplexMatrix sample_equivalent_channel(const WiretapConfig& cfg, RngStream& stream);

// Plain-text "key = value" record of the configuration and its array gain.
struct RunManifest {
    int n_t = 0;
    int n_m = 0;
    int n_e = 0;
    double g = 0.0;
    double g_std_err = 0.0;
    std::uint64_t g_trials = 0;
    std::uint64_t seed = 0;

    static RunManifest from(const WiretapConfig& cfg, const ArrayGainEstimate& gain);
    WiretapConfig config() const { return make_config(n_t, n_m, n_e); }
};

void write_manifest(std::ostream& out, const RunManifest& manifest);
// ValidationError on malformed lines or missing keys.
RunManifest read_manifest(std::istream& in);

}  // namespace sdmt
