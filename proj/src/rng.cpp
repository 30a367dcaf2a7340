#include "sdmt/rng.hpp"

#include <cmath>
#include <numbers>

namespace sdmt {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline double to_open_unit(std::uint32_t hi_word, std::uint32_t lo_word) noexcept {
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(hi_word >> 5) << 26) | (lo_word >> 6);
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t substream,
                     StreamDomain domain) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      domain_(static_cast<std::uint32_t>(domain)),
      substream_(substream) {}

void RngStream::refill() noexcept {
    // counter = (block index, domain, substream lo, substream hi)
    const PhiloxCounter ctr{static_cast<std::uint32_t>(block_), domain_,
                            static_cast<std::uint32_t>(substream_),
                            static_cast<std::uint32_t>(substream_ >> 32)};
    buffer_ = philox4x32(ctr, key_);
    ++block_;
    used_ = 0;
}

double RngStream::uniform() noexcept {
    if (used_ > 2) refill();
    const double u = to_open_unit(buffer_[used_], buffer_[used_ + 1]);
    used_ += 2;
    return u;
}

std::complex<double> RngStream::complex_normal() noexcept {
    // One Box-Muller pair gives the real and imaginary parts, each N(0, 1/2).
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double RngStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const std::complex<double> z = complex_normal();
    spare_normal_ = std::numbers::sqrt2 * z.imag();
    has_spare_ = true;
    return std::numbers::sqrt2 * z.real();
}

}  // namespace sdmt
