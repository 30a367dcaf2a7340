#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace sdmt {

// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the output is a
// function of (counter, key) only.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

// Separates independent uses of one seed so that, e.g., the array-gain
// estimate and the outage simulation never consume the same draws.
enum class StreamDomain : std::uint32_t {
    generic = 0,
    array_gain = 1,
    outage = 2,
    moments = 3,
    test = 0xFFFF,
};

// Counter-based random stream. A stream is identified by (seed, domain,
// substream) and is a cheap value type; each Monte-Carlo trial builds its own
// stream from its trial index, so the draw sequence never depends on how
// trials are scheduled across workers.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t substream,
              StreamDomain domain = StreamDomain::generic) noexcept;

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    // Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_normal() noexcept;

    // Standard real normal N(0, 1).
    double normal() noexcept;

    std::uint64_t blocks_consumed() const noexcept { return block_; }

private:
    void refill() noexcept;

    PhiloxKey key_;
    std::uint32_t domain_;
    std::uint64_t substream_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sdmt
