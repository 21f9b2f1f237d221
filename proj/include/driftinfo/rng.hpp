#pragma once

#include <array>
#include <cstdint>

namespace driftinfo {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters.
[[nodiscard]] PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Independent purposes a simulated path draws randomness for.
enum class Stream : std::uint32_t {
    InitialDrift = 0,
    DriftNoise = 1,
    Wiener = 2,
    ExpertNoise = 3,
};

/// Sequential draws from the stream (seed, path, purpose). The counter is
/// (block, purpose, path_lo, path_hi) under key = seed, so every stream is a
/// pure function of its coordinates and can be replayed in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t path, Stream stream) noexcept;

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal via Box-Muller.
    double normal() noexcept;

private:
    std::uint32_t next_word() noexcept;

    PhiloxKey key_;
    PhiloxCounter counter_;
    PhiloxCounter block_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace driftinfo
