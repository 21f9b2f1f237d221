#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace driftinfo {

/// Information available to the investor.
enum class Regime {
    R,  ///< stock returns only
    E,  ///< expert opinions only
    C,  ///< returns combined with expert opinions
    F,  ///< full information, the drift itself is observed
};

inline constexpr std::array<Regime, 4> kAllRegimes{Regime::R, Regime::E, Regime::C, Regime::F};

[[nodiscard]] constexpr char regime_tag(Regime r) noexcept {
    switch (r) {
        case Regime::R: return 'R';
        case Regime::E: return 'E';
        case Regime::C: return 'C';
        case Regime::F: return 'F';
    }
    return '?';
}

[[nodiscard]] constexpr std::size_t regime_index(Regime r) noexcept { return static_cast<std::size_t>(r); }

/// Accepts "R", "E", "C", "F" (case-insensitive). Throws std::invalid_argument otherwise.
[[nodiscard]] Regime parse_regime(std::string_view text);

/// Parses a comma-separated list such as "R,E,C".
[[nodiscard]] std::vector<Regime> parse_regime_list(std::string_view text);

/// Values indexed by regime.
template <typename T>
using PerRegime = std::array<T, kAllRegimes.size()>;

}  // namespace driftinfo
