#include "driftinfo/regime.hpp"

#include <stdexcept>

namespace driftinfo {

Regime parse_regime(std::string_view text) {
    if (text.size() == 1) {
        switch (text.front()) {
            case 'R': case 'r': return Regime::R;
            case 'E': case 'e': return Regime::E;
            case 'C': case 'c': return Regime::C;
            case 'F': case 'f': return Regime::F;
            default: break;
        }
    }
    throw std::invalid_argument("unknown regime '" + std::string(text) + "' (expected R, E, C or F)");
}

std::vector<Regime> parse_regime_list(std::string_view text) {
    std::vector<Regime> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        auto item = text.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.push_back(parse_regime(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty regime list");
    return out;
}

}  // namespace driftinfo
