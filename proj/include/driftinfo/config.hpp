#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "driftinfo/filtering.hpp"
#include "driftinfo/market_model.hpp"
#include "driftinfo/montecarlo.hpp"

namespace driftinfo {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ScheduleMode { Equidistant, Explicit };

/// Either N equidistant dates t_k = k T / N with a constant expert variance, or
/// explicit date and variance lists.
struct ScheduleSpec {
    ScheduleMode mode = ScheduleMode::Equidistant;
    std::size_t count = 10;
    double gamma = 0.25;
    std::vector<double> dates;
    std::vector<double> variances;

    [[nodiscard]] ExpertSchedule build(double horizon) const;
    bool operator==(const ScheduleSpec&) const = default;
};

struct OutputSpec {
    std::string dir = "out";
    bool csv = true;
    bool svg = false;
    bool operator==(const OutputSpec&) const = default;
};

/// Everything a CLI run needs. Defaults are the reference market with a
/// stationary start, ten experts of variance 0.5^2 and 10^4 paths.
struct ExperimentConfig {
    ModelParams model;
    ScheduleSpec schedule;
    SimConfig sim;
    OutputSpec output;

    /// Throws ConfigError naming the offending block.
    void validate() const;
    [[nodiscard]] ExpertSchedule expert_schedule() const { return schedule.build(model.horizon); }
    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses "section.key = value" lines; '#' starts a comment. Unknown or repeated
/// keys are errors. Missing keys keep their defaults. The result is validated.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every key with round-trip exact numbers.
[[nodiscard]] std::string serialize_config(const ExperimentConfig& config);

}  // namespace driftinfo
