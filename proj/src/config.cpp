#include "driftinfo/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "driftinfo/csv.hpp"

namespace driftinfo {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double parse_double(std::string_view v, std::size_t line) {
    if (v == "inf" || v == "+inf") return kUninformative;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail(line, "not a number: '" + std::string(v) + "'");
    return out;
}

template <typename Int>
Int parse_integer(std::string_view v, std::size_t line) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(line, "not a nonnegative integer: '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view v, std::size_t line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, "not a boolean: '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view v, std::size_t line) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = v.find(',', start);
        const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
        out.push_back(parse_double(item, line));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_exact(values[i]);
    }
    return out;
}

}  // namespace

ExpertSchedule ScheduleSpec::build(double horizon) const {
    if (mode == ScheduleMode::Equidistant) return ExpertSchedule::equidistant(count, horizon, gamma);
    return ExpertSchedule{dates, variances};
}

void ExperimentConfig::validate() const {
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[model] ") + e.what());
    }
    try {
        if (schedule.mode == ScheduleMode::Equidistant && !(schedule.gamma >= 0.0)) {
            throw std::invalid_argument("schedule.gamma must be >= 0 or inf");
        }
        expert_schedule().validate(model.horizon);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[schedule] ") + e.what());
    }
    try {
        sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[sim] ") + e.what());
    }
    if (output.dir.empty()) throw ConfigError("[output] output.dir must not be empty");
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto v = trim(line.substr(eq + 1));
        if (!seen.emplace(key).second) fail(line_no, "duplicate key '" + std::string(key) + "'");

        auto& m = cfg.model;
        auto& s = cfg.schedule;
        if (key == "model.alpha") m.alpha = parse_double(v, line_no);
        else if (key == "model.beta") m.beta = parse_double(v, line_no);
        else if (key == "model.delta") m.delta = parse_double(v, line_no);
        else if (key == "model.sigma") m.sigma = parse_double(v, line_no);
        else if (key == "model.m0") m.m0 = parse_double(v, line_no);
        else if (key == "model.nu0") m.nu0 = parse_double(v, line_no);
        else if (key == "model.horizon") m.horizon = parse_double(v, line_no);
        else if (key == "schedule.mode") {
            if (v == "equidistant") s.mode = ScheduleMode::Equidistant;
            else if (v == "explicit") s.mode = ScheduleMode::Explicit;
            else fail(line_no, "schedule.mode must be 'equidistant' or 'explicit'");
        }
        else if (key == "schedule.count") s.count = parse_integer<std::size_t>(v, line_no);
        else if (key == "schedule.gamma") s.gamma = parse_double(v, line_no);
        else if (key == "schedule.dates") s.dates = parse_list(v, line_no);
        else if (key == "schedule.variances") s.variances = parse_list(v, line_no);
        else if (key == "sim.n_paths") cfg.sim.n_paths = parse_integer<std::size_t>(v, line_no);
        else if (key == "sim.dt") cfg.sim.dt = parse_double(v, line_no);
        else if (key == "sim.seed") cfg.sim.seed = parse_integer<std::uint64_t>(v, line_no);
        else if (key == "sim.threads") cfg.sim.threads = parse_integer<unsigned>(v, line_no);
        else if (key == "output.dir") cfg.output.dir = std::string(v);
        else if (key == "output.csv") cfg.output.csv = parse_bool(v, line_no);
        else if (key == "output.svg") cfg.output.svg = parse_bool(v, line_no);
        else fail(line_no, "unknown key '" + std::string(key) + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "model.alpha = " << format_exact(c.model.alpha) << '\n'
        << "model.beta = " << format_exact(c.model.beta) << '\n'
        << "model.delta = " << format_exact(c.model.delta) << '\n'
        << "model.sigma = " << format_exact(c.model.sigma) << '\n'
        << "model.m0 = " << format_exact(c.model.m0) << '\n'
        << "model.nu0 = " << format_exact(c.model.nu0) << '\n'
        << "model.horizon = " << format_exact(c.model.horizon) << "\n\n"
        << "schedule.mode = " << (c.schedule.mode == ScheduleMode::Equidistant ? "equidistant" : "explicit") << '\n'
        << "schedule.count = " << c.schedule.count << '\n'
        << "schedule.gamma = " << format_exact(c.schedule.gamma) << '\n'
        << "schedule.dates = " << join(c.schedule.dates) << '\n'
        << "schedule.variances = " << join(c.schedule.variances) << "\n\n"
        << "sim.n_paths = " << c.sim.n_paths << '\n'
        << "sim.dt = " << format_exact(c.sim.dt) << '\n'
        << "sim.seed = " << c.sim.seed << '\n'
        << "sim.threads = " << c.sim.threads << "\n\n"
        << "output.dir = " << c.output.dir << '\n'
        << "output.csv = " << (c.output.csv ? "true" : "false") << '\n'
        << "output.svg = " << (c.output.svg ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace driftinfo
