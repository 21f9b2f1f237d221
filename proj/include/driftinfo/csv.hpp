#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace driftinfo {

/// Six significant digits, the default numeric format of every CSV file.
[[nodiscard]] std::string format_number(double value);

/// Fixed number of decimals.
[[nodiscard]] std::string format_fixed(double value, int decimals);

/// Round-trip exact representation (17 significant digits).
[[nodiscard]] std::string format_exact(double value);

/// Writes comma-separated rows. Fields are emitted verbatim; callers format numbers.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(std::initializer_list<std::string_view> fields);

    template <typename Range>
    void row_range(const Range& fields) {
        bool first = true;
        for (const auto& f : fields) {
            if (!first) out_ << ',';
            out_ << f;
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

}  // namespace driftinfo
