#include "driftinfo/csv.hpp"

#include <cmath>
#include <cstdio>

namespace driftinfo {

namespace {

std::string printf_double(const char* pattern, int precision, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, precision, value);
    return buf;
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) return "0";  // no "-0"
    return printf_double("%.*g", 6, value);
}

std::string format_fixed(double value, int decimals) {
    std::string s = printf_double("%.*f", decimals, value);
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

std::string format_exact(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return printf_double("%.*g", 17, value);
}

void CsvWriter::row(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
        if (!first) out_ << ',';
        out_ << f;
        first = false;
    }
    out_ << '\n';
}

}  // namespace driftinfo
