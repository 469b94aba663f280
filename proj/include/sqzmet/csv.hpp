// csv.hpp — CSV rows and run manifests with exact decimal output

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace sqzmet {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest fixed-width rendering that round-trips: 17 significant digits.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Resolved parameters of one run, echoed as '# key=value' lines above the CSV
/// header. Feeding the file back through --config reproduces the run.
class RunManifest {
public:
    explicit RunManifest(std::string command) { add("command", std::move(command)); }

    RunManifest& add(std::string key, std::string value) {
        entries_.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    RunManifest& add(std::string key, double value) { return add(std::move(key), format_double(value)); }

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    void write(std::ostream& os) const {
        os << "# sqzmet " << kVersion << '\n';
        for (const auto& [k, v] : entries_) os << "# " << k << '=' << v << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
        os_ << '\n';
    }

    CsvWriter& cell(double v) { return raw(format_double(v)); }
    CsvWriter& cell(int v) { return raw(std::to_string(v)); }
    CsvWriter& raw(const std::string& s) {
        if (!first_) os_ << ',';
        os_ << s;
        first_ = false;
        return *this;
    }
    void end_row() {
        os_ << '\n';
        first_ = true;
    }

private:
    std::ostream& os_;
    bool first_{true};
};

}  // namespace sqzmet
