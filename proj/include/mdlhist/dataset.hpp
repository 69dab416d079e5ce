#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdlhist {

/// Raised for unusable input files or columns.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sorted univariate sample. Values are finite; duplicates are kept with
/// their multiplicity.
struct Dataset {
    std::vector<double> values;   // sorted ascending
    long long skipped_rows = 0;   // unparseable / non-finite rows dropped at load

    long long n() const { return static_cast<long long>(values.size()); }
    double x_min() const { return values.front(); }
    double x_max() const { return values.back(); }
    double domain_length() const { return x_max() - x_min(); }

    /// Smallest gap between distinct values; +inf when all values are equal.
    double min_distinct_gap() const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < values.size(); ++i) {
            const double g = values[i] - values[i - 1];
            if (g > 0.0 && g < d) d = g;
        }
        return d;
    }

    long long distinct_count() const {
        long long c = values.empty() ? 0 : 1;
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (values[i] != values[i - 1]) ++c;
        }
        return c;
    }
};

/// Builds a Dataset from raw observations (sorts, rejects non-finite).
inline Dataset make_dataset(std::vector<double> values) {
    for (const double v : values) {
        if (!std::isfinite(v)) throw DataError("dataset contains a non-finite value");
    }
    if (values.empty()) throw DataError("dataset is empty");
    std::sort(values.begin(), values.end());
    Dataset d;
    d.values = std::move(values);
    return d;
}

namespace detail {

inline void split_fields(std::string_view line, char delim, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    char buf[64];
    if (field.size() >= sizeof(buf)) return false;
    std::copy(field.begin(), field.end(), buf);
    buf[field.size()] = '\0';
    char* end = nullptr;
    const double v = std::strtod(buf, &end);
    if (end != buf + field.size()) return false;
    out = v;
    return true;
}

}  // namespace detail

/// Loads one numeric column from a CSV/TSV file. The delimiter is detected
/// from the first line, the header is detected by whether the selected
/// column parses as a number, and the column is chosen by name (requires a
/// header) or by 0-based index. Rows whose field does not parse to a finite
/// number are skipped and counted.
inline Dataset load_dataset(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF') {
        line.erase(0, 3);  // UTF-8 BOM
    }

    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string_view> fields;
    detail::split_fields(line, delim, fields);

    // Resolve the column: a pure integer selects by index, anything else by
    // header name.
    long long col = -1;
    bool by_index = !column.empty();
    for (const char c : column) {
        if (!std::isdigit(static_cast<unsigned char>(c))) by_index = false;
    }
    if (by_index) {
        col = std::stoll(column);
    } else {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (detail::trim(fields[i]) == column) {
                col = static_cast<long long>(i);
                break;
            }
        }
        if (col < 0) throw DataError("column not found in header: " + column);
    }
    if (col < 0 || static_cast<std::size_t>(col) >= fields.size()) {
        throw DataError("column index out of range: " + column);
    }

    std::vector<double> values;
    long long skipped = 0;
    double v = 0.0;
    // The first line counts as data only if the selected field parses.
    if (detail::parse_double(fields[static_cast<std::size_t>(col)], v) && std::isfinite(v)) {
        values.push_back(v);
    } else if (by_index && !detail::trim(fields[static_cast<std::size_t>(col)]).empty()) {
        // header row for an index-selected column: not an error, not a skip
    }

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        detail::split_fields(line, delim, fields);
        if (static_cast<std::size_t>(col) >= fields.size()) {
            ++skipped;
            continue;
        }
        if (detail::parse_double(fields[static_cast<std::size_t>(col)], v) && std::isfinite(v)) {
            values.push_back(v);
        } else {
            ++skipped;
        }
    }
    if (values.empty()) throw DataError("no parseable numeric values in column " + column);

    Dataset d = make_dataset(std::move(values));
    d.skipped_rows = skipped;
    return d;
}

}  // namespace mdlhist
