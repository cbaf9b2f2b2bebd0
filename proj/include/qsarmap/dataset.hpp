#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qsarmap/matrix.hpp"

namespace qsarmap {

/// Compound/descriptor table: N compounds x d numeric descriptors plus one
/// endpoint column (e.g. pIC50 or a carcinogenic activity score). All values
/// are finite; compound ids are pairwise distinct.
struct DescriptorTable {
    std::vector<std::string> compound_ids;
    std::vector<std::string> descriptor_names;
    Matrix values;  // N x d
    std::string endpoint_name;
    std::vector<double> endpoint;

    std::size_t n_compounds() const { return compound_ids.size(); }
    std::size_t n_descriptors() const { return descriptor_names.size(); }
};

/// Binary class assignment from the endpoint column by a strict
/// greater-than threshold rule. Ties go to the negative class.
struct EndpointLabeling {
    double threshold = 0.0;
    std::vector<bool> labels;  // true = positive class (active / toxic)
    std::pair<std::string, std::string> class_names = {"positive", "negative"};
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

/// CSV error with 1-based row/column position (0 = not applicable).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t row = 0, std::size_t column = 0)
        : std::runtime_error(message), row_(row), column_(column) {}
    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

/// Locale-independent double parse (dot decimal separator only).
inline double parse_cell(std::string_view cell, std::size_t row, std::size_t column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || cell.empty()) {
        std::ostringstream msg;
        msg << "row " << row << ", column " << column << ": cell '" << std::string(cell)
            << "' is not a number";
        throw ParseError(msg.str(), row, column);
    }
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "row " << row << ", column " << column << ": non-finite value '"
            << std::string(cell) << "'";
        throw ParseError(msg.str(), row, column);
    }
    return value;
}

inline std::string descriptor_row_key(const Matrix& values, std::size_t row) {
    // Bitwise key: exact duplicate detection, so -0.0 and +0.0 stay distinct.
    const auto r = values.row(row);
    std::string key(r.size() * sizeof(double), '\0');
    std::memcpy(key.data(), r.data(), key.size());
    return key;
}

}  // namespace detail

/// Loads a descriptor CSV: UTF-8, comma-separated, header row first, first
/// column compound id, remaining columns numeric. The named endpoint column
/// is split out; every other non-id column becomes a descriptor, order
/// preserved. Any malformed cell is reported with its row/column position.
inline DescriptorTable load_csv(const std::filesystem::path& path,
                                const std::string& endpoint_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<std::string_view> lines;
    {
        std::string_view rest = text;
        while (!rest.empty()) {
            const std::size_t nl = rest.find('\n');
            std::string_view line = rest.substr(0, nl);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            if (nl == std::string_view::npos) break;
            rest.remove_prefix(nl + 1);
        }
        while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
    }
    if (lines.empty()) throw ParseError("empty file: " + path.string());

    const auto header = detail::split_fields(lines[0]);
    if (header.size() < 3)
        throw ParseError("header must contain an id column, at least one descriptor and the endpoint column",
                         1, header.size());
    {
        std::unordered_set<std::string_view> seen;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c].empty())
                throw ParseError("empty header name", 1, c + 1);
            if (!seen.insert(header[c]).second)
                throw ParseError("duplicate header name '" + std::string(header[c]) + "'", 1, c + 1);
        }
    }

    std::size_t endpoint_col = 0;  // absolute column index, 0 = id column
    for (std::size_t c = 1; c < header.size(); ++c)
        if (header[c] == endpoint_column) endpoint_col = c;
    if (endpoint_col == 0) {
        if (!header.empty() && header[0] == endpoint_column)
            throw ParseError("endpoint column '" + endpoint_column + "' is the id column", 1, 1);
        throw ParseError("endpoint column '" + endpoint_column + "' not found in header", 1);
    }

    DescriptorTable table;
    table.endpoint_name = endpoint_column;
    for (std::size_t c = 1; c < header.size(); ++c)
        if (c != endpoint_col) table.descriptor_names.emplace_back(header[c]);

    const std::size_t n_rows = lines.size() - 1;
    if (n_rows < 2) throw ParseError("fewer than 2 data rows");
    const std::size_t d = table.descriptor_names.size();
    table.values = Matrix(n_rows, d);
    table.compound_ids.reserve(n_rows);
    table.endpoint.reserve(n_rows);

    std::unordered_set<std::string> seen_ids;
    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::size_t row_no = r + 2;  // 1-based file row
        const auto fields = detail::split_fields(lines[r + 1]);
        if (fields.size() != header.size()) {
            std::ostringstream msg;
            msg << "row " << row_no << ": expected " << header.size() << " fields, got "
                << fields.size();
            throw ParseError(msg.str(), row_no);
        }
        std::string id(fields[0]);
        if (id.empty()) throw ParseError("empty compound id", row_no, 1);
        if (!seen_ids.insert(id).second)
            throw ParseError("duplicate compound id '" + id + "'", row_no, 1);
        table.compound_ids.push_back(std::move(id));

        std::size_t dcol = 0;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const double value = detail::parse_cell(fields[c], row_no, c + 1);
            if (c == endpoint_col)
                table.endpoint.push_back(value);
            else
                table.values(r, dcol++) = value;
        }
    }
    return table;
}

struct DedupResult {
    DescriptorTable table;
    std::size_t removed = 0;
    std::vector<std::string> warnings;
};

/// Collapses rows whose descriptor vectors are exactly equal (bitwise),
/// keeping the first occurrence; row order is otherwise preserved. A warning
/// is recorded when collapsed rows disagreed on their endpoint value.
inline DedupResult deduplicate(const DescriptorTable& table) {
    const std::size_t n = table.n_compounds();
    std::unordered_map<std::string, std::size_t> first_seen;
    std::vector<std::size_t> keep;
    DedupResult result;
    for (std::size_t r = 0; r < n; ++r) {
        const auto [it, inserted] = first_seen.emplace(detail::descriptor_row_key(table.values, r), r);
        if (inserted) {
            keep.push_back(r);
        } else {
            ++result.removed;
            const std::size_t orig = it->second;
            if (table.endpoint[r] != table.endpoint[orig]) {
                std::ostringstream msg;
                msg << "duplicate descriptors: compound '" << table.compound_ids[r]
                    << "' collapsed into '" << table.compound_ids[orig]
                    << "' despite differing endpoint (" << table.endpoint[r] << " vs "
                    << table.endpoint[orig] << ")";
                result.warnings.push_back(msg.str());
            }
        }
    }
    if (keep.size() < 2)
        throw std::runtime_error("deduplicate: fewer than 2 distinct compounds remain");

    result.table.descriptor_names = table.descriptor_names;
    result.table.endpoint_name = table.endpoint_name;
    result.table.values = Matrix(keep.size(), table.n_descriptors());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        result.table.compound_ids.push_back(table.compound_ids[keep[i]]);
        result.table.endpoint.push_back(table.endpoint[keep[i]]);
        for (std::size_t j = 0; j < table.n_descriptors(); ++j)
            result.table.values(i, j) = table.values(keep[i], j);
    }
    return result;
}

/// Z-scores every descriptor column to mean 0 and sample standard deviation 1
/// (divisor N-1). Exactly constant columns map to all zeros. The endpoint
/// column is left untouched.
inline DescriptorTable normalize(const DescriptorTable& table) {
    const std::size_t n = table.n_compounds();
    if (n < 2) throw std::invalid_argument("normalize: need at least 2 rows");
    DescriptorTable out = table;
    for (std::size_t j = 0; j < table.n_descriptors(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += table.values(i, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = table.values(i, j) - mean;
            out.values(i, j) = c;
            ss += c * c;
        }
        if (ss == 0.0) continue;  // constant column stays all zeros
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        for (std::size_t i = 0; i < n; ++i) out.values(i, j) /= sd;
    }
    return out;
}

/// Arithmetic mean of the endpoint column, the default threshold for the
/// carcinogenicity endpoint.
inline double mean_threshold(const DescriptorTable& table) {
    if (table.endpoint.empty()) throw std::invalid_argument("mean_threshold: empty endpoint");
    double sum = 0.0;
    for (double v : table.endpoint) sum += v;
    return sum / static_cast<double>(table.endpoint.size());
}

/// Labels each compound positive iff endpoint > threshold (strictly).
inline EndpointLabeling label(const DescriptorTable& table, double threshold,
                              std::string positive_name = "positive",
                              std::string negative_name = "negative") {
    EndpointLabeling lab;
    lab.threshold = threshold;
    lab.class_names = {std::move(positive_name), std::move(negative_name)};
    lab.labels.reserve(table.endpoint.size());
    for (double v : table.endpoint) {
        const bool positive = v > threshold;
        lab.labels.push_back(positive);
        if (positive)
            ++lab.positives;
        else
            ++lab.negatives;
    }
    return lab;
}

}  // namespace qsarmap
