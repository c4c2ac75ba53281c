#ifndef ICDKM_INGEST_HPP
#define ICDKM_INGEST_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "icdkm/dataset.hpp"

namespace icdkm {

/// Raised for malformed delimited input. Row and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t row, std::size_t column, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(row) + ":" + std::to_string(column) + ": " + what),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

enum class MissingPolicy { DropRow };

/// A column named by position or by header name.
using ColumnRef = std::variant<std::size_t, std::string>;

struct CsvSchema {
    std::optional<ColumnRef> label_column;
    /// When false, a label column given by name that is absent from the header
    /// leaves the dataset unlabeled instead of failing.
    bool label_required = true;
    std::vector<std::size_t> id_columns;
    std::string missing_token = "?";
    MissingPolicy missing_policy = MissingPolicy::DropRow;
    char delimiter = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split(std::string_view line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        cells.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

inline std::optional<double> parse_number(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc{} || ptr != end || cell.empty()) return std::nullopt;
    return value;
}

}  // namespace detail

/// Parses delimited text into a Dataset. A first row with any non-numeric
/// feature cell is treated as a header. Rows containing the missing token are
/// dropped; id columns are discarded; the label column is factored into class
/// indices in order of first appearance.
inline Dataset parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source = "<input>") {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        rows.emplace_back(line_no, detail::split(line, schema.delimiter));
    }
    if (rows.empty()) throw ParseError(source, 1, 1, "empty file");

    const std::size_t width = rows.front().second.size();
    for (const auto& [row_no, cells] : rows) {
        if (cells.size() != width) {
            throw ParseError(source, row_no, cells.size(),
                             "expected " + std::to_string(width) + " columns, found " +
                                 std::to_string(cells.size()));
        }
    }

    // Header detection needs to know which column holds the label; a named
    // label column implies a header.
    std::optional<std::size_t> label_index;
    if (schema.label_column) {
        if (const auto* idx = std::get_if<std::size_t>(&*schema.label_column)) label_index = *idx;
    }
    auto is_excluded = [&](std::size_t c) {
        return (label_index && *label_index == c) ||
               std::ranges::find(schema.id_columns, c) != schema.id_columns.end();
    };

    bool has_header = schema.label_required && schema.label_column &&
                      std::holds_alternative<std::string>(*schema.label_column);
    if (!has_header) {
        const auto& first = rows.front().second;
        for (std::size_t c = 0; c < width; ++c) {
            if (is_excluded(c)) continue;
            if (first[c] != schema.missing_token && !detail::parse_number(first[c])) {
                has_header = true;
                break;
            }
        }
    }

    std::vector<std::string> header;
    if (has_header) {
        header = rows.front().second;
        rows.erase(rows.begin());
    }
    if (schema.label_column) {
        if (const auto* name = std::get_if<std::string>(&*schema.label_column)) {
            const auto it = std::ranges::find(header, *name);
            if (it != header.end()) {
                label_index = static_cast<std::size_t>(it - header.begin());
            } else if (schema.label_required) {
                throw ParseError(source, 1, 1, "label column '" + *name + "' not found in header");
            }
        }
    }
    if (label_index && *label_index >= width) {
        throw std::invalid_argument("label column index " + std::to_string(*label_index) +
                                    " out of range for " + std::to_string(width) + " columns");
    }
    for (auto c : schema.id_columns) {
        if (label_index && c == *label_index) {
            throw std::invalid_argument("label column is also listed as an id column");
        }
    }

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < width; ++c) {
        if (!is_excluded(c)) feature_cols.push_back(c);
    }
    if (feature_cols.empty()) throw std::invalid_argument("schema leaves no feature columns");

    Dataset data;
    data.provenance = source;
    for (auto c : feature_cols) {
        data.feature_names.push_back(has_header ? header[c] : "f" + std::to_string(c));
    }

    std::vector<double> values;
    std::vector<std::size_t> labels;
    std::map<std::string, std::size_t> class_index;
    std::size_t kept = 0;
    for (const auto& [row_no, cells] : rows) {
        const bool missing = std::ranges::any_of(feature_cols, [&](std::size_t c) {
            return cells[c] == schema.missing_token;
        }) || (label_index && cells[*label_index] == schema.missing_token);
        if (missing) continue;  // DropRow
        for (auto c : feature_cols) {
            const auto v = detail::parse_number(cells[c]);
            if (!v) throw ParseError(source, row_no, c + 1, "non-numeric value '" + cells[c] + "'");
            if (!std::isfinite(*v)) throw ParseError(source, row_no, c + 1, "non-finite value");
            values.push_back(*v);
        }
        if (label_index) {
            const auto& name = cells[*label_index];
            auto [it, inserted] = class_index.try_emplace(name, data.class_names.size());
            if (inserted) data.class_names.push_back(name);
            labels.push_back(it->second);
        }
        ++kept;
    }
    if (kept == 0) throw ParseError(source, line_no, 1, "no usable rows");

    data.features = Matrix(kept, feature_cols.size(), std::move(values));
    if (label_index) data.labels = std::move(labels);
    return data;
}

inline Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return parse_csv(in, schema, path.string());
}

enum class BuiltinDataset { Iris, Wine, BreastCancer };

inline std::string to_string(BuiltinDataset which) {
    switch (which) {
        case BuiltinDataset::Iris: return "iris";
        case BuiltinDataset::Wine: return "wine";
        case BuiltinDataset::BreastCancer: return "breast-cancer";
    }
    return "unknown";
}

inline std::optional<BuiltinDataset> builtin_from_name(std::string_view name) {
    if (name == "iris") return BuiltinDataset::Iris;
    if (name == "wine") return BuiltinDataset::Wine;
    if (name == "breast-cancer") return BuiltinDataset::BreastCancer;
    return std::nullopt;
}

/// Schemas for the UCI files as distributed: iris.data (label last), wine.data
/// (label first), breast-cancer-wisconsin.data (sample id first, class last,
/// '?' for missing bare nuclei).
inline CsvSchema builtin_schema(BuiltinDataset which) {
    CsvSchema schema;
    switch (which) {
        case BuiltinDataset::Iris: schema.label_column = std::size_t{4}; break;
        case BuiltinDataset::Wine: schema.label_column = std::size_t{0}; break;
        case BuiltinDataset::BreastCancer:
            schema.label_column = std::size_t{10};
            schema.id_columns = {0};
            break;
    }
    return schema;
}

inline std::string builtin_filename(BuiltinDataset which) {
    switch (which) {
        case BuiltinDataset::Iris: return "iris.data";
        case BuiltinDataset::Wine: return "wine.data";
        case BuiltinDataset::BreastCancer: return "breast-cancer-wisconsin.data";
    }
    return {};
}

/// Directory holding the vendored data files: $ICDKM_DATA_DIR, else the
/// compile-time default.
inline std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("ICDKM_DATA_DIR"); env && *env) return env;
#ifdef ICDKM_DATA_DIR
    return ICDKM_DATA_DIR;
#else
    return "data";
#endif
}

inline Dataset load_builtin(BuiltinDataset which, const std::filesystem::path& data_dir = default_data_dir()) {
    auto data = load_csv(data_dir / builtin_filename(which), builtin_schema(which));
    data.provenance = to_string(which) + ":" + (data_dir / builtin_filename(which)).string();
    return data;
}

struct ValidationReport {
    std::vector<std::string> checks;
    std::vector<std::string> warnings;
    bool ok() const noexcept { return warnings.empty(); }
};

/// Compares shape, class count and (where documented) class sizes with the
/// published description of each benchmark. Mismatches are warnings.
inline ValidationReport validate_expected(const Dataset& data, BuiltinDataset expected) {
    struct Expectation {
        std::size_t rows = 0;
        std::size_t dims = 0;
        std::size_t classes = 0;
        std::vector<std::size_t> class_sizes;
    };
    Expectation e;
    switch (expected) {
        case BuiltinDataset::Iris: e = {150, 4, 3, {50, 50, 50}}; break;
        case BuiltinDataset::Wine: e = {178, 13, 3, {59, 78, 48}}; break;
        case BuiltinDataset::BreastCancer: e = {569, 9, 2, {}}; break;
    }

    ValidationReport report;
    const auto name = to_string(expected);
    auto compare = [&](const std::string& what, std::size_t actual, std::size_t wanted) {
        const std::string line = name + " " + what + ": " + std::to_string(actual) +
                                 " (expected " + std::to_string(wanted) + ")";
        report.checks.push_back(line);
        if (actual != wanted) report.warnings.push_back(line);
    };
    compare("rows", data.size(), e.rows);
    compare("features", data.dims(), e.dims);
    compare("classes", data.num_classes(), e.classes);
    const auto sizes = data.class_sizes();
    for (std::size_t c = 0; c < e.class_sizes.size() && c < sizes.size(); ++c) {
        const std::string cls = c < data.class_names.size() ? data.class_names[c] : std::to_string(c);
        compare("class '" + cls + "' size", sizes[c], e.class_sizes[c]);
    }
    return report;
}

/// Rescales every feature to [0, 1]; constant features become 0.
inline Dataset min_max_normalize(const Dataset& data) {
    Dataset out = data;
    const auto& m = data.features;
    if (m.rows() == 0) return out;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double lo = m(0, c);
        double hi = m(0, c);
        for (std::size_t r = 1; r < m.rows(); ++r) {
            lo = std::min(lo, m(r, c));
            hi = std::max(hi, m(r, c));
        }
        const double span = hi - lo;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            out.features(r, c) = span > 0.0 ? (m(r, c) - lo) / span : 0.0;
        }
    }
    out.provenance = data.provenance + "|minmax";
    return out;
}

}  // namespace icdkm

#endif  // ICDKM_INGEST_HPP
