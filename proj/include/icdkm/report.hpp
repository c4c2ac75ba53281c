#ifndef ICDKM_REPORT_HPP
#define ICDKM_REPORT_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "icdkm/dataset.hpp"
#include "icdkm/engine.hpp"
#include "icdkm/harness.hpp"
#include "icdkm/ingest.hpp"
#include "icdkm/kselect.hpp"

// File formats written by the command-line tool. CSV values use the shortest
// representation that round-trips; human tables use 6 decimals.

namespace icdkm {

inline constexpr const char* kVersion = "0.1.0";

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string format_full(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_full: conversion failed");
    return std::string(buf.data(), ptr);
}

inline std::string format_fixed(double value, int decimals = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << value;
    return os.str();
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace detail

/// Header row of feature names, optional trailing `label` column.
inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t c = 0; c < data.dims(); ++c) {
        if (c) out << ',';
        out << (c < data.feature_names.size() ? data.feature_names[c] : "x" + std::to_string(c));
    }
    if (data.labels) out << ",label";
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t c = 0; c < data.dims(); ++c) {
            if (c) out << ',';
            out << format_full(data.features(i, c));
        }
        if (data.labels) {
            const auto l = (*data.labels)[i];
            out << ',' << (l < data.class_names.size() ? data.class_names[l] : std::to_string(l));
        }
        out << '\n';
    }
}

inline void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
    auto out = detail::open_output(path);
    write_dataset_csv(out, data);
}

/// Reads the tool's dataset CSV: header row, optional `label` column.
inline Dataset load_dataset_csv(const std::filesystem::path& path) {
    CsvSchema schema;
    schema.label_column = std::string("label");
    schema.label_required = false;
    return load_csv(path, schema);
}

inline void write_metadata(const std::filesystem::path& path, const Metadata& entries) {
    auto out = detail::open_output(path);
    for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
}

inline constexpr const char* kSummaryHeader = "Algorithm,Accuracy,Recall,Precision,F Score";

inline void write_summary_csv(const std::filesystem::path& path, const ExperimentResult& result) {
    auto out = detail::open_output(path);
    out << kSummaryHeader << '\n';
    auto row = [&](const char* name, const AggregateMetrics& m) {
        out << name << ',' << format_full(m.accuracy) << ',' << format_full(m.recall) << ','
            << format_full(m.precision) << ',' << format_full(m.f1) << '\n';
    };
    row("Proposed k-means", result.proposed);
    row("Traditional k-means", result.traditional);
}

inline std::string summary_table(const ExperimentResult& result) {
    std::ostringstream os;
    os << std::left << std::setw(22) << "Algorithm" << std::setw(12) << "Accuracy" << std::setw(12)
       << "Recall" << std::setw(12) << "Precision" << "F Score\n";
    auto row = [&](const char* name, const AggregateMetrics& m) {
        os << std::setw(22) << name << std::setw(12) << format_fixed(m.accuracy) << std::setw(12)
           << format_fixed(m.recall) << std::setw(12) << format_fixed(m.precision)
           << format_fixed(m.f1) << '\n';
    };
    row("Proposed k-means", result.proposed);
    row("Traditional k-means", result.traditional);
    return os.str();
}

inline void write_accuracy_series(const std::filesystem::path& path, const ExperimentResult& result) {
    auto out = detail::open_output(path);
    out << "rep_index,proposed_OA,traditional_OA\n";
    for (std::size_t r = 0; r < result.accuracy_series.size(); ++r) {
        out << r << ',' << format_full(result.accuracy_series[r].first) << ','
            << format_full(result.accuracy_series[r].second) << '\n';
    }
}

/// Rows are true classes, columns aligned predicted clusters.
inline void write_confusion(const std::filesystem::path& path, const ConfusionMatrix& cm,
                            const std::vector<std::string>& class_names) {
    auto out = detail::open_output(path);
    auto name = [&](std::size_t c) { return c < class_names.size() ? class_names[c] : std::to_string(c); };
    out << "true\\predicted";
    for (std::size_t c = 0; c < cm.k(); ++c) out << ',' << name(c);
    out << '\n';
    for (std::size_t r = 0; r < cm.k(); ++r) {
        out << name(r);
        for (std::size_t c = 0; c < cm.k(); ++c) out << ',' << cm.at(r, c);
        out << '\n';
    }
}

inline void write_centroids(const std::filesystem::path& path, const Centroids& centroids) {
    auto out = detail::open_output(path);
    out << "cluster";
    for (std::size_t c = 0; c < centroids.cols(); ++c) out << ",x" << c;
    out << '\n';
    for (std::size_t j = 0; j < centroids.rows(); ++j) {
        out << j;
        for (double v : centroids.row(j)) out << ',' << format_full(v);
        out << '\n';
    }
}

inline void write_assignment(const std::filesystem::path& path, const Assignment& assignment) {
    auto out = detail::open_output(path);
    out << "row,cluster\n";
    for (std::size_t i = 0; i < assignment.labels.size(); ++i) out << i << ',' << assignment.labels[i] << '\n';
}

inline void write_sweep_csv(const std::filesystem::path& path, const KSweepResult& sweep) {
    auto out = detail::open_output(path);
    out << "k,calinski_harabasz,inertia\n";
    for (std::size_t i = 0; i < sweep.k_values.size(); ++i) {
        out << sweep.k_values[i] << ',' << format_full(sweep.ch_scores[i]) << ','
            << format_full(sweep.inertias[i]) << '\n';
    }
}

}  // namespace icdkm

#endif  // ICDKM_REPORT_HPP
