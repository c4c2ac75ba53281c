#ifndef ICDKM_EVAL_HPP
#define ICDKM_EVAL_HPP

#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "icdkm/engine.hpp"

namespace icdkm {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// shortest augmenting paths with potentials, O(n^3)). Returns row -> column.
inline std::vector<std::size_t> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    for (const auto& row : cost) {
        if (row.size() != n) throw std::invalid_argument("hungarian: cost matrix must be square");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; column 0 is a sentinel.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match_col[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match_col[j0] = match_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        if (match_col[j] != 0) row_to_col[match_col[j] - 1] = j - 1;
    }
    return row_to_col;
}

/// Maps each predicted cluster index to a class index.
using Alignment = std::vector<std::size_t>;

namespace detail {

inline void check_labels(std::span<const std::size_t> labels, std::size_t k, const char* what) {
    for (auto l : labels) {
        if (l >= k) {
            throw std::invalid_argument(std::string(what) + " label " + std::to_string(l) +
                                        " out of range for k=" + std::to_string(k));
        }
    }
}

}  // namespace detail

/// k x k overlap counts: overlap[class][cluster].
inline std::vector<std::vector<double>> overlap_matrix(std::span<const std::size_t> true_labels,
                                                       std::span<const std::size_t> predicted,
                                                       std::size_t k) {
    if (true_labels.size() != predicted.size()) {
        throw std::invalid_argument("true and predicted label counts differ");
    }
    detail::check_labels(true_labels, k, "true");
    detail::check_labels(predicted, k, "predicted");
    std::vector<std::vector<double>> overlap(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < true_labels.size(); ++i) overlap[true_labels[i]][predicted[i]] += 1.0;
    return overlap;
}

/// Cluster -> class permutation maximizing the total overlap.
inline Alignment align_labels(std::span<const std::size_t> true_labels,
                              std::span<const std::size_t> predicted, std::size_t k) {
    if (true_labels.empty()) throw std::invalid_argument("align_labels: no labels");
    const auto overlap = overlap_matrix(true_labels, predicted, k);
    // Rows are clusters, columns are classes; cost is negated overlap.
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (std::size_t cls = 0; cls < k; ++cls) {
        for (std::size_t cluster = 0; cluster < k; ++cluster) cost[cluster][cls] = -overlap[cls][cluster];
    }
    return hungarian_min_cost(cost);
}

inline Alignment align_labels(std::span<const std::size_t> true_labels, const Assignment& predicted,
                              std::size_t k) {
    return align_labels(true_labels, predicted.labels, k);
}

/// Rows are true classes, columns are aligned predicted clusters.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t k) : k_(k), counts_(k * k, 0) {}

    std::size_t k() const noexcept { return k_; }
    std::size_t& at(std::size_t truth, std::size_t predicted) { return counts_[truth * k_ + predicted]; }
    std::size_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * k_ + predicted]; }

    std::size_t total() const noexcept { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }
    std::size_t trace() const noexcept {
        std::size_t t = 0;
        for (std::size_t c = 0; c < k_; ++c) t += at(c, c);
        return t;
    }
    std::size_t row_sum(std::size_t truth) const {
        std::size_t s = 0;
        for (std::size_t c = 0; c < k_; ++c) s += at(truth, c);
        return s;
    }
    std::size_t col_sum(std::size_t predicted) const {
        std::size_t s = 0;
        for (std::size_t r = 0; r < k_; ++r) s += at(r, predicted);
        return s;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t k_ = 0;
    std::vector<std::size_t> counts_;
};

inline ConfusionMatrix confusion_matrix(std::span<const std::size_t> true_labels,
                                        std::span<const std::size_t> predicted,
                                        const Alignment& alignment) {
    const std::size_t k = alignment.size();
    if (true_labels.size() != predicted.size()) {
        throw std::invalid_argument("true and predicted label counts differ");
    }
    std::vector<bool> seen(k, false);
    for (auto target : alignment) {
        if (target >= k || seen[target]) throw std::invalid_argument("alignment is not a permutation");
        seen[target] = true;
    }
    detail::check_labels(true_labels, k, "true");
    detail::check_labels(predicted, k, "predicted");
    ConfusionMatrix cm(k);
    for (std::size_t i = 0; i < true_labels.size(); ++i) ++cm.at(true_labels[i], alignment[predicted[i]]);
    return cm;
}

struct ClassMetrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    double ppv = 0.0;
    double tpr = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double overall_accuracy = 0.0;
    double precision_macro = 0.0;
    double recall_macro = 0.0;
    double f1_macro = 0.0;
    std::vector<ClassMetrics> per_class;
};

namespace detail {
inline double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }
}  // namespace detail

/// One-vs-rest counts per class, macro (unweighted) averages. Zero
/// denominators give 0.
inline MetricsReport metrics(const ConfusionMatrix& cm) {
    const std::size_t total = cm.total();
    if (cm.k() == 0 || total == 0) throw std::invalid_argument("metrics: empty confusion matrix");
    MetricsReport report;
    report.overall_accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    for (std::size_t c = 0; c < cm.k(); ++c) {
        ClassMetrics m;
        m.tp = cm.at(c, c);
        m.fn = cm.row_sum(c) - m.tp;
        m.fp = cm.col_sum(c) - m.tp;
        m.tn = total - m.tp - m.fn - m.fp;
        const auto tp = static_cast<double>(m.tp);
        m.ppv = detail::ratio_or_zero(tp, tp + static_cast<double>(m.fp));
        m.tpr = detail::ratio_or_zero(tp, tp + static_cast<double>(m.fn));
        m.f1 = detail::ratio_or_zero(2.0 * tp, 2.0 * tp + static_cast<double>(m.fp + m.fn));
        report.precision_macro += m.ppv;
        report.recall_macro += m.tpr;
        report.f1_macro += m.f1;
        report.per_class.push_back(m);
    }
    const auto k = static_cast<double>(cm.k());
    report.precision_macro /= k;
    report.recall_macro /= k;
    report.f1_macro /= k;
    return report;
}

}  // namespace icdkm

#endif  // ICDKM_EVAL_HPP
