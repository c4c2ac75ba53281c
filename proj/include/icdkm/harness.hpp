#ifndef ICDKM_HARNESS_HPP
#define ICDKM_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "icdkm/dataset.hpp"
#include "icdkm/engine.hpp"
#include "icdkm/eval.hpp"
#include "icdkm/ingest.hpp"
#include "icdkm/random.hpp"

/**
 * @file harness.hpp
 * @brief Paired-initialization benchmark: every repetition draws one set of
 * initial centroids and runs both variants from it, then scores both against
 * the ground truth.
 */

namespace icdkm {

struct ExperimentSpec {
    std::size_t k = 3;
    std::size_t repetitions = 100;
    /// `k` is overwritten by ExperimentSpec::k. When `auto_tolerance` is set
    /// the convergence tolerance is recomputed from the (possibly normalized)
    /// data as 1e-9 x bounding-box diagonal.
    KMeansConfig engine_config;
    bool auto_tolerance = true;
    std::uint64_t master_seed = 42;
    bool normalize = false;
    /// Worker threads; results do not depend on this.
    std::size_t threads = 1;

    void validate() const {
        if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
        if (k < 2) throw std::invalid_argument("k must be >= 2");
    }
};

/// Seed of repetition r.
inline std::uint64_t repetition_seed(std::uint64_t master_seed, std::size_t rep) {
    return derive_seed(master_seed, rep);
}

struct ScoredRun {
    ClusteringResult result;
    Alignment alignment;
    ConfusionMatrix confusion;
    MetricsReport metrics;
};

struct RepetitionRecord {
    std::size_t rep_index = 0;
    std::uint64_t seed = 0;
    ScoredRun proposed;
    ScoredRun traditional;
};

struct AggregateMetrics {
    double accuracy = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::string dataset;
    std::vector<RepetitionRecord> per_rep;
    AggregateMetrics proposed;
    AggregateMetrics traditional;
    /// (proposed OA, traditional OA) per repetition.
    std::vector<std::pair<double, double>> accuracy_series;
    std::vector<std::string> warnings;
};

inline ScoredRun score_run(ClusteringResult result, std::span<const std::size_t> truth, std::size_t classes) {
    ScoredRun scored;
    scored.alignment = align_labels(truth, result.assignment.labels, classes);
    scored.confusion = confusion_matrix(truth, result.assignment.labels, scored.alignment);
    scored.metrics = metrics(scored.confusion);
    scored.result = std::move(result);
    return scored;
}

namespace detail {

inline AggregateMetrics mean_metrics(const std::vector<RepetitionRecord>& reps, bool proposed) {
    AggregateMetrics agg;
    for (const auto& r : reps) {
        const auto& m = proposed ? r.proposed.metrics : r.traditional.metrics;
        agg.accuracy += m.overall_accuracy;
        agg.recall += m.recall_macro;
        agg.precision += m.precision_macro;
        agg.f1 += m.f1_macro;
    }
    const auto n = static_cast<double>(reps.size());
    agg.accuracy /= n;
    agg.recall /= n;
    agg.precision /= n;
    agg.f1 /= n;
    return agg;
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Runs one repetition; independent of every other repetition.
inline RepetitionRecord run_repetition(const Matrix& features, std::span<const std::size_t> truth,
                                       std::size_t classes, const KMeansConfig& config,
                                       std::uint64_t master_seed, std::size_t rep) {
    RepetitionRecord record;
    record.rep_index = rep;
    record.seed = repetition_seed(master_seed, rep);
    const Centroids initial = initialize_centroids(features, config.k, record.seed);
    record.proposed = score_run(run(features, config, Variant::ProposedICD, initial), truth, classes);
    record.traditional = score_run(run(features, config, Variant::Traditional, initial), truth, classes);
    return record;
}

inline ExperimentResult run_experiment(const Dataset& dataset, const ExperimentSpec& spec) {
    spec.validate();
    if (!dataset.has_labels()) {
        throw std::invalid_argument("dataset '" + dataset.provenance +
                                    "' has no ground-truth labels; benchmarks need them for scoring");
    }
    dataset.check();
    const Dataset data = spec.normalize ? min_max_normalize(dataset) : dataset;

    ExperimentResult out;
    out.spec = spec;
    out.dataset = data.provenance;

    const std::size_t classes = data.num_classes();
    if (classes != spec.k) {
        out.warnings.push_back("k=" + std::to_string(spec.k) + " differs from the " +
                               std::to_string(classes) + " labelled classes; scoring on a " +
                               std::to_string(std::max(classes, spec.k)) + "x" +
                               std::to_string(std::max(classes, spec.k)) + " confusion matrix");
    }
    const std::size_t scored_k = std::max(classes, spec.k);

    KMeansConfig config = spec.engine_config;
    config.k = spec.k;
    if (spec.auto_tolerance) config.convergence_tol = 1e-9 * bounding_box_diagonal(data.features);
    config.validate();

    out.per_rep.resize(spec.repetitions);
    detail::parallel_for(spec.repetitions, spec.threads, [&](std::size_t rep) {
        out.per_rep[rep] = run_repetition(data.features, *data.labels, scored_k, config,
                                          spec.master_seed, rep);
    });

    out.proposed = detail::mean_metrics(out.per_rep, true);
    out.traditional = detail::mean_metrics(out.per_rep, false);
    for (const auto& r : out.per_rep) {
        out.accuracy_series.emplace_back(r.proposed.metrics.overall_accuracy,
                                         r.traditional.metrics.overall_accuracy);
    }
    return out;
}

struct SeriesStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    /// Sample standard deviation (n - 1); 0 for a single value.
    double stddev = 0.0;
};

struct PairedSummary {
    std::size_t repetitions = 0;
    /// Mean of proposed OA minus traditional OA.
    double mean_oa_difference = 0.0;
    /// Repetitions where proposed OA >= traditional OA.
    std::size_t proposed_wins = 0;
    SeriesStats proposed;
    SeriesStats traditional;
};

inline SeriesStats series_stats(const std::vector<double>& values) {
    SeriesStats s;
    if (values.empty()) return s;
    s.min = *std::ranges::min_element(values);
    s.max = *std::ranges::max_element(values);
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

inline PairedSummary paired_summary(const ExperimentResult& result) {
    if (result.accuracy_series.empty()) throw std::invalid_argument("paired_summary: empty result");
    PairedSummary summary;
    summary.repetitions = result.accuracy_series.size();
    std::vector<double> proposed, traditional;
    for (const auto& [p, t] : result.accuracy_series) {
        proposed.push_back(p);
        traditional.push_back(t);
        summary.mean_oa_difference += p - t;
        if (p >= t) ++summary.proposed_wins;
    }
    summary.mean_oa_difference /= static_cast<double>(summary.repetitions);
    summary.proposed = series_stats(proposed);
    summary.traditional = series_stats(traditional);
    return summary;
}

}  // namespace icdkm

#endif  // ICDKM_HARNESS_HPP
