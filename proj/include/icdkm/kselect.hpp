#ifndef ICDKM_KSELECT_HPP
#define ICDKM_KSELECT_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "icdkm/engine.hpp"

namespace icdkm {

struct KSweepResult {
    std::vector<std::size_t> k_values;
    std::vector<double> ch_scores;
    std::vector<double> inertias;
    std::size_t best_k_ch = 0;
    std::size_t best_k_elbow = 0;
};

/// Sum of squared distances of the points to their assigned centers.
inline double inertia(const Matrix& data, const Centroids& centroids, const Assignment& assignment) {
    return wcd(data, centroids, assignment);
}

/// Mean squared distance to the assigned center.
inline double distortion(const Matrix& data, const Centroids& centroids,
                         const Assignment& assignment) {
    if (data.rows() == 0) throw std::invalid_argument("distortion of an empty dataset");
    return inertia(data, centroids, assignment) / static_cast<double>(data.rows());
}

/// Calinski-Harabasz index [B / (k-1)] / [W / (n-k)] with
/// B = sum_j n_j |c_j - mean|^2 and W = WCD. +inf when W is 0.
inline double calinski_harabasz(const Matrix& data, const Assignment& assignment,
                                const Centroids& centroids) {
    const std::size_t k = assignment.k();
    const std::size_t n = data.rows();
    if (k < 2) throw std::invalid_argument("Calinski-Harabasz requires k >= 2");
    if (n <= k) throw std::invalid_argument("Calinski-Harabasz requires n > k");
    const double within = wcd(data, centroids, assignment);

    std::vector<double> mean(data.cols(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < data.cols(); ++c) mean[c] += data(i, c);
    }
    for (auto& v : mean) v /= static_cast<double>(n);

    double between = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        between += static_cast<double>(assignment.counts[j]) * squared_euclidean(centroids.row(j), mean);
    }
    if (within == 0.0) return std::numeric_limits<double>::infinity();
    return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

/// Index of the interior point with the largest second difference
/// y[i-1] - 2 y[i] + y[i+1]; 0 when there is no interior point.
inline std::size_t elbow_index(const std::vector<double>& curve) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double second = curve[i - 1] - 2.0 * curve[i] + curve[i + 1];
        if (second > best_value) {
            best_value = second;
            best = i;
        }
    }
    return best;
}

/// Runs traditional k-means `runs_per_k` times per k (seeded initializations),
/// keeps the lowest-inertia run and scores it.
inline KSweepResult sweep_k(const Matrix& data, std::size_t k_min, std::size_t k_max,
                            std::size_t runs_per_k = 10, std::uint64_t seed = 0) {
    if (k_min < 2 || k_min >= k_max || k_max + 1 > data.rows()) {
        throw std::invalid_argument("invalid k range [" + std::to_string(k_min) + ", " +
                                    std::to_string(k_max) + "] for n=" +
                                    std::to_string(data.rows()) +
                                    "; need 2 <= k_min < k_max <= n-1");
    }
    if (runs_per_k < 1) throw std::invalid_argument("runs_per_k must be >= 1");

    KSweepResult out;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        auto config = default_config(data, k);
        ClusteringResult best;
        double best_inertia = std::numeric_limits<double>::infinity();
        for (std::size_t run_index = 0; run_index < runs_per_k; ++run_index) {
            const auto run_seed = derive_seed(derive_seed(seed, k), run_index);
            auto result = run(data, config, Variant::Traditional,
                              initialize_centroids(data, k, run_seed));
            if (result.wcd < best_inertia) {
                best_inertia = result.wcd;
                best = std::move(result);
            }
        }
        out.k_values.push_back(k);
        out.inertias.push_back(best_inertia);
        out.ch_scores.push_back(calinski_harabasz(data, best.assignment, best.centroids));
    }

    std::size_t best_ch = 0;
    for (std::size_t i = 1; i < out.ch_scores.size(); ++i) {
        if (out.ch_scores[i] > out.ch_scores[best_ch]) best_ch = i;
    }
    out.best_k_ch = out.k_values[best_ch];
    out.best_k_elbow = out.k_values[elbow_index(out.inertias)];
    return out;
}

}  // namespace icdkm

#endif  // ICDKM_KSELECT_HPP
