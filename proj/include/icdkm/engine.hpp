#ifndef ICDKM_ENGINE_HPP
#define ICDKM_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "icdkm/geometry.hpp"
#include "icdkm/matrix.hpp"
#include "icdkm/random.hpp"

/**
 * @file engine.hpp
 * @brief Traditional (Lloyd) k-means and the ICD-aware variant that optimizes
 * the relative cost WCD / ICD.
 *
 * WCD is the within-cluster sum of squared distances to the centroids. ICD is
 * the sum of squared distances over all ordered pairs of points that sit in
 * different clusters. ICD is never evaluated by the O(n^2) double loop; it is
 * assembled from per-cluster counts, means and scatters.
 */

namespace icdkm {

enum class Variant { Traditional, ProposedICD };

inline std::string to_string(Variant v) {
    return v == Variant::Traditional ? "traditional" : "proposed";
}

enum class EmptyClusterPolicy { ReseedFarthest };

/// Centroid matrix, k x d.
using Centroids = Matrix;

struct KMeansConfig {
    std::size_t k = 3;
    std::size_t max_iterations = 300;
    /// Maximum centroid displacement (Euclidean, feature units) that counts as converged.
    double convergence_tol = 0.0;
    DistanceKind distance = Euclidean{};
    EmptyClusterPolicy empty_cluster_policy = EmptyClusterPolicy::ReseedFarthest;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (k < 2) throw std::invalid_argument("k must be >= 2, got " + std::to_string(k));
        if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
        if (!(convergence_tol >= 0.0)) throw std::invalid_argument("convergence_tol must be >= 0");
        icdkm::validate(distance);
    }
};

/// Length of the diagonal of the per-feature [min, max] box.
inline double bounding_box_diagonal(const Matrix& data) {
    if (data.rows() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t c = 0; c < data.cols(); ++c) {
        double lo = data(0, c);
        double hi = data(0, c);
        for (std::size_t r = 1; r < data.rows(); ++r) {
            lo = std::min(lo, data(r, c));
            hi = std::max(hi, data(r, c));
        }
        sum += (hi - lo) * (hi - lo);
    }
    return std::sqrt(sum);
}

/// Default configuration: tolerance 1e-9 x bounding-box diagonal, 300 iterations.
inline KMeansConfig default_config(const Matrix& data, std::size_t k, std::uint64_t seed = 0) {
    KMeansConfig config;
    config.k = k;
    config.convergence_tol = 1e-9 * bounding_box_diagonal(data);
    config.rng_seed = seed;
    return config;
}

struct Assignment {
    std::vector<std::size_t> labels;
    std::vector<std::size_t> counts;

    std::size_t k() const noexcept { return counts.size(); }

    static Assignment from_labels(std::vector<std::size_t> labels, std::size_t k) {
        Assignment out;
        out.counts.assign(k, 0);
        for (auto l : labels) {
            if (l >= k) {
                throw std::invalid_argument("cluster label " + std::to_string(l) +
                                            " out of range for k=" + std::to_string(k));
            }
            ++out.counts[l];
        }
        out.labels = std::move(labels);
        return out;
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct ObjectiveSample {
    double wcd = 0.0;
    double icd = 0.0;
    double relative_cost = 0.0;

    friend bool operator==(const ObjectiveSample&, const ObjectiveSample&) = default;
};

struct ClusteringResult {
    Centroids initial_centroids;
    Centroids centroids;
    Assignment assignment;
    std::size_t iterations_used = 0;
    double wcd = 0.0;
    double icd = 0.0;
    double relative_cost = 0.0;
    bool converged = false;
    /// Displacement of the last centroid update.
    double final_displacement = 0.0;
    /// One entry per iteration, evaluated on that iteration's assignment and
    /// the centroids it was assigned against.
    std::vector<ObjectiveSample> objective_trace;

    friend bool operator==(const ClusteringResult&, const ClusteringResult&) = default;
};

namespace detail {

inline void check_data(const Matrix& data) {
    if (data.rows() == 0 || data.cols() == 0) throw std::invalid_argument("dataset is empty");
    if (!data.all_finite()) throw std::invalid_argument("dataset contains non-finite values");
}

inline void check_assignment(const Matrix& data, const Assignment& assignment) {
    if (assignment.labels.size() != data.rows()) {
        throw std::invalid_argument("assignment has " + std::to_string(assignment.labels.size()) +
                                    " labels for " + std::to_string(data.rows()) + " points");
    }
    for (auto l : assignment.labels) {
        if (l >= assignment.k()) throw std::invalid_argument("assignment label out of range");
    }
}

inline void check_centroids(const Matrix& data, const Centroids& centroids) {
    if (centroids.rows() == 0 || centroids.cols() != data.cols()) {
        throw std::invalid_argument("centroid matrix shape " + std::to_string(centroids.rows()) +
                                    "x" + std::to_string(centroids.cols()) +
                                    " does not match data dimension " +
                                    std::to_string(data.cols()));
    }
}

/// Per-cluster count, mean and scatter (sum of squared distances to the mean).
struct GroupStats {
    std::vector<std::size_t> counts;
    Matrix means;
    std::vector<double> scatter;
};

inline GroupStats group_stats(const Matrix& data, const Assignment& assignment) {
    const std::size_t k = assignment.k();
    const std::size_t d = data.cols();
    GroupStats stats{assignment.counts, Matrix(k, d), std::vector<double>(k, 0.0)};
    for (std::size_t i = 0; i < data.rows(); ++i) {
        auto mean = stats.means.row(assignment.labels[i]);
        auto x = data.row(i);
        for (std::size_t c = 0; c < d; ++c) mean[c] += x[c];
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (stats.counts[j] == 0) continue;
        for (auto& v : stats.means.row(j)) v /= static_cast<double>(stats.counts[j]);
    }
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto j = assignment.labels[i];
        stats.scatter[j] += squared_euclidean_unchecked(data.row(i), stats.means.row(j));
    }
    return stats;
}

}  // namespace detail

/// Row indices of the initial centroids: the first k entries of a seeded
/// random permutation of [0, n).
inline std::vector<std::size_t> initial_indices(std::size_t n, std::size_t k, std::uint64_t rng_seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2, got " + std::to_string(k));
    if (k > n) {
        throw std::invalid_argument("k=" + std::to_string(k) + " exceeds the number of points (" +
                                    std::to_string(n) + ")");
    }
    Rng rng(rng_seed);
    auto perm = random_permutation(rng, n);
    perm.resize(k);
    return perm;
}

inline Centroids initialize_centroids(const Matrix& data, std::size_t k, std::uint64_t rng_seed) {
    detail::check_data(data);
    const auto rows = initial_indices(data.rows(), k, rng_seed);
    Centroids centroids(k, data.cols());
    for (std::size_t j = 0; j < k; ++j) {
        std::ranges::copy(data.row(rows[j]), centroids.row(j).begin());
    }
    return centroids;
}

/// Within-cluster distance: sum over points of squared distance to their centroid.
inline double wcd(const Matrix& data, const Centroids& centroids, const Assignment& assignment) {
    detail::check_assignment(data, assignment);
    detail::check_centroids(data, centroids);
    if (centroids.rows() != assignment.k()) {
        throw std::invalid_argument("assignment k does not match centroid count");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        total += detail::squared_euclidean_unchecked(data.row(i),
                                                     centroids.row(assignment.labels[i]));
    }
    return total;
}

/// Inter-cluster distance over ordered pairs in different clusters.
///
/// For clusters a != b the cross sum is n_b Q_a + n_a Q_b + n_a n_b |m_a - m_b|^2,
/// so D = 2 sum_a (n - n_a) Q_a + 2 sum_{a<b} n_a n_b |m_a - m_b|^2.
inline double icd(const Matrix& data, const Assignment& assignment) {
    detail::check_assignment(data, assignment);
    const auto stats = detail::group_stats(data, assignment);
    const auto n = static_cast<double>(data.rows());
    const std::size_t k = assignment.k();
    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        const auto na = static_cast<double>(stats.counts[a]);
        total += 2.0 * (n - na) * stats.scatter[a];
        for (std::size_t b = a + 1; b < k; ++b) {
            const auto nb = static_cast<double>(stats.counts[b]);
            if (na == 0.0 || nb == 0.0) continue;
            total += 2.0 * na * nb *
                     detail::squared_euclidean_unchecked(stats.means.row(a), stats.means.row(b));
        }
    }
    return total;
}

/// WCD / ICD; +inf when ICD is 0 and WCD is not, 0 when both are 0.
inline double relative_cost(double wcd_value, double icd_value) noexcept {
    if (icd_value > 0.0) return wcd_value / icd_value;
    return wcd_value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

/// Nearest centroid under `distance`; ties go to the lowest cluster index.
inline Assignment assign_traditional(const Matrix& data, const Centroids& centroids,
                                     const DistanceKind& distance = Euclidean{}) {
    detail::check_centroids(data, centroids);
    validate(distance);
    const bool euclidean = std::holds_alternative<Euclidean>(distance);
    const std::size_t k = centroids.rows();
    std::vector<std::size_t> labels(data.rows(), 0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            const double dist =
                euclidean ? detail::squared_euclidean_unchecked(data.row(i), centroids.row(j))
                          : icdkm::distance(data.row(i), centroids.row(j), distance);
            if (dist < best) {
                best = dist;
                labels[i] = j;
            }
        }
    }
    return Assignment::from_labels(std::move(labels), k);
}

/// Score of placing a point in cluster j given its squared distances to every
/// centroid: d_j / sum_{l != j} d_l. A zero numerator scores 0 (this also
/// covers a point coincident with all centroids, which then lands in cluster 0).
inline double icd_score(std::span<const double> sq_dists, std::size_t j) {
    if (sq_dists[j] == 0.0) return 0.0;
    double rivals = 0.0;
    for (std::size_t l = 0; l < sq_dists.size(); ++l) {
        if (l != j) rivals += sq_dists[l];
    }
    return rivals > 0.0 ? sq_dists[j] / rivals : std::numeric_limits<double>::infinity();
}

/// Centroid-ratio assignment: argmin_j icd_score, ties to the lowest index.
inline Assignment assign_icd(const Matrix& data, const Centroids& centroids) {
    detail::check_centroids(data, centroids);
    const std::size_t k = centroids.rows();
    if (k < 2) throw std::invalid_argument("assign_icd requires k >= 2");
    std::vector<std::size_t> labels(data.rows(), 0);
    std::vector<double> sq(k);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            sq[j] = detail::squared_euclidean_unchecked(data.row(i), centroids.row(j));
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            const double score = icd_score(sq, j);
            if (score < best) {
                best = score;
                labels[i] = j;
            }
        }
    }
    return Assignment::from_labels(std::move(labels), k);
}

/// One greedy pass that lowers the global relative cost WCD / ICD.
///
/// Points are visited in index order. Each is moved to the cluster giving the
/// lowest relative cost, if that is strictly lower than the current value.
/// WCD is measured against `centroids`; ICD is the exact pairwise sum, kept up
/// to date through count/mean/scatter updates so a candidate move costs O(d).
/// A move never empties its source cluster.
inline Assignment refine_relative_cost(const Matrix& data, const Centroids& centroids,
                                       Assignment assignment) {
    detail::check_assignment(data, assignment);
    detail::check_centroids(data, centroids);
    const std::size_t k = assignment.k();
    const std::size_t d = data.cols();
    if (centroids.rows() != k) throw std::invalid_argument("assignment k does not match centroids");

    auto stats = detail::group_stats(data, assignment);
    const auto n = static_cast<double>(data.rows());

    // Total pairwise sum over all ordered pairs: 2 n Q_total.
    std::vector<double> global_mean(d, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t c = 0; c < d; ++c) global_mean[c] += data(i, c);
    }
    for (auto& v : global_mean) v /= n;
    double global_scatter = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        global_scatter += detail::squared_euclidean_unchecked(data.row(i), global_mean);
    }
    const double all_pairs = 2.0 * n * global_scatter;

    auto within = [&](std::size_t j) {
        return 2.0 * static_cast<double>(stats.counts[j]) * stats.scatter[j];
    };
    double within_total = 0.0;
    for (std::size_t j = 0; j < k; ++j) within_total += within(j);

    double wcd_value = 0.0;
    std::vector<double> sq(k);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        wcd_value += detail::squared_euclidean_unchecked(data.row(i),
                                                         centroids.row(assignment.labels[i]));
    }

    for (std::size_t i = 0; i < data.rows(); ++i) {
        const std::size_t from = assignment.labels[i];
        const auto na = stats.counts[from];
        if (na <= 1) continue;
        const auto x = data.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            sq[j] = detail::squared_euclidean_unchecked(x, centroids.row(j));
        }

        const double current = relative_cost(wcd_value, all_pairs - within_total);
        const double na_d = static_cast<double>(na);
        const double from_scatter =
            std::max(0.0, stats.scatter[from] -
                              na_d / (na_d - 1.0) *
                                  detail::squared_euclidean_unchecked(x, stats.means.row(from)));
        const double within_without =
            within_total - within(from) + 2.0 * (na_d - 1.0) * from_scatter;

        double best = current;
        std::size_t best_to = from;
        double best_to_scatter = 0.0;
        for (std::size_t to = 0; to < k; ++to) {
            if (to == from) continue;
            const auto nb_d = static_cast<double>(stats.counts[to]);
            const double to_scatter =
                nb_d == 0.0 ? 0.0
                            : stats.scatter[to] +
                                  nb_d / (nb_d + 1.0) *
                                      detail::squared_euclidean_unchecked(x, stats.means.row(to));
            const double within_new =
                within_without - within(to) + 2.0 * (nb_d + 1.0) * to_scatter;
            const double candidate =
                relative_cost(wcd_value - sq[from] + sq[to], all_pairs - within_new);
            if (candidate < best) {
                best = candidate;
                best_to = to;
                best_to_scatter = to_scatter;
            }
        }
        if (best_to == from) continue;

        const std::size_t to = best_to;
        within_total -= within(from) + within(to);
        auto mean_from = stats.means.row(from);
        for (std::size_t c = 0; c < d; ++c) mean_from[c] += (mean_from[c] - x[c]) / (na_d - 1.0);
        stats.scatter[from] = from_scatter;
        --stats.counts[from];
        --assignment.counts[from];

        const auto nb_d = static_cast<double>(stats.counts[to]);
        auto mean_to = stats.means.row(to);
        for (std::size_t c = 0; c < d; ++c) mean_to[c] += (x[c] - mean_to[c]) / (nb_d + 1.0);
        stats.scatter[to] = best_to_scatter;
        ++stats.counts[to];
        ++assignment.counts[to];

        within_total += within(from) + within(to);
        wcd_value += sq[to] - sq[from];
        assignment.labels[i] = to;
    }
    return assignment;
}

/// Cluster means of `assignment`. An empty cluster is reseeded at the point
/// farthest (squared distance) from the centroid it was assigned to in
/// `previous`; several empty clusters take successively farther distinct points.
inline Centroids update_centroids(const Matrix& data, const Assignment& assignment,
                                  const Centroids& previous) {
    detail::check_assignment(data, assignment);
    detail::check_centroids(data, previous);
    const std::size_t k = assignment.k();
    if (previous.rows() != k) throw std::invalid_argument("assignment k does not match centroids");

    const auto stats = detail::group_stats(data, assignment);
    Centroids next = stats.means;

    std::vector<bool> taken(data.rows(), false);
    for (std::size_t j = 0; j < k; ++j) {
        if (stats.counts[j] != 0) continue;
        double far = -1.0;
        std::size_t donor = 0;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            if (taken[i]) continue;
            const double dist = detail::squared_euclidean_unchecked(
                data.row(i), previous.row(assignment.labels[i]));
            if (dist > far) {
                far = dist;
                donor = i;
            }
        }
        taken[donor] = true;
        std::ranges::copy(data.row(donor), next.row(j).begin());
    }
    return next;
}

inline double max_displacement(const Centroids& a, const Centroids& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j) {
        worst = std::max(worst, std::sqrt(detail::squared_euclidean_unchecked(a.row(j), b.row(j))));
    }
    return worst;
}

/// Alternates assignment and mean update from the given initial centroids.
///
/// Traditional: nearest-centroid assignment under `config.distance` (Lloyd).
/// ProposedICD: centroid-ratio assignment, then one relative-cost refinement
/// pass, then the mean update.
///
/// Stops when the largest centroid displacement drops below
/// `config.convergence_tol` (or is exactly zero) or after `max_iterations`.
inline ClusteringResult run(const Matrix& data, const KMeansConfig& config, Variant variant,
                            const Centroids& initial) {
    config.validate();
    detail::check_data(data);
    if (initial.rows() != config.k || initial.cols() != data.cols()) {
        throw std::invalid_argument("initial centroids must be k x d");
    }
    if (config.k > data.rows()) throw std::invalid_argument("k exceeds the number of points");
    if (!initial.all_finite()) throw std::invalid_argument("initial centroids are not finite");

    ClusteringResult result;
    result.initial_centroids = initial;
    Centroids current = initial;
    Assignment assignment;

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        if (variant == Variant::Traditional) {
            assignment = assign_traditional(data, current, config.distance);
        } else {
            assignment = refine_relative_cost(data, current, assign_icd(data, current));
        }

        ObjectiveSample sample;
        sample.wcd = wcd(data, current, assignment);
        sample.icd = icd(data, assignment);
        sample.relative_cost = relative_cost(sample.wcd, sample.icd);
        result.objective_trace.push_back(sample);

        Centroids next = update_centroids(data, assignment, current);
        const double shift = max_displacement(current, next);
        current = std::move(next);
        result.iterations_used = iter + 1;
        result.final_displacement = shift;
        if (shift < config.convergence_tol || shift == 0.0) {
            result.converged = true;
            break;
        }
    }

    result.centroids = std::move(current);
    result.wcd = wcd(data, result.centroids, assignment);
    result.icd = icd(data, assignment);
    result.relative_cost = relative_cost(result.wcd, result.icd);
    result.assignment = std::move(assignment);
    return result;
}

}  // namespace icdkm

#endif  // ICDKM_ENGINE_HPP
