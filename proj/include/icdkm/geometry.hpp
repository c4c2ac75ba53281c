#ifndef ICDKM_GEOMETRY_HPP
#define ICDKM_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

namespace icdkm {

/// A point in feature space; a view over one matrix row.
using Point = std::span<const double>;

struct Euclidean {};
struct Manhattan {};
struct Chebyshev {};
struct Minkowski {
    double p = 2.0;
};

/// Assignment distance. Objectives (WCD, ICD, CH, inertia) always use squared
/// Euclidean regardless of this choice.
using DistanceKind = std::variant<Euclidean, Manhattan, Chebyshev, Minkowski>;

inline void validate(const DistanceKind& kind) {
    if (const auto* m = std::get_if<Minkowski>(&kind)) {
        if (!(m->p >= 1.0) || !std::isfinite(m->p)) {
            throw std::invalid_argument("Minkowski distance requires finite p >= 1, got " +
                                        std::to_string(m->p));
        }
    }
}

inline std::string to_string(const DistanceKind& kind) {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Euclidean>) return "euclidean";
            else if constexpr (std::is_same_v<K, Manhattan>) return "manhattan";
            else if constexpr (std::is_same_v<K, Chebyshev>) return "chebyshev";
            else return "minkowski:" + std::to_string(k.p);
        },
        kind);
}

namespace detail {

inline void check_same_dimension(Point a, Point b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
}

// No dimension check; callers guarantee equal sizes.
inline double squared_euclidean_unchecked(Point a, Point b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double delta = a[i] - b[i];
        sum += delta * delta;
    }
    return sum;
}

}  // namespace detail

inline double squared_euclidean(Point a, Point b) {
    detail::check_same_dimension(a, b);
    return detail::squared_euclidean_unchecked(a, b);
}

inline double distance(Point a, Point b, const DistanceKind& kind = Euclidean{}) {
    detail::check_same_dimension(a, b);
    validate(kind);
    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Euclidean>) {
                return std::sqrt(detail::squared_euclidean_unchecked(a, b));
            } else if constexpr (std::is_same_v<K, Manhattan>) {
                double sum = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
                return sum;
            } else if constexpr (std::is_same_v<K, Chebyshev>) {
                double best = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
                return best;
            } else {
                double sum = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) sum += std::pow(std::abs(a[i] - b[i]), k.p);
                return std::pow(sum, 1.0 / k.p);
            }
        },
        kind);
}

}  // namespace icdkm

#endif  // ICDKM_GEOMETRY_HPP
