#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "icdkm/geometry.hpp"
#include "oracles.hpp"

using namespace icdkm;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, std::size_t d) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> p(d);
    for (auto& v : p) v = u(rng);
    return p;
}

}  // namespace

TEST(Distance, WorkedExamples) {
    const std::vector<double> origin{0, 0}, p34{3, 4}, a{1, 2}, b{4, 6};
    EXPECT_EQ(distance(origin, origin, Euclidean{}), 0.0);
    EXPECT_DOUBLE_EQ(distance(origin, p34, Euclidean{}), 5.0);
    EXPECT_DOUBLE_EQ(distance(a, b, Manhattan{}), 7.0);
    EXPECT_DOUBLE_EQ(distance(a, b, Chebyshev{}), 4.0);
    EXPECT_NEAR(distance(a, b, Minkowski{2.0}), 5.0, 1e-12);
}

TEST(Distance, EuclideanIsDefault) {
    const std::vector<double> a{0, 0}, b{3, 4};
    EXPECT_DOUBLE_EQ(distance(a, b), 5.0);
}

TEST(SquaredEuclidean, WorkedExamples) {
    const std::vector<double> origin{0, 0}, p34{3, 4}, u{1, 1, 1}, v{2, 3, 4};
    EXPECT_DOUBLE_EQ(squared_euclidean(origin, p34), 25.0);
    EXPECT_EQ(squared_euclidean(p34, p34), 0.0);
    EXPECT_DOUBLE_EQ(squared_euclidean(u, v), 14.0);
}

TEST(Distance, Errors) {
    const std::vector<double> a{1, 2}, b{1, 2, 3};
    EXPECT_THROW(distance(a, b), std::invalid_argument);
    EXPECT_THROW(squared_euclidean(a, b), std::invalid_argument);
    EXPECT_THROW(distance(a, a, Minkowski{0.5}), std::invalid_argument);
    EXPECT_THROW(distance(a, a, Minkowski{0.0}), std::invalid_argument);
    EXPECT_NO_THROW(distance(a, a, Minkowski{1.0}));
}

TEST(DistanceProperties, SymmetryTriangleAndConsistency) {
    std::mt19937_64 rng(1234);
    const std::vector<DistanceKind> kinds{Euclidean{}, Manhattan{}, Chebyshev{}, Minkowski{1.0},
                                          Minkowski{1.5}, Minkowski{3.0}};
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t d = 1 + trial % 6;
        const auto a = random_point(rng, d), b = random_point(rng, d), c = random_point(rng, d);
        for (const auto& kind : kinds) {
            const double ab = distance(a, b, kind);
            EXPECT_EQ(ab, distance(b, a, kind));
            EXPECT_GE(ab, 0.0);
            const double bound = distance(a, c, kind) + distance(c, b, kind);
            EXPECT_LE(ab, bound * (1.0 + 1e-12));
        }
        EXPECT_TRUE(oracle::close_rel(distance(a, b, Minkowski{1.0}), distance(a, b, Manhattan{}), 1e-12));
        EXPECT_TRUE(oracle::close_rel(distance(a, b, Minkowski{2.0}), distance(a, b, Euclidean{}), 1e-12));
        for (double p : {1.0, 1.5, 2.0, 4.0, 10.0}) {
            EXPECT_LE(distance(a, b, Chebyshev{}), distance(a, b, Minkowski{p}) * (1.0 + 1e-12));
        }
        EXPECT_TRUE(oracle::close_rel(squared_euclidean(a, b), std::pow(distance(a, b), 2), 1e-12));
    }
}

TEST(DistanceProperties, ZeroIffEqual) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_point(rng, 4);
        auto b = a;
        for (const DistanceKind kind : {DistanceKind{Euclidean{}}, DistanceKind{Manhattan{}},
                                        DistanceKind{Chebyshev{}}, DistanceKind{Minkowski{3.0}}}) {
            EXPECT_EQ(distance(a, b, kind), 0.0);
        }
        b[trial % 4] += 1e-3;
        EXPECT_GT(distance(a, b, Chebyshev{}), 0.0);
    }
}
