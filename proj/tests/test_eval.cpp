#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "icdkm/eval.hpp"
#include "oracles.hpp"

using namespace icdkm;

namespace {

std::size_t matched(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& pred,
                    const Alignment& map) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += map[pred[i]] == truth[i];
    return hits;
}

ConfusionMatrix make_cm(const std::vector<std::vector<std::size_t>>& rows) {
    ConfusionMatrix cm(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows.size(); ++c) cm.at(r, c) = rows[r][c];
    }
    return cm;
}

}  // namespace

TEST(Hungarian, SmallCostMatrix) {
    const std::vector<std::vector<double>> cost{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
    const auto assignment = hungarian_min_cost(cost);
    double total = 0.0;
    for (std::size_t r = 0; r < 3; ++r) total += cost[r][assignment[r]];
    EXPECT_EQ(total, 5.0);
}

TEST(AlignLabels, IdentityAndCyclicShift) {
    const std::vector<std::size_t> truth{0, 0, 1, 1, 2, 2, 2};
    EXPECT_EQ(align_labels(truth, truth, 3), (Alignment{0, 1, 2}));
    std::vector<std::size_t> shifted(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) shifted[i] = (truth[i] + 1) % 3;
    // Cluster c holds class c-1.
    EXPECT_EQ(align_labels(truth, shifted, 3), (Alignment{2, 0, 1}));
}

TEST(AlignLabels, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 2 + trial % 4;
        const std::size_t n = 40;
        const auto truth = oracle::random_labels(rng, n, k);
        auto pred = truth;
        for (auto& p : pred) {
            if (rng() % 3 == 0) p = rng() % k;
        }
        const auto map = align_labels(truth, pred, k);
        EXPECT_EQ(matched(truth, pred, map), oracle::best_overlap(truth, pred, k));
    }
}

TEST(AlignLabels, NoPermutationBeatsIt) {
    std::mt19937_64 rng(72);
    const auto truth = oracle::random_labels(rng, 60, 4);
    const auto pred = oracle::random_labels(rng, 60, 4);
    const auto best = matched(truth, pred, align_labels(truth, pred, 4));
    Alignment perm{0, 1, 2, 3};
    for (int s = 0; s < 50; ++s) {
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_GE(best, matched(truth, pred, perm));
    }
}

TEST(AlignLabels, OutOfRange) {
    const std::vector<std::size_t> truth{0, 1, 3}, pred{0, 1, 2};
    EXPECT_THROW(align_labels(truth, pred, 3), std::invalid_argument);
}

TEST(ConfusionMatrix, HandCounts) {
    const std::vector<std::size_t> truth{0, 0, 1, 1}, pred{0, 1, 1, 1};
    const auto cm = confusion_matrix(truth, pred, Alignment{0, 1});
    EXPECT_EQ(cm, make_cm({{1, 1}, {0, 2}}));
}

TEST(ConfusionMatrix, PerfectAndCollapse) {
    const std::vector<std::size_t> truth{0, 1, 1, 2, 2, 2};
    EXPECT_EQ(confusion_matrix(truth, truth, Alignment{0, 1, 2}), make_cm({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}));
    const std::vector<std::size_t> zeros(6, 0);
    const auto cm = confusion_matrix(truth, zeros, Alignment{0, 1, 2});
    EXPECT_EQ(cm, make_cm({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}}));
    EXPECT_EQ(cm.col_sum(1) + cm.col_sum(2), 0u);
}

TEST(ConfusionMatrix, Errors) {
    const std::vector<std::size_t> truth{0, 1}, pred{0, 1, 1};
    EXPECT_THROW(confusion_matrix(truth, pred, Alignment{0, 1}), std::invalid_argument);
    EXPECT_THROW(confusion_matrix(truth, truth, Alignment{0, 0}), std::invalid_argument);
    const std::vector<std::size_t> wide{0, 2};
    EXPECT_THROW(confusion_matrix(truth, wide, Alignment{0, 1}), std::invalid_argument);
}

TEST(ConfusionMatrix, RowAndColumnSums) {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = 2 + trial % 4;
        const auto truth = oracle::random_labels(rng, 80, k);
        const auto pred = oracle::random_labels(rng, 80, k);
        const auto map = align_labels(truth, pred, k);
        const auto cm = confusion_matrix(truth, pred, map);
        EXPECT_EQ(cm.total(), 80u);
        for (std::size_t c = 0; c < k; ++c) {
            EXPECT_EQ(cm.row_sum(c), static_cast<std::size_t>(std::count(truth.begin(), truth.end(), c)));
            std::size_t aligned = 0;
            for (auto p : pred) aligned += map[p] == c;
            EXPECT_EQ(cm.col_sum(c), aligned);
        }
        const auto m = metrics(cm);
        EXPECT_DOUBLE_EQ(m.overall_accuracy, static_cast<double>(cm.trace()) / 80.0);
        for (const auto& pc : m.per_class) EXPECT_EQ(pc.tp + pc.fp + pc.fn + pc.tn, 80u);
    }
}

TEST(Metrics, HandEvaluation) {
    const auto m = metrics(make_cm({{1, 1}, {0, 2}}));
    EXPECT_DOUBLE_EQ(m.overall_accuracy, 0.75);
    const auto& c0 = m.per_class[0];
    EXPECT_EQ(c0.tp, 1u);
    EXPECT_EQ(c0.fp, 0u);
    EXPECT_EQ(c0.fn, 1u);
    EXPECT_EQ(c0.tn, 2u);
    EXPECT_DOUBLE_EQ(c0.ppv, 1.0);
    EXPECT_DOUBLE_EQ(c0.tpr, 0.5);
    EXPECT_DOUBLE_EQ(c0.f1, 2.0 / 3.0);
    const auto& c1 = m.per_class[1];
    EXPECT_EQ(c1.tp, 2u);
    EXPECT_EQ(c1.fp, 1u);
    EXPECT_EQ(c1.fn, 0u);
    EXPECT_EQ(c1.tn, 1u);
    EXPECT_DOUBLE_EQ(c1.ppv, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(c1.tpr, 1.0);
    EXPECT_DOUBLE_EQ(c1.f1, 0.8);
    EXPECT_DOUBLE_EQ(m.precision_macro, (1.0 + 2.0 / 3.0) / 2.0);
    EXPECT_DOUBLE_EQ(m.recall_macro, 0.75);
    EXPECT_DOUBLE_EQ(m.f1_macro, (2.0 / 3.0 + 0.8) / 2.0);
}

TEST(Metrics, DiagonalIsPerfect) {
    const auto m = metrics(make_cm({{4, 0, 0}, {0, 7, 0}, {0, 0, 1}}));
    EXPECT_EQ(m.overall_accuracy, 1.0);
    EXPECT_EQ(m.precision_macro, 1.0);
    EXPECT_EQ(m.recall_macro, 1.0);
    EXPECT_EQ(m.f1_macro, 1.0);
}

TEST(Metrics, ZeroDenominatorsAndEmpty) {
    const auto m = metrics(make_cm({{3, 0}, {2, 0}}));
    EXPECT_EQ(m.per_class[1].ppv, 0.0);
    EXPECT_EQ(m.per_class[1].tpr, 0.0);
    EXPECT_EQ(m.per_class[1].f1, 0.0);
    EXPECT_THROW(metrics(ConfusionMatrix(2)), std::invalid_argument);
    EXPECT_THROW(metrics(ConfusionMatrix{}), std::invalid_argument);
}

TEST(Metrics, BinaryF1TwoFormulas) {
    std::mt19937_64 rng(74);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cm = make_cm({{1 + rng() % 50, rng() % 50}, {rng() % 50, 1 + rng() % 50}});
        const auto m = metrics(cm);
        double mean_f1 = 0.0;
        for (const auto& pc : m.per_class) {
            const double harmonic = 2.0 * pc.ppv * pc.tpr / (pc.ppv + pc.tpr);
            EXPECT_NEAR(pc.f1, harmonic, 1e-12);
            const double tp = static_cast<double>(pc.tp);
            mean_f1 += 2.0 * tp / (2.0 * tp + static_cast<double>(pc.fp + pc.fn)) / 2.0;
        }
        EXPECT_NEAR(m.f1_macro, mean_f1, 1e-12);
    }
}

TEST(Metrics, InvariantUnderJointPermutation) {
    std::mt19937_64 rng(75);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = 3 + trial % 3;
        ConfusionMatrix cm(k);
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) cm.at(r, c) = rng() % 20 + (r == c ? 5 : 0);
        }
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        ConfusionMatrix permuted(k);
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) permuted.at(perm[r], perm[c]) = cm.at(r, c);
        }
        const auto a = metrics(cm), b = metrics(permuted);
        EXPECT_DOUBLE_EQ(a.overall_accuracy, b.overall_accuracy);
        EXPECT_NEAR(a.precision_macro, b.precision_macro, 1e-12);
        EXPECT_NEAR(a.recall_macro, b.recall_macro, 1e-12);
        EXPECT_NEAR(a.f1_macro, b.f1_macro, 1e-12);
    }
}
