#include <catch2/catch_amalgamated.hpp>

#include "netml/metrics.hpp"
#include "netml/rng.hpp"

using namespace netml;

TEST_CASE("perfect predictions give a diagonal matrix") {
    const std::vector<int> y = {0, 1, 2, 1, 0};
    const auto cm = confusion(y, y, 3);
    REQUIRE(cm.trace() == 5);
    REQUIRE(cm.total() == 5);
    const auto m = compute_metrics(cm);
    REQUIRE(m.accuracy == 1.0);
    REQUIRE(m.precision_weighted == 1.0);
    REQUIRE(m.recall_weighted == 1.0);
    REQUIRE(m.f1_weighted == 1.0);
}

TEST_CASE("binary confusion counts") {
    const auto cm = confusion({1, 1, 0, 0}, {1, 0, 0, 1}, 2);
    REQUIRE(cm.at(1, 1) == 1);  // TP
    REQUIRE(cm.at(1, 0) == 1);  // FN
    REQUIRE(cm.at(0, 0) == 1);  // TN
    REQUIRE(cm.at(0, 1) == 1);  // FP
}

TEST_CASE("labels outside [0, K) are rejected") {
    REQUIRE_THROWS_AS(confusion({0, 3}, {0, 0}, 3), LabelOutOfRange);
    REQUIRE_THROWS_AS(confusion({0, 0}, {0, -1}, 3), LabelOutOfRange);
    REQUIRE_THROWS_AS(confusion({0, 0}, {0}, 2), LengthMismatch);
}

TEST_CASE("precision from two true positives and one false positive") {
    ConfusionMatrix cm;
    cm.n_classes = 2;
    cm.counts = {3, 1, 0, 2};  // row-major: TN=3, FP=1, FN=0, TP=2
    const auto m = compute_metrics(cm);
    REQUIRE_THAT(m.per_class[1].precision, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-15));
    REQUIRE(m.per_class[1].recall == 1.0);
}

TEST_CASE("three-class hand tally matches to 1e-12") {
    const std::vector<int> y_true = {0, 0, 0, 1, 1, 1, 2, 2, 2};
    const std::vector<int> y_pred = {0, 1, 0, 1, 1, 2, 2, 2, 2};
    const auto cm = confusion(y_true, y_pred, 3);
    REQUIRE(cm.at(0, 0) == 2);
    REQUIRE(cm.at(0, 1) == 1);
    REQUIRE(cm.at(1, 1) == 2);
    REQUIRE(cm.at(1, 2) == 1);
    REQUIRE(cm.at(2, 2) == 3);

    const auto m = compute_metrics(cm);
    REQUIRE_THAT(m.accuracy, Catch::Matchers::WithinAbs(7.0 / 9.0, 1e-12));
    // class 0: P = 2/2, R = 2/3; class 1: P = 2/3, R = 2/3; class 2: P = 3/4, R = 1
    REQUIRE_THAT(m.per_class[0].precision, Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(m.per_class[0].recall, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
    REQUIRE_THAT(m.per_class[0].f1, Catch::Matchers::WithinAbs(0.8, 1e-12));
    REQUIRE_THAT(m.per_class[1].f1, Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
    REQUIRE_THAT(m.per_class[2].f1, Catch::Matchers::WithinAbs(6.0 / 7.0, 1e-12));
    REQUIRE_THAT(m.precision_weighted, Catch::Matchers::WithinAbs(29.0 / 36.0, 1e-12));
    REQUIRE_THAT(m.recall_weighted, Catch::Matchers::WithinAbs(7.0 / 9.0, 1e-12));
    REQUIRE_THAT(m.f1_weighted, Catch::Matchers::WithinAbs(244.0 / 315.0, 1e-12));
    // equal supports make macro equal weighted here
    REQUIRE_THAT(m.f1_macro, Catch::Matchers::WithinAbs(244.0 / 315.0, 1e-12));
}

TEST_CASE("accuracy is exactly trace over total") {
    Rng rng(Seed{51});
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 2 + rng.uniform_below(5);
        ConfusionMatrix cm;
        cm.n_classes = k;
        cm.counts.resize(k * k);
        for (auto& c : cm.counts) c = static_cast<std::int64_t>(rng.uniform_below(20));
        if (cm.total() == 0) cm.counts[0] = 1;
        const auto m = compute_metrics(cm);
        REQUIRE(m.accuracy ==
                static_cast<double>(cm.trace()) / static_cast<double>(cm.total()));
    }
}

TEST_CASE("F1 lies between precision and recall when both are nonzero") {
    Rng rng(Seed{53});
    for (int trial = 0; trial < 200; ++trial) {
        const double tp = 1.0 + static_cast<double>(rng.uniform_below(50));
        const double fp = static_cast<double>(rng.uniform_below(50));
        const double fn = static_cast<double>(rng.uniform_below(50));
        ConfusionMatrix cm;
        cm.n_classes = 2;
        cm.counts = {5, static_cast<std::int64_t>(fp), static_cast<std::int64_t>(fn),
                     static_cast<std::int64_t>(tp)};
        const auto m = compute_metrics(cm);
        const auto& c = m.per_class[1];
        REQUIRE(c.f1 >= std::min(c.precision, c.recall) - 1e-15);
        REQUIRE(c.f1 <= std::max(c.precision, c.recall) + 1e-15);
        if (c.precision + c.recall > 0) {
            const double harmonic = 2.0 * c.precision * c.recall / (c.precision + c.recall);
            REQUIRE_THAT(c.f1, Catch::Matchers::WithinAbs(harmonic, 1e-15));
        }
    }
}

TEST_CASE("classes with no support or predictions report flagged zeros") {
    ConfusionMatrix cm;
    cm.n_classes = 3;
    cm.counts = {4, 0, 0, 0, 3, 0, 0, 0, 0};  // class 2 never occurs nor is predicted
    const auto m = compute_metrics(cm);
    REQUIRE(m.per_class[2].precision == 0.0);
    REQUIRE(m.per_class[2].recall == 0.0);
    REQUIRE(m.per_class[2].precision_undefined);
    REQUIRE(m.per_class[2].recall_undefined);
    REQUIRE(m.accuracy == 1.0);
}

TEST_CASE("metrics are scale-free in the counts") {
    ConfusionMatrix cm;
    cm.n_classes = 2;
    cm.counts = {8, 2, 3, 7};
    ConfusionMatrix scaled = cm;
    for (auto& c : scaled.counts) c *= 7;
    const auto a = compute_metrics(cm);
    const auto b = compute_metrics(scaled);
    REQUIRE(a.accuracy == b.accuracy);
    REQUIRE(a.precision_weighted == b.precision_weighted);
    REQUIRE(a.recall_weighted == b.recall_weighted);
    REQUIRE(a.f1_weighted == b.f1_weighted);
}

TEST_CASE("binary multiclass path matches the plain binary definitions") {
    const auto cm = confusion({1, 1, 1, 0, 0, 1, 0}, {1, 1, 0, 0, 1, 1, 0}, 2);
    const double tp = 3, fn = 1, fp = 1, tn = 2;
    const auto m = compute_metrics(cm);
    REQUIRE(m.per_class[1].precision == tp / (tp + fp));
    REQUIRE(m.per_class[1].recall == tp / (tp + fn));
    REQUIRE(m.accuracy == (tp + tn) / (tp + tn + fp + fn));
}

TEST_CASE("empty matrix is rejected") {
    ConfusionMatrix cm;
    cm.n_classes = 2;
    cm.counts = {0, 0, 0, 0};
    REQUIRE_THROWS_AS(compute_metrics(cm), EmptyMatrix);
}
