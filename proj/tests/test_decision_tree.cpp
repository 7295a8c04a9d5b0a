#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "netml/classifiers/decision_tree.hpp"
#include "netml/model_io.hpp"

using namespace netml;

namespace {

// Independent exhaustive split enumeration with the library's tie rule
// (larger decrease, then lower feature, then lower threshold).
struct OracleSplit {
    bool valid = false;
    double decrease = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

OracleSplit best_split_oracle(const Matrix& X, const std::vector<int>& y, int n_classes) {
    auto gini_of = [n_classes](const std::vector<std::size_t>& rows, const std::vector<int>& labels) {
        std::vector<double> counts(static_cast<std::size_t>(n_classes), 0.0);
        for (std::size_t r : rows) counts[static_cast<std::size_t>(labels[r])] += 1.0;
        double total = static_cast<double>(rows.size());
        double sq = 0.0;
        for (double c : counts) sq += (c / total) * (c / total);
        return 1.0 - sq;
    };
    std::vector<std::size_t> all(static_cast<std::size_t>(X.rows()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const double parent = gini_of(all, y);
    const double total = static_cast<double>(X.rows());

    OracleSplit best;
    for (int f = 0; f < static_cast<int>(X.cols()); ++f) {
        std::vector<double> values;
        for (Eigen::Index i = 0; i < X.rows(); ++i) values.push_back(X(i, f));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            const double threshold = values[v] + 0.5 * (values[v + 1] - values[v]);
            std::vector<std::size_t> left, right;
            for (std::size_t r = 0; r < all.size(); ++r) {
                if (X(static_cast<Eigen::Index>(r), f) <= threshold) left.push_back(r);
                else right.push_back(r);
            }
            const double child = (static_cast<double>(left.size()) * gini_of(left, y) +
                                  static_cast<double>(right.size()) * gini_of(right, y)) /
                                 total;
            const double decrease = parent - child;
            if (decrease <= 1e-12) continue;
            if (!best.valid || decrease > best.decrease + 1e-15) {
                best = {true, decrease, f, threshold};
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("pure data yields a single leaf") {
    Matrix X(4, 2);
    X << 1, 2, 3, 4, 5, 6, 7, 8;
    const std::vector<int> y = {1, 1, 1, 1};
    const auto tree = fit_decision_tree(X, y, 2);
    REQUIRE(tree.nodes.size() == 1);
    REQUIRE(tree.nodes[0].feature == -1);
    const auto batch = tree_predict(tree, X);
    for (int label : batch.labels) REQUIRE(label == 1);
}

TEST_CASE("gini of an even two-class split is one half") {
    REQUIRE(gini_impurity({0.5, 0.5}) == 0.5);
    REQUIRE(gini_impurity({2.0, 2.0}) == 0.5);
    REQUIRE(gini_impurity({1.0, 0.0}) == 0.0);
}

TEST_CASE("gini stays within [0, 1 - 1/c]") {
    Rng rng(Seed{83});
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t c = 2 + rng.uniform_below(6);
        std::vector<double> weights(c);
        for (auto& w : weights) w = rng.uniform() * 10.0;
        const double g = gini_impurity(weights);
        REQUIRE(g >= 0.0);
        REQUIRE(g <= 1.0 - 1.0 / static_cast<double>(c) + 1e-12);
    }
}

TEST_CASE("entropy criterion: uniform two-class split scores one bit") {
    REQUIRE_THAT(entropy_impurity({1.0, 1.0}), Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE(entropy_impurity({3.0, 0.0}) == 0.0);
}

TEST_CASE("eight-point set: root split matches the exhaustive oracle") {
    Matrix X(8, 2);
    X << 0.1, 3.0, 0.4, 2.2, 0.9, 2.8, 1.3, 2.4, 2.0, 0.4, 2.6, 1.0, 3.1, 0.2, 3.6, 0.8;
    const std::vector<int> y = {0, 0, 0, 0, 1, 1, 1, 1};
    const auto tree = fit_decision_tree(X, y, 2);
    const auto oracle = best_split_oracle(X, y, 2);

    REQUIRE(oracle.valid);
    REQUIRE(tree.nodes[0].feature == oracle.feature);
    REQUIRE_THAT(tree.nodes[0].threshold, Catch::Matchers::WithinAbs(oracle.threshold, 1e-12));
    REQUIRE(tree_predict(tree, X).labels == y);  // grows until pure
}

TEST_CASE("root split matches the oracle on random data") {
    Rng rng(Seed{89});
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 12 + static_cast<Eigen::Index>(rng.uniform_below(20));
        Matrix X(n, 3);
        std::vector<int> y(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(3));
            for (Eigen::Index c = 0; c < 3; ++c)
                X(i, c) = rng.normal() + 0.6 * y[static_cast<std::size_t>(i)] * (c == 1);
        }
        const auto tree = fit_decision_tree(X, y, 3);
        const auto oracle = best_split_oracle(X, y, 3);
        if (!oracle.valid) {
            REQUIRE(tree.nodes[0].feature == -1);
            continue;
        }
        REQUIRE(tree.nodes[0].feature == oracle.feature);
        REQUIRE_THAT(tree.nodes[0].threshold,
                     Catch::Matchers::WithinAbs(oracle.threshold, 1e-12));
    }
}

TEST_CASE("every split strictly decreases weighted impurity") {
    Rng rng(Seed{97});
    Matrix X(60, 2);
    std::vector<int> y(60);
    for (Eigen::Index i = 0; i < 60; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(2));
        X(i, 0) = rng.normal() + 0.8 * y[static_cast<std::size_t>(i)];
        X(i, 1) = rng.normal();
    }
    const auto tree = fit_decision_tree(X, y, 2);

    // re-derive each node's row set and check the impurity drop
    struct Frame {
        int node;
        std::vector<std::size_t> rows;
    };
    std::vector<Frame> stack;
    std::vector<std::size_t> all(60);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    stack.push_back({0, all});
    auto gini_of = [&y](const std::vector<std::size_t>& rows) {
        std::vector<double> counts(2, 0.0);
        for (std::size_t r : rows) counts[static_cast<std::size_t>(y[r])] += 1.0;
        return gini_impurity(counts);
    };
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        const auto& node = tree.nodes[static_cast<std::size_t>(frame.node)];
        if (node.feature < 0) continue;
        std::vector<std::size_t> left, right;
        for (std::size_t r : frame.rows) {
            if (X(static_cast<Eigen::Index>(r), node.feature) <= node.threshold)
                left.push_back(r);
            else
                right.push_back(r);
        }
        REQUIRE_FALSE(left.empty());
        REQUIRE_FALSE(right.empty());
        const double parent = gini_of(frame.rows);
        const double child =
            (static_cast<double>(left.size()) * gini_of(left) +
             static_cast<double>(right.size()) * gini_of(right)) /
            static_cast<double>(frame.rows.size());
        REQUIRE(parent - child > 1e-12);
        stack.push_back({node.left, std::move(left)});
        stack.push_back({node.right, std::move(right)});
    }
}

TEST_CASE("max_depth=1 yields a stump") {
    Matrix X(6, 1);
    X << 1, 2, 3, 4, 5, 6;
    const std::vector<int> y = {0, 0, 1, 1, 0, 1};
    const auto stump = fit_decision_tree(X, y, 2, {.max_depth = 1});
    REQUIRE(stump.nodes.size() <= 3);
    for (const auto& node : stump.nodes)
        if (node.feature >= 0) {
            REQUIRE(stump.nodes[static_cast<std::size_t>(node.left)].feature == -1);
            REQUIRE(stump.nodes[static_cast<std::size_t>(node.right)].feature == -1);
        }
}

TEST_CASE("entropy criterion grows a working tree") {
    Matrix X(8, 2);
    X << 0.1, 3.0, 0.4, 2.2, 0.9, 2.8, 1.3, 2.4, 2.0, 0.4, 2.6, 1.0, 3.1, 0.2, 3.6, 0.8;
    const std::vector<int> y = {0, 0, 0, 0, 1, 1, 1, 1};
    const auto tree = fit_decision_tree(X, y, 2, {.criterion = SplitCriterion::Entropy});
    REQUIRE(tree_predict(tree, X).labels == y);
}

TEST_CASE("sample weights steer the split") {
    Matrix X(4, 1);
    X << 1, 2, 3, 4;
    const std::vector<int> y = {0, 1, 0, 1};
    // heavy weight on the outer pair makes threshold 1.5 the best stump
    const std::vector<double> w = {10.0, 1.0, 1.0, 10.0};
    const auto stump = fit_decision_tree(X, y, 2, {.max_depth = 1}, w);
    REQUIRE(stump.nodes[0].feature == 0);
    REQUIRE_THAT(stump.nodes[0].threshold, Catch::Matchers::WithinAbs(1.5, 1e-12));
}

TEST_CASE("trees are deterministic") {
    Rng rng(Seed{101});
    Matrix X(40, 3);
    std::vector<int> y(40);
    for (Eigen::Index i = 0; i < 40; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(2));
        for (Eigen::Index c = 0; c < 3; ++c) X(i, c) = rng.normal();
    }
    TrainedModel a{fit_decision_tree(X, y, 2)};
    TrainedModel b{fit_decision_tree(X, y, 2)};
    REQUIRE(model_to_json(a).dump() == model_to_json(b).dump());
}
