#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "netml/classifiers/decision_tree.hpp"

namespace netml {

struct ForestParams {
    int n_trees = 100;
    TreeParams tree;
    bool bootstrap = true;
    int max_features = 0;  // 0: floor(sqrt(d)) candidates per split; <0: all features
};

// Bagged Gini trees with random feature candidates per split; prediction is
// the majority vote of the trees.
struct RandomForestModel {
    int n_features = 0;
    int n_classes = 0;
    std::vector<DecisionTreeModel> trees;
    std::vector<std::uint64_t> tree_seeds;
};

inline RandomForestModel fit_random_forest(const Matrix& X, const std::vector<int>& y,
                                           int n_classes, const ForestParams& params = {},
                                           Seed seed = {}, const FitContext* ctx = nullptr) {
    if (X.rows() == 0) throw EmptyTrainingSet("random forest needs at least one row");
    if (params.n_trees < 1) throw ConfigError("forest needs at least one tree");

    RandomForestModel model;
    model.n_features = static_cast<int>(X.cols());
    model.n_classes = n_classes;
    model.trees.reserve(static_cast<std::size_t>(params.n_trees));
    model.tree_seeds.reserve(static_cast<std::size_t>(params.n_trees));

    int max_features = params.max_features;
    if (max_features == 0)
        max_features = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(X.cols()))));

    const std::size_t n = static_cast<std::size_t>(X.rows());
    const std::vector<double> no_weights;
    Rng root(seed);
    for (int t = 0; t < params.n_trees; ++t) {
        check_deadline(ctx);
        Rng tree_rng = root.fork(static_cast<std::uint64_t>(t));
        model.tree_seeds.push_back(tree_rng.origin());

        std::vector<std::size_t> rows;
        rows.reserve(n);
        if (params.bootstrap) {
            for (std::size_t i = 0; i < n; ++i)
                rows.push_back(static_cast<std::size_t>(tree_rng.uniform_below(n)));
        } else {
            rows.resize(n);
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }

        detail::TreeBuilder builder(X, y, n_classes, params.tree, no_weights,
                                    max_features >= static_cast<int>(X.cols()) ? -1 : max_features,
                                    &tree_rng, ctx);
        model.trees.push_back(builder.build(std::move(rows)));
    }
    return model;
}

inline PredictionBatch forest_predict(const RandomForestModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    Matrix votes = Matrix::Zero(X.rows(), m.n_classes);
    for (const auto& tree : m.trees) {
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const int leaf = tree.leaf_for(X.row(i));
            const auto& dist = tree.nodes[static_cast<std::size_t>(leaf)].distribution;
            int best = 0;
            for (int c = 1; c < m.n_classes; ++c)
                if (dist[static_cast<std::size_t>(c)] > dist[static_cast<std::size_t>(best)])
                    best = c;
            votes(i, best) += 1.0;
        }
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(votes);
    votes /= static_cast<double>(m.trees.size());
    out.scores = std::move(votes);
    return out;
}

}  // namespace netml
