#pragma once

#include <cmath>
#include <vector>

#include "netml/classifiers/decision_tree.hpp"

namespace netml {

struct AdaBoostParams {
    int n_stages = 50;
};

// Multiclass SAMME boosting over depth-1 trees. Boosting stops early when a
// stage classifies the weighted sample perfectly or does no better than
// chance.
struct AdaBoostModel {
    int n_features = 0;
    int n_classes = 0;
    std::vector<DecisionTreeModel> stumps;
    std::vector<double> stage_weights;
};

inline AdaBoostModel fit_adaboost(const Matrix& X, const std::vector<int>& y, int n_classes,
                                  const AdaBoostParams& params = {},
                                  const FitContext* ctx = nullptr) {
    if (n_classes < 2) throw ConfigError("AdaBoost needs at least 2 classes");
    const std::size_t n = static_cast<std::size_t>(X.rows());

    AdaBoostModel model;
    model.n_features = static_cast<int>(X.cols());
    model.n_classes = n_classes;

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    TreeParams stump_params;
    stump_params.max_depth = 1;

    const double chance_error = 1.0 - 1.0 / static_cast<double>(n_classes);
    for (int stage = 0; stage < params.n_stages; ++stage) {
        check_deadline(ctx);
        DecisionTreeModel stump = fit_decision_tree(X, y, n_classes, stump_params, weights, ctx);

        double error = 0.0;
        std::vector<bool> miss(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int leaf = stump.leaf_for(X.row(static_cast<Eigen::Index>(i)));
            const auto& dist = stump.nodes[static_cast<std::size_t>(leaf)].distribution;
            int predicted = 0;
            for (int c = 1; c < n_classes; ++c)
                if (dist[static_cast<std::size_t>(c)] > dist[static_cast<std::size_t>(predicted)])
                    predicted = c;
            miss[i] = predicted != y[i];
            if (miss[i]) error += weights[i];
        }

        if (error <= 0.0) {
            // perfect stage dominates; keep it and stop
            model.stumps.push_back(std::move(stump));
            model.stage_weights.push_back(1.0);
            break;
        }
        if (error >= chance_error) break;  // no better than chance

        const double stage_weight =
            std::log((1.0 - error) / error) + std::log(static_cast<double>(n_classes) - 1.0);
        model.stumps.push_back(std::move(stump));
        model.stage_weights.push_back(stage_weight);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (miss[i]) weights[i] *= std::exp(stage_weight);
            total += weights[i];
        }
        for (auto& w : weights) w /= total;
    }
    return model;
}

inline PredictionBatch adaboost_predict(const AdaBoostModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    Matrix votes = Matrix::Zero(X.rows(), m.n_classes);
    for (std::size_t s = 0; s < m.stumps.size(); ++s) {
        const auto& stump = m.stumps[s];
        const double alpha = m.stage_weights[s];
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const int leaf = stump.leaf_for(X.row(i));
            const auto& dist = stump.nodes[static_cast<std::size_t>(leaf)].distribution;
            int predicted = 0;
            for (int c = 1; c < m.n_classes; ++c)
                if (dist[static_cast<std::size_t>(c)] > dist[static_cast<std::size_t>(predicted)])
                    predicted = c;
            votes(i, predicted) += alpha;
        }
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(votes);
    double total = 0.0;
    for (double w : m.stage_weights) total += w;
    if (total > 0.0) votes /= total;
    out.scores = std::move(votes);
    return out;
}

}  // namespace netml
