#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "netml/classifiers/common.hpp"

namespace netml {

struct KnnParams {
    int k = 5;
    int minkowski_p = 2;        // 2 = Euclidean, 1 = Manhattan
    std::size_t train_cap = 0;  // 0 = keep every training row
};

// Lazy learner: stores the training data and votes among the k nearest
// neighbors with uniform weights.
struct KnnModel {
    int n_features = 0;
    int n_classes = 0;
    int k = 5;
    int minkowski_p = 2;
    Matrix train_X;
    std::vector<int> train_y;
    bool subsampled = false;
};

inline KnnModel fit_knn(const Matrix& X, const std::vector<int>& y, int n_classes,
                        const KnnParams& params = {}) {
    if (params.k < 1) throw ConfigError("k must be positive");
    if (static_cast<Eigen::Index>(params.k) > X.rows())
        throw KTooLarge("k = " + std::to_string(params.k) + " exceeds " +
                        std::to_string(X.rows()) + " training rows");
    KnnModel model;
    model.n_features = static_cast<int>(X.cols());
    model.n_classes = n_classes;
    model.k = params.k;
    model.minkowski_p = params.minkowski_p;
    model.train_X = X;
    model.train_y = y;
    return model;
}

inline PredictionBatch knn_predict(const KnnModel& m, const Matrix& X,
                                   const FitContext* ctx = nullptr) {
    detail::require_features(m.n_features, X.cols());
    const Eigen::Index n_train = m.train_X.rows();
    const Eigen::Index n_query = X.rows();
    const std::size_t k = static_cast<std::size_t>(m.k);

    PredictionBatch out;
    out.labels.resize(static_cast<std::size_t>(n_query));
    Matrix votes = Matrix::Zero(n_query, m.n_classes);

    // Euclidean path uses tiled ||a-b||^2 = |a|^2 + |b|^2 - 2ab via GEMM.
    const bool euclidean = m.minkowski_p == 2;
    Vector train_sq;
    if (euclidean) train_sq = m.train_X.rowwise().squaredNorm();

    const Eigen::Index tile = 256;
    std::vector<std::pair<double, Eigen::Index>> order(static_cast<std::size_t>(n_train));
    for (Eigen::Index start = 0; start < n_query; start += tile) {
        check_deadline(ctx);
        const Eigen::Index rows = std::min(tile, n_query - start);
        Matrix dist;
        if (euclidean) {
            const auto Q = X.middleRows(start, rows);
            dist.noalias() = -2.0 * Q * m.train_X.transpose();
            dist.colwise() += Q.rowwise().squaredNorm();
            dist.rowwise() += train_sq.transpose();
        } else {
            dist.resize(rows, n_train);
            for (Eigen::Index i = 0; i < rows; ++i)
                for (Eigen::Index j = 0; j < n_train; ++j)
                    dist(i, j) = (X.row(start + i) - m.train_X.row(j)).cwiseAbs().sum();
        }
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < n_train; ++j)
                order[static_cast<std::size_t>(j)] = {dist(i, j), j};
            // distance ties resolved by training-row index for determinism
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                              order.end());
            const Eigen::Index q = start + i;
            for (std::size_t t = 0; t < k; ++t)
                votes(q, m.train_y[static_cast<std::size_t>(order[t].second)]) += 1.0;
            out.labels[static_cast<std::size_t>(q)] = detail::argmax_row(votes, q);
        }
    }
    votes /= static_cast<double>(k);
    out.scores = std::move(votes);
    return out;
}

}  // namespace netml
