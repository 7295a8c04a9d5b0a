#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "netml/classifiers/common.hpp"

namespace netml {

struct NbParams {
    // Smoothing added to every variance, as a fraction of the largest
    // per-feature variance across the whole training set.
    double var_smoothing = 1e-9;
};

// Gaussian naive Bayes: empirical class priors, per-class per-feature
// normal likelihoods with smoothed variances.
struct GaussianNbModel {
    int n_features = 0;
    int n_classes = 0;
    Vector log_priors;
    Matrix means;      // class x feature
    Matrix variances;  // class x feature, strictly positive after smoothing
};

inline GaussianNbModel fit_gaussian_nb(const Matrix& X, const std::vector<int>& y, int n_classes,
                                       const NbParams& params = {}) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    GaussianNbModel model;
    model.n_features = static_cast<int>(d);
    model.n_classes = n_classes;
    model.log_priors.resize(n_classes);
    model.means = Matrix::Zero(n_classes, d);
    model.variances = Matrix::Zero(n_classes, d);

    const auto counts = detail::class_counts(y, n_classes);
    for (int c = 0; c < n_classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw EmptyClass("class " + std::to_string(c) + " has no training samples");
    }

    for (Eigen::Index i = 0; i < n; ++i)
        model.means.row(y[static_cast<std::size_t>(i)]) += X.row(i);
    for (int c = 0; c < n_classes; ++c)
        model.means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = y[static_cast<std::size_t>(i)];
        const auto dev = X.row(i) - model.means.row(c);
        model.variances.row(c) += dev.cwiseProduct(dev);
    }
    for (int c = 0; c < n_classes; ++c)
        model.variances.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

    double max_var = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
        const Vector col = X.col(j);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / static_cast<double>(n);
        max_var = std::max(max_var, var);
    }
    const double eps = params.var_smoothing * max_var;
    model.variances.array() += (eps > 0.0 ? eps : 1e-12);

    for (int c = 0; c < n_classes; ++c)
        model.log_priors(c) = std::log(static_cast<double>(counts[static_cast<std::size_t>(c)]) /
                                       static_cast<double>(n));
    return model;
}

inline Matrix nb_log_joint(const GaussianNbModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    Matrix log_joint(X.rows(), m.n_classes);
    constexpr double log_2pi = 1.8378770664093453;  // log(2*pi)
    for (int c = 0; c < m.n_classes; ++c) {
        const auto mean = m.means.row(c);
        const auto var = m.variances.row(c);
        const double const_term =
            m.log_priors(c) - 0.5 * (var.array().log() + log_2pi).sum();
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const auto dev = X.row(i) - mean;
            log_joint(i, c) =
                const_term - 0.5 * (dev.array().square() / var.array()).sum();
        }
    }
    return log_joint;
}

inline PredictionBatch nb_predict(const GaussianNbModel& m, const Matrix& X) {
    Matrix log_joint = nb_log_joint(m, X);
    // log-sum-exp normalization to per-class posteriors
    Matrix probs(log_joint.rows(), log_joint.cols());
    for (Eigen::Index i = 0; i < log_joint.rows(); ++i) {
        const double mx = log_joint.row(i).maxCoeff();
        const Eigen::ArrayXd shifted = (log_joint.row(i).array() - mx).exp();
        probs.row(i) = shifted / shifted.sum();
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(probs);
    out.scores = std::move(probs);
    return out;
}

}  // namespace netml
