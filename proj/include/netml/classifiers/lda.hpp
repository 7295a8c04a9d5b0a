#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "netml/classifiers/common.hpp"

namespace netml {

struct LdaParams {
    // Eigendirections of the pooled covariance below this fraction of the
    // largest eigenvalue are discarded; encoded datasets routinely carry
    // near-constant columns that make the pooled covariance rank-deficient.
    double eigen_floor = 1e-9;
};

// Gaussian classes with a shared covariance matrix, solved by spectral
// factorization of the pooled covariance. Prediction is the highest
// posterior; posteriors come from the shared-covariance discriminants.
struct LdaModel {
    int n_features = 0;
    int n_classes = 0;
    Vector log_priors;
    Matrix class_means;  // class x feature
    Matrix whitener;     // feature x rank: maps x into the whitened subspace
};

inline LdaModel fit_lda(const Matrix& X, const std::vector<int>& y, int n_classes,
                        const LdaParams& params = {}) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    if (n_classes < 2) throw ConfigError("LDA needs at least 2 classes");

    LdaModel model;
    model.n_features = static_cast<int>(d);
    model.n_classes = n_classes;
    model.log_priors.resize(n_classes);
    model.class_means = Matrix::Zero(n_classes, d);

    const auto counts = detail::class_counts(y, n_classes);
    for (int c = 0; c < n_classes; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw EmptyClass("class " + std::to_string(c) + " has no training samples");

    for (Eigen::Index i = 0; i < n; ++i)
        model.class_means.row(y[static_cast<std::size_t>(i)]) += X.row(i);
    for (int c = 0; c < n_classes; ++c) {
        model.class_means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
        model.log_priors(c) = std::log(static_cast<double>(counts[static_cast<std::size_t>(c)]) /
                                       static_cast<double>(n));
    }

    // Pooled within-class covariance with the usual n - K normalization.
    Matrix pooled = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vector dev =
            (X.row(i) - model.class_means.row(y[static_cast<std::size_t>(i)])).transpose();
        pooled.noalias() += dev * dev.transpose();
    }
    const double dof = static_cast<double>(n - n_classes);
    if (dof > 0.0) pooled /= dof;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(pooled);
    if (eig.info() != Eigen::Success)
        throw DegenerateCovariance("pooled covariance factorization failed");
    const Vector evals = eig.eigenvalues();
    const double max_eval = evals.maxCoeff();
    if (!(max_eval > 0.0) || !std::isfinite(max_eval))
        throw DegenerateCovariance("pooled covariance has no positive spectrum");

    const double floor = params.eigen_floor * max_eval;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals(i) > floor) kept.push_back(i);
    model.whitener.resize(d, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k)
        model.whitener.col(static_cast<Eigen::Index>(k)) =
            eig.eigenvectors().col(kept[k]) / std::sqrt(evals(kept[k]));
    return model;
}

// Discriminant scores: log prior minus half the squared whitened distance to
// each class mean. Softmax of these equals the class posteriors.
inline Matrix lda_scores(const LdaModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    const Matrix Z = X * m.whitener;
    const Matrix M = m.class_means * m.whitener;
    Matrix scores(X.rows(), m.n_classes);
    for (int c = 0; c < m.n_classes; ++c) {
        for (Eigen::Index i = 0; i < Z.rows(); ++i) {
            const double dist2 = (Z.row(i) - M.row(c)).squaredNorm();
            scores(i, c) = m.log_priors(c) - 0.5 * dist2;
        }
    }
    return scores;
}

inline PredictionBatch lda_predict(const LdaModel& m, const Matrix& X) {
    const Matrix scores = lda_scores(m, X);
    Matrix probs(scores.rows(), scores.cols());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        const double mx = scores.row(i).maxCoeff();
        const Eigen::ArrayXd shifted = (scores.row(i).array() - mx).exp();
        probs.row(i) = shifted / shifted.sum();
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(probs);
    out.scores = std::move(probs);
    return out;
}

}  // namespace netml
