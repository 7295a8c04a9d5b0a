#pragma once

#include <cmath>
#include <vector>

#include "netml/classifiers/common.hpp"
#include "netml/optim/lbfgs.hpp"

namespace netml {

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct LogRegParams {
    double C = 1.0;  // inverse of the L2 penalty strength
    double tol = 1e-5;
    int max_iterations = 1000;
};

// Ridge-penalized logistic regression trained with a limited-memory
// quasi-Newton optimizer; one-vs-rest above two classes. The intercept is
// not penalized.
struct LogisticModel {
    int n_features = 0;
    int n_classes = 0;
    double C = 1.0;
    Matrix weights;  // machines x features
    Vector biases;
    bool converged = true;
};

namespace detail {

// Objective: sum_i log(1 + exp(-s_i z_i)) + ||w||^2 / (2C), z = Xw + b.
struct LogisticObjective {
    const Matrix& X;
    const std::vector<double>& sign;  // +-1 targets
    double C;

    double operator()(const Vector& params, Vector& grad) const {
        const Eigen::Index d = X.cols();
        const auto w = params.head(d);
        const double b = params(d);
        Vector z = X * w;
        z.array() += b;

        double loss = 0.0;
        Vector residual(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double m = sign[static_cast<std::size_t>(i)] * z(i);
            // log(1 + exp(-m)) evaluated stably on both tails
            loss += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
            residual(i) = -sign[static_cast<std::size_t>(i)] * sigmoid(-m);
        }
        loss += w.squaredNorm() / (2.0 * C);
        grad.resize(d + 1);
        grad.head(d) = X.transpose() * residual + w / C;
        grad(d) = residual.sum();
        return loss;
    }
};

}  // namespace detail

inline LogisticModel fit_logistic_regression(const Matrix& X, const std::vector<int>& y,
                                             int n_classes, const LogRegParams& params = {},
                                             const FitContext* ctx = nullptr) {
    if (n_classes < 2) throw ConfigError("logistic regression needs at least 2 classes");
    const Eigen::Index d = X.cols();

    LogisticModel model;
    model.n_features = static_cast<int>(d);
    model.n_classes = n_classes;
    model.C = params.C;
    const int n_machines = n_classes == 2 ? 1 : n_classes;
    model.weights = Matrix::Zero(n_machines, d);
    model.biases = Vector::Zero(n_machines);

    LbfgsOptions opts;
    opts.max_iterations = params.max_iterations;
    opts.grad_tolerance = params.tol;

    for (int c = 0; c < n_machines; ++c) {
        check_deadline(ctx);
        const int positive = n_classes == 2 ? 1 : c;
        std::vector<double> sign(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) sign[i] = y[i] == positive ? 1.0 : -1.0;

        detail::LogisticObjective objective{X, sign, params.C};
        auto result = lbfgs_minimize(objective, Vector::Zero(d + 1), opts);
        model.weights.row(c) = result.x.head(d).transpose();
        model.biases(c) = result.x(d);
        if (!result.converged) model.converged = false;
    }
    return model;
}

inline PredictionBatch logistic_predict(const LogisticModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    Matrix probs(X.rows(), m.n_classes);
    if (m.n_classes == 2) {
        const Vector z = X * m.weights.row(0).transpose() + Vector::Constant(X.rows(), m.biases(0));
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double p = sigmoid(z(i));
            probs(i, 0) = 1.0 - p;
            probs(i, 1) = p;
        }
    } else {
        for (int c = 0; c < m.n_classes; ++c) {
            const Vector z =
                X * m.weights.row(c).transpose() + Vector::Constant(X.rows(), m.biases(c));
            for (Eigen::Index i = 0; i < X.rows(); ++i) probs(i, c) = sigmoid(z(i));
        }
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double total = probs.row(i).sum();
            if (total > 0.0) probs.row(i) /= total;
        }
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(probs);
    out.scores = std::move(probs);
    return out;
}

}  // namespace netml
