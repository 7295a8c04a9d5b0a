#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "netml/classifiers/common.hpp"

namespace netml {

enum class SgdSchedule { Optimal, Constant };

struct SgdParams {
    double alpha = 1e-4;  // L2 regularization constant
    int max_epochs = 1000;
    double tol = 1e-3;          // epoch-loss stall threshold
    int epochs_no_change = 5;   // consecutive stalled epochs before stopping
    SgdSchedule schedule = SgdSchedule::Optimal;
    double eta0 = 0.01;  // fixed step for the Constant schedule
};

// Per-sample hinge-loss updates with an L2 term: a linear SVM trained by
// stochastic gradient descent. Rows are visited in a seeded shuffled order
// every epoch; one-vs-rest above two classes.
struct SgdModel {
    int n_features = 0;
    int n_classes = 0;
    double alpha = 1e-4;
    Matrix weights;  // machines x features
    Vector biases;
    bool converged = true;
};

namespace detail {

struct SgdMachine {
    Vector w;
    double b = 0.0;
    bool converged = false;
};

inline SgdMachine sgd_train_binary(const Matrix& X, const std::vector<double>& sign,
                                   const SgdParams& params, Rng rng, const FitContext* ctx) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    SgdMachine machine;
    machine.w = Vector::Zero(d);

    // step-size schedule 1 / (alpha * (t0 + t)), t0 from the usual
    // typical-weight heuristic; hinge slope at -typw is 1
    const double typw = std::sqrt(1.0 / std::sqrt(params.alpha));
    const double t0 = 1.0 / (typw * params.alpha);

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    double best_loss = std::numeric_limits<double>::infinity();
    int stalled = 0;
    std::int64_t t = 0;
    for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
        check_deadline(ctx);
        rng.shuffle(order);
        double hinge_sum = 0.0;
        for (std::size_t idx : order) {
            const double lr = params.schedule == SgdSchedule::Optimal
                                  ? 1.0 / (params.alpha * (t0 + static_cast<double>(t)))
                                  : params.eta0;
            ++t;
            const auto x = X.row(static_cast<Eigen::Index>(idx));
            const double s = sign[idx];
            const double margin = s * (x.dot(machine.w) + machine.b);
            hinge_sum += std::max(0.0, 1.0 - margin);
            machine.w *= (1.0 - lr * params.alpha);  // L2 shrink every sample
            if (margin < 1.0) {
                machine.w += lr * s * x.transpose();
                machine.b += lr * s;  // intercept carries no penalty
            }
        }
        const double epoch_loss = hinge_sum / static_cast<double>(n) +
                                  0.5 * params.alpha * machine.w.squaredNorm();
        if (epoch_loss > best_loss - params.tol) {
            if (++stalled >= params.epochs_no_change) {
                machine.converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
        best_loss = std::min(best_loss, epoch_loss);
    }
    return machine;
}

}  // namespace detail

inline SgdModel fit_sgd_hinge(const Matrix& X, const std::vector<int>& y, int n_classes,
                              const SgdParams& params = {}, Seed seed = {},
                              const FitContext* ctx = nullptr) {
    if (n_classes < 2) throw ConfigError("SGD classifier needs at least 2 classes");
    SgdModel model;
    model.n_features = static_cast<int>(X.cols());
    model.n_classes = n_classes;
    model.alpha = params.alpha;
    const int n_machines = n_classes == 2 ? 1 : n_classes;
    model.weights = Matrix::Zero(n_machines, X.cols());
    model.biases = Vector::Zero(n_machines);

    for (int c = 0; c < n_machines; ++c) {
        const int positive = n_classes == 2 ? 1 : c;
        std::vector<double> sign(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) sign[i] = y[i] == positive ? 1.0 : -1.0;
        auto machine = detail::sgd_train_binary(
            X, sign, params, Rng(seed).fork(0x56d + static_cast<std::uint64_t>(c)), ctx);
        model.weights.row(c) = machine.w.transpose();
        model.biases(c) = machine.b;
        if (!machine.converged) model.converged = false;
    }
    return model;
}

inline PredictionBatch sgd_predict(const SgdModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    Matrix decisions(X.rows(), m.n_classes);
    if (m.n_classes == 2) {
        const Vector f = X * m.weights.row(0).transpose() + Vector::Constant(X.rows(), m.biases(0));
        decisions.col(0) = -f;
        decisions.col(1) = f;
    } else {
        for (int c = 0; c < m.n_classes; ++c)
            decisions.col(c) =
                X * m.weights.row(c).transpose() + Vector::Constant(X.rows(), m.biases(c));
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(decisions);
    out.scores = std::move(decisions);
    return out;
}

}  // namespace netml
