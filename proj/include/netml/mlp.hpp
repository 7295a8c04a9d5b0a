#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netml/classifiers/common.hpp"

namespace netml {

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

inline void softmax_rows(Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double mx = m.row(i).maxCoeff();
        const Eigen::ArrayXd e = (m.row(i).array() - mx).exp();
        m.row(i) = e / e.sum();
    }
}

// Feed-forward network: ReLU hidden stack with inverted dropout, sigmoid
// head for one output, softmax head otherwise; cross-entropy loss trained
// by backpropagation with Adam on seeded mini-batches.
struct MlpConfig {
    int input_dim = 0;
    std::vector<int> hidden = {128, 128, 128};
    int n_outputs = 1;  // 1 selects the sigmoid head
    double dropout_rate = 0.2;
    int epochs = 100;
    int batch_size = 128;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double validation_fraction = 0.1;
    Seed seed;

    std::vector<int> layer_dims() const {
        std::vector<int> dims;
        dims.push_back(input_dim);
        dims.insert(dims.end(), hidden.begin(), hidden.end());
        dims.push_back(n_outputs);
        return dims;
    }
};

struct MlpParams {
    std::vector<Matrix> weights;  // fan_in x fan_out per layer
    std::vector<Vector> biases;

    std::size_t n_layers() const { return weights.size(); }
};

inline MlpParams init_mlp(const MlpConfig& config) {
    if (config.input_dim <= 0 || config.n_outputs <= 0)
        throw ConfigError("network dimensions must be positive");
    if (config.dropout_rate < 0.0 || config.dropout_rate >= 1.0)
        throw ConfigError("dropout rate must lie in [0, 1)");

    const auto dims = config.layer_dims();
    Rng rng = Rng(config.seed).fork(0x171);
    MlpParams params;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l];
        const int fan_out = dims[l + 1];
        const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        Matrix w(fan_in, fan_out);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = scale * rng.normal();
        params.weights.push_back(std::move(w));
        params.biases.push_back(Vector::Zero(fan_out));
    }
    return params;
}

struct ForwardPass {
    std::vector<Matrix> activations;  // [0] = input batch, last = head output
    std::vector<Matrix> dropout_masks;  // per hidden layer; empty rows in eval mode
};

// train_mode draws inverted-dropout masks from `rng`; evaluation applies no
// scaling at all.
inline Matrix mlp_forward(const MlpParams& params, const Matrix& batch, double dropout_rate,
                          bool train_mode, Rng* rng = nullptr, ForwardPass* capture = nullptr) {
    if (batch.cols() != params.weights.front().rows())
        throw DimensionMismatch("batch width " + std::to_string(batch.cols()) +
                                " != input dim " + std::to_string(params.weights.front().rows()));
    if (capture) {
        capture->activations.clear();
        capture->dropout_masks.clear();
        capture->activations.push_back(batch);
    }

    Matrix a = batch;
    const std::size_t n_layers = params.n_layers();
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        Matrix z = a * params.weights[l];
        z.rowwise() += params.biases[l].transpose();
        a = z.cwiseMax(0.0);
        if (train_mode && dropout_rate > 0.0) {
            const double keep = 1.0 - dropout_rate;
            Matrix mask(a.rows(), a.cols());
            for (Eigen::Index i = 0; i < mask.rows(); ++i)
                for (Eigen::Index j = 0; j < mask.cols(); ++j)
                    mask(i, j) = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
            a = a.cwiseProduct(mask);
            if (capture) capture->dropout_masks.push_back(std::move(mask));
        } else if (capture) {
            capture->dropout_masks.emplace_back();
        }
        if (capture) capture->activations.push_back(a);
    }

    Matrix z = a * params.weights.back();
    z.rowwise() += params.biases.back().transpose();
    if (z.cols() == 1) {
        for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, 0) = 1.0 / (1.0 + std::exp(-z(i, 0)));
    } else {
        softmax_rows(z);
    }
    if (capture) capture->activations.push_back(z);
    return z;
}

// Cross-entropy: binary form for one output column, categorical otherwise.
// Probabilities are clamped away from 0 and 1 before the logs.
inline double mlp_loss(const Matrix& outputs, const Matrix& targets) {
    if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols())
        throw DimensionMismatch("loss shapes differ");
    constexpr double lo = 1e-12;
    constexpr double hi = 1.0 - 1e-12;
    double total = 0.0;
    if (outputs.cols() == 1) {
        for (Eigen::Index i = 0; i < outputs.rows(); ++i) {
            const double p = std::clamp(outputs(i, 0), lo, hi);
            const double y = targets(i, 0);
            total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        }
    } else {
        for (Eigen::Index i = 0; i < outputs.rows(); ++i)
            for (Eigen::Index c = 0; c < outputs.cols(); ++c)
                if (targets(i, c) != 0.0)
                    total -= targets(i, c) * std::log(std::clamp(outputs(i, c), lo, hi));
    }
    return total / static_cast<double>(outputs.rows());
}

struct MlpGradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
};

// Backpropagation through a captured forward pass. Both heads reduce to
// (p - y) / batch at the pre-activation of the output layer.
inline MlpGradients mlp_backward(const MlpParams& params, const ForwardPass& pass,
                                 const Matrix& targets) {
    const std::size_t n_layers = params.n_layers();
    MlpGradients grads;
    grads.weights.resize(n_layers);
    grads.biases.resize(n_layers);

    const Matrix& outputs = pass.activations.back();
    const double batch = static_cast<double>(outputs.rows());
    Matrix delta = (outputs - targets) / batch;

    for (std::size_t l = n_layers; l-- > 0;) {
        const Matrix& input = pass.activations[l];
        grads.weights[l] = input.transpose() * delta;
        grads.biases[l] = delta.colwise().sum().transpose();
        if (l == 0) break;
        Matrix upstream = delta * params.weights[l].transpose();
        const Matrix& hidden = pass.activations[l];  // post-ReLU, post-dropout
        const Matrix& mask = pass.dropout_masks[l - 1];
        if (mask.size() > 0) upstream = upstream.cwiseProduct(mask);
        delta = upstream.cwiseProduct(
            (hidden.array() > 0.0).cast<double>().matrix());
    }
    return grads;
}

struct EpochStats {
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

using TrainingCurve = std::vector<EpochStats>;

struct MlpModel {
    MlpConfig config;
    MlpParams params;
    TrainingCurve curve;
};

namespace detail {

inline Matrix mlp_targets(const std::vector<int>& labels, const std::vector<std::size_t>& rows,
                          int n_outputs) {
    Matrix t = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                            n_outputs == 1 ? 1 : n_outputs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int label = labels[rows[i]];
        if (n_outputs == 1)
            t(static_cast<Eigen::Index>(i), 0) = static_cast<double>(label);
        else
            t(static_cast<Eigen::Index>(i), label) = 1.0;
    }
    return t;
}

inline std::vector<int> mlp_labels_from_outputs(const Matrix& outputs) {
    std::vector<int> labels(static_cast<std::size_t>(outputs.rows()));
    for (Eigen::Index i = 0; i < outputs.rows(); ++i) {
        if (outputs.cols() == 1) {
            labels[static_cast<std::size_t>(i)] = outputs(i, 0) >= 0.5 ? 1 : 0;
        } else {
            labels[static_cast<std::size_t>(i)] = argmax_row(outputs, i);
        }
    }
    return labels;
}

inline double accuracy_against(const std::vector<int>& predicted, const std::vector<int>& truth,
                               const std::vector<std::size_t>& rows) {
    if (rows.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (predicted[i] == truth[rows[i]]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

}  // namespace detail

// Seeded mini-batch Adam training. The per-epoch curve carries the running
// training loss/accuracy over the epoch's batches and an end-of-epoch
// evaluation on a held-out slice of the training rows (or on the full
// training set when the slice rounds to zero rows).
inline TrainingCurve mlp_train(MlpParams& params, const Matrix& X, const std::vector<int>& labels,
                               const MlpConfig& config, const FitContext* ctx = nullptr) {
    if (X.rows() == 0) throw EmptyTrainingSet("network training needs rows");
    if (static_cast<std::size_t>(X.rows()) != labels.size())
        throw LengthMismatch("row/label count mismatch");

    Rng rng = Rng(config.seed).fork(0x7e4);
    const std::size_t n = static_cast<std::size_t>(X.rows());

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    const std::size_t n_val =
        static_cast<std::size_t>(config.validation_fraction * static_cast<double>(n));
    std::vector<std::size_t> val_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> train_rows(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    if (train_rows.empty()) throw EmptyTrainingSet("validation slice consumed every row");

    const Matrix val_X = val_rows.empty() ? Matrix() : take_rows(X, val_rows);
    const Matrix val_targets =
        val_rows.empty() ? Matrix() : detail::mlp_targets(labels, val_rows, config.n_outputs);

    // Adam state
    std::vector<Matrix> m_w, v_w;
    std::vector<Vector> m_b, v_b;
    for (std::size_t l = 0; l < params.n_layers(); ++l) {
        m_w.push_back(Matrix::Zero(params.weights[l].rows(), params.weights[l].cols()));
        v_w.push_back(Matrix::Zero(params.weights[l].rows(), params.weights[l].cols()));
        m_b.push_back(Vector::Zero(params.biases[l].size()));
        v_b.push_back(Vector::Zero(params.biases[l].size()));
    }

    TrainingCurve curve;
    std::int64_t step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        check_deadline(ctx);
        rng.shuffle(train_rows);

        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < train_rows.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(train_rows.size(), start + static_cast<std::size_t>(config.batch_size));
            const std::vector<std::size_t> batch_rows(train_rows.begin() + static_cast<std::ptrdiff_t>(start),
                                                      train_rows.begin() + static_cast<std::ptrdiff_t>(end));
            const Matrix batch = take_rows(X, batch_rows);
            const Matrix targets = detail::mlp_targets(labels, batch_rows, config.n_outputs);

            ForwardPass pass;
            const Matrix outputs =
                mlp_forward(params, batch, config.dropout_rate, true, &rng, &pass);
            const double batch_loss = mlp_loss(outputs, targets);
            if (!std::isfinite(batch_loss))
                throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch) +
                                    ", batch starting at row " + std::to_string(start));
            loss_sum += batch_loss * static_cast<double>(batch_rows.size());
            const auto batch_labels = detail::mlp_labels_from_outputs(outputs);
            for (std::size_t i = 0; i < batch_rows.size(); ++i)
                if (batch_labels[i] == labels[batch_rows[i]]) ++correct;

            const MlpGradients grads = mlp_backward(params, pass, targets);
            ++step;
            const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < params.n_layers(); ++l) {
                m_w[l] = config.beta1 * m_w[l] + (1.0 - config.beta1) * grads.weights[l];
                v_w[l] = config.beta2 * v_w[l] +
                         (1.0 - config.beta2) * grads.weights[l].cwiseProduct(grads.weights[l]);
                params.weights[l] -=
                    (config.learning_rate *
                     (m_w[l] / bc1).cwiseQuotient(((v_w[l] / bc2).cwiseSqrt().array() + config.epsilon).matrix()));
                m_b[l] = config.beta1 * m_b[l] + (1.0 - config.beta1) * grads.biases[l];
                v_b[l] = config.beta2 * v_b[l] +
                         (1.0 - config.beta2) * grads.biases[l].cwiseProduct(grads.biases[l]);
                params.biases[l] -=
                    (config.learning_rate *
                     (m_b[l] / bc1).cwiseQuotient(((v_b[l] / bc2).cwiseSqrt().array() + config.epsilon).matrix()));
            }
        }

        EpochStats stats;
        stats.train_loss = loss_sum / static_cast<double>(train_rows.size());
        stats.train_accuracy =
            static_cast<double>(correct) / static_cast<double>(train_rows.size());
        if (val_rows.empty()) {
            const Matrix train_X = take_rows(X, train_rows);
            const Matrix train_targets = detail::mlp_targets(labels, train_rows, config.n_outputs);
            const Matrix outputs = mlp_forward(params, train_X, 0.0, false);
            stats.val_loss = mlp_loss(outputs, train_targets);
            stats.val_accuracy = detail::accuracy_against(
                detail::mlp_labels_from_outputs(outputs), labels, train_rows);
        } else {
            const Matrix outputs = mlp_forward(params, val_X, 0.0, false);
            stats.val_loss = mlp_loss(outputs, val_targets);
            stats.val_accuracy = detail::accuracy_against(
                detail::mlp_labels_from_outputs(outputs), labels, val_rows);
        }
        curve.push_back(stats);
    }
    return curve;
}

inline MlpModel fit_mlp(const Matrix& X, const std::vector<int>& labels, int n_classes,
                        MlpConfig config, const FitContext* ctx = nullptr) {
    config.input_dim = static_cast<int>(X.cols());
    config.n_outputs = n_classes == 2 ? 1 : n_classes;
    MlpModel model;
    model.config = config;
    model.params = init_mlp(config);
    model.curve = mlp_train(model.params, X, labels, config, ctx);
    return model;
}

// Binary head: label 1 iff p >= 0.5 (the boundary itself counts as the
// positive class). Multiclass: argmax with lowest-index tie-break.
inline PredictionBatch mlp_predict(const MlpModel& m, const Matrix& X) {
    detail::require_features(m.params.weights.front().rows(), X.cols());
    const Matrix outputs = mlp_forward(m.params, X, 0.0, false);
    PredictionBatch out;
    out.labels = detail::mlp_labels_from_outputs(outputs);
    if (outputs.cols() == 1) {
        Matrix probs(outputs.rows(), 2);
        probs.col(1) = outputs.col(0);
        probs.col(0) = 1.0 - outputs.col(0).array();
        out.scores = std::move(probs);
    } else {
        out.scores = outputs;
    }
    return out;
}

}  // namespace netml
