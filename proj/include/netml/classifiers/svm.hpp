#pragma once

#include <algorithm>
#include <cmath>
#include <list>
#include <unordered_map>
#include <vector>

#include "netml/classifiers/common.hpp"

namespace netml {

struct SvmParams {
    double C = 1.0;
    double gamma = 0.0;  // <= 0: 1 / (n_features * variance of all training cells)
    double tol = 1e-3;   // KKT tolerance
    int max_passes = 1000;
    std::size_t train_cap = 20000;  // SMO is quadratic-ish; cap keeps runs desk-scale
    bool allow_subsample = true;
};

inline double rbf_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                         const Eigen::Ref<const Eigen::RowVectorXd>& b, double gamma) {
    return std::exp(-gamma * (a - b).squaredNorm());
}

// One one-vs-rest subproblem: f(x) = sum_i coef_i k(sv_i, x) + bias.
struct SvmBinaryModel {
    Matrix support_vectors;
    Vector coefficients;  // alpha_i * y_i for support rows
    double bias = 0.0;
    bool converged = true;
};

struct SvmModel {
    int n_features = 0;
    int n_classes = 0;
    double gamma = 0.0;
    double C = 1.0;
    std::vector<SvmBinaryModel> machines;  // one for K=2, else one per class
    bool subsampled = false;
    bool converged = true;
};

namespace detail {

// Platt-style sequential minimal optimization with a full error cache and a
// bounded LRU kernel-row cache. All heuristic tie-breaks are deterministic.
class SmoSolver {
public:
    SmoSolver(const Matrix& X, const std::vector<int>& y_pm, double C, double gamma, double tol,
              int max_passes, Rng rng, const FitContext* ctx)
        : X_(X), y_(y_pm), C_(C), gamma_(gamma), tol_(tol), max_passes_(max_passes),
          rng_(rng), ctx_(ctx) {
        const std::size_t n = y_.size();
        alpha_.assign(n, 0.0);
        errors_.resize(n);
        for (std::size_t i = 0; i < n; ++i) errors_[i] = -static_cast<double>(y_[i]);
        sq_norms_ = X_.rowwise().squaredNorm();
        const std::size_t budget_rows = (64u << 20) / (sizeof(double) * std::max<std::size_t>(n, 1));
        cache_capacity_ = std::max<std::size_t>(16, std::min(n, budget_rows));
    }

    SvmBinaryModel solve() {
        const std::size_t n = y_.size();
        bool examine_all = true;
        int changed = 0;
        int passes = 0;
        bool converged = true;
        while (examine_all || changed > 0) {
            check_deadline(ctx_);
            if (++passes > max_passes_) {
                converged = false;
                break;
            }
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n; ++i) changed += examine(i);
                examine_all = false;
            } else {
                for (std::size_t i = 0; i < n; ++i)
                    if (is_free(i)) changed += examine(i);
                if (changed == 0) examine_all = true;
            }
        }

        SvmBinaryModel model;
        model.converged = converged;
        model.bias = bias_;
        std::vector<std::size_t> sv;
        for (std::size_t i = 0; i < n; ++i)
            if (alpha_[i] > 0.0) sv.push_back(i);
        model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X_.cols());
        model.coefficients.resize(static_cast<Eigen::Index>(sv.size()));
        for (std::size_t s = 0; s < sv.size(); ++s) {
            model.support_vectors.row(static_cast<Eigen::Index>(s)) =
                X_.row(static_cast<Eigen::Index>(sv[s]));
            model.coefficients(static_cast<Eigen::Index>(s)) =
                alpha_[sv[s]] * static_cast<double>(y_[sv[s]]);
        }
        return model;
    }

    const std::vector<double>& alphas() const { return alpha_; }

private:
    bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < C_; }

    int examine(std::size_t i2) {
        const double y2 = y_[i2];
        const double e2 = errors_[i2];
        const double r2 = e2 * y2;
        const bool violates = (r2 < -tol_ && alpha_[i2] < C_) || (r2 > tol_ && alpha_[i2] > 0.0);
        if (!violates) return 0;

        const std::size_t n = y_.size();
        // 1) best |E1 - E2| among free multipliers
        std::size_t best = n;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_free(i)) continue;
            const double gap = std::abs(errors_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n && take_step(best, i2)) return 1;
        // 2) remaining free multipliers from a seeded offset
        const std::size_t start = static_cast<std::size_t>(rng_.uniform_below(n));
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i1 = (start + k) % n;
            if (is_free(i1) && take_step(i1, i2)) return 1;
        }
        // 3) everything else
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i1 = (start + k) % n;
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double y1 = y_[i1], y2 = y_[i2];
        const double a1_old = alpha_[i1], a2_old = alpha_[i2];
        const double e1 = errors_[i1], e2 = errors_[i2];
        const double s = y1 * y2;

        double low, high;
        if (y1 != y2) {
            low = std::max(0.0, a2_old - a1_old);
            high = std::min(C_, C_ + a2_old - a1_old);
        } else {
            low = std::max(0.0, a1_old + a2_old - C_);
            high = std::min(C_, a1_old + a2_old);
        }
        if (low >= high) return false;

        const Vector& k1 = kernel_row(i1);
        const double k11 = 1.0;  // RBF at distance zero
        const double k22 = 1.0;
        const double k12 = k1(static_cast<Eigen::Index>(i2));
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = std::clamp(a2_old + y2 * (e1 - e2) / eta, low, high);
        } else {
            // flat direction: evaluate the exact dual-objective change at
            // both clip ends and keep the better one
            const double g1 = 1.0 - y1 * (e1 + y1 - bias_);  // 1 - y1 * sum_j a_j y_j K_1j
            const double g2 = 1.0 - y2 * (e2 + y2 - bias_);
            auto delta_obj = [&](double cand) {
                const double d2 = cand - a2_old;
                const double d1 = -s * d2;
                return d1 * g1 + d2 * g2 -
                       0.5 * (d1 * d1 * k11 + d2 * d2 * k22 + 2.0 * d1 * d2 * s * k12);
            };
            const double lo_gain = delta_obj(low);
            const double hi_gain = delta_obj(high);
            if (lo_gain > hi_gain + 1e-12) a2 = low;
            else if (hi_gain > lo_gain + 1e-12) a2 = high;
            else return false;
        }
        if (std::abs(a2 - a2_old) < 1e-5 * (a2 + a2_old + 1e-5)) return false;

        double a1 = a1_old + s * (a2_old - a2);
        if (a1 < 1e-12) a1 = 0.0;
        if (a1 > C_ - 1e-12) a1 = C_;

        const double d1 = a1 - a1_old;
        const double d2 = a2 - a2_old;
        const double b1 = bias_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
        const double b2 = bias_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
        double new_bias;
        if (a1 > 0.0 && a1 < C_) new_bias = b1;
        else if (a2 > 0.0 && a2 < C_) new_bias = b2;
        else new_bias = 0.5 * (b1 + b2);

        const Vector& k2 = kernel_row(i2);
        const double db = new_bias - bias_;
        for (std::size_t j = 0; j < y_.size(); ++j)
            errors_[j] += y1 * d1 * k1(static_cast<Eigen::Index>(j)) +
                          y2 * d2 * k2(static_cast<Eigen::Index>(j)) + db;

        alpha_[i1] = a1;
        alpha_[i2] = a2;
        bias_ = new_bias;
        // free multipliers sit exactly on the margin
        if (a1 > 0.0 && a1 < C_) errors_[i1] = 0.0;
        if (a2 > 0.0 && a2 < C_) errors_[i2] = 0.0;
        return true;
    }

    const Vector& kernel_row(std::size_t i) {
        auto it = cache_.find(i);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first;
        }
        Vector prod = X_ * X_.row(static_cast<Eigen::Index>(i)).transpose();
        Vector row =
            (-gamma_ *
             (sq_norms_.array() + sq_norms_(static_cast<Eigen::Index>(i)) - 2.0 * prod.array()))
                .exp();
        if (cache_.size() >= cache_capacity_) {
            cache_.erase(lru_.back());
            lru_.pop_back();
        }
        lru_.push_front(i);
        auto [pos, inserted] = cache_.emplace(i, std::make_pair(std::move(row), lru_.begin()));
        return pos->second.first;
    }

    const Matrix& X_;
    const std::vector<int>& y_;
    double C_, gamma_, tol_;
    int max_passes_;
    Rng rng_;
    const FitContext* ctx_;

    std::vector<double> alpha_;
    std::vector<double> errors_;  // f(x_i) - y_i for every row
    double bias_ = 0.0;
    Vector sq_norms_;
    std::unordered_map<std::size_t, std::pair<Vector, std::list<std::size_t>::iterator>> cache_;
    std::list<std::size_t> lru_;
    std::size_t cache_capacity_ = 16;
};

}  // namespace detail

inline SvmModel fit_svm_rbf(const Matrix& X_in, const std::vector<int>& y_in, int n_classes,
                            const SvmParams& params = {}, Seed seed = {},
                            const FitContext* ctx = nullptr) {
    if (n_classes < 2) throw ConfigError("SVM needs at least 2 classes");

    Matrix X = X_in;
    std::vector<int> y = y_in;
    SvmModel model;
    if (params.train_cap > 0 && static_cast<std::size_t>(X.rows()) > params.train_cap) {
        if (!params.allow_subsample)
            throw TrainingSetTooLarge(std::to_string(X.rows()) + " rows exceed the cap of " +
                                      std::to_string(params.train_cap) +
                                      " and subsampling is disabled");
        const auto rows =
            stratified_subsample(y_in, n_classes, params.train_cap, Rng(seed).fork(0x5c0));
        X = take_rows(X_in, rows);
        y = take(y_in, rows);
        model.subsampled = true;
    }

    model.n_features = static_cast<int>(X.cols());
    model.n_classes = n_classes;
    model.C = params.C;
    model.gamma = params.gamma;
    if (model.gamma <= 0.0) {
        const double mean = X.mean();
        const double var = (X.array() - mean).square().sum() /
                           static_cast<double>(X.rows() * X.cols());
        model.gamma = var > 0.0 ? 1.0 / (static_cast<double>(X.cols()) * var)
                                : 1.0 / static_cast<double>(X.cols());
    }

    const int n_machines = n_classes == 2 ? 1 : n_classes;
    for (int c = 0; c < n_machines; ++c) {
        const int positive_class = n_classes == 2 ? 1 : c;
        std::vector<int> y_pm(y.size());
        std::size_t positives = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            y_pm[i] = y[i] == positive_class ? 1 : -1;
            positives += y_pm[i] == 1;
        }
        if (positives == 0 || positives == y.size()) {
            // one-sided subproblem: constant decision toward the only side
            SvmBinaryModel trivial;
            trivial.support_vectors.resize(0, X.cols());
            trivial.coefficients.resize(0);
            trivial.bias = positives == 0 ? -1.0 : 1.0;
            model.machines.push_back(std::move(trivial));
            continue;
        }
        detail::SmoSolver solver(X, y_pm, params.C, model.gamma, params.tol, params.max_passes,
                                 Rng(seed).fork(0x511 + static_cast<std::uint64_t>(c)), ctx);
        model.machines.push_back(solver.solve());
        if (!model.machines.back().converged) model.converged = false;
    }
    return model;
}

inline Vector svm_decision_values(const SvmBinaryModel& m, const Matrix& X, double gamma) {
    Vector f = Vector::Constant(X.rows(), m.bias);
    if (m.support_vectors.rows() == 0) return f;
    const Vector sv_sq = m.support_vectors.rowwise().squaredNorm();
    const Vector x_sq = X.rowwise().squaredNorm();
    const Matrix prod = X * m.support_vectors.transpose();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        double acc = 0.0;
        for (Eigen::Index s = 0; s < m.support_vectors.rows(); ++s)
            acc += m.coefficients(s) * std::exp(-gamma * (x_sq(i) + sv_sq(s) - 2.0 * prod(i, s)));
        f(i) += acc;
    }
    return f;
}

inline PredictionBatch svm_predict(const SvmModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    Matrix decisions(X.rows(), m.n_classes);
    if (m.n_classes == 2) {
        const Vector f = svm_decision_values(m.machines[0], X, m.gamma);
        decisions.col(0) = -f;
        decisions.col(1) = f;
    } else {
        for (int c = 0; c < m.n_classes; ++c)
            decisions.col(c) = svm_decision_values(m.machines[static_cast<std::size_t>(c)], X,
                                                   m.gamma);
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(decisions);
    out.scores = std::move(decisions);
    return out;
}

}  // namespace netml
