#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netml/classifiers/common.hpp"

namespace netml {

enum class SplitCriterion { Gini, Entropy };

struct TreeParams {
    SplitCriterion criterion = SplitCriterion::Gini;
    int max_depth = -1;         // -1: grow until leaves are pure or below min_samples_split
    int min_samples_split = 2;
};

// Weighted class-probability impurities.
inline double gini_impurity(const std::vector<double>& class_weights) {
    double total = 0.0;
    for (double w : class_weights) total += w;
    if (total <= 0.0) return 0.0;
    double sum_sq = 0.0;
    for (double w : class_weights) {
        const double p = w / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

inline double entropy_impurity(const std::vector<double>& class_weights) {
    double total = 0.0;
    for (double w : class_weights) total += w;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double w : class_weights) {
        if (w <= 0.0) continue;
        const double p = w / total;
        h -= p * std::log2(p);
    }
    return h;
}

inline double impurity(SplitCriterion criterion, const std::vector<double>& class_weights) {
    return criterion == SplitCriterion::Gini ? gini_impurity(class_weights)
                                             : entropy_impurity(class_weights);
}

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> distribution;  // leaf class probabilities
};

struct DecisionTreeModel {
    int n_features = 0;
    int n_classes = 0;
    SplitCriterion criterion = SplitCriterion::Gini;
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int leaf_for(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        int node = 0;
        while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
            const TreeNode& n = nodes[static_cast<std::size_t>(node)];
            node = x(n.feature) <= n.threshold ? n.left : n.right;
        }
        return node;
    }
};

namespace detail {

struct BestSplit {
    bool valid = false;
    double decrease = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

// Greedy exhaustive search over (feature, midpoint) candidates for one node.
// Ties in impurity decrease resolve to the lower feature index, then the
// lower threshold, which keeps trees deterministic.
class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, const std::vector<int>& y, int n_classes,
                const TreeParams& params, const std::vector<double>& weights,
                int max_features, Rng* feature_rng, const FitContext* ctx)
        : X_(X), y_(y), n_classes_(n_classes), params_(params), weights_(weights),
          max_features_(max_features), feature_rng_(feature_rng), ctx_(ctx) {}

    DecisionTreeModel build(std::vector<std::size_t> rows) {
        DecisionTreeModel model;
        model.n_features = static_cast<int>(X_.cols());
        model.n_classes = n_classes_;
        model.criterion = params_.criterion;
        model.nodes.emplace_back();
        grow(model, 0, std::move(rows), 0);
        return model;
    }

private:
    void grow(DecisionTreeModel& model, int node_index, std::vector<std::size_t> rows,
              int depth) {
        check_deadline(ctx_);
        std::vector<double> counts(static_cast<std::size_t>(n_classes_), 0.0);
        double total = 0.0;
        for (std::size_t r : rows) {
            const double w = weights_.empty() ? 1.0 : weights_[r];
            counts[static_cast<std::size_t>(y_[r])] += w;
            total += w;
        }

        const double node_impurity = impurity(params_.criterion, counts);
        const bool depth_capped = params_.max_depth >= 0 && depth >= params_.max_depth;
        BestSplit best;
        if (!depth_capped && node_impurity > 0.0 &&
            rows.size() >= static_cast<std::size_t>(params_.min_samples_split)) {
            best = find_best_split(rows, counts, total, node_impurity);
        }

        if (!best.valid) {
            make_leaf(model, node_index, counts, total);
            return;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            if (X_(static_cast<Eigen::Index>(r), best.feature) <= best.threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const int left = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        const int right = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        TreeNode& node = model.nodes[static_cast<std::size_t>(node_index)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        grow(model, left, std::move(left_rows), depth + 1);
        grow(model, right, std::move(right_rows), depth + 1);
    }

    void make_leaf(DecisionTreeModel& model, int node_index, const std::vector<double>& counts,
                   double total) {
        TreeNode& node = model.nodes[static_cast<std::size_t>(node_index)];
        node.feature = -1;
        node.distribution.resize(counts.size());
        for (std::size_t c = 0; c < counts.size(); ++c)
            node.distribution[c] = total > 0.0 ? counts[c] / total : 0.0;
    }

    std::vector<int> candidate_features() {
        const int d = static_cast<int>(X_.cols());
        std::vector<int> all(static_cast<std::size_t>(d));
        std::iota(all.begin(), all.end(), 0);
        if (max_features_ <= 0 || max_features_ >= d || feature_rng_ == nullptr) return all;
        // partial Fisher-Yates, then sorted so the tie rule stays by index
        for (int i = 0; i < max_features_; ++i) {
            const auto j =
                i + static_cast<int>(feature_rng_->uniform_below(static_cast<std::uint64_t>(d - i)));
            std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
        }
        all.resize(static_cast<std::size_t>(max_features_));
        std::sort(all.begin(), all.end());
        return all;
    }

    BestSplit find_best_split(const std::vector<std::size_t>& rows,
                              const std::vector<double>& total_counts, double total_weight,
                              double node_impurity) {
        BestSplit best;
        const auto features = candidate_features();

        std::vector<std::pair<double, std::size_t>> sorted(rows.size());
        std::vector<double> left(static_cast<std::size_t>(n_classes_));
        std::vector<double> right(static_cast<std::size_t>(n_classes_));
        for (int f : features) {
            for (std::size_t i = 0; i < rows.size(); ++i)
                sorted[i] = {X_(static_cast<Eigen::Index>(rows[i]), f), rows[i]};
            std::sort(sorted.begin(), sorted.end());

            std::fill(left.begin(), left.end(), 0.0);
            right = total_counts;
            double left_weight = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const std::size_t r = sorted[i].second;
                const double w = weights_.empty() ? 1.0 : weights_[r];
                left[static_cast<std::size_t>(y_[r])] += w;
                right[static_cast<std::size_t>(y_[r])] -= w;
                left_weight += w;
                if (sorted[i + 1].first <= sorted[i].first) continue;  // not a boundary
                if (left_weight <= 0.0 || total_weight - left_weight <= 0.0) continue;

                const double threshold = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
                const double child =
                    (left_weight * impurity(params_.criterion, left) +
                     (total_weight - left_weight) * impurity(params_.criterion, right)) /
                    total_weight;
                const double decrease = node_impurity - child;
                if (decrease <= 1e-12) continue;
                const bool better =
                    !best.valid || decrease > best.decrease + 1e-15 ||
                    (std::abs(decrease - best.decrease) <= 1e-15 &&
                     (f < best.feature || (f == best.feature && threshold < best.threshold)));
                if (better) {
                    best.valid = true;
                    best.decrease = decrease;
                    best.feature = f;
                    best.threshold = threshold;
                }
            }
        }
        return best;
    }

    const Matrix& X_;
    const std::vector<int>& y_;
    int n_classes_;
    TreeParams params_;
    const std::vector<double>& weights_;
    int max_features_;
    Rng* feature_rng_;
    const FitContext* ctx_;
};

}  // namespace detail

inline DecisionTreeModel fit_decision_tree(const Matrix& X, const std::vector<int>& y,
                                           int n_classes, const TreeParams& params = {},
                                           const std::vector<double>& sample_weights = {},
                                           const FitContext* ctx = nullptr) {
    if (X.rows() == 0) throw EmptyTrainingSet("decision tree needs at least one row");
    detail::TreeBuilder builder(X, y, n_classes, params, sample_weights, -1, nullptr, ctx);
    std::vector<std::size_t> rows(static_cast<std::size_t>(X.rows()));
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return builder.build(std::move(rows));
}

inline PredictionBatch tree_predict(const DecisionTreeModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    PredictionBatch out;
    out.labels.resize(static_cast<std::size_t>(X.rows()));
    Matrix scores(X.rows(), m.n_classes);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const int leaf = m.leaf_for(X.row(i));
        const auto& dist = m.nodes[static_cast<std::size_t>(leaf)].distribution;
        for (int c = 0; c < m.n_classes; ++c) scores(i, c) = dist[static_cast<std::size_t>(c)];
        out.labels[static_cast<std::size_t>(i)] = detail::argmax_row(scores, i);
    }
    out.scores = std::move(scores);
    return out;
}

}  // namespace netml
