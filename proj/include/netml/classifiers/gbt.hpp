#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netml/classifiers/common.hpp"
#include "netml/classifiers/logistic.hpp"

namespace netml {

struct GbtParams {
    int rounds = 100;
    int max_depth = 6;
    double eta = 0.3;                // shrinkage on leaf contributions
    double lambda = 1.0;             // L2 on leaf weights
    double alpha = 0.0;              // L1 soft-threshold on leaf sums
    double min_child_weight = 1.0;   // minimum hessian mass per child
};

struct RegressionTreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double weight = 0.0;
};

struct RegressionTree {
    std::vector<RegressionTreeNode> nodes;

    double value_for(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
        int node = 0;
        while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
            const auto& n = nodes[static_cast<std::size_t>(node)];
            node = x(n.feature) <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(node)].weight;
    }
};

// Boosted regression trees fit to first/second-order gradients of the
// logistic (binary) or softmax (multiclass) loss; leaf weights are
// -G/(H + lambda) after the L1 soft-threshold.
struct GbtModel {
    int n_features = 0;
    int n_classes = 0;
    double base_score = 0.5;
    double eta = 0.3;
    std::vector<std::vector<RegressionTree>> rounds;  // per round: 1 (binary) or K trees
};

namespace detail {

inline double l1_soft(double g, double alpha) {
    if (g > alpha) return g - alpha;
    if (g < -alpha) return g + alpha;
    return 0.0;
}

inline double leaf_score(double g, double h, double lambda, double alpha) {
    const double soft = l1_soft(g, alpha);
    return soft * soft / (h + lambda);
}

inline double leaf_weight(double g, double h, double lambda, double alpha) {
    return -l1_soft(g, alpha) / (h + lambda);
}

// Level-wise exact greedy builder. Every feature is scanned once per level
// in globally pre-sorted order, accumulating per-leaf left statistics, so a
// tree costs O(depth * features * rows).
class RegressionTreeBuilder {
public:
    RegressionTreeBuilder(const Matrix& X, const std::vector<std::vector<int>>& sorted_rows,
                          const GbtParams& params)
        : X_(X), sorted_rows_(sorted_rows), params_(params) {}

    RegressionTree build(const Vector& g, const Vector& h) const {
        const std::size_t n = static_cast<std::size_t>(X_.rows());
        RegressionTree tree;
        tree.nodes.emplace_back();

        std::vector<int> leaf_of_row(n, 0);
        struct LeafStats {
            double g_total = 0.0, h_total = 0.0;
            std::size_t count = 0;
            bool active = true;
            // best split found during the level scan
            double best_gain = 0.0;
            int best_feature = -1;
            double best_threshold = 0.0;
        };
        std::vector<LeafStats> stats(1);
        for (std::size_t r = 0; r < n; ++r) {
            stats[0].g_total += g(static_cast<Eigen::Index>(r));
            stats[0].h_total += h(static_cast<Eigen::Index>(r));
            ++stats[0].count;
        }

        for (int depth = 0; depth < params_.max_depth; ++depth) {
            bool any_active = false;
            for (auto& s : stats) {
                if (s.active) {
                    any_active = true;
                    s.best_gain = 0.0;
                    s.best_feature = -1;
                }
            }
            if (!any_active) break;

            scan_level(tree, stats, leaf_of_row, g, h);

            bool split_any = false;
            const std::size_t level_nodes = stats.size();
            for (std::size_t node = 0; node < level_nodes; ++node) {
                if (!stats[node].active) continue;
                if (stats[node].best_feature < 0 || stats[node].best_gain <= 1e-12) {
                    finalize_leaf(tree, stats, static_cast<int>(node));
                    continue;
                }
                split_any = true;
                const int left = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                const int right = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                tree.nodes[node].feature = stats[node].best_feature;
                tree.nodes[node].threshold = stats[node].best_threshold;
                tree.nodes[node].left = left;
                tree.nodes[node].right = right;
                stats[node].active = false;
                stats.resize(tree.nodes.size());
            }
            if (!split_any) break;

            for (std::size_t r = 0; r < n; ++r) {
                int node = leaf_of_row[r];
                const auto& tn = tree.nodes[static_cast<std::size_t>(node)];
                if (tn.feature < 0) continue;
                node = X_(static_cast<Eigen::Index>(r), tn.feature) <= tn.threshold ? tn.left
                                                                                    : tn.right;
                leaf_of_row[r] = node;
                auto& s = stats[static_cast<std::size_t>(node)];
                s.g_total += g(static_cast<Eigen::Index>(r));
                s.h_total += h(static_cast<Eigen::Index>(r));
                ++s.count;
            }
        }
        for (std::size_t node = 0; node < stats.size(); ++node)
            if (stats[node].active) finalize_leaf(tree, stats, static_cast<int>(node));
        return tree;
    }

private:
    template <typename Stats>
    void finalize_leaf(RegressionTree& tree, std::vector<Stats>& stats, int node) const {
        tree.nodes[static_cast<std::size_t>(node)].feature = -1;
        tree.nodes[static_cast<std::size_t>(node)].weight =
            leaf_weight(stats[static_cast<std::size_t>(node)].g_total,
                        stats[static_cast<std::size_t>(node)].h_total, params_.lambda,
                        params_.alpha);
        stats[static_cast<std::size_t>(node)].active = false;
    }

    template <typename Stats>
    void scan_level(RegressionTree& tree, std::vector<Stats>& stats,
                    const std::vector<int>& leaf_of_row, const Vector& g, const Vector& h) const {
        const std::size_t n_leaves = stats.size();
        std::vector<double> g_left(n_leaves), h_left(n_leaves), prev_value(n_leaves);
        std::vector<std::size_t> count_left(n_leaves);
        std::vector<char> seen(n_leaves);

        for (int f = 0; f < static_cast<int>(X_.cols()); ++f) {
            std::fill(g_left.begin(), g_left.end(), 0.0);
            std::fill(h_left.begin(), h_left.end(), 0.0);
            std::fill(count_left.begin(), count_left.end(), std::size_t{0});
            std::fill(seen.begin(), seen.end(), 0);

            for (int row : sorted_rows_[static_cast<std::size_t>(f)]) {
                const std::size_t leaf = static_cast<std::size_t>(leaf_of_row[static_cast<std::size_t>(row)]);
                auto& s = stats[leaf];
                if (!s.active) continue;
                const double value = X_(row, f);
                if (seen[leaf] && value > prev_value[leaf] && count_left[leaf] > 0 &&
                    count_left[leaf] < s.count) {
                    const double gl = g_left[leaf], hl = h_left[leaf];
                    const double gr = s.g_total - gl, hr = s.h_total - hl;
                    if (hl >= params_.min_child_weight && hr >= params_.min_child_weight) {
                        const double gain =
                            0.5 * (leaf_score(gl, hl, params_.lambda, params_.alpha) +
                                   leaf_score(gr, hr, params_.lambda, params_.alpha) -
                                   leaf_score(s.g_total, s.h_total, params_.lambda, params_.alpha));
                        const double threshold = prev_value[leaf] + 0.5 * (value - prev_value[leaf]);
                        const bool better =
                            gain > s.best_gain + 1e-15 ||
                            (s.best_feature >= 0 && std::abs(gain - s.best_gain) <= 1e-15 &&
                             (f < s.best_feature ||
                              (f == s.best_feature && threshold < s.best_threshold)));
                        if (better && gain > 1e-12) {
                            s.best_gain = gain;
                            s.best_feature = f;
                            s.best_threshold = threshold;
                        }
                    }
                }
                g_left[leaf] += g(row);
                h_left[leaf] += h(row);
                ++count_left[leaf];
                prev_value[leaf] = value;
                seen[leaf] = 1;
            }
        }
        (void)tree;
    }

    const Matrix& X_;
    const std::vector<std::vector<int>>& sorted_rows_;
    const GbtParams& params_;
};

inline std::vector<std::vector<int>> argsort_columns(const Matrix& X) {
    std::vector<std::vector<int>> sorted(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
        auto& idx = sorted[static_cast<std::size_t>(f)];
        idx.resize(static_cast<std::size_t>(X.rows()));
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&X, f](int a, int b) { return X(a, f) < X(b, f); });
    }
    return sorted;
}

}  // namespace detail

inline GbtModel fit_gbt(const Matrix& X, const std::vector<int>& y, int n_classes,
                        const GbtParams& params = {}, const FitContext* ctx = nullptr) {
    if (n_classes < 2) throw ConfigError("gradient boosting needs at least 2 classes");
    const Eigen::Index n = X.rows();

    GbtModel model;
    model.n_features = static_cast<int>(X.cols());
    model.n_classes = n_classes;
    model.eta = params.eta;

    const auto sorted_rows = detail::argsort_columns(X);
    detail::RegressionTreeBuilder builder(X, sorted_rows, params);

    if (n_classes == 2) {
        Vector margins = Vector::Zero(n);  // logit(base_score) with base 0.5
        Vector g(n), h(n);
        for (int round = 0; round < params.rounds; ++round) {
            check_deadline(ctx);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double p = sigmoid(margins(i));
                g(i) = p - static_cast<double>(y[static_cast<std::size_t>(i)]);
                h(i) = std::max(p * (1.0 - p), 1e-16);
            }
            RegressionTree tree = builder.build(g, h);
            for (Eigen::Index i = 0; i < n; ++i)
                margins(i) += params.eta * tree.value_for(X.row(i));
            model.rounds.push_back({std::move(tree)});
        }
    } else {
        Matrix margins = Matrix::Zero(n, n_classes);
        Vector g(n), h(n);
        for (int round = 0; round < params.rounds; ++round) {
            check_deadline(ctx);
            Matrix probs(n, n_classes);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double mx = margins.row(i).maxCoeff();
                const Eigen::ArrayXd e = (margins.row(i).array() - mx).exp();
                probs.row(i) = e / e.sum();
            }
            std::vector<RegressionTree> trees;
            trees.reserve(static_cast<std::size_t>(n_classes));
            for (int k = 0; k < n_classes; ++k) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double p = probs(i, k);
                    g(i) = p - (y[static_cast<std::size_t>(i)] == k ? 1.0 : 0.0);
                    h(i) = std::max(p * (1.0 - p), 1e-16);
                }
                trees.push_back(builder.build(g, h));
            }
            for (Eigen::Index i = 0; i < n; ++i)
                for (int k = 0; k < n_classes; ++k)
                    margins(i, k) += params.eta * trees[static_cast<std::size_t>(k)].value_for(X.row(i));
            model.rounds.push_back(std::move(trees));
        }
    }
    return model;
}

inline Matrix gbt_margins(const GbtModel& m, const Matrix& X) {
    const int width = m.n_classes == 2 ? 1 : m.n_classes;
    Matrix margins = Matrix::Zero(X.rows(), width);
    for (const auto& round : m.rounds)
        for (int k = 0; k < width; ++k)
            for (Eigen::Index i = 0; i < X.rows(); ++i)
                margins(i, k) += m.eta * round[static_cast<std::size_t>(k)].value_for(X.row(i));
    return margins;
}

inline PredictionBatch gbt_predict(const GbtModel& m, const Matrix& X) {
    detail::require_features(m.n_features, X.cols());
    const Matrix margins = gbt_margins(m, X);
    Matrix probs(X.rows(), m.n_classes);
    if (m.n_classes == 2) {
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double p = sigmoid(margins(i, 0));
            probs(i, 0) = 1.0 - p;
            probs(i, 1) = p;
        }
    } else {
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double mx = margins.row(i).maxCoeff();
            const Eigen::ArrayXd e = (margins.row(i).array() - mx).exp();
            probs.row(i) = e / e.sum();
        }
    }
    PredictionBatch out;
    out.labels = detail::argmax_labels(probs);
    out.scores = std::move(probs);
    return out;
}

}  // namespace netml
