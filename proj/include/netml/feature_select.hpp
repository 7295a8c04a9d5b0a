#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "netml/dataset.hpp"

namespace netml {

struct Correlation {
    double r = 0.0;
    bool degenerate = false;  // either input had zero variance
};

// Pearson correlation coefficient. Zero-variance inputs are flagged and
// score 0 rather than dividing by zero.
inline Correlation pearson(const Vector& x, const Vector& y) {
    if (x.size() != y.size())
        throw LengthMismatch("pearson: |x| = " + std::to_string(x.size()) + ", |y| = " +
                             std::to_string(y.size()));
    if (x.size() < 2) throw LengthMismatch("pearson needs at least 2 samples");

    const double mx = x.mean();
    const double my = y.mean();
    const Eigen::ArrayXd dx = x.array() - mx;
    const Eigen::ArrayXd dy = y.array() - my;
    const double sxx = (dx * dx).sum();
    const double syy = (dy * dy).sum();
    if (sxx == 0.0 || syy == 0.0) return {0.0, true};
    const double r = (dx * dy).sum() / (std::sqrt(sxx) * std::sqrt(syy));
    return {std::clamp(r, -1.0, 1.0), false};
}

struct CorrelationScore {
    std::string feature;
    double r = 0.0;       // signed coefficient against the task target
    double score = 0.0;   // |r|, the ranking key
    bool degenerate = false;
};

struct RankedFeatures {
    std::vector<CorrelationScore> entries;  // score descending, ties by name ascending

    std::size_t size() const { return entries.size(); }
    const CorrelationScore& at(std::size_t rank) const { return entries[rank]; }
};

enum class MulticlassRanking { BinaryTarget, OneVsRest };

// Scores each feature by |r| against the task target: the anomaly indicator
// for binary tasks, and for multiclass the maximum |r| over per-class
// one-vs-rest indicators (coding-free, and equal to the binary score when
// there are two classes).
inline RankedFeatures rank_features(const Dataset& d, TaskKind task,
                                    MulticlassRanking mode = MulticlassRanking::OneVsRest) {
    const std::size_t n = d.n_rows();
    std::vector<Vector> targets;
    if (task == TaskKind::Binary || mode == MulticlassRanking::BinaryTarget) {
        Vector t(static_cast<Eigen::Index>(n));
        for (std::size_t r = 0; r < n; ++r) t(static_cast<Eigen::Index>(r)) = d.binary_labels[r];
        targets.push_back(std::move(t));
    } else {
        for (std::size_t c = 0; c < d.n_classes(); ++c) {
            Vector t(static_cast<Eigen::Index>(n));
            for (std::size_t r = 0; r < n; ++r)
                t(static_cast<Eigen::Index>(r)) =
                    d.multiclass_labels[r] == static_cast<int>(c) ? 1.0 : 0.0;
            targets.push_back(std::move(t));
        }
    }

    RankedFeatures ranked;
    ranked.entries.reserve(d.n_features());
    for (const auto& f : d.schema) {
        const Vector col = d.matrix.col(static_cast<Eigen::Index>(f.index));
        CorrelationScore best{f.name, 0.0, 0.0, true};
        for (const auto& t : targets) {
            const Correlation c = pearson(col, t);
            if (!c.degenerate) best.degenerate = false;
            if (std::abs(c.r) > best.score) {
                best.r = c.r;
                best.score = std::abs(c.r);
            }
        }
        ranked.entries.push_back(std::move(best));
    }
    std::sort(ranked.entries.begin(), ranked.entries.end(),
              [](const CorrelationScore& a, const CorrelationScore& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.feature < b.feature;
              });
    return ranked;
}

struct FeatureSubset {
    std::vector<std::string> names;  // first `size` entries of the ranking
    std::size_t size = 0;
};

inline FeatureSubset select_top(const RankedFeatures& ranked, std::size_t size) {
    if (size < 1 || size > ranked.size())
        throw SizeOutOfRange("subset size " + std::to_string(size) + " outside [1, " +
                             std::to_string(ranked.size()) + "]");
    FeatureSubset subset;
    subset.size = size;
    subset.names.reserve(size);
    for (std::size_t i = 0; i < size; ++i) subset.names.push_back(ranked.entries[i].feature);
    return subset;
}

// Column indices of a subset within a dataset, in ranked order.
inline std::vector<std::size_t> subset_columns(const Dataset& d, const FeatureSubset& subset) {
    std::vector<std::size_t> cols;
    cols.reserve(subset.names.size());
    for (const auto& name : subset.names) {
        const int idx = d.feature_index(name);
        if (idx < 0) throw DimensionMismatch("feature '" + name + "' not in dataset schema");
        cols.push_back(static_cast<std::size_t>(idx));
    }
    return cols;
}

}  // namespace netml
