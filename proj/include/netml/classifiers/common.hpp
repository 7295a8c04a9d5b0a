#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "netml/dataset.hpp"
#include "netml/rng.hpp"

namespace netml {

struct PredictionBatch {
    std::vector<int> labels;
    std::optional<Matrix> scores;  // per-class probabilities or decision values
};

// Cooperative deadline for long-running fits; checked at iteration
// boundaries so a stuck grid cell can be marked timed-out.
struct FitContext {
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void check() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw CellTimeout("fit exceeded its wall-clock budget");
    }
};

inline void check_deadline(const FitContext* ctx) {
    if (ctx) ctx->check();
}

namespace detail {

// Lowest index wins ties everywhere a class argmax is taken.
inline int argmax_row(const Matrix& scores, Eigen::Index row) {
    int best = 0;
    double best_value = scores(row, 0);
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
        if (scores(row, c) > best_value) {
            best_value = scores(row, c);
            best = static_cast<int>(c);
        }
    }
    return best;
}

inline std::vector<int> argmax_labels(const Matrix& scores) {
    std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index r = 0; r < scores.rows(); ++r)
        labels[static_cast<std::size_t>(r)] = argmax_row(scores, r);
    return labels;
}

inline std::vector<std::int64_t> class_counts(const std::vector<int>& y, int n_classes) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (int label : y) ++counts[static_cast<std::size_t>(label)];
    return counts;
}

inline void require_features(Eigen::Index expected, Eigen::Index got) {
    if (expected != got)
        throw DimensionMismatch("model expects " + std::to_string(expected) +
                                " features, input has " + std::to_string(got));
}

}  // namespace detail

// Seeded stratified subsample of at most `cap` rows, preserving class
// proportions. Row order within the result is ascending for determinism.
inline std::vector<std::size_t> stratified_subsample(const std::vector<int>& y, int n_classes,
                                                     std::size_t cap, Rng rng) {
    const std::size_t n = y.size();
    if (n <= cap) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return all;
    }
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(y[i])].push_back(i);

    // Largest-remainder quotas; every present class keeps at least one row.
    std::vector<std::size_t> quota(by_class.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].empty()) continue;
        const double exact =
            static_cast<double>(cap) * static_cast<double>(by_class[c].size()) /
            static_cast<double>(n);
        quota[c] = std::max<std::size_t>(1, static_cast<std::size_t>(exact));
        quota[c] = std::min(quota[c], by_class[c].size());
        assigned += quota[c];
        remainders.push_back({exact - static_cast<double>(quota[c]), c});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (const auto& [frac, c] : remainders) {
        if (assigned >= cap) break;
        if (quota[c] < by_class[c].size()) {
            ++quota[c];
            ++assigned;
        }
    }

    std::vector<std::size_t> picked;
    picked.reserve(cap);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].empty()) continue;
        auto pool = by_class[c];
        Rng class_rng = rng.fork(c);
        class_rng.shuffle(pool);
        for (std::size_t i = 0; i < quota[c]; ++i) picked.push_back(pool[i]);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace netml
