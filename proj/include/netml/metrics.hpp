#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netml/error.hpp"

namespace netml {

// K x K count matrix; rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::int64_t> counts;  // row-major K*K

    std::int64_t& at(std::size_t truth, std::size_t predicted) {
        return counts[truth * n_classes + predicted];
    }
    std::int64_t at(std::size_t truth, std::size_t predicted) const {
        return counts[truth * n_classes + predicted];
    }
    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
    std::int64_t trace() const {
        std::int64_t t = 0;
        for (std::size_t c = 0; c < n_classes; ++c) t += at(c, c);
        return t;
    }
};

inline ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 std::size_t n_classes) {
    if (y_true.size() != y_pred.size())
        throw LengthMismatch("confusion: " + std::to_string(y_true.size()) + " true vs " +
                             std::to_string(y_pred.size()) + " predicted labels");
    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(n_classes * n_classes, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || static_cast<std::size_t>(t) >= n_classes)
            throw LabelOutOfRange("row " + std::to_string(i) + ": true label " +
                                  std::to_string(t));
        if (p < 0 || static_cast<std::size_t>(p) >= n_classes)
            throw LabelOutOfRange("row " + std::to_string(i) + ": predicted label " +
                                  std::to_string(p));
        ++cm.at(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
    }
    return cm;
}

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;
    bool precision_undefined = false;  // 0/0 reported as 0, flagged
    bool recall_undefined = false;
};

struct MetricsReport {
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    // support-weighted aggregates (the headline numbers) plus macro means
    double precision_weighted = 0.0;
    double recall_weighted = 0.0;
    double f1_weighted = 0.0;
    double precision_macro = 0.0;
    double recall_macro = 0.0;
    double f1_macro = 0.0;
};

// One-vs-rest precision/recall/F1 per class with 0/0 defined as 0, accuracy
// as trace over total, and both weighted and macro aggregates.
inline MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total <= 0) throw EmptyMatrix("confusion matrix has no observations");

    MetricsReport report;
    report.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    report.per_class.resize(cm.n_classes);

    double wp = 0.0, wr = 0.0, wf = 0.0, mp = 0.0, mr = 0.0, mf = 0.0;
    for (std::size_t c = 0; c < cm.n_classes; ++c) {
        std::int64_t tp = cm.at(c, c);
        std::int64_t fn = 0, fp = 0;
        for (std::size_t o = 0; o < cm.n_classes; ++o) {
            if (o == c) continue;
            fn += cm.at(c, o);
            fp += cm.at(o, c);
        }
        ClassMetrics& m = report.per_class[c];
        m.support = tp + fn;
        if (tp + fp > 0) {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        } else {
            m.precision_undefined = true;
        }
        if (tp + fn > 0) {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        } else {
            m.recall_undefined = true;
        }
        if (m.precision + m.recall > 0.0)
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);

        const double w = static_cast<double>(m.support) / static_cast<double>(total);
        wp += w * m.precision;
        wr += w * m.recall;
        wf += w * m.f1;
        mp += m.precision;
        mr += m.recall;
        mf += m.f1;
    }
    report.precision_weighted = wp;
    report.recall_weighted = wr;
    report.f1_weighted = wf;
    const double k = static_cast<double>(cm.n_classes);
    report.precision_macro = mp / k;
    report.recall_macro = mr / k;
    report.f1_macro = mf / k;
    return report;
}

}  // namespace netml
