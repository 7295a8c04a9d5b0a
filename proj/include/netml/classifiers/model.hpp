#pragma once

#include <string>
#include <variant>

#include "netml/classifiers/adaboost.hpp"
#include "netml/classifiers/decision_tree.hpp"
#include "netml/classifiers/gbt.hpp"
#include "netml/classifiers/knn.hpp"
#include "netml/classifiers/lda.hpp"
#include "netml/classifiers/logistic.hpp"
#include "netml/classifiers/naive_bayes.hpp"
#include "netml/classifiers/random_forest.hpp"
#include "netml/classifiers/sgd.hpp"
#include "netml/classifiers/svm.hpp"
#include "netml/mlp.hpp"

namespace netml {

enum class ModelFamily {
    NaiveBayes,
    Lda,
    Knn,
    DecisionTree,
    RandomForest,
    Svm,
    LogisticRegression,
    AdaBoost,
    GradientBoosting,
    Sgd,
    Mlp,
};

// Alternative order must match ModelFamily; the variant index is the tag.
using HyperParams = std::variant<NbParams, LdaParams, KnnParams, TreeParams, ForestParams,
                                 SvmParams, LogRegParams, AdaBoostParams, GbtParams, SgdParams,
                                 MlpConfig>;

struct ModelSpec {
    HyperParams hyper = NbParams{};
    Seed seed;

    ModelFamily family() const { return static_cast<ModelFamily>(hyper.index()); }
};

inline const char* family_key(ModelFamily family) {
    switch (family) {
        case ModelFamily::NaiveBayes: return "nb";
        case ModelFamily::Lda: return "lda";
        case ModelFamily::Knn: return "knn";
        case ModelFamily::DecisionTree: return "dt";
        case ModelFamily::RandomForest: return "rf";
        case ModelFamily::Svm: return "svm";
        case ModelFamily::LogisticRegression: return "lr";
        case ModelFamily::AdaBoost: return "adaboost";
        case ModelFamily::GradientBoosting: return "xgboost";
        case ModelFamily::Sgd: return "sgd";
        case ModelFamily::Mlp: return "ann";
    }
    return "?";
}

inline const char* family_display_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::NaiveBayes: return "NB";
        case ModelFamily::Lda: return "LDA";
        case ModelFamily::Knn: return "KNN";
        case ModelFamily::DecisionTree: return "DT";
        case ModelFamily::RandomForest: return "RF";
        case ModelFamily::Svm: return "SVM";
        case ModelFamily::LogisticRegression: return "LR";
        case ModelFamily::AdaBoost: return "AdaBoost";
        case ModelFamily::GradientBoosting: return "XGBoost";
        case ModelFamily::Sgd: return "SGD";
        case ModelFamily::Mlp: return "ANN";
    }
    return "?";
}

inline ModelFamily family_from_key(const std::string& key) {
    for (int f = 0; f <= static_cast<int>(ModelFamily::Mlp); ++f)
        if (key == family_key(static_cast<ModelFamily>(f)))
            return static_cast<ModelFamily>(f);
    if (key == "gbt") return ModelFamily::GradientBoosting;
    if (key == "mlp") return ModelFamily::Mlp;
    throw ConfigError("unknown model family '" + key + "'");
}

inline HyperParams default_hyper(ModelFamily family) {
    switch (family) {
        case ModelFamily::NaiveBayes: return NbParams{};
        case ModelFamily::Lda: return LdaParams{};
        case ModelFamily::Knn: return KnnParams{};
        case ModelFamily::DecisionTree: return TreeParams{};
        case ModelFamily::RandomForest: return ForestParams{};
        case ModelFamily::Svm: return SvmParams{};
        case ModelFamily::LogisticRegression: return LogRegParams{};
        case ModelFamily::AdaBoost: return AdaBoostParams{};
        case ModelFamily::GradientBoosting: return GbtParams{};
        case ModelFamily::Sgd: return SgdParams{};
        case ModelFamily::Mlp: return MlpConfig{};
    }
    return NbParams{};
}

// Fitted parameters for every family; alternative order matches ModelFamily.
struct TrainedModel {
    std::variant<GaussianNbModel, LdaModel, KnnModel, DecisionTreeModel, RandomForestModel,
                 SvmModel, LogisticModel, AdaBoostModel, GbtModel, SgdModel, MlpModel>
        value;

    ModelFamily family() const { return static_cast<ModelFamily>(value.index()); }
};

inline TrainedModel fit_model(const Matrix& X, const std::vector<int>& y, int n_classes,
                              const ModelSpec& spec, const FitContext* ctx = nullptr) {
    TrainedModel model;
    std::visit(
        [&](const auto& hyper) {
            using T = std::decay_t<decltype(hyper)>;
            if constexpr (std::is_same_v<T, NbParams>) {
                model.value = fit_gaussian_nb(X, y, n_classes, hyper);
            } else if constexpr (std::is_same_v<T, LdaParams>) {
                model.value = fit_lda(X, y, n_classes, hyper);
            } else if constexpr (std::is_same_v<T, KnnParams>) {
                if (hyper.train_cap > 0 && static_cast<std::size_t>(X.rows()) > hyper.train_cap) {
                    const auto rows = stratified_subsample(y, n_classes, hyper.train_cap,
                                                           Rng(spec.seed).fork(0x25b));
                    KnnModel knn = fit_knn(take_rows(X, rows), take(y, rows), n_classes, hyper);
                    knn.subsampled = true;
                    model.value = std::move(knn);
                } else {
                    model.value = fit_knn(X, y, n_classes, hyper);
                }
            } else if constexpr (std::is_same_v<T, TreeParams>) {
                model.value = fit_decision_tree(X, y, n_classes, hyper, {}, ctx);
            } else if constexpr (std::is_same_v<T, ForestParams>) {
                model.value = fit_random_forest(X, y, n_classes, hyper, spec.seed, ctx);
            } else if constexpr (std::is_same_v<T, SvmParams>) {
                model.value = fit_svm_rbf(X, y, n_classes, hyper, spec.seed, ctx);
            } else if constexpr (std::is_same_v<T, LogRegParams>) {
                model.value = fit_logistic_regression(X, y, n_classes, hyper, ctx);
            } else if constexpr (std::is_same_v<T, AdaBoostParams>) {
                model.value = fit_adaboost(X, y, n_classes, hyper, ctx);
            } else if constexpr (std::is_same_v<T, GbtParams>) {
                model.value = fit_gbt(X, y, n_classes, hyper, ctx);
            } else if constexpr (std::is_same_v<T, SgdParams>) {
                model.value = fit_sgd_hinge(X, y, n_classes, hyper, spec.seed, ctx);
            } else {
                MlpConfig config = hyper;
                config.seed = spec.seed;
                model.value = fit_mlp(X, y, n_classes, config, ctx);
            }
        },
        spec.hyper);
    return model;
}

inline PredictionBatch predict(const TrainedModel& model, const Matrix& X,
                               const FitContext* ctx = nullptr) {
    return std::visit(
        [&](const auto& m) -> PredictionBatch {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianNbModel>) return nb_predict(m, X);
            else if constexpr (std::is_same_v<T, LdaModel>) return lda_predict(m, X);
            else if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(m, X, ctx);
            else if constexpr (std::is_same_v<T, DecisionTreeModel>) return tree_predict(m, X);
            else if constexpr (std::is_same_v<T, RandomForestModel>) return forest_predict(m, X);
            else if constexpr (std::is_same_v<T, SvmModel>) return svm_predict(m, X);
            else if constexpr (std::is_same_v<T, LogisticModel>) return logistic_predict(m, X);
            else if constexpr (std::is_same_v<T, AdaBoostModel>) return adaboost_predict(m, X);
            else if constexpr (std::is_same_v<T, GbtModel>) return gbt_predict(m, X);
            else if constexpr (std::is_same_v<T, SgdModel>) return sgd_predict(m, X);
            else return mlp_predict(m, X);
        },
        model.value);
}

inline bool model_subsampled(const TrainedModel& model) {
    if (const auto* svm = std::get_if<SvmModel>(&model.value)) return svm->subsampled;
    if (const auto* knn = std::get_if<KnnModel>(&model.value)) return knn->subsampled;
    return false;
}

inline bool model_converged(const TrainedModel& model) {
    if (const auto* svm = std::get_if<SvmModel>(&model.value)) return svm->converged;
    if (const auto* lr = std::get_if<LogisticModel>(&model.value)) return lr->converged;
    if (const auto* sgd = std::get_if<SgdModel>(&model.value)) return sgd->converged;
    return true;
}

inline const TrainingCurve* model_curve(const TrainedModel& model) {
    if (const auto* mlp = std::get_if<MlpModel>(&model.value)) return &mlp->curve;
    return nullptr;
}

}  // namespace netml
