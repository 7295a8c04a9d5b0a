#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "netml/classifiers/model.hpp"
#include "netml/preprocess.hpp"

namespace netml {

using Json = nlohmann::json;

inline constexpr int kModelFormatVersion = 1;

namespace io {

inline Json to_json(const Matrix& m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const Json& j) {
    Matrix m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != m.rows() * m.cols())
        throw CorruptFile("matrix payload size mismatch");
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = data[static_cast<std::size_t>(k++)];
    return m;
}

inline Json to_json(const Vector& v) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
    return data;
}

inline Vector vector_from_json(const Json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)];
    return v;
}

inline Json tree_to_json(const DecisionTreeModel& t) {
    Json nodes = Json::array();
    for (const auto& n : t.nodes)
        nodes.push_back(Json{{"f", n.feature},
                             {"t", n.threshold},
                             {"l", n.left},
                             {"r", n.right},
                             {"dist", n.distribution}});
    return Json{{"n_features", t.n_features},
                {"n_classes", t.n_classes},
                {"criterion", t.criterion == SplitCriterion::Gini ? "gini" : "entropy"},
                {"nodes", std::move(nodes)}};
}

inline DecisionTreeModel tree_from_json(const Json& j) {
    DecisionTreeModel t;
    t.n_features = j.at("n_features");
    t.n_classes = j.at("n_classes");
    t.criterion =
        j.at("criterion") == "entropy" ? SplitCriterion::Entropy : SplitCriterion::Gini;
    for (const auto& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at("f");
        node.threshold = n.at("t");
        node.left = n.at("l");
        node.right = n.at("r");
        node.distribution = n.at("dist").get<std::vector<double>>();
        t.nodes.push_back(std::move(node));
    }
    return t;
}

inline Json rtree_to_json(const RegressionTree& t) {
    Json nodes = Json::array();
    for (const auto& n : t.nodes)
        nodes.push_back(Json{
            {"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}, {"w", n.weight}});
    return nodes;
}

inline RegressionTree rtree_from_json(const Json& j) {
    RegressionTree t;
    for (const auto& n : j) {
        RegressionTreeNode node;
        node.feature = n.at("f");
        node.threshold = n.at("t");
        node.left = n.at("l");
        node.right = n.at("r");
        node.weight = n.at("w");
        t.nodes.push_back(node);
    }
    return t;
}

}  // namespace io

inline Json model_to_json(const TrainedModel& model) {
    Json body;
    std::visit(
        [&body](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianNbModel>) {
                body = Json{{"n_features", m.n_features},
                            {"n_classes", m.n_classes},
                            {"log_priors", io::to_json(m.log_priors)},
                            {"means", io::to_json(m.means)},
                            {"variances", io::to_json(m.variances)}};
            } else if constexpr (std::is_same_v<T, LdaModel>) {
                body = Json{{"n_features", m.n_features},
                            {"n_classes", m.n_classes},
                            {"log_priors", io::to_json(m.log_priors)},
                            {"class_means", io::to_json(m.class_means)},
                            {"whitener", io::to_json(m.whitener)}};
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                body = Json{{"n_features", m.n_features}, {"n_classes", m.n_classes},
                            {"k", m.k},                   {"minkowski_p", m.minkowski_p},
                            {"train_X", io::to_json(m.train_X)}, {"train_y", m.train_y},
                            {"subsampled", m.subsampled}};
            } else if constexpr (std::is_same_v<T, DecisionTreeModel>) {
                body = io::tree_to_json(m);
            } else if constexpr (std::is_same_v<T, RandomForestModel>) {
                Json trees = Json::array();
                for (const auto& t : m.trees) trees.push_back(io::tree_to_json(t));
                body = Json{{"n_features", m.n_features},
                            {"n_classes", m.n_classes},
                            {"trees", std::move(trees)},
                            {"tree_seeds", m.tree_seeds}};
            } else if constexpr (std::is_same_v<T, SvmModel>) {
                Json machines = Json::array();
                for (const auto& b : m.machines)
                    machines.push_back(Json{{"support_vectors", io::to_json(b.support_vectors)},
                                            {"coefficients", io::to_json(b.coefficients)},
                                            {"bias", b.bias},
                                            {"converged", b.converged}});
                body = Json{{"n_features", m.n_features}, {"n_classes", m.n_classes},
                            {"gamma", m.gamma},           {"C", m.C},
                            {"machines", std::move(machines)}, {"subsampled", m.subsampled},
                            {"converged", m.converged}};
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                body = Json{{"n_features", m.n_features}, {"n_classes", m.n_classes},
                            {"C", m.C},                   {"weights", io::to_json(m.weights)},
                            {"biases", io::to_json(m.biases)}, {"converged", m.converged}};
            } else if constexpr (std::is_same_v<T, AdaBoostModel>) {
                Json stumps = Json::array();
                for (const auto& s : m.stumps) stumps.push_back(io::tree_to_json(s));
                body = Json{{"n_features", m.n_features},
                            {"n_classes", m.n_classes},
                            {"stumps", std::move(stumps)},
                            {"stage_weights", m.stage_weights}};
            } else if constexpr (std::is_same_v<T, GbtModel>) {
                Json rounds = Json::array();
                for (const auto& round : m.rounds) {
                    Json trees = Json::array();
                    for (const auto& t : round) trees.push_back(io::rtree_to_json(t));
                    rounds.push_back(std::move(trees));
                }
                body = Json{{"n_features", m.n_features}, {"n_classes", m.n_classes},
                            {"base_score", m.base_score}, {"eta", m.eta},
                            {"rounds", std::move(rounds)}};
            } else if constexpr (std::is_same_v<T, SgdModel>) {
                body = Json{{"n_features", m.n_features}, {"n_classes", m.n_classes},
                            {"alpha", m.alpha},           {"weights", io::to_json(m.weights)},
                            {"biases", io::to_json(m.biases)}, {"converged", m.converged}};
            } else {
                Json weights = Json::array();
                Json biases = Json::array();
                for (const auto& w : m.params.weights) weights.push_back(io::to_json(w));
                for (const auto& b : m.params.biases) biases.push_back(io::to_json(b));
                Json curve = Json::array();
                for (const auto& e : m.curve)
                    curve.push_back(Json{{"train_loss", e.train_loss},
                                         {"train_accuracy", e.train_accuracy},
                                         {"val_loss", e.val_loss},
                                         {"val_accuracy", e.val_accuracy}});
                body = Json{{"input_dim", m.config.input_dim},
                            {"hidden", m.config.hidden},
                            {"n_outputs", m.config.n_outputs},
                            {"dropout_rate", m.config.dropout_rate},
                            {"epochs", m.config.epochs},
                            {"batch_size", m.config.batch_size},
                            {"learning_rate", m.config.learning_rate},
                            {"beta1", m.config.beta1},
                            {"beta2", m.config.beta2},
                            {"epsilon", m.config.epsilon},
                            {"validation_fraction", m.config.validation_fraction},
                            {"seed", m.config.seed.value},
                            {"weights", std::move(weights)},
                            {"biases", std::move(biases)},
                            {"curve", std::move(curve)}};
            }
        },
        model.value);
    return Json{{"format", "netml-model"},
                {"version", kModelFormatVersion},
                {"family", family_key(model.family())},
                {"model", std::move(body)}};
}

inline TrainedModel model_from_json(const Json& j) {
    try {
        if (j.at("format") != "netml-model") throw CorruptFile("not a model document");
        const int version = j.at("version");
        if (version != kModelFormatVersion)
            throw VersionMismatch("model format version " + std::to_string(version) +
                                  " unsupported (expected " +
                                  std::to_string(kModelFormatVersion) + ")");
        const ModelFamily family = family_from_key(j.at("family"));
        const Json& body = j.at("model");

        TrainedModel model;
        switch (family) {
            case ModelFamily::NaiveBayes: {
                GaussianNbModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                m.log_priors = io::vector_from_json(body.at("log_priors"));
                m.means = io::matrix_from_json(body.at("means"));
                m.variances = io::matrix_from_json(body.at("variances"));
                model.value = std::move(m);
                break;
            }
            case ModelFamily::Lda: {
                LdaModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                m.log_priors = io::vector_from_json(body.at("log_priors"));
                m.class_means = io::matrix_from_json(body.at("class_means"));
                m.whitener = io::matrix_from_json(body.at("whitener"));
                model.value = std::move(m);
                break;
            }
            case ModelFamily::Knn: {
                KnnModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                m.k = body.at("k");
                m.minkowski_p = body.at("minkowski_p");
                m.train_X = io::matrix_from_json(body.at("train_X"));
                m.train_y = body.at("train_y").get<std::vector<int>>();
                m.subsampled = body.at("subsampled");
                model.value = std::move(m);
                break;
            }
            case ModelFamily::DecisionTree:
                model.value = io::tree_from_json(body);
                break;
            case ModelFamily::RandomForest: {
                RandomForestModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                for (const auto& t : body.at("trees")) m.trees.push_back(io::tree_from_json(t));
                m.tree_seeds = body.at("tree_seeds").get<std::vector<std::uint64_t>>();
                model.value = std::move(m);
                break;
            }
            case ModelFamily::Svm: {
                SvmModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                m.gamma = body.at("gamma");
                m.C = body.at("C");
                m.subsampled = body.at("subsampled");
                m.converged = body.at("converged");
                for (const auto& b : body.at("machines")) {
                    SvmBinaryModel machine;
                    machine.support_vectors = io::matrix_from_json(b.at("support_vectors"));
                    machine.coefficients = io::vector_from_json(b.at("coefficients"));
                    machine.bias = b.at("bias");
                    machine.converged = b.at("converged");
                    m.machines.push_back(std::move(machine));
                }
                model.value = std::move(m);
                break;
            }
            case ModelFamily::LogisticRegression: {
                LogisticModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                m.C = body.at("C");
                m.weights = io::matrix_from_json(body.at("weights"));
                m.biases = io::vector_from_json(body.at("biases"));
                m.converged = body.at("converged");
                model.value = std::move(m);
                break;
            }
            case ModelFamily::AdaBoost: {
                AdaBoostModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                for (const auto& s : body.at("stumps")) m.stumps.push_back(io::tree_from_json(s));
                m.stage_weights = body.at("stage_weights").get<std::vector<double>>();
                model.value = std::move(m);
                break;
            }
            case ModelFamily::GradientBoosting: {
                GbtModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                m.base_score = body.at("base_score");
                m.eta = body.at("eta");
                for (const auto& round : body.at("rounds")) {
                    std::vector<RegressionTree> trees;
                    for (const auto& t : round) trees.push_back(io::rtree_from_json(t));
                    m.rounds.push_back(std::move(trees));
                }
                model.value = std::move(m);
                break;
            }
            case ModelFamily::Sgd: {
                SgdModel m;
                m.n_features = body.at("n_features");
                m.n_classes = body.at("n_classes");
                m.alpha = body.at("alpha");
                m.weights = io::matrix_from_json(body.at("weights"));
                m.biases = io::vector_from_json(body.at("biases"));
                m.converged = body.at("converged");
                model.value = std::move(m);
                break;
            }
            case ModelFamily::Mlp: {
                MlpModel m;
                m.config.input_dim = body.at("input_dim");
                m.config.hidden = body.at("hidden").get<std::vector<int>>();
                m.config.n_outputs = body.at("n_outputs");
                m.config.dropout_rate = body.at("dropout_rate");
                m.config.epochs = body.at("epochs");
                m.config.batch_size = body.at("batch_size");
                m.config.learning_rate = body.at("learning_rate");
                m.config.beta1 = body.at("beta1");
                m.config.beta2 = body.at("beta2");
                m.config.epsilon = body.at("epsilon");
                m.config.validation_fraction = body.at("validation_fraction");
                m.config.seed.value = body.at("seed");
                for (const auto& w : body.at("weights"))
                    m.params.weights.push_back(io::matrix_from_json(w));
                for (const auto& b : body.at("biases"))
                    m.params.biases.push_back(io::vector_from_json(b));
                for (const auto& e : body.at("curve")) {
                    EpochStats stats;
                    stats.train_loss = e.at("train_loss");
                    stats.train_accuracy = e.at("train_accuracy");
                    stats.val_loss = e.at("val_loss");
                    stats.val_accuracy = e.at("val_accuracy");
                    m.curve.push_back(stats);
                }
                model.value = std::move(m);
                break;
            }
        }
        return model;
    } catch (const Json::exception& e) {
        throw CorruptFile(std::string("malformed model document: ") + e.what());
    }
}

// Hyperparameter (de)serialization for configs; omitted keys keep defaults.
inline Json spec_to_json(const ModelSpec& spec) {
    Json j{{"family", family_key(spec.family())}};
    std::visit(
        [&j](const auto& h) {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, NbParams>) {
                j["var_smoothing"] = h.var_smoothing;
            } else if constexpr (std::is_same_v<T, LdaParams>) {
                j["eigen_floor"] = h.eigen_floor;
            } else if constexpr (std::is_same_v<T, KnnParams>) {
                j["k"] = h.k;
                j["minkowski_p"] = h.minkowski_p;
                j["train_cap"] = h.train_cap;
            } else if constexpr (std::is_same_v<T, TreeParams>) {
                j["criterion"] = h.criterion == SplitCriterion::Gini ? "gini" : "entropy";
                j["max_depth"] = h.max_depth;
                j["min_samples_split"] = h.min_samples_split;
            } else if constexpr (std::is_same_v<T, ForestParams>) {
                j["n_trees"] = h.n_trees;
                j["max_depth"] = h.tree.max_depth;
                j["bootstrap"] = h.bootstrap;
                j["max_features"] = h.max_features;
            } else if constexpr (std::is_same_v<T, SvmParams>) {
                j["C"] = h.C;
                j["gamma"] = h.gamma;
                j["tol"] = h.tol;
                j["max_passes"] = h.max_passes;
                j["train_cap"] = h.train_cap;
                j["allow_subsample"] = h.allow_subsample;
            } else if constexpr (std::is_same_v<T, LogRegParams>) {
                j["C"] = h.C;
                j["tol"] = h.tol;
                j["max_iterations"] = h.max_iterations;
            } else if constexpr (std::is_same_v<T, AdaBoostParams>) {
                j["n_stages"] = h.n_stages;
            } else if constexpr (std::is_same_v<T, GbtParams>) {
                j["rounds"] = h.rounds;
                j["max_depth"] = h.max_depth;
                j["eta"] = h.eta;
                j["lambda"] = h.lambda;
                j["alpha"] = h.alpha;
                j["min_child_weight"] = h.min_child_weight;
            } else if constexpr (std::is_same_v<T, SgdParams>) {
                j["alpha"] = h.alpha;
                j["max_epochs"] = h.max_epochs;
                j["tol"] = h.tol;
                j["epochs_no_change"] = h.epochs_no_change;
                j["schedule"] = h.schedule == SgdSchedule::Optimal ? "optimal" : "constant";
                j["eta0"] = h.eta0;
            } else {
                j["hidden"] = h.hidden;
                j["dropout_rate"] = h.dropout_rate;
                j["epochs"] = h.epochs;
                j["batch_size"] = h.batch_size;
                j["learning_rate"] = h.learning_rate;
                j["validation_fraction"] = h.validation_fraction;
            }
        },
        spec.hyper);
    return j;
}

inline ModelSpec spec_from_json(const Json& j) {
    ModelSpec spec;
    spec.hyper = default_hyper(family_from_key(j.at("family")));
    auto get = [&j](const char* key, auto fallback) {
        using V = decltype(fallback);
        return j.contains(key) ? j.at(key).get<V>() : fallback;
    };
    std::visit(
        [&](auto& h) {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, NbParams>) {
                h.var_smoothing = get("var_smoothing", h.var_smoothing);
            } else if constexpr (std::is_same_v<T, LdaParams>) {
                h.eigen_floor = get("eigen_floor", h.eigen_floor);
            } else if constexpr (std::is_same_v<T, KnnParams>) {
                h.k = get("k", h.k);
                h.minkowski_p = get("minkowski_p", h.minkowski_p);
                h.train_cap = get("train_cap", h.train_cap);
            } else if constexpr (std::is_same_v<T, TreeParams>) {
                h.criterion = get("criterion", std::string("gini")) == "entropy"
                                  ? SplitCriterion::Entropy
                                  : SplitCriterion::Gini;
                h.max_depth = get("max_depth", h.max_depth);
                h.min_samples_split = get("min_samples_split", h.min_samples_split);
            } else if constexpr (std::is_same_v<T, ForestParams>) {
                h.n_trees = get("n_trees", h.n_trees);
                h.tree.max_depth = get("max_depth", h.tree.max_depth);
                h.bootstrap = get("bootstrap", h.bootstrap);
                h.max_features = get("max_features", h.max_features);
            } else if constexpr (std::is_same_v<T, SvmParams>) {
                h.C = get("C", h.C);
                h.gamma = get("gamma", h.gamma);
                h.tol = get("tol", h.tol);
                h.max_passes = get("max_passes", h.max_passes);
                h.train_cap = get("train_cap", h.train_cap);
                h.allow_subsample = get("allow_subsample", h.allow_subsample);
            } else if constexpr (std::is_same_v<T, LogRegParams>) {
                h.C = get("C", h.C);
                h.tol = get("tol", h.tol);
                h.max_iterations = get("max_iterations", h.max_iterations);
            } else if constexpr (std::is_same_v<T, AdaBoostParams>) {
                h.n_stages = get("n_stages", h.n_stages);
            } else if constexpr (std::is_same_v<T, GbtParams>) {
                h.rounds = get("rounds", h.rounds);
                h.max_depth = get("max_depth", h.max_depth);
                h.eta = get("eta", h.eta);
                h.lambda = get("lambda", h.lambda);
                h.alpha = get("alpha", h.alpha);
                h.min_child_weight = get("min_child_weight", h.min_child_weight);
            } else if constexpr (std::is_same_v<T, SgdParams>) {
                h.alpha = get("alpha", h.alpha);
                h.max_epochs = get("max_epochs", h.max_epochs);
                h.tol = get("tol", h.tol);
                h.epochs_no_change = get("epochs_no_change", h.epochs_no_change);
                h.schedule = get("schedule", std::string("optimal")) == "constant"
                                 ? SgdSchedule::Constant
                                 : SgdSchedule::Optimal;
                h.eta0 = get("eta0", h.eta0);
            } else {
                h.hidden = get("hidden", h.hidden);
                h.dropout_rate = get("dropout_rate", h.dropout_rate);
                h.epochs = get("epochs", h.epochs);
                h.batch_size = get("batch_size", h.batch_size);
                h.learning_rate = get("learning_rate", h.learning_rate);
                h.validation_fraction = get("validation_fraction", h.validation_fraction);
            }
        },
        spec.hyper);
    return spec;
}

inline void save_model(const std::filesystem::path& path, const TrainedModel& model) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write '" + path.string() + "'");
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw IoFailure("write failed for '" + path.string() + "'");
}

inline TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open '" + path.string() + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw CorruptFile("'" + path.string() + "': " + e.what());
    }
    return model_from_json(j);
}

}  // namespace netml
