#include <catch2/catch_amalgamated.hpp>

#include "netml/classifiers/random_forest.hpp"
#include "netml/model_io.hpp"

using namespace netml;

namespace {

std::pair<Matrix, std::vector<int>> two_blobs(std::size_t n, Seed seed) {
    Rng rng(seed);
    Matrix X(static_cast<Eigen::Index>(n), 2);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(rng.uniform_below(2));
        X(static_cast<Eigen::Index>(i), 0) = rng.normal() + 2.5 * y[i];
        X(static_cast<Eigen::Index>(i), 1) = rng.normal() - 1.5 * y[i];
    }
    return {X, y};
}

ForestParams forest_params(int n_trees) {
    ForestParams params;
    params.n_trees = n_trees;
    return params;
}

double training_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

TEST_CASE("degenerate forest equals a single decision tree") {
    const auto [X, y] = two_blobs(40, Seed{103});
    ForestParams params;
    params.n_trees = 1;
    params.bootstrap = false;
    params.max_features = -1;  // all features at every split
    const auto forest = fit_random_forest(X, y, 2, params, Seed{5});
    const auto tree = fit_decision_tree(X, y, 2);
    REQUIRE(forest_predict(forest, X).labels == tree_predict(tree, X).labels);
}

TEST_CASE("single-class data predicts that class everywhere") {
    Matrix X(10, 2);
    X.setRandom();
    const std::vector<int> y(10, 1);
    const auto forest = fit_random_forest(X, y, 2, forest_params(5), Seed{7});
    Matrix probe(3, 2);
    probe.setRandom();
    for (int label : forest_predict(forest, probe).labels) REQUIRE(label == 1);
}

TEST_CASE("forest keeps close to single-tree training accuracy on blobs") {
    const auto [X, y] = two_blobs(100, Seed{107});
    const auto tree = fit_decision_tree(X, y, 2);
    const double tree_acc = training_accuracy(tree_predict(tree, X).labels, y);
    const auto forest = fit_random_forest(X, y, 2, forest_params(100), Seed{11});
    const double forest_acc = training_accuracy(forest_predict(forest, X).labels, y);
    REQUIRE(forest_acc >= tree_acc - 0.05);
}

TEST_CASE("forest has exactly N trees") {
    const auto [X, y] = two_blobs(30, Seed{109});
    const auto forest = fit_random_forest(X, y, 2, forest_params(17), Seed{13});
    REQUIRE(forest.trees.size() == 17);
    REQUIRE(forest.tree_seeds.size() == 17);
}

TEST_CASE("same seed reproduces the forest, different seed varies it") {
    const auto [X, y] = two_blobs(60, Seed{113});
    TrainedModel a{fit_random_forest(X, y, 2, forest_params(10), Seed{21})};
    TrainedModel b{fit_random_forest(X, y, 2, forest_params(10), Seed{21})};
    TrainedModel c{fit_random_forest(X, y, 2, forest_params(10), Seed{22})};
    REQUIRE(model_to_json(a).dump() == model_to_json(b).dump());
    REQUIRE(model_to_json(a).dump() != model_to_json(c).dump());
}

TEST_CASE("vote scores are tree fractions") {
    const auto [X, y] = two_blobs(50, Seed{127});
    const auto forest = fit_random_forest(X, y, 2, forest_params(10), Seed{23});
    const auto batch = forest_predict(forest, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        REQUIRE_THAT(batch.scores->row(i).sum(), Catch::Matchers::WithinAbs(1.0, 1e-12));
        REQUIRE((*batch.scores)(i, 0) >= 0.0);
    }
}
