#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "netml/classifiers/gbt.hpp"
#include "netml/model_io.hpp"

using namespace netml;

TEST_CASE("single-leaf round: leaf weight is -G/(H + lambda)") {
    // base score 0.5 makes g_i = 0.5 - y_i and h_i = 0.25:
    // y = {1,1,1,0} gives G = -1, H = 1; with lambda = 1 the leaf is 0.5
    Matrix X(4, 1);
    X << 0.3, 0.7, 0.1, 0.9;
    const std::vector<int> y = {1, 1, 1, 0};
    GbtParams params;
    params.rounds = 1;
    params.max_depth = 0;
    params.lambda = 1.0;
    params.eta = 0.3;
    const auto model = fit_gbt(X, y, 2, params);

    REQUIRE(model.rounds.size() == 1);
    const auto& tree = model.rounds[0][0];
    REQUIRE(tree.nodes.size() == 1);
    REQUIRE_THAT(tree.nodes[0].weight, Catch::Matchers::WithinAbs(0.5, 1e-9));

    const Matrix margins = gbt_margins(model, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        REQUIRE_THAT(margins(i, 0), Catch::Matchers::WithinAbs(0.15, 1e-9));
}

TEST_CASE("L1 soft-threshold shifts the leaf weight") {
    Matrix X(4, 1);
    X << 0.3, 0.7, 0.1, 0.9;
    const std::vector<int> y = {1, 1, 1, 0};
    GbtParams params;
    params.rounds = 1;
    params.max_depth = 0;
    params.lambda = 1.0;
    params.alpha = 0.25;  // soft(G = -1) = -0.75
    const auto model = fit_gbt(X, y, 2, params);
    REQUIRE_THAT(model.rounds[0][0].nodes[0].weight,
                 Catch::Matchers::WithinAbs(0.375, 1e-9));
}

TEST_CASE("zero learning rate leaves predictions at the base score") {
    Matrix X(6, 2);
    X.setRandom();
    const std::vector<int> y = {0, 1, 0, 1, 0, 1};
    GbtParams params;
    params.rounds = 5;
    params.eta = 0.0;
    const auto model = fit_gbt(X, y, 2, params);
    const auto batch = gbt_predict(model, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        REQUIRE((*batch.scores)(i, 1) == 0.5);
        REQUIRE((*batch.scores)(i, 0) == 0.5);
    }
}

TEST_CASE("single-class data is driven toward certainty") {
    Rng rng(Seed{401});
    Matrix X(30, 1);
    for (Eigen::Index i = 0; i < 30; ++i) X(i, 0) = rng.normal();
    const std::vector<int> y(30, 1);

    // ten default-rate rounds: the leaf-weight recurrence reaches ~0.955
    GbtParams defaults;
    defaults.rounds = 10;
    const auto slow = fit_gbt(X, y, 2, defaults);
    const auto slow_batch = gbt_predict(slow, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) REQUIRE((*slow_batch.scores)(i, 1) >= 0.95);

    GbtParams fast = defaults;
    fast.eta = 1.0;
    const auto quick = fit_gbt(X, y, 2, fast);
    const auto quick_batch = gbt_predict(quick, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) REQUIRE((*quick_batch.scores)(i, 1) >= 0.99);
}

TEST_CASE("boosted trees separate two blobs") {
    Rng rng(Seed{409});
    Matrix X(80, 2);
    std::vector<int> y(80);
    for (Eigen::Index i = 0; i < 80; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(2));
        X(i, 0) = rng.normal() + 2.0 * y[static_cast<std::size_t>(i)];
        X(i, 1) = rng.normal();
    }
    GbtParams params;
    params.rounds = 20;
    const auto model = fit_gbt(X, y, 2, params);
    const auto batch = gbt_predict(model, X);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hits += batch.labels[i] == y[i];
    REQUIRE(static_cast<double>(hits) / 80.0 >= 0.95);
}

TEST_CASE("multiclass boosting keeps normalized probabilities") {
    Rng rng(Seed{419});
    Matrix X(60, 2);
    std::vector<int> y(60);
    for (Eigen::Index i = 0; i < 60; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(i % 3);
        X(i, 0) = 0.5 * rng.normal() + 3.0 * (i % 3 == 1);
        X(i, 1) = 0.5 * rng.normal() + 3.0 * (i % 3 == 2);
    }
    GbtParams params;
    params.rounds = 15;
    const auto model = fit_gbt(X, y, 3, params);
    REQUIRE(model.rounds[0].size() == 3);  // one tree per class per round
    const auto batch = gbt_predict(model, X);
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        REQUIRE_THAT(batch.scores->row(i).sum(), Catch::Matchers::WithinAbs(1.0, 1e-9));
        hits += batch.labels[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(i)];
    }
    REQUIRE(static_cast<double>(hits) / 60.0 >= 0.9);
}

TEST_CASE("gradient boosting is deterministic") {
    Rng rng(Seed{421});
    Matrix X(30, 2);
    std::vector<int> y(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(2));
        X(i, 0) = rng.normal();
        X(i, 1) = rng.normal() + y[static_cast<std::size_t>(i)];
    }
    GbtParams params;
    params.rounds = 8;
    TrainedModel a{fit_gbt(X, y, 2, params)};
    TrainedModel b{fit_gbt(X, y, 2, params)};
    REQUIRE(model_to_json(a).dump() == model_to_json(b).dump());
}
