#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "netml/classifiers/knn.hpp"

using namespace netml;

namespace {

// Exhaustive neighbor search; ties resolved exactly like the library:
// (distance, training index) ordering and lowest class index on vote ties.
std::vector<int> knn_oracle(const Matrix& X, const std::vector<int>& y, const Matrix& queries,
                            int k, int n_classes) {
    std::vector<int> labels;
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
        std::vector<std::pair<double, Eigen::Index>> order;
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            order.push_back({(X.row(i) - queries.row(q)).squaredNorm(), i});
        std::sort(order.begin(), order.end());
        std::vector<int> votes(static_cast<std::size_t>(n_classes), 0);
        for (int t = 0; t < k; ++t)
            ++votes[static_cast<std::size_t>(y[static_cast<std::size_t>(order[static_cast<std::size_t>(t)].second)])];
        labels.push_back(static_cast<int>(
            std::max_element(votes.begin(), votes.end()) - votes.begin()));
    }
    return labels;
}

}  // namespace

TEST_CASE("k=1 on a training point returns that point's label") {
    Matrix X(3, 2);
    X << 0, 0, 5, 5, 9, 1;
    const std::vector<int> y = {2, 0, 1};
    const auto model = fit_knn(X, y, 3, {.k = 1});
    const auto batch = knn_predict(model, X);
    REQUIRE(batch.labels == y);
}

TEST_CASE("majority vote among three neighbors") {
    Matrix X(3, 1);
    X << 0.0, 0.2, 0.4;
    const std::vector<int> y = {1, 1, 0};
    const auto model = fit_knn(X, y, 2, {.k = 3});
    Matrix probe(1, 1);
    probe << 0.1;
    REQUIRE(knn_predict(model, probe).labels[0] == 1);
}

TEST_CASE("predictions match the exhaustive-sort oracle") {
    Rng rng(Seed{77});
    Matrix X(30, 4);
    std::vector<int> y(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(3));
        for (Eigen::Index c = 0; c < 4; ++c)
            X(i, c) = rng.normal() + 0.8 * y[static_cast<std::size_t>(i)];
    }
    Matrix queries(12, 4);
    for (Eigen::Index i = 0; i < queries.rows(); ++i)
        for (Eigen::Index c = 0; c < 4; ++c) queries(i, c) = 3.0 * rng.uniform();

    const auto model = fit_knn(X, y, 3, {.k = 5});
    const auto batch = knn_predict(model, queries);
    REQUIRE(batch.labels == knn_oracle(X, y, queries, 5, 3));
}

TEST_CASE("k=1 training accuracy is perfect on distinct points") {
    Rng rng(Seed{79});
    Matrix X(50, 3);
    std::vector<int> y(50);
    for (Eigen::Index i = 0; i < 50; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(4));
        for (Eigen::Index c = 0; c < 3; ++c) X(i, c) = rng.normal();
    }
    const auto model = fit_knn(X, y, 4, {.k = 1});
    REQUIRE(knn_predict(model, X).labels == y);
}

TEST_CASE("vote scores are normalized by k") {
    Matrix X(4, 1);
    X << 0.0, 0.1, 0.2, 0.9;
    const std::vector<int> y = {1, 1, 0, 0};
    const auto model = fit_knn(X, y, 2, {.k = 4});
    Matrix probe(1, 1);
    probe << 0.05;
    const auto batch = knn_predict(model, probe);
    REQUIRE_THAT((*batch.scores)(0, 1), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("Manhattan metric changes the neighborhood") {
    Matrix X(2, 2);
    X << 0, 3, 2, 2;
    const std::vector<int> y = {0, 1};
    // query (0,0): Manhattan distances 3 vs 4 pick class 0;
    // Euclidean distances 9 vs 8 (squared) pick class 1
    Matrix probe(1, 2);
    probe << 0, 0;
    const auto euclid = fit_knn(X, y, 2, {.k = 1, .minkowski_p = 2});
    const auto manhattan = fit_knn(X, y, 2, {.k = 1, .minkowski_p = 1});
    REQUIRE(knn_predict(euclid, probe).labels[0] == 1);
    REQUIRE(knn_predict(manhattan, probe).labels[0] == 0);
}

TEST_CASE("k larger than the training set is rejected") {
    Matrix X(3, 1);
    X << 1, 2, 3;
    REQUIRE_THROWS_AS(fit_knn(X, {0, 1, 0}, 2, {.k = 4}), KTooLarge);
}
