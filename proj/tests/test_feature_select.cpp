#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "netml/feature_select.hpp"
#include "netml/rng.hpp"

using namespace netml;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

Dataset dataset_from(const Matrix& m, const std::vector<int>& binary,
                     const std::vector<int>& multi, std::vector<std::string> class_names) {
    Dataset d;
    d.matrix = m;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        d.schema.push_back({"f" + std::to_string(c), ValueKind::Real,
                            static_cast<std::size_t>(c)});
    d.binary_labels = binary;
    d.multiclass_labels = multi;
    d.class_names = std::move(class_names);
    return d;
}

}  // namespace

TEST_CASE("pearson on perfectly linear data") {
    REQUIRE_THAT(pearson(vec({1, 2, 3}), vec({2, 4, 6})).r,
                 Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(pearson(vec({1, 2, 3}), vec({3, 2, 1})).r,
                 Catch::Matchers::WithinAbs(-1.0, 1e-12));
}

TEST_CASE("pearson hand-computed case") {
    // deviations (-1.5,-.5,.5,1.5) vs (-1.5,.5,-.5,1.5): 4 / (sqrt(5)*sqrt(5))
    REQUIRE_THAT(pearson(vec({1, 2, 3, 4}), vec({1, 3, 2, 4})).r,
                 Catch::Matchers::WithinAbs(0.8, 1e-12));
}

TEST_CASE("pearson rejects mismatched or tiny inputs") {
    REQUIRE_THROWS_AS(pearson(vec({1, 2}), vec({1, 2, 3})), LengthMismatch);
    REQUIRE_THROWS_AS(pearson(vec({1}), vec({1})), LengthMismatch);
}

TEST_CASE("zero-variance input is degenerate and scores zero") {
    const auto c = pearson(vec({5, 5, 5}), vec({1, 2, 3}));
    REQUIRE(c.degenerate);
    REQUIRE(c.r == 0.0);
}

TEST_CASE("pearson properties on random vectors") {
    Rng rng(Seed{23});
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform_below(40));
        Vector x(n), y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i) = rng.normal();
            y(i) = rng.normal();
        }
        const auto xy = pearson(x, y);
        REQUIRE(std::abs(xy.r) <= 1.0);
        REQUIRE(pearson(y, x).r == xy.r);  // symmetric by construction

        double a = 0.0;
        while (std::abs(a) < 0.05) a = 4.0 * rng.uniform() - 2.0;
        const double b = 10.0 * rng.uniform() - 5.0;
        const auto affine = pearson((a * x.array() + b).matrix(), y);
        const double expected = (a > 0 ? 1.0 : -1.0) * xy.r;
        REQUIRE_THAT(affine.r, Catch::Matchers::WithinAbs(expected, 1e-9));
    }
}

TEST_CASE("a feature equal to the label ranks first with score one") {
    Rng rng(Seed{31});
    const Eigen::Index n = 40;
    Matrix m(n, 3);
    std::vector<int> binary(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        binary[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(2));
        m(i, 0) = rng.normal();
        m(i, 1) = static_cast<double>(binary[static_cast<std::size_t>(i)]);
        m(i, 2) = rng.normal();
    }
    const auto d = dataset_from(m, binary, binary, {"Normal", "Anomaly"});
    const auto ranked = rank_features(d, TaskKind::Binary);
    REQUIRE(ranked.at(0).feature == "f1");
    REQUIRE_THAT(ranked.at(0).score, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("score ties break by feature name ascending") {
    Matrix m(4, 2);
    m << 1, 1, 2, 2, 3, 3, 4, 4;  // identical columns, identical scores
    const std::vector<int> y = {0, 0, 1, 1};
    const auto d = dataset_from(m, y, y, {"Normal", "Anomaly"});
    const auto ranked = rank_features(d, TaskKind::Binary);
    REQUIRE(ranked.at(0).feature == "f0");
    REQUIRE(ranked.at(1).feature == "f1");
    REQUIRE(ranked.at(0).score == ranked.at(1).score);
}

TEST_CASE("multiclass one-vs-rest score reduces to the binary score for two classes") {
    Rng rng(Seed{37});
    const Eigen::Index n = 60;
    Matrix m(n, 4);
    std::vector<int> y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(2));
        for (Eigen::Index c = 0; c < 4; ++c)
            m(i, c) = rng.normal() + 0.7 * static_cast<double>(c) *
                                         y[static_cast<std::size_t>(i)];
    }
    const auto d = dataset_from(m, y, y, {"Normal", "Anomaly"});
    const auto via_binary = rank_features(d, TaskKind::Binary);
    const auto via_ovr = rank_features(d, TaskKind::Multiclass, MulticlassRanking::OneVsRest);
    for (std::size_t i = 0; i < via_binary.size(); ++i) {
        REQUIRE(via_binary.at(i).feature == via_ovr.at(i).feature);
        REQUIRE_THAT(via_binary.at(i).score,
                     Catch::Matchers::WithinAbs(via_ovr.at(i).score, 1e-12));
    }
}

TEST_CASE("ranking is invariant to row permutation") {
    Rng rng(Seed{41});
    const Eigen::Index n = 50;
    Matrix m(n, 5);
    std::vector<int> y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(2));
        for (Eigen::Index c = 0; c < 5; ++c)
            m(i, c) = rng.normal() + 0.3 * static_cast<double>(c) * y[static_cast<std::size_t>(i)];
    }
    const auto d = dataset_from(m, y, y, {"Normal", "Anomaly"});

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    const auto pd = dataset_from(take_rows(m, perm), take(y, perm), take(y, perm),
                                 {"Normal", "Anomaly"});

    const auto ranked = rank_features(d, TaskKind::Binary);
    const auto permuted = rank_features(pd, TaskKind::Binary);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        REQUIRE(ranked.at(i).feature == permuted.at(i).feature);
        REQUIRE_THAT(ranked.at(i).score,
                     Catch::Matchers::WithinAbs(permuted.at(i).score, 1e-12));
    }
}

TEST_CASE("select_top returns ranked prefixes and nests") {
    Matrix m(6, 4);
    std::vector<int> y = {0, 0, 0, 1, 1, 1};
    m << 0, 9, 1, 0, 0, 7, 2, 0, 0, 8, 1, 1, 1, 1, 9, 0, 1, 2, 8, 1, 1, 3, 9, 0;
    const auto d = dataset_from(m, y, y, {"Normal", "Anomaly"});
    const auto ranked = rank_features(d, TaskKind::Binary);

    const auto all = select_top(ranked, 4);
    REQUIRE(all.names.size() == 4);
    for (std::size_t small = 1; small <= 4; ++small) {
        const auto subset = select_top(ranked, small);
        for (std::size_t i = 0; i < small; ++i) REQUIRE(subset.names[i] == all.names[i]);
    }
    REQUIRE_THROWS_AS(select_top(ranked, 0), SizeOutOfRange);
    REQUIRE_THROWS_AS(select_top(ranked, 5), SizeOutOfRange);
}
