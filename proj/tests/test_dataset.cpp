#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "netml/dataset.hpp"

using namespace netml;

namespace {

Dataset small_dataset() {
    Dataset d;
    d.schema = {{"alpha", ValueKind::Real, 0}, {"beta", ValueKind::Integer, 1}};
    d.matrix.resize(3, 2);
    d.matrix << 0.5, 1.0, 1.5, 2.0, 2.5, 3.0;
    d.binary_labels = {0, 1, 1};
    d.multiclass_labels = {0, 1, 2};
    d.class_names = {"Normal", "DoS", "Worms"};
    return d;
}

}  // namespace

TEST_CASE("well-formed dataset validates cleanly") {
    const auto report = validate_dataset(small_dataset());
    CAPTURE(report.problems);
    REQUIRE(report.ok());
}

TEST_CASE("NaN cell is reported with row and column") {
    auto d = small_dataset();
    d.matrix(1, 0) = std::numeric_limits<double>::quiet_NaN();
    const auto report = validate_dataset(d);
    REQUIRE_FALSE(report.ok());
    REQUIRE(report.problems.size() == 1);
    REQUIRE(report.problems[0].find("row 1") != std::string::npos);
    REQUIRE(report.problems[0].find("col 0") != std::string::npos);
    REQUIRE(report.problems[0].find("alpha") != std::string::npos);
}

TEST_CASE("out-of-range multiclass label names the row") {
    auto d = small_dataset();
    d.multiclass_labels[2] = 9;
    const auto report = validate_dataset(d);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& p : report.problems)
        found = found || (p.find("row 2") != std::string::npos &&
                          p.find("out of range") != std::string::npos);
    REQUIRE(found);
}

TEST_CASE("binary and multiclass labels must agree on normal rows") {
    auto d = small_dataset();
    d.binary_labels[0] = 1;  // row 0 is class Normal
    const auto report = validate_dataset(d);
    REQUIRE_FALSE(report.ok());
}

TEST_CASE("validation does not mutate and is idempotent") {
    auto d = small_dataset();
    d.matrix(0, 1) = std::numeric_limits<double>::infinity();
    const auto first = validate_dataset(d);
    const auto second = validate_dataset(d);
    REQUIRE(first.problems == second.problems);
}

TEST_CASE("row and column gathers") {
    const auto d = small_dataset();
    const Matrix rows = take_rows(d.matrix, {2, 0});
    REQUIRE(rows(0, 0) == 2.5);
    REQUIRE(rows(1, 1) == 1.0);
    const Matrix cols = take_cols(d.matrix, {1});
    REQUIRE(cols.cols() == 1);
    REQUIRE(cols(2, 0) == 3.0);
}
