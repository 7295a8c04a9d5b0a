#include <catch2/catch_amalgamated.hpp>

#include "netml/ingest.hpp"
#include "temp_dir.hpp"

using namespace netml;
using testutil::TempDir;

namespace {

DatasetManifest tiny_unsw_manifest(const TempDir& dir,
                                   const std::vector<std::filesystem::path>& files) {
    DatasetManifest m;
    (void)dir;
    m.dataset_id = DatasetId::UnswNb15;
    m.file_paths = files;
    m.has_header = true;
    m.label_column = "label";
    m.attack_category_column = "attack_cat";
    m.drop_columns = {"id"};
    return m;
}

}  // namespace

TEST_CASE("load_raw concatenates rows across files") {
    TempDir dir;
    const auto a = dir.write("a.csv", "id,x,attack_cat,label\n1,0.1,,0\n2,0.2,DoS,1\n3,0.3,,0\n");
    const auto b = dir.write("b.csv",
                             "id,x,attack_cat,label\n4,0.4,,0\n5,0.5,Worms,1\n6,0.6,,0\n7,0.7,DoS,1\n");
    const auto raw = load_raw(tiny_unsw_manifest(dir, {a, b}));
    REQUIRE(raw.n_rows() == 7);
    REQUIRE(raw.header == std::vector<std::string>{"id", "x", "attack_cat", "label"});
    REQUIRE(raw.source_file == std::vector<int>{0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("short row raises MalformedRow with its line number") {
    TempDir dir;
    const auto a = dir.write("bad.csv", "id,x,attack_cat,label\n1,0.1,,0\n2,0.2,1\n");
    REQUIRE_THROWS_MATCHES(load_raw(tiny_unsw_manifest(dir, {a})), MalformedRow,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring(":3")));
}

TEST_CASE("missing file raises MissingFile") {
    TempDir dir;
    REQUIRE_THROWS_AS(load_raw(tiny_unsw_manifest(dir, {dir.path() / "nope.csv"})), MissingFile);
}

TEST_CASE("quoted cells with embedded commas parse") {
    TempDir dir;
    const auto a = dir.write("q.csv", "id,x,attack_cat,label\n1,\"1,5\",,0\n");
    const auto raw = load_raw(tiny_unsw_manifest(dir, {a}));
    REQUIRE(raw.rows[0][1] == "1,5");
}

TEST_CASE("headerless files take the documented KDD layout") {
    TempDir dir;
    std::string row;
    for (int i = 0; i < 41; ++i) row += std::to_string(i) + ",";
    row += "normal,21\n";
    const auto a = dir.write("kdd.txt", row + row);
    auto m = DatasetManifest::nsl_kdd(dir.path());
    m.file_paths = {a};
    const auto raw = load_raw(m);
    REQUIRE(raw.header == nsl_kdd_columns());
    REQUIRE(raw.n_rows() == 2);
    REQUIRE(raw.column("duration") == 0);
    REQUIRE(raw.column("label") == 41);
    REQUIRE(raw.column("difficulty") == 42);
}

TEST_CASE("UNSW label mapping: attacks, normals, and category cleanup") {
    TempDir dir;
    const auto a = dir.write("u.csv",
                             "id,x,attack_cat,label\n"
                             "1,0.1,Worms,1\n"
                             "2,0.2,,0\n"
                             "3,0.3, Backdoors ,1\n"
                             "4,0.4,Normal,0\n"
                             "5,0.5,dos,1\n");
    const auto m = tiny_unsw_manifest(dir, {a});
    const auto labeled = map_labels(load_raw(m), m);

    REQUIRE(labeled.class_names.front() == "Normal");
    REQUIRE(labeled.class_names ==
            std::vector<std::string>{"Normal", "Backdoor", "DoS", "Worms"});
    REQUIRE(labeled.binary_labels == std::vector<int>{1, 0, 1, 0, 1});
    REQUIRE(labeled.multiclass_labels == std::vector<int>{3, 0, 1, 0, 2});
    // label/category columns are not features
    REQUIRE(labeled.feature_names == std::vector<std::string>{"x"});
}

TEST_CASE("UNSW class vocabulary covers Normal plus nine attacks") {
    TempDir dir;
    std::string text = "id,x,attack_cat,label\n";
    const std::vector<std::string> cats = {"Fuzzers",        "Analysis", "Backdoor",
                                           "DoS",            "Exploits", "Generic",
                                           "Reconnaissance", "Shellcode", "Worms"};
    int id = 1;
    for (const auto& c : cats) text += std::to_string(id++) + ",1.0," + c + ",1\n";
    text += std::to_string(id++) + ",1.0,Normal,0\n";
    const auto a = dir.write("u.csv", text);
    const auto m = tiny_unsw_manifest(dir, {a});
    const auto labeled = map_labels(load_raw(m), m);
    REQUIRE(labeled.class_names.size() == 10);
}

TEST_CASE("NSL-KDD attack names fold into four families") {
    TempDir dir;
    auto kdd_row = [](const std::string& label) {
        std::string row;
        for (int i = 0; i < 41; ++i) row += std::to_string(i) + ",";
        return row + label + ",21\n";
    };
    const auto a = dir.write("kdd.txt", kdd_row("normal") + kdd_row("neptune") +
                                            kdd_row("ipsweep") + kdd_row("guess_passwd") +
                                            kdd_row("rootkit") + kdd_row("smurf"));
    auto m = DatasetManifest::nsl_kdd(dir.path());
    m.file_paths = {a};
    const auto labeled = map_labels(load_raw(m), m);

    REQUIRE(labeled.class_names ==
            std::vector<std::string>{"Normal", "DoS", "Probe", "R2L", "U2R"});
    REQUIRE(labeled.binary_labels == std::vector<int>{0, 1, 1, 1, 1, 1});
    REQUIRE(labeled.multiclass_labels == std::vector<int>{0, 1, 2, 3, 4, 1});
    // difficulty is dropped, the 41 traffic features remain
    REQUIRE(labeled.feature_names.size() == 41);
}

TEST_CASE("unknown NSL-KDD attack name is a hard error") {
    TempDir dir;
    std::string row;
    for (int i = 0; i < 41; ++i) row += "0,";
    row += "madeupattack,21\n";
    const auto a = dir.write("kdd.txt", row);
    auto m = DatasetManifest::nsl_kdd(dir.path());
    m.file_paths = {a};
    const auto raw = load_raw(m);
    REQUIRE_THROWS_AS(map_labels(raw, m), UnknownAttackName);
}

TEST_CASE("missing label column raises MissingLabel") {
    TempDir dir;
    const auto a = dir.write("u.csv", "id,x,attack_cat\n1,0.1,DoS\n");
    const auto m = tiny_unsw_manifest(dir, {a});
    const auto raw = load_raw(m);
    REQUIRE_THROWS_AS(map_labels(raw, m), MissingLabel);
}

TEST_CASE("binary label is zero exactly on Normal rows") {
    TempDir dir;
    const auto a = dir.write("u.csv",
                             "id,x,attack_cat,label\n1,1,DoS,1\n2,2,,0\n3,3,Generic,1\n4,4,,0\n");
    const auto m = tiny_unsw_manifest(dir, {a});
    const auto labeled = map_labels(load_raw(m), m);
    for (std::size_t r = 0; r < labeled.n_rows(); ++r)
        REQUIRE((labeled.binary_labels[r] == 0) == (labeled.multiclass_labels[r] == 0));
}

TEST_CASE("loading the same files twice is deterministic") {
    TempDir dir;
    const auto a = dir.write("u.csv", "id,x,attack_cat,label\n1,0.5,DoS,1\n2,0.25,,0\n");
    const auto m = tiny_unsw_manifest(dir, {a});
    const auto first = map_labels(load_raw(m), m);
    const auto second = map_labels(load_raw(m), m);
    REQUIRE(first.rows == second.rows);
    REQUIRE(first.binary_labels == second.binary_labels);
    REQUIRE(first.multiclass_labels == second.multiclass_labels);
    REQUIRE(first.class_names == second.class_names);
}
