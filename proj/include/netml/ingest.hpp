#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "netml/csv.hpp"
#include "netml/error.hpp"

namespace netml {

enum class DatasetId { UnswNb15, NslKdd };

inline const char* to_string(DatasetId id) {
    return id == DatasetId::UnswNb15 ? "UNSW_NB15" : "NSL_KDD";
}

inline DatasetId dataset_id_from_string(const std::string& s) {
    if (s == "UNSW_NB15" || s == "unsw_nb15" || s == "unsw-nb15") return DatasetId::UnswNb15;
    if (s == "NSL_KDD" || s == "nsl_kdd" || s == "nsl-kdd") return DatasetId::NslKdd;
    throw ConfigError("unknown dataset id '" + s + "'");
}

struct DatasetManifest {
    DatasetId dataset_id = DatasetId::UnswNb15;
    std::vector<std::filesystem::path> file_paths;  // official order: train first, then test
    bool has_header = true;
    std::string label_column;
    std::optional<std::string> attack_category_column;
    std::vector<std::string> drop_columns;

    // Published distribution pair under `dir`.
    static DatasetManifest unsw_nb15(const std::filesystem::path& dir) {
        DatasetManifest m;
        m.dataset_id = DatasetId::UnswNb15;
        m.file_paths = {dir / "UNSW_NB15_training-set.csv", dir / "UNSW_NB15_testing-set.csv"};
        m.has_header = true;
        m.label_column = "label";
        m.attack_category_column = "attack_cat";
        m.drop_columns = {"id"};
        return m;
    }

    static DatasetManifest nsl_kdd(const std::filesystem::path& dir) {
        DatasetManifest m;
        m.dataset_id = DatasetId::NslKdd;
        m.file_paths = {dir / "KDDTrain+.txt", dir / "KDDTest+.txt"};
        m.has_header = false;
        m.label_column = "label";
        m.attack_category_column = std::nullopt;
        m.drop_columns = {"difficulty"};
        return m;
    }
};

// Documented 41-feature KDD layout plus the label and NSL-KDD difficulty
// columns, used when a manifest has no header row.
inline const std::vector<std::string>& nsl_kdd_columns() {
    static const std::vector<std::string> cols = {
        "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
        "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
        "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
        "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
        "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
        "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
        "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
        "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
        "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate",
        "label", "difficulty"};
    return cols;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> source_file;  // per-row index into the manifest's file list

    std::size_t n_rows() const { return rows.size(); }
    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline RawTable load_raw(const DatasetManifest& manifest) {
    if (manifest.file_paths.empty()) throw ConfigError("manifest lists no input files");

    RawTable table;
    for (std::size_t f = 0; f < manifest.file_paths.size(); ++f) {
        auto file = csv::read_file(manifest.file_paths[f], manifest.has_header);
        if (manifest.has_header) {
            if (table.header.empty()) {
                table.header = file.header;
            } else if (table.header != file.header) {
                throw MalformedRow("'" + manifest.file_paths[f].string() +
                                   "' header differs from the first file's header");
            }
        }
        for (auto& row : file.rows) {
            if (!table.header.empty() && row.size() != table.header.size()) {
                throw MalformedRow("'" + manifest.file_paths[f].string() + "': row with " +
                                   std::to_string(row.size()) + " cells under a " +
                                   std::to_string(table.header.size()) + "-cell header");
            }
            table.rows.push_back(std::move(row));
            table.source_file.push_back(static_cast<int>(f));
        }
    }
    if (table.header.empty()) {
        // headerless files follow the documented KDD column layout
        const std::size_t width = table.rows.empty() ? 0 : table.rows.front().size();
        const auto& kdd = nsl_kdd_columns();
        if (width == kdd.size()) {
            table.header = kdd;
        } else if (width + 1 == kdd.size()) {
            table.header.assign(kdd.begin(), kdd.end() - 1);  // pair without difficulty
        } else {
            throw MalformedRow("headerless input has " + std::to_string(width) +
                               " columns; expected the " + std::to_string(kdd.size()) +
                               "-column KDD layout");
        }
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (table.rows[r].size() != table.header.size())
                throw MalformedRow("row " + std::to_string(r + 1) + " has " +
                                   std::to_string(table.rows[r].size()) + " cells, expected " +
                                   std::to_string(table.header.size()));
        }
    }
    return table;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

}  // namespace detail

// The published UNSW-NB15 files spell some categories inconsistently
// ("Backdoor" vs "Backdoors", stray whitespace, case drift). Empty cells
// belong to normal rows.
inline std::string normalize_unsw_category(const std::string& raw) {
    static const std::map<std::string, std::string> canonical = {
        {"normal", "Normal"},       {"analysis", "Analysis"},
        {"backdoor", "Backdoor"},   {"backdoors", "Backdoor"},
        {"dos", "DoS"},             {"exploits", "Exploits"},
        {"fuzzers", "Fuzzers"},     {"generic", "Generic"},
        {"reconnaissance", "Reconnaissance"},
        {"shellcode", "Shellcode"}, {"worms", "Worms"}};
    const std::string key = detail::lower(detail::trim(raw));
    if (key.empty()) return "Normal";
    auto it = canonical.find(key);
    if (it != canonical.end()) return it->second;
    return detail::trim(raw);  // unknown categories pass through verbatim
}

// Specific KDD attack names folded into the four NSL-KDD families. Built
// from the published attack-family documentation; covers both the train-set
// names and the test-only additions.
inline const std::map<std::string, std::string>& nsl_kdd_family_map() {
    static const std::map<std::string, std::string> fold = {
        // DoS
        {"back", "DoS"}, {"land", "DoS"}, {"neptune", "DoS"}, {"pod", "DoS"},
        {"smurf", "DoS"}, {"teardrop", "DoS"}, {"apache2", "DoS"}, {"mailbomb", "DoS"},
        {"processtable", "DoS"}, {"udpstorm", "DoS"},
        // Probe
        {"ipsweep", "Probe"}, {"nmap", "Probe"}, {"portsweep", "Probe"}, {"satan", "Probe"},
        {"mscan", "Probe"}, {"saint", "Probe"},
        // R2L
        {"ftp_write", "R2L"}, {"guess_passwd", "R2L"}, {"imap", "R2L"}, {"multihop", "R2L"},
        {"phf", "R2L"}, {"spy", "R2L"}, {"warezclient", "R2L"}, {"warezmaster", "R2L"},
        {"named", "R2L"}, {"sendmail", "R2L"}, {"snmpgetattack", "R2L"}, {"snmpguess", "R2L"},
        {"xlock", "R2L"}, {"xsnoop", "R2L"}, {"worm", "R2L"},
        // U2R
        {"buffer_overflow", "U2R"}, {"loadmodule", "U2R"}, {"perl", "U2R"}, {"rootkit", "U2R"},
        {"httptunnel", "U2R"}, {"ps", "U2R"}, {"sqlattack", "U2R"}, {"xterm", "U2R"}};
    return fold;
}

// Labels resolved, features still raw strings. The feature table keeps the
// per-row source-file tags so the official split survives preprocessing.
struct LabeledTable {
    std::vector<std::string> feature_names;  // label/category/drop columns removed
    std::vector<std::vector<std::string>> rows;
    std::vector<int> source_file;
    std::vector<int> binary_labels;
    std::vector<int> multiclass_labels;
    std::vector<std::string> class_names;  // [0] == "Normal"

    std::size_t n_rows() const { return rows.size(); }
};

inline LabeledTable map_labels(const RawTable& raw, const DatasetManifest& manifest) {
    const int label_col = raw.column(manifest.label_column);
    if (label_col < 0)
        throw MissingLabel("label column '" + manifest.label_column + "' not found");
    int category_col = -1;
    if (manifest.attack_category_column) {
        category_col = raw.column(*manifest.attack_category_column);
        if (category_col < 0)
            throw MissingLabel("attack category column '" + *manifest.attack_category_column +
                               "' not found");
    }

    // Per-row canonical class name plus the binary flag from the label column.
    std::vector<std::string> row_class(raw.n_rows());
    LabeledTable out;
    out.binary_labels.resize(raw.n_rows());
    for (std::size_t r = 0; r < raw.n_rows(); ++r) {
        const std::string& label_cell = raw.rows[r][static_cast<std::size_t>(label_col)];
        if (manifest.dataset_id == DatasetId::NslKdd) {
            const std::string name = detail::lower(detail::trim(label_cell));
            if (name.empty()) throw MissingLabel("row " + std::to_string(r + 1) + ": empty label");
            if (name == "normal") {
                row_class[r] = "Normal";
                out.binary_labels[r] = 0;
            } else {
                auto it = nsl_kdd_family_map().find(name);
                if (it == nsl_kdd_family_map().end())
                    throw UnknownAttackName("row " + std::to_string(r + 1) + ": attack name '" +
                                            name + "' not in the family fold-map");
                row_class[r] = it->second;
                out.binary_labels[r] = 1;
            }
        } else {
            const auto num = csv::parse_number(detail::trim(label_cell));
            if (!num)
                throw MissingLabel("row " + std::to_string(r + 1) + ": label cell '" +
                                   label_cell + "' is not 0/1");
            out.binary_labels[r] = (*num != 0.0) ? 1 : 0;
            row_class[r] = category_col >= 0
                               ? normalize_unsw_category(raw.rows[r][static_cast<std::size_t>(category_col)])
                               : (out.binary_labels[r] ? "Anomaly" : "Normal");
        }
    }

    std::set<std::string> attacks;
    for (const auto& name : row_class)
        if (name != "Normal") attacks.insert(name);
    out.class_names.push_back("Normal");
    out.class_names.insert(out.class_names.end(), attacks.begin(), attacks.end());

    std::map<std::string, int> class_index;
    for (std::size_t c = 0; c < out.class_names.size(); ++c)
        class_index[out.class_names[c]] = static_cast<int>(c);
    out.multiclass_labels.resize(raw.n_rows());
    for (std::size_t r = 0; r < raw.n_rows(); ++r)
        out.multiclass_labels[r] = class_index[row_class[r]];

    // Feature columns: everything except the label, category, and drops.
    std::set<std::string> removed(manifest.drop_columns.begin(), manifest.drop_columns.end());
    removed.insert(manifest.label_column);
    if (manifest.attack_category_column) removed.insert(*manifest.attack_category_column);
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
        if (!removed.count(raw.header[c])) {
            keep.push_back(c);
            out.feature_names.push_back(raw.header[c]);
        }
    }
    out.rows.reserve(raw.n_rows());
    for (const auto& row : raw.rows) {
        std::vector<std::string> cells;
        cells.reserve(keep.size());
        for (std::size_t c : keep) cells.push_back(row[c]);
        out.rows.push_back(std::move(cells));
    }
    out.source_file = raw.source_file;
    return out;
}

}  // namespace netml
