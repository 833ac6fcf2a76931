#include "bandgrid/data_io.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bandgrid/errors.hpp"

#include "json.hpp"

namespace bandgrid {

namespace {

using nlohmann::json;

PolicySpec parse_policy_spec(const json& j) {
    PolicySpec spec;
    if (j.is_string()) {
        spec.strategy = strategy_from_name(j.get<std::string>());
        return spec;
    }
    if (!j.is_object()) {
        throw ConfigError("policy must be a strategy name or an object");
    }
    spec.strategy = strategy_from_name(j.at("strategy").get<std::string>());
    if (j.contains("adjustments")) {
        spec.adjustments = j.at("adjustments").get<std::vector<long long>>();
    }
    if (j.contains("denominators")) {
        spec.denominators = j.at("denominators").get<std::vector<double>>();
    }
    if (j.contains("flat_value")) {
        spec.flat_value = j.at("flat_value").get<double>();
    }
    return spec;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    if (delimiter == ' ') {
        while (stream >> field) {
            fields.push_back(field);
        }
        return fields;
    }
    while (std::getline(stream, field, delimiter)) {
        fields.push_back(field);
    }
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct RawTable {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

RawTable read_table(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open dataset file: " + path);
    }
    RawTable table;
    std::string line;
    std::size_t line_number = 0;
    std::size_t expected_fields = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string trimmed = trim(line);
        if (trimmed.empty()) {
            continue;
        }
        auto fields = split_line(trimmed, delimiter);
        for (auto& f : fields) {
            f = trim(f);
        }
        if (expected_fields == 0) {
            expected_fields = fields.size();
        } else if (fields.size() != expected_fields) {
            throw DataError(path + ":" + std::to_string(line_number) + ": expected " +
                            std::to_string(expected_fields) + " fields, found " +
                            std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_number);
    }
    if (table.rows.empty()) {
        throw DataError("dataset file has no rows: " + path);
    }
    return table;
}

Dataset decode_table(const RawTable& table, const DatasetDescriptor& desc,
                     const std::string& path, const std::string& split) {
    const int columns = static_cast<int>(table.rows[0].size());
    if (desc.label_column < 0 || desc.label_column >= columns) {
        throw ConfigError(desc.name + ": label column " + std::to_string(desc.label_column) +
                          " out of range for " + std::to_string(columns) + " columns");
    }

    std::vector<int> feature_columns;
    for (int c = 0; c < columns; ++c) {
        if (c == desc.label_column) {
            continue;
        }
        if (std::find(desc.ignore_columns.begin(), desc.ignore_columns.end(), c) !=
            desc.ignore_columns.end()) {
            continue;
        }
        feature_columns.push_back(c);
    }
    if (feature_columns.empty()) {
        throw ConfigError(desc.name + ": no feature columns remain after exclusions");
    }

    Dataset data;
    data.descriptor = desc;
    data.split = split;
    data.features.reserve(table.rows.size());
    data.labels.reserve(table.rows.size());

    std::map<int, std::map<std::string, std::size_t>> level_index;
    for (const auto& [col, levels] : desc.categorical_columns) {
        auto& idx = level_index[col];
        for (std::size_t i = 0; i < levels.size(); ++i) {
            idx[levels[i]] = i;
        }
    }

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const std::string location = path + ":" + std::to_string(table.line_numbers[r]);

        const std::string& label_text = fields[desc.label_column];
        const auto label_it =
            std::find(desc.category_labels.begin(), desc.category_labels.end(), label_text);
        if (label_it == desc.category_labels.end()) {
            throw DataError(location + ": unknown category label '" + label_text + "'");
        }
        data.labels.push_back(
            static_cast<std::size_t>(label_it - desc.category_labels.begin()));

        std::vector<double> row;
        row.reserve(feature_columns.size());
        for (int c : feature_columns) {
            const std::string& text = fields[c];
            const auto levels_it = level_index.find(c);
            if (levels_it != level_index.end()) {
                const auto& levels = desc.categorical_columns.at(c);
                const auto it = levels_it->second.find(text);
                if (it == levels_it->second.end()) {
                    throw DataError(location + ": unknown level '" + text + "' in column " +
                                    std::to_string(c + 1));
                }
                row.push_back(levels.size() <= 1
                                  ? 0.0
                                  : static_cast<double>(it->second) /
                                        static_cast<double>(levels.size() - 1));
                continue;
            }
            try {
                std::size_t consumed = 0;
                const double value = std::stod(text, &consumed);
                if (consumed != text.size()) {
                    throw std::invalid_argument(text);
                }
                row.push_back(value);
            } catch (const std::exception&) {
                throw DataError(location + ": cannot parse '" + text + "' in column " +
                                std::to_string(c + 1) + " as a number");
            }
        }
        data.features.push_back(std::move(row));
    }
    return data;
}

std::string resolve_path(const std::string& file, const std::string& data_root,
                         const std::string& descriptor_dir) {
    namespace fs = std::filesystem;
    fs::path p(file);
    if (p.is_absolute()) {
        return p.string();
    }
    if (!data_root.empty() && fs::exists(fs::path(data_root) / p)) {
        return (fs::path(data_root) / p).string();
    }
    if (!descriptor_dir.empty() && fs::exists(fs::path(descriptor_dir) / p)) {
        return (fs::path(descriptor_dir) / p).string();
    }
    if (!data_root.empty()) {
        return (fs::path(data_root) / p).string();
    }
    return p.string();
}

}  // namespace

std::vector<std::size_t> Dataset::category_counts() const {
    std::vector<std::size_t> counts(descriptor.category_labels.size(), 0);
    for (std::size_t label : labels) {
        ++counts[label];
    }
    return counts;
}

DatasetDescriptor load_descriptor(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open descriptor: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("descriptor " + path + " is not valid JSON: " + e.what());
    }

    DatasetDescriptor desc;
    desc.source_path = path;
    try {
        desc.name = j.at("name").get<std::string>();
        desc.files = j.at("files").get<std::map<std::string, std::string>>();
        if (j.contains("delimiter")) {
            const auto d = j.at("delimiter").get<std::string>();
            if (d.size() != 1) {
                throw ConfigError("descriptor delimiter must be a single character");
            }
            desc.delimiter = d[0];
        }
        desc.label_column = j.at("label_column").get<int>();
        if (j.contains("ignore_columns")) {
            desc.ignore_columns = j.at("ignore_columns").get<std::vector<int>>();
        }
        if (j.contains("categorical_columns")) {
            for (const auto& [key, levels] : j.at("categorical_columns").items()) {
                desc.categorical_columns[std::stoi(key)] =
                    levels.get<std::vector<std::string>>();
            }
        }
        desc.category_labels = j.at("category_labels").get<std::vector<std::string>>();
        if (j.contains("default_bands")) {
            desc.default_bands = j.at("default_bands").get<int>();
        }
        if (j.contains("default_policy")) {
            desc.default_policy = parse_policy_spec(j.at("default_policy"));
        }
        if (j.contains("test_split")) {
            const auto& ts = j.at("test_split");
            desc.test_split.mode = ts.at("mode").get<std::string>();
            if (ts.contains("rows_per_class")) {
                desc.test_split.rows_per_class = ts.at("rows_per_class").get<int>();
            }
        }
        if (j.contains("checksums")) {
            desc.checksums = j.at("checksums").get<std::map<std::string, std::string>>();
        }
    } catch (const json::exception& e) {
        throw ConfigError("descriptor " + path + ": " + e.what());
    }

    if (desc.category_labels.empty()) {
        throw ConfigError("descriptor " + path + ": category_labels must not be empty");
    }
    {
        auto sorted = desc.category_labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ConfigError("descriptor " + path + ": category_labels must be distinct");
        }
    }
    if (std::find(desc.ignore_columns.begin(), desc.ignore_columns.end(), desc.label_column) !=
        desc.ignore_columns.end()) {
        throw ConfigError("descriptor " + path + ": label column cannot be ignored");
    }
    desc.has_separate_test =
        desc.files.count("test") > 0 || desc.test_split.mode == "per_class_tail";
    if (desc.files.count("all") == 0 && desc.files.count("train") == 0) {
        throw ConfigError("descriptor " + path + ": needs an 'all' or 'train' file entry");
    }
    return desc;
}

LoadedData load(const DatasetDescriptor& descriptor, const std::string& data_root) {
    namespace fs = std::filesystem;
    const std::string descriptor_dir = fs::path(descriptor.source_path).parent_path().string();

    LoadedData loaded;
    if (descriptor.files.count("train") > 0) {
        const std::string train_path =
            resolve_path(descriptor.files.at("train"), data_root, descriptor_dir);
        loaded.train = decode_table(read_table(train_path, descriptor.delimiter), descriptor,
                                    train_path, "train");
        if (descriptor.files.count("test") > 0) {
            const std::string test_path =
                resolve_path(descriptor.files.at("test"), data_root, descriptor_dir);
            loaded.test = decode_table(read_table(test_path, descriptor.delimiter), descriptor,
                                       test_path, "test");
        }
        return loaded;
    }

    const std::string all_path =
        resolve_path(descriptor.files.at("all"), data_root, descriptor_dir);
    Dataset all = decode_table(read_table(all_path, descriptor.delimiter), descriptor, all_path,
                               "all");

    if (descriptor.test_split.mode.empty()) {
        loaded.train = std::move(all);
        return loaded;
    }
    if (descriptor.test_split.mode != "per_class_tail") {
        throw ConfigError(descriptor.name + ": unknown test_split mode '" +
                          descriptor.test_split.mode + "'");
    }
    const int per_class = descriptor.test_split.rows_per_class;
    if (per_class <= 0) {
        throw ConfigError(descriptor.name + ": per_class_tail needs rows_per_class >= 1");
    }

    // The last rows_per_class rows of each category form the test set; file
    // order decides which rows those are, so the split is deterministic.
    const std::size_t categories = descriptor.category_labels.size();
    std::vector<std::vector<std::size_t>> by_class(categories);
    for (std::size_t r = 0; r < all.rows(); ++r) {
        by_class[all.labels[r]].push_back(r);
    }
    std::vector<bool> in_test(all.rows(), false);
    for (std::size_t c = 0; c < categories; ++c) {
        if (by_class[c].size() < static_cast<std::size_t>(per_class)) {
            throw DataError(descriptor.name + ": category '" + descriptor.category_labels[c] +
                            "' has only " + std::to_string(by_class[c].size()) +
                            " rows, cannot hold out " + std::to_string(per_class));
        }
        for (std::size_t i = by_class[c].size() - per_class; i < by_class[c].size(); ++i) {
            in_test[by_class[c][i]] = true;
        }
    }

    Dataset train, test;
    train.descriptor = descriptor;
    train.split = "train";
    test.descriptor = descriptor;
    test.split = "test";
    for (std::size_t r = 0; r < all.rows(); ++r) {
        auto& target = in_test[r] ? test : train;
        target.features.push_back(std::move(all.features[r]));
        target.labels.push_back(all.labels[r]);
    }
    loaded.train = std::move(train);
    loaded.test = std::move(test);
    return loaded;
}

std::vector<double> encode_categorical(const std::vector<std::string>& raw_column,
                                       const std::vector<std::string>& levels) {
    if (levels.empty()) {
        throw ConfigError("categorical encoding needs at least one level");
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        index[levels[i]] = i;
    }
    std::vector<double> out;
    out.reserve(raw_column.size());
    for (std::size_t r = 0; r < raw_column.size(); ++r) {
        const auto it = index.find(raw_column[r]);
        if (it == index.end()) {
            throw DataError("unknown level '" + raw_column[r] + "' at row " +
                            std::to_string(r + 1));
        }
        out.push_back(levels.size() <= 1 ? 0.0
                                         : static_cast<double>(it->second) /
                                               static_cast<double>(levels.size() - 1));
    }
    return out;
}

std::string descriptor_hash(const std::string& descriptor_path) {
    std::ifstream in(descriptor_path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open descriptor for hashing: " + descriptor_path);
    }
    std::uint64_t hash = 14695981039346656037ull;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace bandgrid
