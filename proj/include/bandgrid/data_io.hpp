#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bandgrid/balance.hpp"
#include "bandgrid/preprocess.hpp"

namespace bandgrid {

struct TestSplit {
    std::string mode;        // "" (none), "file", "per_class_tail"
    int rows_per_class = 0;  // per_class_tail only
};

struct DatasetDescriptor {
    std::string name;
    std::map<std::string, std::string> files;  // "all" | "train" | "test" -> path
    char delimiter = ',';
    int label_column = -1;
    std::vector<int> ignore_columns;
    std::map<int, std::vector<std::string>> categorical_columns;
    std::vector<std::string> category_labels;
    bool has_separate_test = false;
    int default_bands = 10;
    PolicySpec default_policy;
    TestSplit test_split;
    std::map<std::string, std::string> checksums;  // optional, file key -> sha256
    std::string source_path;                       // descriptor file location
};

struct Dataset {
    Matrix features;
    std::vector<std::size_t> labels;
    DatasetDescriptor descriptor;
    std::string split;  // "train" | "test" | "all"

    std::size_t rows() const { return features.size(); }
    std::size_t variables() const { return features.empty() ? 0 : features[0].size(); }
    std::vector<std::size_t> category_counts() const;
};

struct LoadedData {
    Dataset train;                 // the "all" rows when no split exists
    std::optional<Dataset> test;
};

DatasetDescriptor load_descriptor(const std::string& path);

LoadedData load(const DatasetDescriptor& descriptor, const std::string& data_root);

std::vector<double> encode_categorical(const std::vector<std::string>& raw_column,
                                       const std::vector<std::string>& levels);

// FNV-1a over the descriptor file bytes; pairing check between saved models
// and the descriptor they were trained from.
std::string descriptor_hash(const std::string& descriptor_path);

}  // namespace bandgrid
