#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "bandgrid/data_io.hpp"

namespace bandgrid::testing {

inline std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return (value != nullptr && *value != '\0') ? std::string(value) : fallback;
}

inline std::string data_root() { return env_or("BANDGRID_DATA_ROOT", "data"); }
inline std::string descriptor_dir() { return env_or("BANDGRID_DESCRIPTOR_DIR", "descriptors"); }
inline std::string golden_dir() { return env_or("BANDGRID_GOLDEN_DIR", "tests/golden"); }

inline std::string descriptor_path(const std::string& name) {
    return descriptor_dir() + "/" + name + ".json";
}

inline bool dataset_available(const std::string& name) {
    if (!std::filesystem::exists(descriptor_path(name))) {
        return false;
    }
    const DatasetDescriptor desc = load_descriptor(descriptor_path(name));
    for (const auto& [key, file] : desc.files) {
        if (!std::filesystem::exists(data_root() + "/" + file)) {
            return false;
        }
    }
    return true;
}

inline LoadedData load_by_name(const std::string& name) {
    return load(load_descriptor(descriptor_path(name)), data_root());
}

// In-memory dataset with numeric category labels, for tests that need no files.
inline Dataset memory_dataset(Matrix features, std::vector<std::size_t> labels,
                              std::size_t categories) {
    Dataset dataset;
    dataset.features = std::move(features);
    dataset.labels = std::move(labels);
    dataset.split = "all";
    dataset.descriptor.name = "memory";
    for (std::size_t i = 0; i < categories; ++i) {
        dataset.descriptor.category_labels.push_back(std::to_string(i));
    }
    return dataset;
}

}  // namespace bandgrid::testing
