#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bandgrid/data_io.hpp"
#include "bandgrid/grid.hpp"

#include "json.hpp"

namespace bandgrid {

enum class BoundaryMode { uniform, gaps };

std::string boundary_mode_name(BoundaryMode mode);
BoundaryMode boundary_mode_from_name(const std::string& name);

struct TrainedModel {
    Grid grid;
    NormStats stats;
    IncrementPolicy policy;
    BoundaryMode boundaries = BoundaryMode::uniform;
    int bands = 0;
    std::string dataset_name;
    std::string descriptor_sha;
    bool gap_fallback = false;  // gap mode fell back to uniform on some column
};

TrainedModel train_model(const Dataset& train, int bands, const IncrementPolicy& policy,
                         BoundaryMode mode = BoundaryMode::uniform);

struct EvalReport {
    std::string dataset;
    std::string split;
    int bands = 0;
    std::string policy;
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
    std::vector<std::size_t> predictions;             // filled when requested

    std::string to_text(const std::vector<std::string>& category_labels) const;
    nlohmann::json to_json() const;
};

EvalReport evaluate(const TrainedModel& model, const Dataset& rows, bool keep_predictions = false);

EvalReport evaluate_holdout(const Dataset& train, const Dataset& test, int bands,
                            const IncrementPolicy& policy,
                            BoundaryMode mode = BoundaryMode::uniform);

struct SweepEntry {
    int bands = 0;
    bool skipped = false;
    std::string skip_reason;
    EvalReport report;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    int best_bands = 0;            // smallest band count reaching the best accuracy
    std::size_t best_correct = 0;
    bool has_local_optimum = false;  // accuracy dropped and later rose again
    std::size_t cell_cap = 0;

    std::string to_text() const;
    nlohmann::json to_json() const;
    std::string to_csv() const;  // band_count,correct,total,accuracy
};

inline constexpr std::size_t kDefaultSweepCellCap = 10'000'000;

SweepResult sweep_bands(const Dataset& rows, int bands_from, int bands_to,
                        const IncrementPolicy& policy,
                        std::size_t cell_cap = kDefaultSweepCellCap,
                        BoundaryMode mode = BoundaryMode::uniform);

}  // namespace bandgrid
