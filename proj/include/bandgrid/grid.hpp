#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bandgrid/balance.hpp"
#include "bandgrid/preprocess.hpp"

namespace bandgrid {

struct Cell {
    double scale_weight = 0.0;
    std::vector<double> output_weights;
};

// All bands of one variable. Uniform rows locate a value by ceiling division
// with the stored reciprocal width; this keeps values that sit exactly on a
// boundary in the lower band, which is the convention the reference weight
// tables were produced with. Nonuniform rows scan their right-edge list.
struct BandRow {
    std::vector<Cell> cells;
    std::vector<double> boundaries;  // right edges in [0,1], last entry 1.0
    double width = 0.0;              // 1.0 / band count for uniform rows, else 0

    int band_count() const { return static_cast<int>(cells.size()); }
    int band_index(double normalized_value) const;
};

struct Classification {
    std::size_t category = 0;
    std::vector<double> scores;
};

class Grid {
  public:
    Grid() = default;
    Grid(std::size_t variables, int bands, std::size_t categories);
    Grid(const std::vector<std::vector<double>>& per_variable_boundaries, std::size_t categories);

    void train_row(const std::vector<double>& normalized_row, std::size_t label,
                   const IncrementPolicy& policy);
    Classification classify(const std::vector<double>& normalized_row) const;

    std::size_t variables() const { return rows_.size(); }
    std::size_t categories() const { return categories_; }
    const BandRow& row(std::size_t variable) const { return rows_[variable]; }
    BandRow& row(std::size_t variable) { return rows_[variable]; }
    const Cell& cell(std::size_t variable, int band) const { return rows_[variable].cells[band]; }
    Cell& cell(std::size_t variable, int band) { return rows_[variable].cells[band]; }
    std::uint64_t update_count() const { return updates_; }

    bool operator==(const Grid& other) const;

  private:
    std::vector<BandRow> rows_;
    std::size_t categories_ = 0;
    std::uint64_t updates_ = 0;
};

}  // namespace bandgrid
