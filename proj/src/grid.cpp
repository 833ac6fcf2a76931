#include "bandgrid/grid.hpp"

#include <cmath>
#include <string>

#include "bandgrid/errors.hpp"

namespace bandgrid {

int BandRow::band_index(double normalized_value) const {
    const int n = band_count();
    if (width > 0.0) {
        const int i = static_cast<int>(std::ceil(normalized_value / width)) - 1;
        if (i < 0) return 0;
        if (i >= n) return n - 1;
        return i;
    }
    for (int i = 0; i < n; ++i) {
        if (normalized_value <= boundaries[i]) {
            return i;
        }
    }
    return n - 1;
}

namespace {

Cell zero_cell(std::size_t categories) {
    Cell cell;
    cell.output_weights.assign(categories, 0.0);
    return cell;
}

}  // namespace

Grid::Grid(std::size_t variables, int bands, std::size_t categories) : categories_(categories) {
    if (variables == 0) {
        throw ConfigError("a grid needs at least one variable");
    }
    if (categories == 0) {
        throw ConfigError("a grid needs at least one output category");
    }
    BandRow proto;
    proto.boundaries = uniform_boundaries(bands);
    proto.width = 1.0 / bands;
    proto.cells.assign(bands, zero_cell(categories));
    rows_.assign(variables, proto);
}

Grid::Grid(const std::vector<std::vector<double>>& per_variable_boundaries, std::size_t categories)
    : categories_(categories) {
    if (per_variable_boundaries.empty()) {
        throw ConfigError("a grid needs at least one variable");
    }
    if (categories == 0) {
        throw ConfigError("a grid needs at least one output category");
    }
    rows_.reserve(per_variable_boundaries.size());
    for (const auto& edges : per_variable_boundaries) {
        if (edges.empty()) {
            throw ConfigError("a variable needs at least one band boundary");
        }
        BandRow row;
        row.boundaries = edges;
        row.width = 0.0;
        row.cells.assign(edges.size(), zero_cell(categories));
        rows_.push_back(std::move(row));
    }
}

void Grid::train_row(const std::vector<double>& normalized_row, std::size_t label,
                     const IncrementPolicy& policy) {
    if (normalized_row.size() != rows_.size()) {
        throw ConfigError("training row has " + std::to_string(normalized_row.size()) +
                          " variables, grid has " + std::to_string(rows_.size()));
    }
    if (label >= categories_) {
        throw DataError("label " + std::to_string(label) + " out of range for " +
                        std::to_string(categories_) + " categories");
    }
    for (std::size_t v = 0; v < rows_.size(); ++v) {
        Cell& cell = rows_[v].cells[rows_[v].band_index(normalized_row[v])];
        cell.scale_weight += policy.cw;
        cell.output_weights[label] += policy.ow[label];
        ++updates_;
    }
}

Classification Grid::classify(const std::vector<double>& normalized_row) const {
    if (normalized_row.size() != rows_.size()) {
        throw ConfigError("row has " + std::to_string(normalized_row.size()) +
                          " variables, grid has " + std::to_string(rows_.size()));
    }
    Classification result;
    result.scores.assign(categories_, 0.0);
    for (std::size_t v = 0; v < rows_.size(); ++v) {
        const Cell& cell = rows_[v].cells[rows_[v].band_index(normalized_row[v])];
        if (cell.scale_weight > 0.0) {
            for (std::size_t c = 0; c < categories_; ++c) {
                result.scores[c] += cell.output_weights[c] / cell.scale_weight;
            }
        }
    }
    for (std::size_t c = 1; c < categories_; ++c) {
        if (result.scores[c] > result.scores[result.category]) {
            result.category = c;
        }
    }
    return result;
}

bool Grid::operator==(const Grid& other) const {
    if (categories_ != other.categories_ || rows_.size() != other.rows_.size()) {
        return false;
    }
    for (std::size_t v = 0; v < rows_.size(); ++v) {
        const BandRow& a = rows_[v];
        const BandRow& b = other.rows_[v];
        if (a.width != b.width || a.boundaries != b.boundaries || a.cells.size() != b.cells.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.cells.size(); ++i) {
            if (a.cells[i].scale_weight != b.cells[i].scale_weight ||
                a.cells[i].output_weights != b.cells[i].output_weights) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace bandgrid
