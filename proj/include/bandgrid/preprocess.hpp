#pragma once

#include <cstddef>
#include <vector>

namespace bandgrid {

using Matrix = std::vector<std::vector<double>>;

struct NormStats {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t columns() const { return min.size(); }
    bool constant_column(std::size_t c) const { return min[c] == max[c]; }
};

NormStats fit_normalizer(const Matrix& rows);

double normalize_value(double value, double lo, double hi);

std::vector<double> normalize_row(const std::vector<double>& row, const NormStats& stats);

Matrix normalize(const Matrix& rows, const NormStats& stats);

std::vector<double> uniform_boundaries(int num_bands);

// Boundaries over normalized column values; falls back to uniform when there
// are fewer distinct values than bands (sets *fell_back when provided).
std::vector<double> gap_boundaries(const std::vector<double>& column_values, int num_bands,
                                   bool* fell_back = nullptr);

}  // namespace bandgrid
