#include "bandgrid/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bandgrid/errors.hpp"

namespace bandgrid {

NormStats fit_normalizer(const Matrix& rows) {
    if (rows.empty() || rows[0].empty()) {
        throw DataError("cannot fit normalizer on an empty matrix");
    }
    const std::size_t cols = rows[0].size();
    NormStats stats;
    stats.min.assign(cols, 0.0);
    stats.max.assign(cols, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw DataError("row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " columns, expected " +
                            std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = rows[r][c];
            if (!std::isfinite(v)) {
                throw DataError("non-finite value at row " + std::to_string(r + 1) +
                                ", column " + std::to_string(c + 1));
            }
            if (r == 0) {
                stats.min[c] = stats.max[c] = v;
            } else {
                stats.min[c] = std::min(stats.min[c], v);
                stats.max[c] = std::max(stats.max[c], v);
            }
        }
    }
    return stats;
}

double normalize_value(double value, double lo, double hi) {
    if (lo >= hi) {
        return 0.0;
    }
    const double x = (value - lo) / (hi - lo);
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

std::vector<double> normalize_row(const std::vector<double>& row, const NormStats& stats) {
    if (row.size() != stats.columns()) {
        throw ConfigError("row has " + std::to_string(row.size()) +
                          " columns but normalizer was fitted on " +
                          std::to_string(stats.columns()));
    }
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
        out[c] = normalize_value(row[c], stats.min[c], stats.max[c]);
    }
    return out;
}

Matrix normalize(const Matrix& rows, const NormStats& stats) {
    Matrix out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(normalize_row(row, stats));
    }
    return out;
}

std::vector<double> uniform_boundaries(int num_bands) {
    if (num_bands < 1) {
        throw ConfigError("band count must be at least 1, got " + std::to_string(num_bands));
    }
    const double width = 1.0 / num_bands;
    std::vector<double> edges(num_bands);
    for (int i = 0; i < num_bands; ++i) {
        edges[i] = (i + 1) * width;
    }
    edges.back() = 1.0;
    return edges;
}

std::vector<double> gap_boundaries(const std::vector<double>& column_values, int num_bands,
                                   bool* fell_back) {
    if (num_bands < 1) {
        throw ConfigError("band count must be at least 1, got " + std::to_string(num_bands));
    }
    if (fell_back != nullptr) {
        *fell_back = false;
    }
    std::vector<double> distinct(column_values);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (static_cast<int>(distinct.size()) < num_bands) {
        if (fell_back != nullptr) {
            *fell_back = true;
        }
        return uniform_boundaries(num_bands);
    }
    // Midpoints of the num_bands-1 widest gaps between consecutive distinct
    // values; equal gaps resolve to the leftmost.
    std::vector<std::size_t> gap_order(distinct.size() - 1);
    for (std::size_t i = 0; i < gap_order.size(); ++i) {
        gap_order[i] = i;
    }
    std::stable_sort(gap_order.begin(), gap_order.end(), [&](std::size_t a, std::size_t b) {
        return (distinct[a + 1] - distinct[a]) > (distinct[b + 1] - distinct[b]);
    });
    gap_order.resize(num_bands - 1);
    std::sort(gap_order.begin(), gap_order.end());

    std::vector<double> edges;
    edges.reserve(num_bands);
    for (std::size_t g : gap_order) {
        edges.push_back((distinct[g] + distinct[g + 1]) / 2.0);
    }
    edges.push_back(1.0);
    return edges;
}

}  // namespace bandgrid
