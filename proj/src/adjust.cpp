#include "bandgrid/adjust.hpp"

#include <algorithm>

#include "bandgrid/errors.hpp"

namespace bandgrid {

std::string adjust_mode_name(AdjustMode mode) {
    switch (mode) {
        case AdjustMode::dominant: return "dominant";
        case AdjustMode::true_class: return "true-class";
        case AdjustMode::all_non_true: return "all-non-true";
    }
    return "dominant";
}

AdjustMode adjust_mode_from_name(const std::string& name) {
    if (name == "dominant") return AdjustMode::dominant;
    if (name == "true-class" || name == "true_class") return AdjustMode::true_class;
    if (name == "all-non-true" || name == "all_non_true") return AdjustMode::all_non_true;
    throw ConfigError("unknown adjust mode '" + name + "'");
}

namespace {

std::size_t dominant_category(const Cell& cell) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < cell.output_weights.size(); ++c) {
        if (cell.output_weights[c] > cell.output_weights[best]) {
            best = c;
        }
    }
    return best;
}

}  // namespace

std::size_t adjust_pass(Grid& grid, const Matrix& normalized_rows,
                        const std::vector<std::size_t>& labels, const AdjustConfig& config) {
    if (normalized_rows.size() != labels.size()) {
        throw ConfigError("adjustment set has " + std::to_string(normalized_rows.size()) +
                          " rows but " + std::to_string(labels.size()) + " labels");
    }
    if (config.eta < 0.0 || config.floor < 0.0 || config.epochs < 0) {
        throw ConfigError("adjustment needs eta >= 0, floor >= 0, epochs >= 0");
    }

    std::size_t corrections = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t r = 0; r < normalized_rows.size(); ++r) {
            const auto& row = normalized_rows[r];
            const std::size_t truth = labels[r];
            if (grid.classify(row).category == truth) {
                continue;
            }
            for (std::size_t v = 0; v < grid.variables(); ++v) {
                Cell& cell = grid.cell(v, grid.row(v).band_index(row[v]));
                const std::size_t dominant = dominant_category(cell);
                if (dominant == truth) {
                    cell.output_weights[truth] += config.eta;
                    continue;
                }
                if (config.eta == 0.0) {
                    continue;  // the clamp below must not pull weights up to the floor
                }
                switch (config.mode) {
                    case AdjustMode::dominant:
                        cell.output_weights[dominant] =
                            std::max(config.floor, cell.output_weights[dominant] - config.eta);
                        break;
                    case AdjustMode::true_class:
                        cell.output_weights[truth] =
                            std::max(config.floor, cell.output_weights[truth] - config.eta);
                        break;
                    case AdjustMode::all_non_true:
                        for (std::size_t c = 0; c < cell.output_weights.size(); ++c) {
                            if (c != truth) {
                                cell.output_weights[c] =
                                    std::max(config.floor, cell.output_weights[c] - config.eta);
                            }
                        }
                        break;
                }
            }
            if (grid.classify(row).category == truth) {
                ++corrections;
            }
        }
    }
    return corrections;
}

}  // namespace bandgrid
