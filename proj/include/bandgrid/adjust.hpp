#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bandgrid/grid.hpp"

namespace bandgrid {

enum class AdjustMode { dominant, true_class, all_non_true };

std::string adjust_mode_name(AdjustMode mode);
AdjustMode adjust_mode_from_name(const std::string& name);

struct AdjustConfig {
    double eta = 0.01;
    int epochs = 1;
    double floor = 0.0;
    AdjustMode mode = AdjustMode::dominant;
};

// Competitive post-training update over misclassified rows. Scale weights are
// never touched. Returns the number of flip events: a row counts once per
// epoch in which its post-update prediction becomes correct.
std::size_t adjust_pass(Grid& grid, const Matrix& normalized_rows,
                        const std::vector<std::size_t>& labels, const AdjustConfig& config);

}  // namespace bandgrid
