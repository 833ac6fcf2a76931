#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bandgrid {

enum class Strategy { row_uniform, per_category, per_category_adjusted, manual };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct IncrementPolicy {
    Strategy strategy = Strategy::row_uniform;
    double cw = 0.0;
    std::vector<double> ow;

    std::string describe() const;
};

IncrementPolicy make_policy(const std::vector<std::size_t>& category_counts, std::size_t total_rows,
                            Strategy strategy, const std::vector<long long>& adjustments = {});

IncrementPolicy manual_policy(std::vector<double> ow, std::size_t total_rows,
                              Strategy label = Strategy::manual);

// Unresolved policy request as it appears in descriptors and CLI flags; turned
// into a concrete IncrementPolicy once the category counts are known.
struct PolicySpec {
    Strategy strategy = Strategy::per_category;
    std::vector<long long> adjustments;   // per_category_adjusted: ow = 1/(count + adjustment)
    std::vector<double> denominators;     // direct form: ow = 1/denominator
    std::optional<double> flat_value;     // row_uniform with an explicit flat ow value
};

IncrementPolicy resolve_policy(const PolicySpec& spec, const std::vector<std::size_t>& category_counts,
                               std::size_t total_rows);

}  // namespace bandgrid
