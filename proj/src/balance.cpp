#include "bandgrid/balance.hpp"

#include <cstdio>
#include <stdexcept>

#include "bandgrid/errors.hpp"

namespace bandgrid {

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::row_uniform: return "row_uniform";
        case Strategy::per_category: return "per_category";
        case Strategy::per_category_adjusted: return "per_category_adjusted";
        case Strategy::manual: return "manual";
    }
    throw std::logic_error("unreachable strategy value");
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "row_uniform" || name == "flat" || name == "uniform" || name == "none") {
        return Strategy::row_uniform;
    }
    if (name == "per_category" || name == "per-category" || name == "scaling") {
        return Strategy::per_category;
    }
    if (name == "per_category_adjusted" || name == "adjusted") {
        return Strategy::per_category_adjusted;
    }
    if (name == "manual") {
        return Strategy::manual;
    }
    throw ConfigError("unknown increment strategy '" + name + "'");
}

std::string IncrementPolicy::describe() const {
    std::string text = strategy_name(strategy) + " (cw=";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", cw);
    text += buf;
    text += ", ow=";
    for (std::size_t i = 0; i < ow.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.10g", ow[i]);
        if (i > 0) {
            text += ", ";
        }
        text += buf;
    }
    text += ")";
    return text;
}

IncrementPolicy make_policy(const std::vector<std::size_t>& category_counts, std::size_t total_rows,
                            Strategy strategy, const std::vector<long long>& adjustments) {
    if (total_rows == 0) {
        throw ConfigError("cannot build an increment policy for zero rows");
    }
    std::size_t sum = 0;
    for (std::size_t c : category_counts) {
        sum += c;
    }
    if (sum != total_rows) {
        throw ConfigError("category counts sum to " + std::to_string(sum) + ", expected " +
                          std::to_string(total_rows));
    }

    IncrementPolicy policy;
    policy.strategy = strategy;
    policy.cw = 1.0 / static_cast<double>(total_rows);
    policy.ow.resize(category_counts.size());

    switch (strategy) {
        case Strategy::row_uniform:
            for (auto& w : policy.ow) {
                w = 1.0 / static_cast<double>(total_rows);
            }
            break;
        case Strategy::per_category:
            for (std::size_t i = 0; i < category_counts.size(); ++i) {
                if (category_counts[i] == 0) {
                    throw ConfigError("category " + std::to_string(i + 1) +
                                      " has no rows; per-category weights need every count >= 1");
                }
                policy.ow[i] = 1.0 / static_cast<double>(category_counts[i]);
            }
            break;
        case Strategy::per_category_adjusted: {
            if (adjustments.size() != category_counts.size()) {
                throw ConfigError("adjusted policy needs one adjustment per category (" +
                                  std::to_string(category_counts.size()) + "), got " +
                                  std::to_string(adjustments.size()));
            }
            for (std::size_t i = 0; i < category_counts.size(); ++i) {
                const long long denom =
                    static_cast<long long>(category_counts[i]) + adjustments[i];
                if (denom <= 0) {
                    throw ConfigError("adjustment drives category " + std::to_string(i + 1) +
                                      " denominator to " + std::to_string(denom));
                }
                policy.ow[i] = 1.0 / static_cast<double>(denom);
            }
            break;
        }
        case Strategy::manual:
            throw ConfigError("manual policies carry their own weights; use manual_policy()");
    }
    return policy;
}

IncrementPolicy manual_policy(std::vector<double> ow, std::size_t total_rows, Strategy label) {
    if (total_rows == 0) {
        throw ConfigError("cannot build an increment policy for zero rows");
    }
    if (ow.empty()) {
        throw ConfigError("manual output weight list is empty");
    }
    for (double w : ow) {
        if (!(w > 0.0)) {
            throw ConfigError("manual output weights must all be positive");
        }
    }
    IncrementPolicy policy;
    policy.strategy = label;
    policy.cw = 1.0 / static_cast<double>(total_rows);
    policy.ow = std::move(ow);
    return policy;
}

IncrementPolicy resolve_policy(const PolicySpec& spec, const std::vector<std::size_t>& category_counts,
                               std::size_t total_rows) {
    if (!spec.denominators.empty()) {
        if (spec.denominators.size() != category_counts.size()) {
            throw ConfigError("policy lists " + std::to_string(spec.denominators.size()) +
                              " denominators for " + std::to_string(category_counts.size()) +
                              " categories");
        }
        std::vector<double> ow(spec.denominators.size());
        for (std::size_t i = 0; i < ow.size(); ++i) {
            if (!(spec.denominators[i] > 0.0)) {
                throw ConfigError("policy denominators must be positive");
            }
            ow[i] = 1.0 / spec.denominators[i];
        }
        return manual_policy(std::move(ow), total_rows, spec.strategy);
    }
    if (spec.strategy == Strategy::row_uniform && spec.flat_value.has_value()) {
        if (!(*spec.flat_value > 0.0)) {
            throw ConfigError("flat output weight must be positive");
        }
        return manual_policy(std::vector<double>(category_counts.size(), *spec.flat_value),
                             total_rows, Strategy::row_uniform);
    }
    if (spec.strategy == Strategy::manual) {
        throw ConfigError("manual policy requires explicit denominators");
    }
    return make_policy(category_counts, total_rows, spec.strategy, spec.adjustments);
}

}  // namespace bandgrid
