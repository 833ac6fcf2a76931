#include "bandgrid/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "bandgrid/errors.hpp"

namespace bandgrid {

std::string boundary_mode_name(BoundaryMode mode) {
    return mode == BoundaryMode::uniform ? "uniform" : "gaps";
}

BoundaryMode boundary_mode_from_name(const std::string& name) {
    if (name == "uniform") return BoundaryMode::uniform;
    if (name == "gaps" || name == "gap") return BoundaryMode::gaps;
    throw ConfigError("unknown boundary mode '" + name + "'");
}

TrainedModel train_model(const Dataset& train, int bands, const IncrementPolicy& policy,
                         BoundaryMode mode) {
    if (train.rows() == 0) {
        throw DataError("cannot train on an empty dataset");
    }
    TrainedModel model;
    model.stats = fit_normalizer(train.features);
    model.policy = policy;
    model.boundaries = mode;
    model.bands = bands;
    model.dataset_name = train.descriptor.name;

    const Matrix normalized = normalize(train.features, model.stats);
    const std::size_t categories = train.descriptor.category_labels.size();

    if (mode == BoundaryMode::uniform) {
        model.grid = Grid(train.variables(), bands, categories);
    } else {
        std::vector<std::vector<double>> edges(train.variables());
        for (std::size_t v = 0; v < train.variables(); ++v) {
            std::vector<double> column(normalized.size());
            for (std::size_t r = 0; r < normalized.size(); ++r) {
                column[r] = normalized[r][v];
            }
            bool fell_back = false;
            edges[v] = gap_boundaries(column, bands, &fell_back);
            model.gap_fallback = model.gap_fallback || fell_back;
        }
        model.grid = Grid(edges, categories);
    }

    for (std::size_t r = 0; r < normalized.size(); ++r) {
        model.grid.train_row(normalized[r], train.labels[r], policy);
    }
    return model;
}

std::string EvalReport::to_text(const std::vector<std::string>& category_labels) const {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", accuracy * 100.0);
    out << "Dataset: " << dataset << " (" << split << ")\n"
        << "Bands:   " << bands << "\n"
        << "Policy:  " << policy << "\n"
        << "Correct: " << correct << " from " << total << " (" << buf << "%)\n";
    out << "Confusion (rows = true, columns = predicted):\n";
    out << "           ";
    for (const auto& label : category_labels) {
        out << " " << label.substr(0, 10);
    }
    out << "\n";
    for (std::size_t t = 0; t < confusion.size(); ++t) {
        out << "  " << category_labels[t].substr(0, 10);
        for (std::size_t i = category_labels[t].substr(0, 10).size(); i < 10; ++i) {
            out << ' ';
        }
        for (std::size_t p = 0; p < confusion[t].size(); ++p) {
            out << " " << confusion[t][p];
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["format"] = "bandgrid-report";
    j["format_version"] = 1;
    j["dataset"] = dataset;
    j["split"] = split;
    j["bands"] = bands;
    j["policy"] = policy;
    j["correct"] = correct;
    j["total"] = total;
    j["accuracy"] = accuracy;
    j["confusion"] = confusion;
    if (!predictions.empty()) {
        j["predictions"] = predictions;
    }
    return j;
}

EvalReport evaluate(const TrainedModel& model, const Dataset& rows, bool keep_predictions) {
    if (rows.variables() != model.stats.columns()) {
        throw ConfigError("dataset has " + std::to_string(rows.variables()) +
                          " variables, model expects " + std::to_string(model.stats.columns()));
    }
    const std::size_t categories = model.grid.categories();
    if (rows.descriptor.category_labels.size() != categories) {
        throw ConfigError("dataset has " + std::to_string(rows.descriptor.category_labels.size()) +
                          " categories, model expects " + std::to_string(categories));
    }

    EvalReport report;
    report.dataset = rows.descriptor.name;
    report.split = rows.split;
    report.bands = model.bands;
    report.policy = model.policy.describe();
    report.total = rows.rows();
    report.confusion.assign(categories, std::vector<std::size_t>(categories, 0));
    if (keep_predictions) {
        report.predictions.reserve(rows.rows());
    }

    for (std::size_t r = 0; r < rows.rows(); ++r) {
        const auto normalized = normalize_row(rows.features[r], model.stats);
        const auto result = model.grid.classify(normalized);
        ++report.confusion[rows.labels[r]][result.category];
        if (result.category == rows.labels[r]) {
            ++report.correct;
        }
        if (keep_predictions) {
            report.predictions.push_back(result.category);
        }
    }
    report.accuracy =
        report.total == 0 ? 0.0 : static_cast<double>(report.correct) / report.total;
    return report;
}

EvalReport evaluate_holdout(const Dataset& train, const Dataset& test, int bands,
                            const IncrementPolicy& policy, BoundaryMode mode) {
    if (train.variables() != test.variables()) {
        throw ConfigError("train has " + std::to_string(train.variables()) +
                          " variables, test has " + std::to_string(test.variables()));
    }
    if (train.descriptor.category_labels.size() != test.descriptor.category_labels.size()) {
        throw ConfigError("train and test category sets differ");
    }
    const TrainedModel model = train_model(train, bands, policy, mode);
    return evaluate(model, test);
}

std::string SweepResult::to_text() const {
    std::ostringstream out;
    out << "Bands  Correct  Total  Accuracy\n";
    char buf[64];
    for (const auto& entry : entries) {
        if (entry.skipped) {
            out << entry.bands << "  skipped (" << entry.skip_reason << ")\n";
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%-6d %-8zu %-6zu %.10g%%", entry.bands,
                      entry.report.correct, entry.report.total, entry.report.accuracy * 100.0);
        out << buf;
        if (entry.bands == best_bands) {
            out << "  <- best";
        }
        out << "\n";
    }
    if (has_local_optimum) {
        out << "note: accuracy dropped and rose again across this range (local optimum)\n";
    }
    return out.str();
}

nlohmann::json SweepResult::to_json() const {
    nlohmann::json j;
    j["format"] = "bandgrid-sweep";
    j["format_version"] = 1;
    j["best_bands"] = best_bands;
    j["best_correct"] = best_correct;
    j["has_local_optimum"] = has_local_optimum;
    j["cell_cap"] = cell_cap;
    j["entries"] = nlohmann::json::array();
    for (const auto& entry : entries) {
        nlohmann::json e;
        e["bands"] = entry.bands;
        e["skipped"] = entry.skipped;
        if (entry.skipped) {
            e["skip_reason"] = entry.skip_reason;
        } else {
            e["report"] = entry.report.to_json();
        }
        j["entries"].push_back(std::move(e));
    }
    return j;
}

std::string SweepResult::to_csv() const {
    std::ostringstream out;
    out << "band_count,correct,total,accuracy\n";
    char buf[96];
    for (const auto& entry : entries) {
        if (entry.skipped) {
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%d,%zu,%zu,%.10g\n", entry.bands, entry.report.correct,
                      entry.report.total, entry.report.accuracy);
        out << buf;
    }
    return out.str();
}

SweepResult sweep_bands(const Dataset& rows, int bands_from, int bands_to,
                        const IncrementPolicy& policy, std::size_t cell_cap, BoundaryMode mode) {
    if (bands_from < 1 || bands_to < bands_from) {
        throw ConfigError("invalid band range " + std::to_string(bands_from) + ".." +
                          std::to_string(bands_to));
    }
    SweepResult result;
    result.cell_cap = cell_cap;

    for (int bands = bands_from; bands <= bands_to; ++bands) {
        SweepEntry entry;
        entry.bands = bands;
        const std::size_t cells = rows.variables() * static_cast<std::size_t>(bands);
        if (cells > cell_cap) {
            entry.skipped = true;
            entry.skip_reason = std::to_string(cells) + " cells exceed the cap of " +
                                std::to_string(cell_cap);
        } else {
            const TrainedModel model = train_model(rows, bands, policy, mode);
            entry.report = evaluate(model, rows);
        }
        result.entries.push_back(std::move(entry));
    }

    bool any = false;
    for (const auto& entry : result.entries) {
        if (entry.skipped) {
            continue;
        }
        if (!any || entry.report.correct > result.best_correct) {
            any = true;
            result.best_correct = entry.report.correct;
            result.best_bands = entry.bands;
        }
    }

    // A dip: accuracy strictly falls somewhere and strictly rises again later.
    bool seen_descent = false;
    bool have_prev = false;
    std::size_t prev = 0;
    for (const auto& entry : result.entries) {
        if (entry.skipped) {
            continue;
        }
        const std::size_t c = entry.report.correct;
        if (have_prev) {
            if (c < prev) {
                seen_descent = true;
            } else if (c > prev && seen_descent) {
                result.has_local_optimum = true;
            }
        }
        prev = c;
        have_prev = true;
    }
    return result;
}

}  // namespace bandgrid
