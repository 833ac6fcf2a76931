#include "bandgrid/model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bandgrid/errors.hpp"

namespace bandgrid {

namespace {

using nlohmann::json;

std::string sig10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

nlohmann::json model_to_json(const TrainedModel& model) {
    json j;
    j["format"] = "bandgrid-model";
    j["format_version"] = kModelFormatVersion;
    j["dataset"] = model.dataset_name;
    j["descriptor_sha"] = model.descriptor_sha;
    j["bands"] = model.bands;
    j["boundary_mode"] = boundary_mode_name(model.boundaries);
    j["gap_fallback"] = model.gap_fallback;
    j["policy"]["strategy"] = strategy_name(model.policy.strategy);
    j["policy"]["cw"] = model.policy.cw;
    j["policy"]["ow"] = model.policy.ow;
    j["norm_stats"]["min"] = model.stats.min;
    j["norm_stats"]["max"] = model.stats.max;

    json variables = json::array();
    for (std::size_t v = 0; v < model.grid.variables(); ++v) {
        const BandRow& row = model.grid.row(v);
        json jrow;
        jrow["width"] = row.width;
        jrow["boundaries"] = row.boundaries;
        json cells = json::array();
        for (const Cell& cell : row.cells) {
            json jcell;
            jcell["scale"] = cell.scale_weight;
            jcell["outputs"] = cell.output_weights;
            cells.push_back(std::move(jcell));
        }
        jrow["cells"] = std::move(cells);
        variables.push_back(std::move(jrow));
    }
    j["variables"] = std::move(variables);
    return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "bandgrid-model") {
            throw ConfigError("not a model file");
        }
        if (j.at("format_version").get<int>() != kModelFormatVersion) {
            throw ConfigError("unsupported model format version " +
                              std::to_string(j.at("format_version").get<int>()));
        }
        TrainedModel model;
        model.dataset_name = j.at("dataset").get<std::string>();
        model.descriptor_sha = j.at("descriptor_sha").get<std::string>();
        model.bands = j.at("bands").get<int>();
        model.boundaries = boundary_mode_from_name(j.at("boundary_mode").get<std::string>());
        model.gap_fallback = j.value("gap_fallback", false);
        model.policy.strategy = strategy_from_name(j.at("policy").at("strategy").get<std::string>());
        model.policy.cw = j.at("policy").at("cw").get<double>();
        model.policy.ow = j.at("policy").at("ow").get<std::vector<double>>();
        model.stats.min = j.at("norm_stats").at("min").get<std::vector<double>>();
        model.stats.max = j.at("norm_stats").at("max").get<std::vector<double>>();

        const auto& variables = j.at("variables");
        if (variables.empty()) {
            throw ConfigError("model has no variables");
        }
        std::vector<std::vector<double>> edges;
        edges.reserve(variables.size());
        for (const auto& jrow : variables) {
            edges.push_back(jrow.at("boundaries").get<std::vector<double>>());
        }
        const std::size_t categories = model.policy.ow.size();
        const bool uniform = variables[0].at("width").get<double>() > 0.0;
        if (uniform) {
            model.grid = Grid(variables.size(), static_cast<int>(edges[0].size()), categories);
        } else {
            model.grid = Grid(edges, categories);
        }
        for (std::size_t v = 0; v < variables.size(); ++v) {
            const auto& cells = variables[v].at("cells");
            BandRow& row = model.grid.row(v);
            if (cells.size() != row.cells.size()) {
                throw ConfigError("model cell counts are inconsistent");
            }
            for (std::size_t b = 0; b < row.cells.size(); ++b) {
                row.cells[b].scale_weight = cells[b].at("scale").get<double>();
                row.cells[b].output_weights = cells[b].at("outputs").get<std::vector<double>>();
                if (row.cells[b].output_weights.size() != categories) {
                    throw ConfigError("model output weight counts are inconsistent");
                }
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::string& path, bool force) {
    if (!force && std::filesystem::exists(path)) {
        throw ConfigError("refusing to overwrite existing file " + path +
                          " (pass --force to allow)");
    }
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write model file: " + path);
    }
    out << model_to_json(model).dump(2) << "\n";
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open model file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("model file " + path + " is not valid JSON: " + e.what());
    }
    return model_from_json(j);
}

std::string inspect_text(const Grid& grid, int variable) {
    std::ostringstream out;
    for (std::size_t v = 0; v < grid.variables(); ++v) {
        if (variable >= 0 && static_cast<std::size_t>(variable) != v) {
            continue;
        }
        out << "Variable " << (v + 1) << ":\n";
        const BandRow& row = grid.row(v);
        for (int b = 0; b < row.band_count(); ++b) {
            const Cell& cell = row.cells[b];
            out << "Weight (B" << (b + 1) << "):\t" << sig10(cell.scale_weight)
                << ">\tOutputs:";
            for (double w : cell.output_weights) {
                out << "\t" << sig10(w) << ",";
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace bandgrid
