#include "bandgrid/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bandgrid/adjust.hpp"
#include "bandgrid/balance.hpp"
#include "bandgrid/data_io.hpp"
#include "bandgrid/errors.hpp"
#include "bandgrid/eval.hpp"
#include "bandgrid/model_io.hpp"

namespace bandgrid {
namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return (value != nullptr && *value != '\0') ? std::string(value) : fallback;
}

std::string default_data_root() { return env_or("BANDGRID_DATA_ROOT", "data"); }
std::string default_descriptor_dir() { return env_or("BANDGRID_DESCRIPTOR_DIR", "descriptors"); }

// --dataset accepts either a registered name (resolved against the descriptor
// directory) or a direct path to a descriptor file.
std::string resolve_descriptor_path(const std::string& dataset, const std::string& descriptor_dir) {
    namespace fs = std::filesystem;
    const bool looks_like_path =
        dataset.find('/') != std::string::npos ||
        (dataset.size() > 5 && dataset.compare(dataset.size() - 5, 5, ".json") == 0);
    const std::string path =
        looks_like_path ? dataset : descriptor_dir + "/" + dataset + ".json";
    if (!fs::exists(path)) {
        throw DataError("no descriptor for dataset '" + dataset + "' (looked for " + path + ")");
    }
    return path;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    out << content;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Flags common to commands that read a dataset.
struct DataOpts {
    std::string dataset;
    std::string data_root = default_data_root();
    std::string descriptor_dir = default_descriptor_dir();
};

void add_data_opts(CLI::App* cmd, DataOpts& opts, bool dataset_required = true) {
    auto* d = cmd->add_option("--dataset", opts.dataset,
                              "Dataset name or path to a descriptor file");
    if (dataset_required) {
        d->required();
    }
    cmd->add_option("--data-root", opts.data_root,
                    "Directory holding the raw data files (env BANDGRID_DATA_ROOT)");
    cmd->add_option("--descriptor-dir", opts.descriptor_dir,
                    "Directory holding dataset descriptors (env BANDGRID_DESCRIPTOR_DIR)");
}

// Policy selection flags. When none are given the descriptor default applies.
struct PolicyOpts {
    std::string strategy;
    std::vector<long long> adjustments;
    std::vector<double> denominators;
    double flat_value = 0.0;
    bool has_flat_value = false;
};

void add_policy_opts(CLI::App* cmd, PolicyOpts& opts) {
    cmd->add_option("--policy", opts.strategy,
                    "Increment policy: flat, per-category, adjusted, manual");
    cmd->add_option("--adjustments", opts.adjustments,
                    "Per-category count adjustments for --policy adjusted (comma separated)")
        ->delimiter(',');
    cmd->add_option("--denominators", opts.denominators,
                    "Per-category output weight denominators (comma separated)")
        ->delimiter(',');
    cmd->add_option("--flat-value", opts.flat_value,
                    "Explicit output weight value for the flat policy")
        ->each([&opts](const std::string&) { opts.has_flat_value = true; });
}

PolicySpec policy_spec_from(const PolicyOpts& opts, const PolicySpec& descriptor_default) {
    const bool any = !opts.strategy.empty() || !opts.adjustments.empty() ||
                     !opts.denominators.empty() || opts.has_flat_value;
    if (!any) {
        return descriptor_default;
    }
    PolicySpec spec;
    if (!opts.strategy.empty()) {
        spec.strategy = strategy_from_name(opts.strategy);
    } else if (!opts.denominators.empty()) {
        spec.strategy = Strategy::manual;
    } else if (!opts.adjustments.empty()) {
        spec.strategy = Strategy::per_category_adjusted;
    } else {
        spec.strategy = Strategy::row_uniform;
    }
    spec.adjustments = opts.adjustments;
    spec.denominators = opts.denominators;
    if (opts.has_flat_value) {
        spec.flat_value = opts.flat_value;
    }
    return spec;
}

struct AdjustOpts {
    bool enabled = false;
    double eta = 0.01;
    int epochs = 1;
    double floor = 0.0;
    std::string mode = "dominant";
};

void add_adjust_opts(CLI::App* cmd, AdjustOpts& opts) {
    cmd->add_flag("--adjust", opts.enabled,
                  "Run the experimental post-training adjustment pass");
    cmd->add_option("--eta", opts.eta, "Adjustment step size")->check(CLI::NonNegativeNumber);
    cmd->add_option("--epochs", opts.epochs, "Adjustment passes over the training rows")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--adjust-floor", opts.floor, "Lower bound for decremented output weights")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--adjust-mode", opts.mode,
                    "Decrement target: dominant, true_class, all_non_true");
}

struct LoadedExperiment {
    DatasetDescriptor descriptor;
    std::string descriptor_path;
    LoadedData data;
};

LoadedExperiment load_experiment(const DataOpts& opts) {
    LoadedExperiment exp;
    exp.descriptor_path = resolve_descriptor_path(opts.dataset, opts.descriptor_dir);
    exp.descriptor = load_descriptor(exp.descriptor_path);
    exp.data = load(exp.descriptor, opts.data_root);
    return exp;
}

int cmd_train(const DataOpts& data_opts, const PolicyOpts& policy_opts,
              const AdjustOpts& adjust_opts, int bands, const std::string& boundaries,
              const std::string& out_path, bool force) {
    LoadedExperiment exp = load_experiment(data_opts);
    const Dataset& train = exp.data.train;

    if (bands <= 0) {
        bands = exp.descriptor.default_bands;
    }
    const PolicySpec spec = policy_spec_from(policy_opts, exp.descriptor.default_policy);
    const IncrementPolicy policy = resolve_policy(spec, train.category_counts(), train.rows());
    const BoundaryMode mode = boundary_mode_from_name(boundaries);

    TrainedModel model = train_model(train, bands, policy, mode);
    model.descriptor_sha = descriptor_hash(exp.descriptor_path);
    if (model.gap_fallback) {
        std::cerr << "warning: gap boundaries fell back to uniform on at least one column\n";
    }

    std::cout << "trained " << exp.descriptor.name << ": " << train.rows() << " rows, "
              << train.variables() << " variables, " << bands << " bands, policy "
              << policy.describe() << "\n";

    if (adjust_opts.enabled) {
        AdjustConfig config;
        config.eta = adjust_opts.eta;
        config.epochs = adjust_opts.epochs;
        config.floor = adjust_opts.floor;
        config.mode = adjust_mode_from_name(adjust_opts.mode);

        const EvalReport before = evaluate(model, train);
        const Matrix normalized = normalize(train.features, model.stats);
        const std::size_t corrections = adjust_pass(model.grid, normalized, train.labels, config);
        const EvalReport after = evaluate(model, train);
        std::cout << "adjust: corrections=" << corrections << ", resubstitution "
                  << before.correct << "/" << before.total << " -> " << after.correct << "/"
                  << after.total << (after.correct < before.correct ? " (regression)" : "")
                  << "\n";
    }

    save_model(model, out_path, force);
    std::cout << "model written to " << out_path << "\n";
    return kExitOk;
}

int cmd_evaluate(const DataOpts& data_opts, const std::string& model_path,
                 const std::string& split, const std::string& format,
                 const std::string& out_path) {
    const TrainedModel model = load_model(model_path);

    DataOpts opts = data_opts;
    if (opts.dataset.empty()) {
        opts.dataset = model.dataset_name;
    }
    LoadedExperiment exp = load_experiment(opts);

    if (!model.descriptor_sha.empty()) {
        const std::string current = descriptor_hash(exp.descriptor_path);
        if (current != model.descriptor_sha) {
            throw ConfigError("model " + model_path + " was trained from a different descriptor (" +
                              model.descriptor_sha + ", current " + current +
                              "); retrain or pass the matching descriptor");
        }
    }

    const Dataset* rows = nullptr;
    if (split == "test") {
        if (!exp.data.test) {
            throw ConfigError("dataset '" + exp.descriptor.name + "' has no test split");
        }
        rows = &*exp.data.test;
    } else if (split == "train" || split == "all") {
        rows = &exp.data.train;
    } else if (split == "auto") {
        rows = exp.data.test ? &*exp.data.test : &exp.data.train;
    } else {
        throw UsageError("unknown split '" + split + "' (expected auto, train, test or all)");
    }

    const EvalReport report = evaluate(model, *rows);
    write_output(out_path, format == "json" ? json_text(report.to_json())
                                            : report.to_text(exp.descriptor.category_labels));
    return kExitOk;
}

int cmd_sweep(const DataOpts& data_opts, const PolicyOpts& policy_opts, int bands_from,
              int bands_to, std::size_t cell_cap, const std::string& boundaries,
              const std::string& plot_out, const std::string& format,
              const std::string& out_path) {
    if (bands_from < 1 || bands_to < bands_from) {
        throw UsageError("invalid band range " + std::to_string(bands_from) + ".." +
                         std::to_string(bands_to));
    }
    LoadedExperiment exp = load_experiment(data_opts);
    const Dataset& train = exp.data.train;
    const PolicySpec spec = policy_spec_from(policy_opts, exp.descriptor.default_policy);
    const IncrementPolicy policy = resolve_policy(spec, train.category_counts(), train.rows());
    const BoundaryMode mode = boundary_mode_from_name(boundaries);

    const SweepResult result = sweep_bands(train, bands_from, bands_to, policy, cell_cap, mode);
    write_output(out_path, format == "json" ? json_text(result.to_json()) : result.to_text());
    if (!plot_out.empty()) {
        write_output(plot_out, result.to_csv());
    }
    return kExitOk;
}

int cmd_inspect(const std::string& model_path, int variable, const std::string& format,
                const std::string& out_path) {
    const TrainedModel model = load_model(model_path);
    const int variable_count = static_cast<int>(model.grid.variables());
    if (variable < 0 || variable > variable_count) {
        throw UsageError("variable must be between 1 and " + std::to_string(variable_count) +
                         " (0 or omitted for all)");
    }

    if (format == "json") {
        nlohmann::json j;
        j["format"] = "bandgrid-inspect";
        j["format_version"] = 1;
        j["dataset"] = model.dataset_name;
        j["bands"] = model.bands;
        nlohmann::json vars = nlohmann::json::array();
        for (int v = 0; v < variable_count; ++v) {
            if (variable != 0 && v != variable - 1) {
                continue;
            }
            nlohmann::json entry;
            entry["variable"] = v + 1;
            const BandRow& row = model.grid.row(static_cast<std::size_t>(v));
            nlohmann::json scales = nlohmann::json::array();
            nlohmann::json outputs = nlohmann::json::array();
            for (const Cell& cell : row.cells) {
                scales.push_back(cell.scale_weight);
                outputs.push_back(cell.output_weights);
            }
            entry["scale_weights"] = scales;
            entry["output_weights"] = outputs;
            vars.push_back(entry);
        }
        j["variables"] = vars;
        write_output(out_path, json_text(j));
    } else {
        write_output(out_path, inspect_text(model.grid, variable - 1));
    }
    return kExitOk;
}

// One benchmark target the reproduce command re-measures.
struct ReproRow {
    std::string dataset;
    int bands = 0;
    PolicySpec spec;
    std::string policy_label;
    bool holdout = false;
    std::size_t target_correct = 0;
    std::size_t target_total = 0;
    double tol_rows = 0.0;  // row tolerance, or
    double tol_pp = 0.0;    // percentage-point tolerance when nonzero
};

std::vector<ReproRow> repro_rows() {
    PolicySpec per_category;
    per_category.strategy = Strategy::per_category;
    PolicySpec flat;
    flat.strategy = Strategy::row_uniform;
    PolicySpec user_modelling;
    user_modelling.strategy = Strategy::per_category_adjusted;
    user_modelling.denominators = {34.0, 73.0, 78.0, 53.0};

    std::vector<ReproRow> rows;
    rows.push_back({"zoo", 10, per_category, "per_category", false, 91, 101, 2.0, 0.0});
    rows.push_back({"wine", 10, per_category, "per_category", false, 172, 178, 2.0, 0.0});
    rows.push_back({"wine", 10, flat, "flat", false, 177, 178, 2.0, 0.0});
    rows.push_back({"iris", 10, per_category, "per_category", false, 143, 150, 2.0, 0.0});
    rows.push_back({"zoo", 2, per_category, "per_category", false, 94, 101, 2.0, 0.0});
    rows.push_back({"wine", 15, flat, "flat", false, 178, 178, 2.0, 0.0});
    rows.push_back({"iris", 12, per_category, "per_category", false, 145, 150, 2.0, 0.0});
    rows.push_back({"abalone", 160, flat, "flat", false, 1452, 4177, 0.0, 1.5});
    rows.push_back({"user_modelling", 14, user_modelling, "denominators", true, 127, 145, 3.0, 0.0});
    rows.push_back({"banknote", 17, flat, "flat", true, 81, 100, 3.0, 0.0});
    return rows;
}

struct ReproOutcome {
    std::string status;  // "pass", "fail", "skipped"
    std::string reason;
    std::size_t correct = 0;
    std::size_t total = 0;
};

ReproOutcome run_repro_row(const ReproRow& row, const std::string& data_root,
                           const std::string& descriptor_dir) {
    ReproOutcome outcome;
    DataOpts opts;
    opts.dataset = row.dataset;
    opts.data_root = data_root;
    opts.descriptor_dir = descriptor_dir;

    LoadedExperiment exp;
    try {
        exp = load_experiment(opts);
    } catch (const DataError& e) {
        outcome.status = "skipped";
        outcome.reason = e.what();
        return outcome;
    }

    const Dataset& train = exp.data.train;
    const IncrementPolicy policy = resolve_policy(row.spec, train.category_counts(), train.rows());
    const TrainedModel model = train_model(train, row.bands, policy);

    const Dataset* eval_rows = &train;
    if (row.holdout) {
        if (!exp.data.test) {
            outcome.status = "skipped";
            outcome.reason = "dataset has no test split";
            return outcome;
        }
        eval_rows = &*exp.data.test;
    }
    const EvalReport report = evaluate(model, *eval_rows);
    outcome.correct = report.correct;
    outcome.total = report.total;

    bool pass = false;
    if (row.tol_pp > 0.0) {
        const double measured = 100.0 * static_cast<double>(report.correct) /
                                static_cast<double>(report.total);
        const double target = 100.0 * static_cast<double>(row.target_correct) /
                              static_cast<double>(row.target_total);
        pass = std::abs(measured - target) <= row.tol_pp;
    } else {
        const double diff = static_cast<double>(report.correct) -
                            static_cast<double>(row.target_correct);
        pass = std::abs(diff) <= row.tol_rows;
    }
    outcome.status = pass ? "pass" : "fail";
    return outcome;
}

std::string tolerance_label(const ReproRow& row) {
    char buf[32];
    if (row.tol_pp > 0.0) {
        std::snprintf(buf, sizeof(buf), "%.4gpp", row.tol_pp);
    } else {
        std::snprintf(buf, sizeof(buf), "%.4g", row.tol_rows);
    }
    return buf;
}

int cmd_reproduce(const std::string& data_root, const std::string& descriptor_dir,
                  const std::string& format, const std::string& out_path) {
    const std::vector<ReproRow> rows = repro_rows();
    std::vector<ReproOutcome> outcomes;
    outcomes.reserve(rows.size());
    for (const ReproRow& row : rows) {
        outcomes.push_back(run_repro_row(row, data_root, descriptor_dir));
    }

    std::size_t passed = 0, failed = 0, skipped = 0;
    for (const ReproOutcome& o : outcomes) {
        if (o.status == "pass") ++passed;
        if (o.status == "fail") ++failed;
        if (o.status == "skipped") ++skipped;
    }

    if (format == "json") {
        nlohmann::json j;
        j["format"] = "bandgrid-reproduce";
        j["format_version"] = 1;
        nlohmann::json entries = nlohmann::json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            nlohmann::json entry;
            entry["dataset"] = rows[i].dataset;
            entry["bands"] = rows[i].bands;
            entry["policy"] = rows[i].policy_label;
            entry["split"] = rows[i].holdout ? "test" : "all";
            entry["target_correct"] = rows[i].target_correct;
            entry["target_total"] = rows[i].target_total;
            entry["tolerance"] = tolerance_label(rows[i]);
            entry["status"] = outcomes[i].status;
            if (outcomes[i].status == "skipped") {
                entry["reason"] = outcomes[i].reason;
            } else {
                entry["measured_correct"] = outcomes[i].correct;
                entry["measured_total"] = outcomes[i].total;
            }
            entries.push_back(entry);
        }
        j["rows"] = entries;
        j["passed"] = passed;
        j["failed"] = failed;
        j["skipped"] = skipped;
        write_output(out_path, json_text(j));
    } else {
        std::ostringstream text;
        char line[256];
        std::snprintf(line, sizeof(line), "%-15s %5s  %-13s %-5s %-10s %-6s %-10s %s\n",
                      "dataset", "bands", "policy", "split", "target", "tol", "measured",
                      "verdict");
        text << line;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const ReproRow& row = rows[i];
            const ReproOutcome& o = outcomes[i];
            char target[32];
            std::snprintf(target, sizeof(target), "%zu/%zu", row.target_correct,
                          row.target_total);
            char measured[32];
            if (o.status == "skipped") {
                std::snprintf(measured, sizeof(measured), "-");
            } else {
                std::snprintf(measured, sizeof(measured), "%zu/%zu", o.correct, o.total);
            }
            std::string verdict;
            if (o.status == "pass") {
                verdict = "PASS";
            } else if (o.status == "fail") {
                verdict = "FAIL";
            } else {
                verdict = "SKIPPED (" + o.reason + ")";
            }
            std::snprintf(line, sizeof(line), "%-15s %5d  %-13s %-5s %-10s %-6s %-10s %s\n",
                          row.dataset.c_str(), row.bands, row.policy_label.c_str(),
                          row.holdout ? "test" : "all", target, tolerance_label(row).c_str(),
                          measured, verdict.c_str());
            text << line;
        }
        char summary[128];
        std::snprintf(summary, sizeof(summary), "%zu passed, %zu failed, %zu skipped\n", passed,
                      failed, skipped);
        text << summary;
        write_output(out_path, text.str());
    }
    return failed == 0 ? kExitOk : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Train, evaluate, and inspect band-grid classification models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bandgrid 0.1.0");

    auto* train = app.add_subcommand("train", "Train a model and write it to a file");
    DataOpts train_data;
    PolicyOpts train_policy;
    AdjustOpts train_adjust;
    int train_bands = 0;
    std::string train_boundaries = "uniform";
    std::string train_out;
    bool train_force = false;
    add_data_opts(train, train_data);
    add_policy_opts(train, train_policy);
    add_adjust_opts(train, train_adjust);
    train->add_option("--bands", train_bands, "Bands per variable (default: descriptor value)")
        ->check(CLI::PositiveNumber);
    train->add_option("--boundaries", train_boundaries, "Band boundary placement: uniform, gaps");
    train->add_option("--out", train_out, "Output model file")->required();
    train->add_flag("--force", train_force, "Overwrite an existing model file");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a saved model on a dataset");
    DataOpts eval_data;
    std::string eval_model;
    std::string eval_split = "auto";
    std::string eval_format = "text";
    std::string eval_out;
    add_data_opts(evaluate_cmd, eval_data, false);
    evaluate_cmd->add_option("--model", eval_model, "Saved model file")->required();
    evaluate_cmd->add_option("--split", eval_split,
                             "Rows to evaluate: auto, train, test, all (default auto)");
    evaluate_cmd->add_option("--format", eval_format, "Output format: text, json");
    evaluate_cmd->add_option("--out", eval_out, "Write the report here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Evaluate a range of band counts");
    DataOpts sweep_data;
    PolicyOpts sweep_policy;
    int sweep_from = 2;
    int sweep_to = 20;
    std::size_t sweep_cap = kDefaultSweepCellCap;
    std::string sweep_boundaries = "uniform";
    std::string sweep_plot;
    std::string sweep_format = "text";
    std::string sweep_out;
    add_data_opts(sweep, sweep_data);
    add_policy_opts(sweep, sweep_policy);
    sweep->add_option("--bands-from", sweep_from, "First band count")->check(CLI::PositiveNumber);
    sweep->add_option("--bands-to", sweep_to, "Last band count")->check(CLI::PositiveNumber);
    sweep->add_option("--cell-cap", sweep_cap,
                      "Skip band counts whose grid would exceed this many cells");
    sweep->add_option("--boundaries", sweep_boundaries, "Band boundary placement: uniform, gaps");
    sweep->add_option("--plot-out", sweep_plot, "Write band-count vs accuracy CSV here");
    sweep->add_option("--format", sweep_format, "Output format: text, json");
    sweep->add_option("--out", sweep_out, "Write the table here instead of stdout");

    auto* inspect = app.add_subcommand("inspect", "Dump the weights of a saved model");
    std::string inspect_model;
    int inspect_variable = 0;
    std::string inspect_format = "text";
    std::string inspect_out;
    inspect->add_option("--model", inspect_model, "Saved model file")->required();
    inspect->add_option("--variable", inspect_variable,
                        "1-based variable to dump (default: all)");
    inspect->add_option("--format", inspect_format, "Output format: text, json");
    inspect->add_option("--out", inspect_out, "Write the dump here instead of stdout");

    auto* reproduce = app.add_subcommand(
        "reproduce", "Re-measure the recorded benchmark results and compare");
    std::string repro_data_root = default_data_root();
    std::string repro_descriptor_dir = default_descriptor_dir();
    std::string repro_format = "text";
    std::string repro_out;
    reproduce->add_option("--data-root", repro_data_root,
                          "Directory holding the raw data files (env BANDGRID_DATA_ROOT)");
    reproduce->add_option("--descriptor-dir", repro_descriptor_dir,
                          "Directory holding dataset descriptors (env BANDGRID_DESCRIPTOR_DIR)");
    reproduce->add_option("--format", repro_format, "Output format: text, json");
    reproduce->add_option("--out", repro_out, "Write the table here instead of stdout");

    try {
        app.parse(argc, argv);

        if (*train) {
            return cmd_train(train_data, train_policy, train_adjust, train_bands,
                             train_boundaries, train_out, train_force);
        }
        if (*evaluate_cmd) {
            return cmd_evaluate(eval_data, eval_model, eval_split, eval_format, eval_out);
        }
        if (*sweep) {
            return cmd_sweep(sweep_data, sweep_policy, sweep_from, sweep_to, sweep_cap,
                             sweep_boundaries, sweep_plot, sweep_format, sweep_out);
        }
        if (*inspect) {
            return cmd_inspect(inspect_model, inspect_variable, inspect_format, inspect_out);
        }
        if (*reproduce) {
            return cmd_reproduce(repro_data_root, repro_descriptor_dir, repro_format, repro_out);
        }
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bandgrid
