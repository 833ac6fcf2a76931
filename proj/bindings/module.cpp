#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bandgrid/adjust.hpp"
#include "bandgrid/balance.hpp"
#include "bandgrid/data_io.hpp"
#include "bandgrid/errors.hpp"
#include "bandgrid/eval.hpp"
#include "bandgrid/model_io.hpp"

namespace py = pybind11;

namespace {

using namespace bandgrid;

Dataset make_dataset(Matrix features, std::vector<std::size_t> labels, std::size_t categories) {
    if (features.size() != labels.size()) {
        throw DataError("got " + std::to_string(features.size()) + " rows but " +
                        std::to_string(labels.size()) + " labels");
    }
    if (categories == 0) {
        for (std::size_t label : labels) {
            categories = std::max(categories, label + 1);
        }
    }
    for (std::size_t label : labels) {
        if (label >= categories) {
            throw DataError("label " + std::to_string(label) + " is out of range for " +
                            std::to_string(categories) + " categories");
        }
    }
    Dataset dataset;
    dataset.features = std::move(features);
    dataset.labels = std::move(labels);
    dataset.split = "all";
    dataset.descriptor.name = "memory";
    for (std::size_t i = 0; i < categories; ++i) {
        dataset.descriptor.category_labels.push_back(std::to_string(i));
    }
    return dataset;
}

PolicySpec make_spec(const std::string& strategy, const std::vector<long long>& adjustments,
                     const std::vector<double>& denominators, std::optional<double> flat_value) {
    PolicySpec spec;
    spec.strategy = strategy_from_name(strategy);
    spec.adjustments = adjustments;
    spec.denominators = denominators;
    spec.flat_value = flat_value;
    return spec;
}

class Classifier {
  public:
    explicit Classifier(TrainedModel model) : model_(std::move(model)) {}

    static Classifier fit(const Matrix& features, const std::vector<std::size_t>& labels,
                          int bands, std::size_t categories, const std::string& strategy,
                          const std::vector<long long>& adjustments,
                          const std::vector<double>& denominators,
                          std::optional<double> flat_value, const std::string& boundaries) {
        const Dataset dataset = make_dataset(features, labels, categories);
        const PolicySpec spec = make_spec(strategy, adjustments, denominators, flat_value);
        const IncrementPolicy policy =
            resolve_policy(spec, dataset.category_counts(), dataset.rows());
        return Classifier(
            train_model(dataset, bands, policy, boundary_mode_from_name(boundaries)));
    }

    std::size_t predict_one(const std::vector<double>& row) const {
        return model_.grid.classify(normalize_row(row, model_.stats)).category;
    }

    std::vector<std::size_t> predict(const Matrix& rows) const {
        std::vector<std::size_t> out;
        out.reserve(rows.size());
        for (const auto& row : rows) {
            out.push_back(predict_one(row));
        }
        return out;
    }

    std::vector<double> scores(const std::vector<double>& row) const {
        return model_.grid.classify(normalize_row(row, model_.stats)).scores;
    }

    py::dict evaluate_rows(const Matrix& features, const std::vector<std::size_t>& labels) const {
        const Dataset dataset = make_dataset(features, labels, model_.grid.categories());
        const EvalReport report = bandgrid::evaluate(model_, dataset);
        py::dict out;
        out["correct"] = report.correct;
        out["total"] = report.total;
        out["accuracy"] = report.accuracy;
        out["confusion"] = report.confusion;
        return out;
    }

    std::size_t adjust(const Matrix& features, const std::vector<std::size_t>& labels, double eta,
                       int epochs, double floor, const std::string& mode) {
        AdjustConfig config;
        config.eta = eta;
        config.epochs = epochs;
        config.floor = floor;
        config.mode = adjust_mode_from_name(mode);
        return adjust_pass(model_.grid, normalize(features, model_.stats), labels, config);
    }

    void save(const std::string& path, bool force) const { save_model(model_, path, force); }

    static Classifier load(const std::string& path) { return Classifier(load_model(path)); }

    std::string inspect(int variable) const { return inspect_text(model_.grid, variable - 1); }

    std::vector<double> scale_weights(std::size_t variable) const {
        check_variable(variable);
        std::vector<double> out;
        for (const Cell& cell : model_.grid.row(variable).cells) {
            out.push_back(cell.scale_weight);
        }
        return out;
    }

    Matrix output_weights(std::size_t variable) const {
        check_variable(variable);
        Matrix out;
        for (const Cell& cell : model_.grid.row(variable).cells) {
            out.push_back(cell.output_weights);
        }
        return out;
    }

    int bands() const { return model_.bands; }
    std::size_t variables() const { return model_.grid.variables(); }
    std::size_t categories() const { return model_.grid.categories(); }
    std::uint64_t update_count() const { return model_.grid.update_count(); }
    std::string policy() const { return model_.policy.describe(); }

  private:
    void check_variable(std::size_t variable) const {
        if (variable >= model_.grid.variables()) {
            throw UsageError("variable " + std::to_string(variable) + " is out of range for " +
                             std::to_string(model_.grid.variables()) + " variables");
        }
    }

    TrainedModel model_;
};

py::dict dataset_to_dict(const Dataset& dataset) {
    py::dict out;
    out["features"] = dataset.features;
    out["labels"] = dataset.labels;
    out["split"] = dataset.split;
    return out;
}

py::dict load_dataset(const std::string& descriptor_path, const std::string& data_root) {
    const DatasetDescriptor descriptor = load_descriptor(descriptor_path);
    const LoadedData data = load(descriptor, data_root);
    py::dict out;
    out["name"] = descriptor.name;
    out["category_labels"] = descriptor.category_labels;
    out["default_bands"] = descriptor.default_bands;
    out["train"] = dataset_to_dict(data.train);
    if (data.test) {
        out["test"] = dataset_to_dict(*data.test);
    }
    return out;
}

py::list sweep(const Matrix& features, const std::vector<std::size_t>& labels, int bands_from,
               int bands_to, std::size_t categories, const std::string& strategy,
               std::size_t cell_cap, const std::string& boundaries) {
    const Dataset dataset = make_dataset(features, labels, categories);
    const PolicySpec spec = make_spec(strategy, {}, {}, std::nullopt);
    const IncrementPolicy policy = resolve_policy(spec, dataset.category_counts(), dataset.rows());
    const SweepResult result = sweep_bands(dataset, bands_from, bands_to, policy, cell_cap,
                                           boundary_mode_from_name(boundaries));
    py::list out;
    for (const SweepEntry& entry : result.entries) {
        py::dict item;
        item["bands"] = entry.bands;
        if (entry.skipped) {
            item["skipped"] = entry.skip_reason;
        } else {
            item["correct"] = entry.report.correct;
            item["total"] = entry.report.total;
            item["accuracy"] = entry.report.accuracy;
        }
        out.append(item);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Band-grid classifier core";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Classifier>(m, "Classifier")
        .def_static("fit", &Classifier::fit, py::arg("features"), py::arg("labels"),
                    py::arg("bands"), py::arg("categories") = 0,
                    py::arg("strategy") = "per_category",
                    py::arg("adjustments") = std::vector<long long>{},
                    py::arg("denominators") = std::vector<double>{},
                    py::arg("flat_value") = std::nullopt, py::arg("boundaries") = "uniform",
                    "Train a classifier on rows of raw (unnormalized) values")
        .def_static("load", &Classifier::load, py::arg("path"))
        .def("predict_one", &Classifier::predict_one, py::arg("row"))
        .def("predict", &Classifier::predict, py::arg("rows"))
        .def("scores", &Classifier::scores, py::arg("row"),
             "Per-category output values for one row")
        .def("evaluate", &Classifier::evaluate_rows, py::arg("features"), py::arg("labels"))
        .def("adjust", &Classifier::adjust, py::arg("features"), py::arg("labels"),
             py::arg("eta") = 0.01, py::arg("epochs") = 1, py::arg("floor") = 0.0,
             py::arg("mode") = "dominant",
             "Post-training adjustment pass; returns the number of corrected rows")
        .def("save", &Classifier::save, py::arg("path"), py::arg("force") = false)
        .def("inspect", &Classifier::inspect, py::arg("variable") = 0,
             "Weight dump; variable is 1-based, 0 dumps all variables")
        .def("scale_weights", &Classifier::scale_weights, py::arg("variable"))
        .def("output_weights", &Classifier::output_weights, py::arg("variable"))
        .def_property_readonly("bands", &Classifier::bands)
        .def_property_readonly("variables", &Classifier::variables)
        .def_property_readonly("categories", &Classifier::categories)
        .def_property_readonly("update_count", &Classifier::update_count)
        .def_property_readonly("policy", &Classifier::policy);

    m.def("load_dataset", &load_dataset, py::arg("descriptor_path"), py::arg("data_root") = "data",
          "Load a dataset through its descriptor; returns train (and test when present) splits");
    m.def("sweep", &sweep, py::arg("features"), py::arg("labels"), py::arg("bands_from"),
          py::arg("bands_to"), py::arg("categories") = 0, py::arg("strategy") = "per_category",
          py::arg("cell_cap") = kDefaultSweepCellCap, py::arg("boundaries") = "uniform",
          "Evaluate a range of band counts by resubstitution");
    m.def("descriptor_hash", &descriptor_hash, py::arg("path"));

    m.attr("__version__") = "0.1.0";
}
