// Acceptance runner: one line per criterion, exit code = number of failures.
// Criteria that need dataset files report SKIP with the reason when the files
// are absent; nothing is weakened to pass without them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bandgrid/adjust.hpp"
#include "bandgrid/balance.hpp"
#include "bandgrid/eval.hpp"
#include "bandgrid/grid.hpp"
#include "unit/properties.hpp"

namespace {

using namespace bandgrid;
using namespace bandgrid::testing;

struct Outcome {
    enum class Status { pass, fail, skip };
    Status status = Status::pass;
    std::string detail;
};

Outcome pass(std::string detail = "") { return {Outcome::Status::pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::Status::fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::Status::skip, std::move(detail)}; }

// Collects per-case results inside one criterion; the criterion fails if any
// case failed, and is a skip if any case could not run.
struct CaseTally {
    std::vector<std::string> passed, failed, skipped;

    void pass(std::string s) { passed.push_back(std::move(s)); }
    void fail(std::string s) { failed.push_back(std::move(s)); }
    void skip(std::string s) { skipped.push_back(std::move(s)); }

    static std::string join(const std::vector<std::string>& parts) {
        std::string out;
        for (const auto& part : parts) {
            if (!out.empty()) out += ", ";
            out += part;
        }
        return out;
    }

    Outcome outcome() const {
        if (!failed.empty()) return ::fail(join(failed));
        if (!skipped.empty()) {
            std::string detail = join(skipped);
            if (!passed.empty()) detail += "; verified: " + join(passed);
            return ::skip(detail);
        }
        return ::pass(join(passed));
    }
};

std::string num(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

const std::string kFetchHint = " (run scripts/fetch_datasets.py)";

std::size_t resub_correct(const std::string& name, int bands, const PolicySpec& spec) {
    const Dataset data = load_by_name(name).train;
    const IncrementPolicy policy = resolve_policy(spec, data.category_counts(), data.rows());
    const TrainedModel model = train_model(data, bands, policy);
    return evaluate(model, data).correct;
}

PolicySpec per_category_spec() {
    PolicySpec spec;
    spec.strategy = Strategy::per_category;
    return spec;
}

PolicySpec flat_spec() {
    PolicySpec spec;
    spec.strategy = Strategy::row_uniform;
    return spec;
}

Outcome criterion_resubstitution() {
    struct Case {
        const char* dataset;
        int bands;
        PolicySpec spec;
        const char* policy_name;
        std::size_t target, total;
    };
    const std::vector<Case> cases = {
        {"iris", 10, per_category_spec(), "per-category", 143, 150},
        {"wine", 10, flat_spec(), "flat", 177, 178},
        {"wine", 10, per_category_spec(), "per-category", 172, 178},
        {"zoo", 10, per_category_spec(), "per-category", 91, 101},
    };

    CaseTally tally;
    for (const Case& c : cases) {
        const std::string label = std::string(c.dataset) + " " + c.policy_name;
        if (!dataset_available(c.dataset)) {
            tally.skip(label + ": data missing" + kFetchHint);
            continue;
        }
        const std::size_t correct = resub_correct(c.dataset, c.bands, c.spec);
        const std::string got =
            label + " " + std::to_string(correct) + "/" + std::to_string(c.total);
        if (correct + 2 < c.target || correct > c.target + 2) {
            tally.fail(got + " outside " + std::to_string(c.target) + "+/-2");
        } else {
            tally.pass(got);
        }
    }
    return tally.outcome();
}

Outcome criterion_band_variation() {
    CaseTally tally;

    if (dataset_available("zoo")) {
        const std::size_t correct = resub_correct("zoo", 2, per_category_spec());
        if (correct + 2 < 94 || correct > 96) {
            tally.fail("zoo at 2 bands " + std::to_string(correct) + "/101 outside 94+/-2");
        } else {
            tally.pass("zoo at 2 bands " + std::to_string(correct) + "/101");
        }
    } else {
        tally.skip("zoo: data missing" + kFetchHint);
    }

    if (dataset_available("wine")) {
        const std::size_t correct = resub_correct("wine", 15, flat_spec());
        if (correct != 178) {
            tally.fail("wine at 15 bands " + std::to_string(correct) + "/178, expected exactly 178");
        } else {
            tally.pass("wine at 15 bands 178/178");
        }
    } else {
        tally.skip("wine: data missing" + kFetchHint);
    }

    if (dataset_available("iris")) {
        const std::size_t correct = resub_correct("iris", 12, per_category_spec());
        if (correct + 2 < 145 || correct > 147) {
            tally.fail("iris at 12 bands " + std::to_string(correct) + "/150 outside 145+/-2");
        } else {
            tally.pass("iris at 12 bands " + std::to_string(correct) + "/150");
        }
    } else {
        tally.skip("iris: data missing" + kFetchHint);
    }

    return tally.outcome();
}

Outcome criterion_abalone() {
    if (!dataset_available("abalone")) {
        return skip("abalone: data missing" + kFetchHint);
    }
    const Dataset data = load_by_name("abalone").train;
    const IncrementPolicy policy = resolve_policy(flat_spec(), data.category_counts(), data.rows());

    const auto start = std::chrono::steady_clock::now();
    const TrainedModel model = train_model(data, 160, policy);
    const EvalReport report = evaluate(model, data);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double pct = 100.0 * static_cast<double>(report.correct) / static_cast<double>(report.total);
    const double target_pct = 100.0 * 1452.0 / 4177.0;
    const std::string detail = std::to_string(report.correct) + "/" + std::to_string(report.total) +
                               " (" + num(pct, 2) + "%, target " + num(target_pct, 2) +
                               "% +/-1.5), " + num(seconds * 1000.0, 0) + " ms";
    if (std::abs(pct - target_pct) > 1.5) {
        return fail("accuracy " + detail);
    }
    if (seconds >= 5.0) {
        return fail("too slow: " + detail);
    }
    return pass(detail);
}

Outcome criterion_holdouts() {
    CaseTally tally;

    if (dataset_available("banknote")) {
        const LoadedData loaded = load_by_name("banknote");
        if (!loaded.test.has_value()) {
            tally.fail("banknote loaded without a test split");
        } else {
            const IncrementPolicy policy =
                resolve_policy(flat_spec(), loaded.train.category_counts(), loaded.train.rows());
            const EvalReport report = evaluate_holdout(loaded.train, *loaded.test, 17, policy);
            const std::string got =
                "banknote " + std::to_string(report.correct) + "/" + std::to_string(report.total);
            if (report.correct + 3 < 81 || report.correct > 84) {
                tally.fail(got + " outside 81+/-3");
            } else {
                tally.pass(got);
            }
        }
    } else {
        tally.skip("banknote: data missing" + kFetchHint);
    }

    if (dataset_available("user_modelling")) {
        const LoadedData loaded = load_by_name("user_modelling");
        if (!loaded.test.has_value()) {
            tally.fail("user_modelling loaded without a test split");
        } else {
            PolicySpec spec;
            spec.denominators = {34.0, 73.0, 78.0, 53.0};
            const IncrementPolicy policy =
                resolve_policy(spec, loaded.train.category_counts(), loaded.train.rows());
            const EvalReport report = evaluate_holdout(loaded.train, *loaded.test, 14, policy);
            const std::string got = "user_modelling " + std::to_string(report.correct) + "/" +
                                    std::to_string(report.total);
            if (report.correct + 3 < 127 || report.correct > 130) {
                tally.fail(got + " outside 127+/-3");
            } else {
                tally.pass(got);
            }
        }
    } else {
        tally.skip("user_modelling: data missing" + kFetchHint);
    }

    return tally.outcome();
}

// Twelve-band weight table for the first iris variable, computed by hand from
// the published per-band value counts with cw = 1/150 and a flat ow of 1/50,
// printed to three decimals. The trained grid must match every entry.
Outcome criterion_weight_table() {
    if (!dataset_available("iris")) {
        return skip("iris: data missing" + kFetchHint);
    }
    static constexpr double kScale[12] = {0.06, 0.047, 0.167, 0.12,  0.14,  0.1,
                                          0.087, 0.147, 0.053, 0.033, 0.013, 0.033};
    static constexpr double kOutputs[12][3] = {
        {0.18, 0.0, 0.0},  {0.14, 0.0, 0.0},  {0.4, 0.08, 0.02}, {0.22, 0.14, 0.0},
        {0.06, 0.26, 0.1}, {0.0, 0.2, 0.1},   {0.0, 0.1, 0.16},  {0.0, 0.16, 0.28},
        {0.0, 0.06, 0.1},  {0.0, 0.0, 0.1},   {0.0, 0.0, 0.04},  {0.0, 0.0, 0.1}};
    constexpr double kTol = 0.0005;  // printed to three decimals

    const Dataset data = load_by_name("iris").train;
    PolicySpec spec;
    spec.strategy = Strategy::row_uniform;
    spec.flat_value = 0.02;
    const IncrementPolicy policy = resolve_policy(spec, data.category_counts(), data.rows());
    const TrainedModel model = train_model(data, 12, policy);

    const BandRow& row = model.grid.row(0);
    if (row.band_count() != 12) {
        return fail("expected 12 bands, found " + std::to_string(row.band_count()));
    }
    int matched = 0;
    for (int b = 0; b < 12; ++b) {
        const Cell& cell = row.cells[b];
        if (std::abs(cell.scale_weight - kScale[b]) > kTol) {
            return fail("band " + std::to_string(b + 1) + " scale weight " +
                        num(cell.scale_weight, 4) + ", expected " + num(kScale[b], 3));
        }
        ++matched;
        for (int c = 0; c < 3; ++c) {
            if (std::abs(cell.output_weights[c] - kOutputs[b][c]) > kTol) {
                return fail("band " + std::to_string(b + 1) + " output " + std::to_string(c + 1) +
                            " weight " + num(cell.output_weights[c], 4) + ", expected " +
                            num(kOutputs[b][c], 3));
            }
            ++matched;
        }
    }
    return pass(std::to_string(matched) + " weights within " + num(kTol, 4));
}

Outcome criterion_properties() {
    struct Check {
        const char* name;
        PropertyResult (*run)();
    };
    const Check checks[] = {
        {"order invariance", check_order_invariance},
        {"conservation", check_conservation},
        {"flat-value invariance", check_flat_invariance},
        {"oracle equivalence", check_classification_oracle},
    };
    std::string detail;
    for (const Check& check : checks) {
        const PropertyResult result = check.run();
        if (!result.ok) {
            return fail(std::string(check.name) + ": " + result.detail);
        }
        if (!detail.empty()) detail += ", ";
        detail += check.name;
        if (!result.detail.empty()) detail += " (" + result.detail + ")";
    }
    return pass(detail);
}

Outcome criterion_update_count() {
    if (!dataset_available("wine")) {
        return skip("wine: data missing" + kFetchHint);
    }
    const Dataset data = load_by_name("wine").train;
    const IncrementPolicy policy =
        resolve_policy(per_category_spec(), data.category_counts(), data.rows());
    const TrainedModel model = train_model(data, 10, policy);
    const std::uint64_t expected =
        static_cast<std::uint64_t>(data.rows()) * static_cast<std::uint64_t>(data.variables());
    if (model.grid.update_count() != expected) {
        return fail(std::to_string(model.grid.update_count()) + " cell updates, expected " +
                    std::to_string(expected));
    }
    return pass(std::to_string(model.grid.update_count()) + " cell updates for " +
                std::to_string(data.rows()) + " rows x " + std::to_string(data.variables()) +
                " variables");
}

Grid threshold_toy() {
    Grid grid(2, 2, 2);
    grid.cell(0, 0).scale_weight = 0.5;
    grid.cell(0, 0).output_weights = {0.35, 0.05};
    grid.cell(1, 1).scale_weight = 0.5;
    grid.cell(1, 1).output_weights = {0.15, 0.40};
    return grid;
}

Outcome criterion_adjustment() {
    const Matrix toy_rows = {{0.25, 0.75}};
    const std::vector<std::size_t> toy_labels = {1};
    CaseTally tally;

    {
        Grid grid = threshold_toy();
        const Grid before = grid;
        AdjustConfig config;
        config.eta = 0.0;
        config.floor = 0.1;
        adjust_pass(grid, toy_rows, toy_labels, config);
        if (!(grid == before)) {
            tally.fail("zero step size modified the grid");
        } else {
            tally.pass("zero step size is a no-op");
        }
    }
    {
        // Hand-solved flip point: the misclassified toy row flips only once
        // the step size exceeds 0.025.
        AdjustConfig config;
        config.eta = 0.02;
        Grid below = threshold_toy();
        const std::size_t corrections_below = adjust_pass(below, toy_rows, toy_labels, config);
        config.eta = 0.03;
        Grid above = threshold_toy();
        const std::size_t corrections_above = adjust_pass(above, toy_rows, toy_labels, config);
        config.eta = 0.02;
        config.epochs = 2;
        Grid twice = threshold_toy();
        const std::size_t corrections_twice = adjust_pass(twice, toy_rows, toy_labels, config);
        if (corrections_below != 0 || corrections_above != 1 || corrections_twice != 1) {
            tally.fail("toy flip counts " + std::to_string(corrections_below) + "/" +
                       std::to_string(corrections_above) + "/" + std::to_string(corrections_twice) +
                       ", expected 0/1/1 for steps 0.02, 0.03, 0.02 x2 epochs");
        } else {
            tally.pass("toy flips at the derived threshold");
        }
    }

    if (!dataset_available("iris")) {
        tally.skip("iris adjustment run: data missing" + kFetchHint);
        return tally.outcome();
    }

    const Dataset data = load_by_name("iris").train;
    const IncrementPolicy policy =
        resolve_policy(per_category_spec(), data.category_counts(), data.rows());

    const auto run_once = [&](std::size_t* corrections, std::size_t* before, std::size_t* after,
                              Grid* grid_out) {
        TrainedModel model = train_model(data, 12, policy);
        const Matrix normalized = normalize(data.features, model.stats);
        *before = evaluate(model, data).correct;
        AdjustConfig config;
        config.eta = 0.01;
        *corrections = adjust_pass(model.grid, normalized, data.labels, config);
        *after = evaluate(model, data).correct;
        *grid_out = model.grid;
    };

    std::size_t corrections = 0, before = 0, after = 0;
    Grid first;
    run_once(&corrections, &before, &after, &first);

    std::size_t corrections2 = 0, before2 = 0, after2 = 0;
    Grid second;
    run_once(&corrections2, &before2, &after2, &second);

    {
        TrainedModel model = train_model(data, 12, policy);
        const Grid untouched = model.grid;
        const Matrix normalized = normalize(data.features, model.stats);
        AdjustConfig config;
        config.eta = 0.0;
        adjust_pass(model.grid, normalized, data.labels, config);
        if (!(model.grid == untouched)) {
            tally.fail("zero step size modified the trained iris grid");
        }
    }

    if (corrections != corrections2 || !(first == second) || before != before2 ||
        after != after2) {
        tally.fail("two identical adjustment runs disagreed");
    } else if (corrections != 2 || before != 145 || after != 145) {
        tally.fail("iris corrections=" + std::to_string(corrections) + ", accuracy " +
                   std::to_string(before) + " -> " + std::to_string(after) +
                   ", expected corrections=2 and 145 -> 145");
    } else {
        tally.pass("iris corrections=2, resubstitution 145/150 -> 145/150, deterministic");
    }

    return tally.outcome();
}

struct Criterion {
    int number;
    const char* label;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "ten-band resubstitution", criterion_resubstitution},
        {2, "band-count variation", criterion_band_variation},
        {3, "abalone scale and speed", criterion_abalone},
        {4, "holdout generalization", criterion_holdouts},
        {5, "reference weight table", criterion_weight_table},
        {6, "dataset-free properties", criterion_properties},
        {7, "single-pass update count", criterion_update_count},
        {8, "adjustment determinism", criterion_adjustment},
    };

    int passed = 0, failed = 0, skipped = 0;
    for (const Criterion& criterion : criteria) {
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = fail(std::string("unexpected error: ") + e.what());
        }
        const char* status = "PASS";
        if (outcome.status == Outcome::Status::fail) {
            status = "FAIL";
            ++failed;
        } else if (outcome.status == Outcome::Status::skip) {
            status = "SKIP";
            ++skipped;
        } else {
            ++passed;
        }
        std::printf("criterion %d (%s): %s%s%s\n", criterion.number, criterion.label, status,
                    outcome.detail.empty() ? "" : "  ", outcome.detail.c_str());
    }
    std::printf("%d passed, %d failed, %d skipped\n", passed, failed, skipped);
    return failed;
}
