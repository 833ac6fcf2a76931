#include "doctest.h"

#include "bandgrid/adjust.hpp"
#include "bandgrid/errors.hpp"

using namespace bandgrid;

namespace {

// Two variables, two bands, two categories. The row (0.25, 0.75) of true
// category 1 selects var 0 band 0 and var 1 band 1; votes come out 1.0 to 0.9
// for category 0, so the row starts out misclassified and flips once the
// update has moved 0.1 of vote mass, i.e. for eta > 0.025.
Grid threshold_toy() {
    Grid grid(2, 2, 2);
    grid.cell(0, 0).scale_weight = 0.5;
    grid.cell(0, 0).output_weights = {0.35, 0.05};
    grid.cell(1, 1).scale_weight = 0.5;
    grid.cell(1, 1).output_weights = {0.15, 0.40};
    return grid;
}

const Matrix kToyRows = {{0.25, 0.75}};
const std::vector<std::size_t> kToyLabels = {1};

AdjustConfig config_with(double eta, int epochs = 1) {
    AdjustConfig config;
    config.eta = eta;
    config.epochs = epochs;
    return config;
}

}  // namespace

TEST_CASE("a zero step size leaves the grid bitwise untouched") {
    Grid grid = threshold_toy();
    const Grid before = grid;

    AdjustConfig config = config_with(0.0);
    config.floor = 0.1;  // above some weights; must still not pull them up
    CHECK(adjust_pass(grid, kToyRows, kToyLabels, config) == 0);
    CHECK(grid == before);
}

TEST_CASE("the flip threshold behaves as solved by hand") {
    SUBCASE("below the threshold nothing flips") {
        Grid grid = threshold_toy();
        CHECK(adjust_pass(grid, kToyRows, kToyLabels, config_with(0.02)) == 0);
        CHECK(grid.classify(kToyRows[0]).category == 0);
        CHECK(grid.cell(0, 0).output_weights[0] == doctest::Approx(0.33));
        CHECK(grid.cell(1, 1).output_weights[1] == doctest::Approx(0.42));
    }
    SUBCASE("above the threshold the row flips and counts once") {
        Grid grid = threshold_toy();
        CHECK(adjust_pass(grid, kToyRows, kToyLabels, config_with(0.03)) == 1);
        CHECK(grid.classify(kToyRows[0]).category == 1);
    }
    SUBCASE("a second epoch pushes a small step over the threshold") {
        Grid grid = threshold_toy();
        CHECK(adjust_pass(grid, kToyRows, kToyLabels, config_with(0.02, 2)) == 1);
        CHECK(grid.classify(kToyRows[0]).category == 1);
    }
}

TEST_CASE("the dominant weight of each wrong cell loses the step") {
    // four variables, one band each: the cell backing the true category gains
    // the step, every other cell's leading weight loses it
    Grid grid(4, 1, 2);
    grid.cell(0, 0).output_weights = {0.6, 0.4};
    grid.cell(1, 0).output_weights = {0.7, 0.3};
    grid.cell(2, 0).output_weights = {0.2, 0.8};
    grid.cell(3, 0).output_weights = {0.8, 0.2};
    for (std::size_t v = 0; v < 4; ++v) {
        grid.cell(v, 0).scale_weight = 1.0;
    }

    const Matrix rows = {{0.5, 0.5, 0.5, 0.5}};
    const std::vector<std::size_t> labels = {1};
    REQUIRE(grid.classify(rows[0]).category == 0);

    adjust_pass(grid, rows, labels, config_with(0.01));

    CHECK(grid.cell(0, 0).output_weights[0] == doctest::Approx(0.59));
    CHECK(grid.cell(0, 0).output_weights[1] == 0.4);
    CHECK(grid.cell(1, 0).output_weights[0] == doctest::Approx(0.69));
    CHECK(grid.cell(1, 0).output_weights[1] == 0.3);
    CHECK(grid.cell(2, 0).output_weights[0] == 0.2);
    CHECK(grid.cell(2, 0).output_weights[1] == doctest::Approx(0.81));
    CHECK(grid.cell(3, 0).output_weights[0] == doctest::Approx(0.79));
    CHECK(grid.cell(3, 0).output_weights[1] == 0.2);
}

TEST_CASE("decrements clamp at the floor") {
    Grid grid(1, 1, 2);
    grid.cell(0, 0).scale_weight = 1.0;
    grid.cell(0, 0).output_weights = {0.005, 0.001};

    adjust_pass(grid, {{0.5}}, {1}, config_with(0.01));
    CHECK(grid.cell(0, 0).output_weights[0] == 0.0);

    Grid floored(1, 1, 2);
    floored.cell(0, 0).scale_weight = 1.0;
    floored.cell(0, 0).output_weights = {0.15, 0.01};
    AdjustConfig config = config_with(0.1);
    config.floor = 0.1;
    adjust_pass(floored, {{0.5}}, {1}, config);
    CHECK(floored.cell(0, 0).output_weights[0] == 0.1);
}

TEST_CASE("scale weights never change during adjustment") {
    Grid grid = threshold_toy();
    adjust_pass(grid, kToyRows, kToyLabels, config_with(0.05));
    CHECK(grid.cell(0, 0).scale_weight == 0.5);
    CHECK(grid.cell(1, 1).scale_weight == 0.5);
}

TEST_CASE("correctly classified rows are a fixpoint") {
    Grid grid = threshold_toy();
    const Grid before = grid;
    // category 0 is what the grid already predicts for this row
    CHECK(adjust_pass(grid, kToyRows, {0}, config_with(0.05)) == 0);
    CHECK(grid == before);
}

TEST_CASE("the true-class mode starves the true weight of wrong cells") {
    Grid grid = threshold_toy();
    AdjustConfig config = config_with(0.02);
    config.mode = AdjustMode::true_class;
    adjust_pass(grid, kToyRows, kToyLabels, config);
    // var 0 band 0 is dominated by category 0: its category-1 weight drops
    CHECK(grid.cell(0, 0).output_weights[0] == 0.35);
    CHECK(grid.cell(0, 0).output_weights[1] == doctest::Approx(0.03));
    // var 1 band 1 already backs the truth: it still gains
    CHECK(grid.cell(1, 1).output_weights[1] == doctest::Approx(0.42));
}

TEST_CASE("the all-non-true mode decrements every other category") {
    Grid grid(1, 1, 3);
    grid.cell(0, 0).scale_weight = 1.0;
    grid.cell(0, 0).output_weights = {0.5, 0.2, 0.3};
    AdjustConfig config = config_with(0.1);
    config.mode = AdjustMode::all_non_true;
    adjust_pass(grid, {{0.5}}, {1}, config);
    CHECK(grid.cell(0, 0).output_weights[0] == doctest::Approx(0.4));
    CHECK(grid.cell(0, 0).output_weights[1] == doctest::Approx(0.2));
    CHECK(grid.cell(0, 0).output_weights[2] == doctest::Approx(0.2));
}

TEST_CASE("adjustment mode names round-trip with their aliases") {
    CHECK(adjust_mode_from_name("dominant") == AdjustMode::dominant);
    CHECK(adjust_mode_from_name("true-class") == AdjustMode::true_class);
    CHECK(adjust_mode_from_name("true_class") == AdjustMode::true_class);
    CHECK(adjust_mode_from_name("all-non-true") == AdjustMode::all_non_true);
    CHECK_THROWS_AS(adjust_mode_from_name("bogus"), ConfigError);
    for (AdjustMode m : {AdjustMode::dominant, AdjustMode::true_class, AdjustMode::all_non_true}) {
        CHECK(adjust_mode_from_name(adjust_mode_name(m)) == m);
    }
}

TEST_CASE("invalid adjustment parameters are rejected") {
    Grid grid = threshold_toy();
    CHECK_THROWS_AS(adjust_pass(grid, kToyRows, {0, 1}, config_with(0.01)), ConfigError);
    CHECK_THROWS_AS(adjust_pass(grid, kToyRows, kToyLabels, config_with(-0.01)), ConfigError);

    AdjustConfig bad_floor = config_with(0.01);
    bad_floor.floor = -1.0;
    CHECK_THROWS_AS(adjust_pass(grid, kToyRows, kToyLabels, bad_floor), ConfigError);
}

TEST_CASE("zero epochs touch nothing") {
    Grid grid = threshold_toy();
    const Grid before = grid;
    CHECK(adjust_pass(grid, kToyRows, kToyLabels, config_with(0.5, 0)) == 0);
    CHECK(grid == before);
}
