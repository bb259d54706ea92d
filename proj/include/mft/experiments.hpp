#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mft/simulate.hpp"

namespace mft {

// One reported quantity of a simulation study. Cells with a target are
// verdict cells: they pass when |estimate - target| <= max(tolerance, 3*se).
// Cells without a target are informational.
struct ExperimentCell {
    std::string label;
    double estimate = 0.0;
    double se = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool has_target = false;

    bool passes() const;
};

struct ExperimentReport {
    std::string name;
    std::vector<ExperimentCell> cells;
    double runtime_sec = 0.0;

    bool pass() const;  // all verdict cells pass
    const ExperimentCell& cell(const std::string& label) const;  // throws if absent
    std::string to_json() const;
    void write_csv(std::ostream& out) const;
};

// Rejection thresholds across window sets and horizons: singles stay near
// 1.8, a well separated pair reaches about 2.23, the seven-window ladder
// about 2.75, and the value is stable in the horizon.
struct ThresholdSweepSpec {
    std::vector<double> horizons = {200.0, 700.0, 1400.0};
    double alpha = 0.05;
    int n_sims = 10000;
    std::uint64_t seed = 1;
};

ExperimentReport run_threshold_sweep(const ThresholdSweepSpec& spec);

// Empirical level on a constant-rate process with a comfortable event count
// per window.
struct NullLevelSpec {
    double horizon = 700.0;
    std::vector<double> windows = {10, 25, 50, 75, 100, 125, 150};
    GammaParams lifetime{2.0, 30.0};  // rate 15: 150 events in the smallest window
    double alpha = 0.05;
    int replicates = 1000;
    int n_sims = 10000;
    std::uint64_t seed = 1;
};

ExperimentReport run_null_level(const NullLevelSpec& spec);

// Level across the (rate, regularity) plane; qualitative structure: highly
// irregular life times make the test conservative, very regular sparse ones
// push it above the nominal level, and spurious multiple detections stay
// rare away from that corner.
struct LevelHeatmapSpec {
    double horizon = 700.0;
    std::vector<double> windows = {10, 25, 50, 75, 100, 125, 150};
    double rate_min = 3.0;
    double rate_max = 30.0;
    int n_rates = 8;
    double cv_min = 0.25;  // sigma/mu of the life times
    double cv_max = 4.0;
    int n_cvs = 8;
    double alpha = 0.05;
    int replicates_per_cell = 200;
    int n_sims = 10000;
    std::uint64_t seed = 1;
};

ExperimentReport run_level_heatmap(const LevelHeatmapSpec& spec);

// Calibrated test vs. the count permutation bootstrap on constant-rate
// processes whose life-time variance alternates on a grid g: the calibrated
// test holds its level, the bootstrap degrades as g grows.
struct BootstrapComparisonSpec {
    double horizon = 700.0;
    std::vector<double> windows = {10, 25, 50, 75, 100, 125, 150};
    GammaParams a{0.5, 15.0};
    GammaParams b{5.0, 150.0};
    std::vector<int> grids = {5000, 10000, 20000};
    double alpha = 0.05;
    int replicates = 300;
    int permutations = 300;
    int n_sims = 10000;
    std::uint64_t seed = 1;
};

ExperimentReport run_bootstrap_comparison(const BootstrapComparisonSpec& spec);

// Detection probability and false positives for a single rate change in the
// middle of the observation window.
struct PowerStudySpec {
    double horizon = 700.0;
    double change_point = 350.0;
    std::vector<double> windows = {10, 25, 50, 75, 100, 125, 150};
    double shape = 2.0;
    double rate1 = 24.0;                          // Gamma rate before the change
    std::vector<double> rates2 = {25, 26, 28, 30};  // after the change
    bool include_null = true;                     // extra row without a change
    double alpha = 0.05;
    int replicates = 1000;
    int n_sims = 10000;
    std::uint64_t seed = 1;
};

ExperimentReport run_power_study(const PowerStudySpec& spec);

// Detection rate of the combined procedure vs. the best single window on a
// model with random change points on several time scales.
struct MultiWindowSpec {
    RandomCpModel model;
    double single_min = 10.0;   // single-window sweep: h = min, min+step, ...
    double single_max = 100.0;
    double single_step = 3.0;
    std::vector<double> mfa_windows;  // empty: 10, 15, ..., 150
    double alpha = 0.05;
    int replicates = 300;
    int n_sims = 10000;
    std::uint64_t seed = 1;
};

ExperimentReport run_multiwindow_study(const MultiWindowSpec& spec);

// End-to-end behaviour on a fixed four-segment model (rates 8, 13, 18 and
// 16.5 with change points at 150, 180 and 500): how often all change points
// are recovered and how close the fitted segment rates come.
struct WorkedExampleSpec {
    double horizon = 700.0;
    std::vector<double> windows = {10, 25, 50, 75, 100, 125, 150};
    double alpha = 0.05;
    int replicates = 200;
    int n_sims = 10000;
    std::uint64_t seed = 1;
};

ExperimentReport run_worked_example(const WorkedExampleSpec& spec);

ChangePointModel worked_example_model(double horizon = 700.0);

} // namespace mft
