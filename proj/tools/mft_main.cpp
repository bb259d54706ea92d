// mft: rate change point detection for event time series.
//
// Subcommands:
//   simulate    draw an event series from one of the built-in models
//   calibrate   Monte Carlo calibration of the rejection threshold
//   test        run the stationarity test against a saved calibration
//   detect      test plus change point estimation against a saved calibration
//   analyze     end-to-end: auto windows, cached calibration, test, detection
//   experiment  run a named simulation study
//
// Exit codes: 0 = success / rate stationarity accepted, 1 = rejected (change
// points reported) or experiment verdict failed, 2 = error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mft/analyze.hpp"
#include "mft/bootstrap.hpp"
#include "mft/change_points.hpp"
#include "mft/event_series.hpp"
#include "mft/experiments.hpp"
#include "mft/limit.hpp"
#include "mft/multiple_filter_test.hpp"
#include "mft/simulate.hpp"

namespace {

namespace fs = std::filesystem;

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

struct SimulateOptions {
    std::string model = "iid";
    double horizon = 700.0;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string truth_out;
    double shape = 1.0, rate = 10.0;
    double shape_b = 0.0, rate_b = 0.0;  // 0: reuse --shape/--rate
    int grid = 10;
    double decay = 0.0;
    std::vector<double> rates = {28.0, 24.0, 20.0, 18.0};
    double gap_min = 0.0, gap_max = 100.0;
};

struct SimulateOutput {
    mft::EventSeries events;
    std::vector<double> truth;
    bool has_truth = false;
};

SimulateOutput draw_model(const SimulateOptions& opt) {
    const mft::GammaParams a{opt.shape, opt.rate};
    const mft::GammaParams b{opt.shape_b > 0.0 ? opt.shape_b : opt.shape,
                             opt.rate_b > 0.0 ? opt.rate_b : opt.rate};

    if (opt.model == "iid")
        return {mft::simulate_rpvv(mft::LifetimeSchedule::make_iid(a), opt.horizon,
                                   opt.seed),
                {}, false};
    if (opt.model == "converging")
        return {mft::simulate_rpvv(mft::LifetimeSchedule::make_converging(a, opt.decay),
                                   opt.horizon, opt.seed),
                {}, false};
    if (opt.model == "alternating")
        return {mft::simulate_rpvv(mft::LifetimeSchedule::make_alternating(a, b, opt.grid),
                                   opt.horizon, opt.seed),
                {}, false};
    if (opt.model == "grid")
        return {mft::simulate_rpvv(mft::LifetimeSchedule::make_grid_balanced(a, opt.grid),
                                   opt.horizon, opt.seed),
                {}, false};
    if (opt.model == "example") {
        const mft::ChangePointModel model = mft::worked_example_model(opt.horizon);
        return {mft::simulate_change_points(model, opt.seed), model.change_points, true};
    }
    if (opt.model == "random") {
        mft::RandomCpModel model;
        model.horizon = opt.horizon;
        model.shape = opt.shape;
        model.rates = opt.rates;
        model.gap_min = opt.gap_min;
        model.gap_max = opt.gap_max;
        mft::RandomCpDraw draw = mft::simulate_random_cp_model(model, opt.seed);
        return {std::move(draw.events), std::move(draw.change_points), true};
    }
    throw std::runtime_error("unknown model '" + opt.model + "'");
}

int run_simulate(const SimulateOptions& opt) {
    const SimulateOutput out = draw_model(opt);
    const mft::EventSeries& events = out.events;
    const std::vector<double>& truth = out.truth;
    const bool has_truth = out.has_truth;

    if (opt.out == "-") {
        events.write(std::cout);
    } else {
        events.save(opt.out);
    }
    if (!opt.truth_out.empty()) {
        if (!has_truth)
            throw std::runtime_error("model '" + opt.model + "' has no change points; "
                                     "--truth applies to 'example' and 'random'");
        std::string text;
        char buf[40];
        for (double c : truth) {
            std::snprintf(buf, sizeof(buf), "%.17g\n", c);
            text += buf;
        }
        write_or_print(opt.truth_out, text);
    }
    return 0;
}

struct ExperimentOptions {
    std::string name;
    std::uint64_t seed = 1;
    int replicates = 0;   // 0: keep the study default
    int n_sims = 0;
    int permutations = 0;
    std::string out_dir;
};

int run_experiment(const ExperimentOptions& opt) {
    mft::ExperimentReport report;
    if (opt.name == "thresholds") {
        mft::ThresholdSweepSpec spec;
        spec.seed = opt.seed;
        if (opt.n_sims > 0) spec.n_sims = opt.n_sims;
        report = mft::run_threshold_sweep(spec);
    } else if (opt.name == "level") {
        mft::NullLevelSpec spec;
        spec.seed = opt.seed;
        if (opt.replicates > 0) spec.replicates = opt.replicates;
        if (opt.n_sims > 0) spec.n_sims = opt.n_sims;
        report = mft::run_null_level(spec);
    } else if (opt.name == "heatmap") {
        mft::LevelHeatmapSpec spec;
        spec.seed = opt.seed;
        if (opt.replicates > 0) spec.replicates_per_cell = opt.replicates;
        if (opt.n_sims > 0) spec.n_sims = opt.n_sims;
        report = mft::run_level_heatmap(spec);
    } else if (opt.name == "bootstrap") {
        mft::BootstrapComparisonSpec spec;
        spec.seed = opt.seed;
        if (opt.replicates > 0) spec.replicates = opt.replicates;
        if (opt.n_sims > 0) spec.n_sims = opt.n_sims;
        if (opt.permutations > 0) spec.permutations = opt.permutations;
        report = mft::run_bootstrap_comparison(spec);
    } else if (opt.name == "power") {
        mft::PowerStudySpec spec;
        spec.seed = opt.seed;
        if (opt.replicates > 0) spec.replicates = opt.replicates;
        if (opt.n_sims > 0) spec.n_sims = opt.n_sims;
        report = mft::run_power_study(spec);
    } else if (opt.name == "multiwindow") {
        mft::MultiWindowSpec spec;
        spec.seed = opt.seed;
        if (opt.replicates > 0) spec.replicates = opt.replicates;
        if (opt.n_sims > 0) spec.n_sims = opt.n_sims;
        report = mft::run_multiwindow_study(spec);
    } else if (opt.name == "example") {
        mft::WorkedExampleSpec spec;
        spec.seed = opt.seed;
        if (opt.replicates > 0) spec.replicates = opt.replicates;
        if (opt.n_sims > 0) spec.n_sims = opt.n_sims;
        report = mft::run_worked_example(spec);
    } else {
        throw std::runtime_error(
            "unknown experiment '" + opt.name +
            "' (expected thresholds, level, heatmap, bootstrap, power, "
            "multiwindow or example)");
    }

    std::cout << report.to_json();
    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        write_or_print((fs::path(opt.out_dir) / (report.name + ".json")).string(),
                       report.to_json());
        std::ofstream csv(fs::path(opt.out_dir) / (report.name + ".csv"));
        if (!csv) throw std::runtime_error("cannot write experiment CSV");
        report.write_csv(csv);
    }
    return report.pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate change point detection for event time series"};
    app.require_subcommand(1);

    // --- simulate ---------------------------------------------------------
    SimulateOptions sim;
    CLI::App* sc_sim = app.add_subcommand("simulate", "Draw an event series");
    sc_sim->add_option("--model", sim.model,
                       "iid | converging | alternating | grid | example | random")
        ->capture_default_str();
    sc_sim->add_option("--T", sim.horizon, "observation horizon")->capture_default_str();
    sc_sim->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    sc_sim->add_option("--out", sim.out, "output file ('-' for stdout)")
        ->capture_default_str();
    sc_sim->add_option("--truth", sim.truth_out, "write true change points here");
    sc_sim->add_option("--shape", sim.shape, "life-time Gamma shape")
        ->capture_default_str();
    sc_sim->add_option("--rate", sim.rate, "life-time Gamma rate")->capture_default_str();
    sc_sim->add_option("--shape-b", sim.shape_b, "second block shape (alternating)");
    sc_sim->add_option("--rate-b", sim.rate_b, "second block rate (alternating)");
    sc_sim->add_option("--grid", sim.grid, "variance grid length g")
        ->capture_default_str();
    sc_sim->add_option("--decay", sim.decay, "rate perturbation decay (converging)");
    sc_sim->add_option("--rates", sim.rates, "process rates (random model)")
        ->delimiter(',');
    sc_sim->add_option("--gap-min", sim.gap_min, "smallest change point spacing");
    sc_sim->add_option("--gap-max", sim.gap_max, "largest change point spacing");

    // --- calibrate --------------------------------------------------------
    double cal_T = 700.0, cal_alpha = 0.05, cal_step = 0.0;
    int cal_sims = 10000;
    std::uint64_t cal_seed = 1;
    std::vector<double> cal_windows;
    std::string cal_out = "-";
    CLI::App* sc_cal = app.add_subcommand("calibrate", "Compute the rejection threshold");
    sc_cal->add_option("--T", cal_T, "observation horizon")->capture_default_str();
    sc_cal->add_option("--windows", cal_windows, "window sizes, e.g. 10,25,50")
        ->delimiter(',')
        ->required();
    sc_cal->add_option("--alpha", cal_alpha, "significance level")->capture_default_str();
    sc_cal->add_option("--sims", cal_sims, "Monte Carlo draws")->capture_default_str();
    sc_cal->add_option("--grid-step", cal_step, "path grid step (0: automatic)");
    sc_cal->add_option("--seed", cal_seed, "random seed")->capture_default_str();
    sc_cal->add_option("--out", cal_out, "output file ('-' for stdout)")
        ->capture_default_str();

    // --- test / detect ----------------------------------------------------
    std::string tst_input, tst_cal;
    std::vector<double> tst_windows;
    CLI::App* sc_tst = app.add_subcommand("test", "Test rate stationarity");
    sc_tst->add_option("--input", tst_input, "event file")->required();
    sc_tst->add_option("--calibration", tst_cal, "calibration JSON")->required();
    sc_tst->add_option("--windows", tst_windows, "subset of calibrated windows")
        ->delimiter(',');

    std::string det_input, det_cal, det_out_dir;
    std::vector<double> det_windows;
    bool det_traces = false;
    CLI::App* sc_det = app.add_subcommand("detect", "Estimate change points");
    sc_det->add_option("--input", det_input, "event file")->required();
    sc_det->add_option("--calibration", det_cal, "calibration JSON")->required();
    sc_det->add_option("--windows", det_windows, "subset of calibrated windows")
        ->delimiter(',');
    sc_det->add_option("--out-dir", det_out_dir, "write report files here");
    sc_det->add_flag("--traces", det_traces, "also write per-window CSV traces");

    // --- analyze ----------------------------------------------------------
    mft::RunConfig cfg;
    CLI::App* sc_ana = app.add_subcommand("analyze", "End-to-end analysis of one file");
    sc_ana->add_option("--input", cfg.input_path, "event file")->required();
    sc_ana->add_option("--windows", cfg.windows, "window sizes (default: automatic)")
        ->delimiter(',');
    sc_ana->add_option("--alpha", cfg.alpha, "significance level")->capture_default_str();
    sc_ana->add_option("--sims", cfg.n_sims, "calibration draws")->capture_default_str();
    sc_ana->add_option("--grid-step", cfg.grid_step, "path grid step (0: automatic)");
    sc_ana->add_option("--seed", cfg.seed, "calibration seed")->capture_default_str();
    sc_ana->add_option("--out-dir", cfg.output_dir, "write report files here");
    sc_ana->add_option("--calibration", cfg.calibration_path, "reuse this calibration");
    sc_ana->add_option("--cache-dir", cfg.cache_dir,
                       "calibration cache (default: $MFT_CACHE_DIR)");
    sc_ana->add_flag("--traces", cfg.write_traces, "also write per-window CSV traces");

    // --- experiment -------------------------------------------------------
    ExperimentOptions exp;
    CLI::App* sc_exp = app.add_subcommand("experiment", "Run a named simulation study");
    sc_exp->add_option("name", exp.name,
                       "thresholds | level | heatmap | bootstrap | power | "
                       "multiwindow | example")
        ->required();
    sc_exp->add_option("--seed", exp.seed, "random seed")->capture_default_str();
    sc_exp->add_option("--replicates", exp.replicates, "override replicate count");
    sc_exp->add_option("--sims", exp.n_sims, "override calibration draws");
    sc_exp->add_option("--permutations", exp.permutations,
                       "override permutation count (bootstrap)");
    sc_exp->add_option("--out-dir", exp.out_dir, "write JSON and CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(sc_sim)) return run_simulate(sim);

        if (app.got_subcommand(sc_cal)) {
            const mft::LimitCalibration cal =
                mft::calibrate(cal_T, cal_windows, cal_alpha, cal_sims, cal_step, cal_seed);
            write_or_print(cal_out, cal.to_json());
            return 0;
        }

        if (app.got_subcommand(sc_tst)) {
            const mft::EventSeries series = mft::EventSeries::load(tst_input);
            const mft::LimitCalibration cal = mft::LimitCalibration::load(tst_cal);
            const std::vector<double>& windows =
                tst_windows.empty() ? cal.windows : tst_windows;
            const mft::TestResult result = mft::run_test(series, windows, cal);
            std::cout << result.to_json();
            return result.reject ? 1 : 0;
        }

        if (app.got_subcommand(sc_det)) {
            mft::RunConfig dc;
            dc.input_path = det_input;
            dc.calibration_path = det_cal;
            dc.windows = det_windows.empty()
                             ? mft::LimitCalibration::load(det_cal).windows
                             : det_windows;
            dc.output_dir = det_out_dir;
            dc.write_traces = det_traces;
            const mft::AnalysisOutcome outcome = mft::analyze(dc);
            for (const std::string& w : outcome.warnings)
                std::cerr << "warning: " << w << "\n";
            std::cout << outcome.report.to_json();
            return outcome.report.test.reject ? 1 : 0;
        }

        if (app.got_subcommand(sc_ana)) {
            const mft::AnalysisOutcome outcome = mft::analyze(cfg);
            for (const std::string& w : outcome.warnings)
                std::cerr << "warning: " << w << "\n";
            std::cout << outcome.report.to_json();
            return outcome.report.test.reject ? 1 : 0;
        }

        if (app.got_subcommand(sc_exp)) return run_experiment(exp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::cerr << "error: no subcommand\n";
    return 2;
}
