#include "mft/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "mft/bootstrap.hpp"
#include "mft/change_points.hpp"
#include "mft/filtered_derivative.hpp"
#include "mft/multiple_filter_test.hpp"
#include "mft/rng.hpp"

namespace mft {

namespace {

// fixed stream offsets so data, calibration and permutations never collide
constexpr std::uint64_t kDataStream = 0x0da7a;
constexpr std::uint64_t kCalibrationStream = 0x0ca1;
constexpr std::uint64_t kBootStream = 0x0b007;

double proportion_se(double p, double n) {
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
}

ExperimentCell info_cell(std::string label, double estimate, double se = 0.0) {
    ExperimentCell c;
    c.label = std::move(label);
    c.estimate = estimate;
    c.se = se;
    return c;
}

ExperimentCell verdict_cell(std::string label, double estimate, double se,
                            double target, double tolerance) {
    ExperimentCell c;
    c.label = std::move(label);
    c.estimate = estimate;
    c.se = se;
    c.target = target;
    c.tolerance = tolerance;
    c.has_target = true;
    return c;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// true change points covered by some detection's window neighborhood
std::size_t covered_count(const std::vector<Detection>& detections,
                          const std::vector<double>& truth, double horizon) {
    std::size_t covered = 0;
    for (double c : truth) {
        for (const Detection& d : detections) {
            if (neighborhood_contains(d.at, d.window, horizon, c)) {
                ++covered;
                break;
            }
        }
    }
    return covered;
}

std::size_t false_positive_count(const std::vector<Detection>& detections,
                                 const std::vector<double>& truth, double horizon) {
    std::size_t fps = 0;
    for (const Detection& d : detections) {
        bool hits = false;
        for (double c : truth) {
            if (neighborhood_contains(d.at, d.window, horizon, c)) {
                hits = true;
                break;
            }
        }
        if (!hits) ++fps;
    }
    return fps;
}

// Correctly detected change points under a one-to-one pairing: a true point
// counts once when a detection's window neighborhood contains it, and every
// detection estimates at most one point. Maximum matching between points and
// neighborhood intervals: walk the points in time order and give each the
// unused containing interval that ends first.
std::size_t matched_count(const std::vector<Detection>& detections,
                          const std::vector<double>& truth, double horizon) {
    std::vector<double> points = truth;
    std::sort(points.begin(), points.end());
    std::vector<bool> used(detections.size(), false);
    std::size_t matched = 0;
    for (double c : points) {
        std::size_t pick = detections.size();
        double pick_end = 0.0;
        for (std::size_t i = 0; i < detections.size(); ++i) {
            if (used[i] ||
                !neighborhood_contains(detections[i].at, detections[i].window,
                                       horizon, c))
                continue;
            const double end = detections[i].at + detections[i].window;
            if (pick == detections.size() || end < pick_end) {
                pick = i;
                pick_end = end;
            }
        }
        if (pick < detections.size()) {
            used[pick] = true;
            ++matched;
        }
    }
    return matched;
}

// pooled ratio estimate with a cluster (per replicate) standard error
struct PooledRatio {
    double num = 0.0, den = 0.0;
    std::vector<std::pair<double, double>> reps;

    void add(double hits, double total) {
        num += hits;
        den += total;
        reps.emplace_back(hits, total);
    }
    double value() const { return den > 0.0 ? num / den : 0.0; }
    double se() const {
        if (den <= 0.0 || reps.size() < 2) return 0.0;
        const double p = value();
        double s = 0.0;
        for (const auto& [h, t] : reps) {
            const double d = h - p * t;
            s += d * d;
        }
        return std::sqrt(s * static_cast<double>(reps.size()) /
                         static_cast<double>(reps.size() - 1)) / den;
    }
};

} // namespace

bool ExperimentCell::passes() const {
    if (!has_target) return true;
    return std::fabs(estimate - target) <= std::max(tolerance, 3.0 * se);
}

bool ExperimentReport::pass() const {
    return std::all_of(cells.begin(), cells.end(),
                       [](const ExperimentCell& c) { return c.passes(); });
}

const ExperimentCell& ExperimentReport::cell(const std::string& label) const {
    for (const auto& c : cells)
        if (c.label == label) return c;
    throw std::out_of_range("experiment report has no cell '" + label + "'");
}

std::string ExperimentReport::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["kind"] = "experiment_report";
    j["name"] = name;
    j["pass"] = pass();
    j["runtime_sec"] = runtime_sec;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json e{{"label", c.label}, {"estimate", c.estimate}, {"se", c.se}};
        if (c.has_target) {
            e["target"] = c.target;
            e["tolerance"] = c.tolerance;
            e["pass"] = c.passes();
        }
        arr.push_back(e);
    }
    j["cells"] = arr;
    return j.dump(2) + "\n";
}

void ExperimentReport::write_csv(std::ostream& out) const {
    out << "label,estimate,se,target,tolerance,pass\n";
    char buf[256];
    for (const auto& c : cells) {
        if (c.has_target)
            std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g,%.9g,%.9g,%s\n",
                          c.label.c_str(), c.estimate, c.se, c.target, c.tolerance,
                          c.passes() ? "true" : "false");
        else
            std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g,,,\n", c.label.c_str(),
                          c.estimate, c.se);
        out << buf;
    }
}

ExperimentReport run_threshold_sweep(const ThresholdSweepSpec& spec) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "thresholds";

    const std::vector<double> ladder = {10, 25, 50, 75, 100, 125, 150};

    // single windows across horizons: Q stays near 1.8
    for (double T : spec.horizons) {
        for (double h : {10.0, 25.0, 75.0, 150.0}) {
            if (h > T / 2.0) continue;
            const auto cal = calibrate(T, {h}, spec.alpha, spec.n_sims, 0.0, spec.seed);
            report.cells.push_back(verdict_cell(
                "Q[single h=" + num_label(h) + ",T=" + num_label(T) + "]",
                cal.threshold, 0.0, 1.8, 0.1));
        }
    }

    // pairs {10, h2}: the threshold grows towards about 2.23
    for (double h2 : {15.0, 25.0, 50.0, 100.0, 150.0}) {
        const auto cal = calibrate(700.0, {10.0, h2}, spec.alpha, spec.n_sims, 0.0,
                                   spec.seed);
        auto c = info_cell("Q[pair {10," + num_label(h2) + "},T=700]", cal.threshold);
        if (h2 >= 50.0) {  // plateau region
            c.target = 2.23;
            c.tolerance = 0.1;
            c.has_target = true;
        }
        report.cells.push_back(c);
    }

    // growing window ladders; the full seven-window set reaches about 2.75
    for (std::size_t k = 1; k <= ladder.size(); ++k) {
        std::vector<double> H(ladder.begin(), ladder.begin() + k);
        const auto cal = calibrate(700.0, H, spec.alpha, spec.n_sims, 0.0, spec.seed);
        auto c = info_cell("Q[ladder first " + std::to_string(k) + ",T=700]",
                           cal.threshold);
        if (k == ladder.size()) {
            c.target = 2.75;
            c.tolerance = 0.1;
            c.has_target = true;
        }
        report.cells.push_back(c);
    }

    report.runtime_sec = clock.seconds();
    return report;
}

ExperimentReport run_null_level(const NullLevelSpec& spec) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "level";

    const auto cal = calibrate(spec.horizon, spec.windows, spec.alpha, spec.n_sims,
                               0.0, substream_key(spec.seed, kCalibrationStream));
    const auto schedule = LifetimeSchedule::make_iid(spec.lifetime);

    std::size_t rejections = 0;
    for (int rep = 0; rep < spec.replicates; ++rep) {
        const EventSeries series = simulate_rpvv(
            schedule, spec.horizon,
            substream_key(substream_key(spec.seed, kDataStream),
                          static_cast<std::uint64_t>(rep)));
        if (run_test(series, spec.windows, cal).reject) ++rejections;
    }

    const double n = static_cast<double>(spec.replicates);
    const double p = static_cast<double>(rejections) / n;
    // accepted band [0.03, 0.08]: near the nominal level, mildly above is
    // expected at finite rates
    report.cells.push_back(
        verdict_cell("rejection_rate", p, proportion_se(p, n), 0.055, 0.025));
    report.cells.push_back(info_cell("threshold", cal.threshold));
    report.runtime_sec = clock.seconds();
    return report;
}

ExperimentReport run_level_heatmap(const LevelHeatmapSpec& spec) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "heatmap";

    const auto cal = calibrate(spec.horizon, spec.windows, spec.alpha, spec.n_sims,
                               0.0, substream_key(spec.seed, kCalibrationStream));

    auto log_grid = [](double lo, double hi, int n) {
        std::vector<double> g(n);
        for (int i = 0; i < n; ++i)
            g[i] = n == 1 ? lo
                          : lo * std::pow(hi / lo, static_cast<double>(i) /
                                                       static_cast<double>(n - 1));
        return g;
    };
    const std::vector<double> rates = log_grid(spec.rate_min, spec.rate_max, spec.n_rates);
    const std::vector<double> cvs = log_grid(spec.cv_min, spec.cv_max, spec.n_cvs);

    double irregular_sum = 0.0;
    int irregular_cells = 0;
    double corner_level = 0.0;
    PooledRatio multi;  // share of runs with >= 2 estimated points, regular corner excluded

    std::uint64_t cell_id = 0;
    for (double cv : cvs) {
        for (double rate : rates) {
            const double shape = 1.0 / (cv * cv);
            const GammaParams life{shape, shape * rate};
            const auto schedule = LifetimeSchedule::make_iid(life);

            std::size_t rejections = 0, multi_hits = 0;
            for (int rep = 0; rep < spec.replicates_per_cell; ++rep) {
                const EventSeries series = simulate_rpvv(
                    schedule, spec.horizon,
                    substream_key(substream_key(spec.seed, kDataStream),
                                  cell_id * 1'000'003 + static_cast<std::uint64_t>(rep)));
                const auto res = detect_change_points(series, spec.windows, cal);
                if (res.test.reject) ++rejections;
                if (res.accepted.size() >= 2) ++multi_hits;
            }
            const double n = static_cast<double>(spec.replicates_per_cell);
            const double level = static_cast<double>(rejections) / n;

            report.cells.push_back(info_cell(
                "level[rate=" + num_label(rate) + ",cv=" + num_label(cv) + "]", level,
                proportion_se(level, n)));

            const bool regular_sparse_corner = cv <= 0.5 && rate <= 5.0;
            if (cv == cvs.back()) {
                irregular_sum += level;
                ++irregular_cells;
            }
            if (cv == cvs.front() && rate == rates.front()) corner_level = level;
            if (!regular_sparse_corner)
                multi.add(static_cast<double>(multi_hits), n);
            ++cell_id;
        }
    }

    // qualitative structure: irregular life times -> conservative; very
    // regular and sparse -> above nominal; multiple spurious estimates rare
    report.cells.push_back(verdict_cell(
        "mean_level_most_irregular", irregular_sum / std::max(irregular_cells, 1),
        0.0, 0.025, 0.025));
    report.cells.push_back(verdict_cell("level_regular_sparse_corner", corner_level,
                                        0.0, 0.53, 0.48));
    report.cells.push_back(verdict_cell("share_multi_detection_outside_corner",
                                        multi.value(), multi.se(), 0.005, 0.005));
    report.runtime_sec = clock.seconds();
    return report;
}

ExperimentReport run_bootstrap_comparison(const BootstrapComparisonSpec& spec) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "bootstrap";

    const auto cal = calibrate(spec.horizon, spec.windows, spec.alpha, spec.n_sims,
                               0.0, substream_key(spec.seed, kCalibrationStream));

    const std::vector<double> mft_targets = {0.059, 0.047, 0.055};
    const std::vector<double> boot_targets = {0.030, 0.066, 0.151};

    std::vector<double> boot_estimates;
    for (std::size_t gi = 0; gi < spec.grids.size(); ++gi) {
        const int g = spec.grids[gi];
        const auto schedule = LifetimeSchedule::make_alternating(spec.a, spec.b, g);

        std::size_t mft_rej = 0, boot_rej = 0;
        for (int rep = 0; rep < spec.replicates; ++rep) {
            const std::uint64_t rep_key =
                substream_key(substream_key(spec.seed, kDataStream),
                              static_cast<std::uint64_t>(gi) * 1'000'003 +
                                  static_cast<std::uint64_t>(rep));
            const EventSeries series = simulate_rpvv(schedule, spec.horizon, rep_key);
            if (run_test(series, spec.windows, cal).reject) ++mft_rej;
            if (bootstrap_test(series, spec.windows, spec.alpha, spec.permutations,
                               substream_key(rep_key, kBootStream))
                    .reject)
                ++boot_rej;
        }

        const double n = static_cast<double>(spec.replicates);
        const double mft_p = static_cast<double>(mft_rej) / n;
        const double boot_p = static_cast<double>(boot_rej) / n;
        boot_estimates.push_back(boot_p);

        const std::string suffix = "[g=" + std::to_string(g) + "]";
        if (gi < mft_targets.size())
            report.cells.push_back(verdict_cell("mft_rejection" + suffix, mft_p,
                                                proportion_se(mft_p, n),
                                                mft_targets[gi], 0.025));
        else
            report.cells.push_back(
                info_cell("mft_rejection" + suffix, mft_p, proportion_se(mft_p, n)));
        if (gi < boot_targets.size())
            report.cells.push_back(verdict_cell("bootstrap_rejection" + suffix, boot_p,
                                                proportion_se(boot_p, n),
                                                boot_targets[gi], 0.04));
        else
            report.cells.push_back(
                info_cell("bootstrap_rejection" + suffix, boot_p,
                          proportion_se(boot_p, n)));
    }

    bool increasing = true;
    for (std::size_t i = 1; i < boot_estimates.size(); ++i)
        if (!(boot_estimates[i] > boot_estimates[i - 1])) increasing = false;
    report.cells.push_back(verdict_cell("bootstrap_rejection_increasing_in_g",
                                        increasing ? 1.0 : 0.0, 0.0, 1.0, 0.0));
    report.runtime_sec = clock.seconds();
    return report;
}

ExperimentReport run_power_study(const PowerStudySpec& spec) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "power";

    const auto cal = calibrate(spec.horizon, spec.windows, spec.alpha, spec.n_sims,
                               0.0, substream_key(spec.seed, kCalibrationStream));

    // pinned expectations for the default rows (rate1 24 -> 25, 26, 28, 30)
    const bool default_rows = spec.shape == 2.0 && spec.rate1 == 24.0 &&
                              spec.rates2 == std::vector<double>{25, 26, 28, 30};
    const std::vector<double> detect_targets = {0.119, 0.653, 0.996, 0.999};
    const std::vector<double> detect_tols = {0.05, 0.05, 0.016, 0.011};

    std::vector<std::vector<double>> row_rates2;
    for (double r2 : spec.rates2) row_rates2.push_back({r2});
    if (spec.include_null) row_rates2.push_back({});  // no change row

    for (std::size_t row = 0; row < row_rates2.size(); ++row) {
        const bool null_row = row_rates2[row].empty();
        const double rate2 = null_row ? spec.rate1 : row_rates2[row][0];

        ChangePointModel model;
        model.horizon = spec.horizon;
        if (!null_row) {
            model.change_points = {spec.change_point};
            model.segments = {
                LifetimeSchedule::make_iid(GammaParams{spec.shape, spec.rate1}),
                LifetimeSchedule::make_iid(GammaParams{spec.shape, rate2})};
        } else {
            model.segments = {
                LifetimeSchedule::make_iid(GammaParams{spec.shape, spec.rate1})};
        }
        const std::vector<double> truth =
            null_row ? std::vector<double>{} : std::vector<double>{spec.change_point};

        std::size_t detected = 0, fp_total = 0, any_fp = 0;
        for (int rep = 0; rep < spec.replicates; ++rep) {
            const EventSeries series = simulate_change_points(
                model, substream_key(substream_key(spec.seed, kDataStream),
                                     row * 1'000'003 + static_cast<std::uint64_t>(rep)));
            const auto res = detect_change_points(series, spec.windows, cal);
            if (!null_row &&
                covered_count(res.accepted, truth, spec.horizon) == truth.size())
                ++detected;
            const std::size_t fps =
                false_positive_count(res.accepted, truth, spec.horizon);
            fp_total += fps;
            if (fps > 0) ++any_fp;
        }

        const double n = static_cast<double>(spec.replicates);
        const std::string suffix = null_row
            ? "[null]"
            : "[lambda2=" + num_label(row_rates2[row][0]) + "]";

        if (!null_row) {
            const double p = static_cast<double>(detected) / n;
            if (default_rows && row < detect_targets.size())
                report.cells.push_back(verdict_cell("detection" + suffix, p,
                                                    proportion_se(p, n),
                                                    detect_targets[row],
                                                    detect_tols[row]));
            else
                report.cells.push_back(
                    info_cell("detection" + suffix, p, proportion_se(p, n)));
        }
        const double fp_mean = static_cast<double>(fp_total) / n;
        // accepted band for the mean false positive count per run
        report.cells.push_back(verdict_cell("fp_mean" + suffix, fp_mean,
                                            std::sqrt(fp_mean / n), 0.055, 0.035));
        const double fp_share = static_cast<double>(any_fp) / n;
        report.cells.push_back(
            info_cell("fp_any_share" + suffix, fp_share, proportion_se(fp_share, n)));
    }

    report.runtime_sec = clock.seconds();
    return report;
}

ExperimentReport run_multiwindow_study(const MultiWindowSpec& spec) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "multiwindow";

    std::vector<double> singles;
    for (double h = spec.single_min; h <= spec.single_max + 1e-9; h += spec.single_step)
        singles.push_back(h);
    std::vector<double> mfa_windows = spec.mfa_windows;
    if (mfa_windows.empty())
        for (double h = 10.0; h <= 150.0 + 1e-9; h += 5.0) mfa_windows.push_back(h);

    const double T = spec.model.horizon;
    const std::uint64_t cal_seed = substream_key(spec.seed, kCalibrationStream);

    // one calibration per single window plus one for the combined set
    std::vector<LimitCalibration> single_cal;
    single_cal.reserve(singles.size());
    for (std::size_t j = 0; j < singles.size(); ++j)
        single_cal.push_back(
            calibrate(T, {singles[j]}, spec.alpha, spec.n_sims, 0.0,
                      substream_key(cal_seed, j)));
    const LimitCalibration mfa_cal = calibrate(T, mfa_windows, spec.alpha, spec.n_sims,
                                               0.0, substream_key(cal_seed, 1'000'000));

    std::vector<PooledRatio> single_rate(singles.size());
    PooledRatio mfa_rate;
    // per-replicate detection ratios for the paired comparison
    std::vector<std::vector<double>> single_ratios(singles.size());
    std::vector<double> mfa_ratios;

    for (int rep = 0; rep < spec.replicates; ++rep) {
        const RandomCpDraw draw = simulate_random_cp_model(
            spec.model, substream_key(substream_key(spec.seed, kDataStream),
                                      static_cast<std::uint64_t>(rep)));
        if (draw.change_points.empty()) continue;
        const double truth_n = static_cast<double>(draw.change_points.size());

        for (std::size_t j = 0; j < singles.size(); ++j) {
            const double h = singles[j];
            const WindowCalibration& wc = single_cal[j].for_window(h);
            const StepProcess r = r_process(g_process(draw.events, h), wc.mean,
                                            std::sqrt(wc.var));
            const auto detections = sfa(r, h, single_cal[j].threshold);
            const double hits = static_cast<double>(
                matched_count(detections, draw.change_points, T));
            single_rate[j].add(hits, truth_n);
            single_ratios[j].push_back(hits / truth_n);
        }

        const auto res = detect_change_points(draw.events, mfa_windows, mfa_cal);
        const double hits = static_cast<double>(
            matched_count(res.accepted, draw.change_points, T));
        mfa_rate.add(hits, truth_n);
        mfa_ratios.push_back(hits / truth_n);
    }

    std::size_t best = 0;
    for (std::size_t j = 0; j < singles.size(); ++j) {
        report.cells.push_back(info_cell("single_detection[h=" + num_label(singles[j]) + "]",
                                         single_rate[j].value(), single_rate[j].se()));
        if (single_rate[j].value() > single_rate[best].value()) best = j;
    }

    report.cells.push_back(verdict_cell("best_single_detection",
                                        single_rate[best].value(),
                                        single_rate[best].se(), 0.59, 0.06));
    // sanity bound on the location of the best window (descriptively near 28)
    report.cells.push_back(verdict_cell("best_single_window", singles[best], 0.0,
                                        36.5, 23.5));
    report.cells.push_back(verdict_cell("mfa_detection", mfa_rate.value(),
                                        mfa_rate.se(), 0.66, 0.06));

    // paired difference against the best single window across replicates
    double dbar = 0.0;
    const std::size_t nrep = mfa_ratios.size();
    for (std::size_t i = 0; i < nrep; ++i)
        dbar += mfa_ratios[i] - single_ratios[best][i];
    dbar /= static_cast<double>(nrep);
    double dvar = 0.0;
    for (std::size_t i = 0; i < nrep; ++i) {
        const double d = mfa_ratios[i] - single_ratios[best][i] - dbar;
        dvar += d * d;
    }
    dvar /= static_cast<double>(nrep - 1);
    const double dse = std::sqrt(dvar / static_cast<double>(nrep));
    report.cells.push_back(info_cell("paired_gain", dbar, dse));
    report.cells.push_back(verdict_cell("paired_gain_positive_95",
                                        dbar - 1.645 * dse > 0.0 ? 1.0 : 0.0, 0.0,
                                        1.0, 0.0));
    report.runtime_sec = clock.seconds();
    return report;
}

ChangePointModel worked_example_model(double horizon) {
    ChangePointModel model;
    model.horizon = horizon;
    model.change_points = {150.0, 180.0, 500.0};
    model.segments = {LifetimeSchedule::make_iid(GammaParams{1.0, 8.0}),
                      LifetimeSchedule::make_iid(GammaParams{2.0, 26.0}),
                      LifetimeSchedule::make_iid(GammaParams{1.0, 18.0}),
                      LifetimeSchedule::make_iid(GammaParams{2.0, 33.0})};
    return model;
}

ExperimentReport run_worked_example(const WorkedExampleSpec& spec) {
    Stopwatch clock;
    ExperimentReport report;
    report.name = "example";

    const auto cal = calibrate(spec.horizon, spec.windows, spec.alpha, spec.n_sims,
                               0.0, substream_key(spec.seed, kCalibrationStream));
    const ChangePointModel model = worked_example_model(spec.horizon);
    const std::vector<double>& truth = model.change_points;
    const std::vector<double> true_rates = {8.0, 13.0, 18.0, 16.5};

    std::size_t at_least_three = 0;
    std::vector<std::size_t> covered(truth.size(), 0);
    std::vector<double> rate_sums(true_rates.size(), 0.0);
    std::size_t full_runs = 0;

    for (int rep = 0; rep < spec.replicates; ++rep) {
        const EventSeries series = simulate_change_points(
            model, substream_key(substream_key(spec.seed, kDataStream),
                                 static_cast<std::uint64_t>(rep)));
        const auto res = detect_change_points(series, spec.windows, cal);
        if (res.accepted.size() >= 3) ++at_least_three;

        std::size_t hit_all = 0;
        for (std::size_t c = 0; c < truth.size(); ++c) {
            for (const Detection& d : res.accepted) {
                if (neighborhood_contains(d.at, d.window, spec.horizon, truth[c])) {
                    ++covered[c];
                    ++hit_all;
                    break;
                }
            }
        }
        if (hit_all == truth.size()) {
            ++full_runs;
            // evaluate the fitted piecewise rate at the true segment midpoints
            const StepProcess fitted = rate_step(res.rates);
            const std::vector<double> mids = {75.0, 165.0, 340.0, 600.0};
            for (std::size_t s = 0; s < mids.size(); ++s)
                rate_sums[s] += fitted(mids[s]);
        }
    }

    // Expected recovery rates for this model at alpha = 0.05 with the default
    // windows, measured at large replicate counts. The two early changes are
    // nearly always recovered. The late change (18 -> 16.5 next to the
    // high-variance exponential segment) is intrinsically marginal: the
    // expected peak of the filtered derivative sits just below the effective
    // rejection level, so only about 70% of runs recover it -- and with it a
    // third estimate at all.
    static constexpr double kCoverageTarget[] = {0.975, 0.955, 0.70};
    static constexpr double kCoverageTol[] = {0.03, 0.045, 0.10};

    const double n = static_cast<double>(spec.replicates);
    const double p3 = static_cast<double>(at_least_three) / n;
    report.cells.push_back(verdict_cell("share_with_3_estimates", p3,
                                        proportion_se(p3, n), 0.68, 0.10));
    for (std::size_t c = 0; c < truth.size(); ++c) {
        const double pc = static_cast<double>(covered[c]) / n;
        report.cells.push_back(verdict_cell("coverage[c=" + num_label(truth[c]) + "]",
                                            pc, proportion_se(pc, n),
                                            kCoverageTarget[c], kCoverageTol[c]));
    }
    report.cells.push_back(info_cell("share_all_found",
                                     static_cast<double>(full_runs) / n));
    if (full_runs > 0) {
        for (std::size_t s = 0; s < true_rates.size(); ++s) {
            const double mean_rate = rate_sums[s] / static_cast<double>(full_runs);
            report.cells.push_back(verdict_cell(
                "segment_rate[" + std::to_string(s) + "]", mean_rate, 0.0,
                true_rates[s], 0.1 * true_rates[s]));
        }
    }
    report.runtime_sec = clock.seconds();
    return report;
}

} // namespace mft
