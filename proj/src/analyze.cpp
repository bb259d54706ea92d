#include "mft/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mft/filtered_derivative.hpp"

namespace mft {

namespace {

namespace fs = std::filesystem;

// smallest value of the round ladder {1, 2.5, 5} x 10^k that is >= raw
double round_up_window(double raw) {
    const double k = std::floor(std::log10(raw));
    for (double scale = std::pow(10.0, k - 1);; scale *= 10.0) {
        for (double m : {1.0, 2.5, 5.0}) {
            const double cand = m * scale;
            if (cand >= raw * (1.0 - 1e-12)) return cand;
        }
    }
}

std::string window_tag(double h) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", h);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace

std::vector<double> auto_windows(std::size_t n_events, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("auto_windows: horizon must be positive");
    const double rate = static_cast<double>(n_events) / horizon;
    const double expected_half = rate * horizon / 2.0;
    if (expected_half < 100.0) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "series too sparse for automatic windows: even h = T/2 holds "
                      "only %.3g expected events (need 100)",
                      expected_half);
        throw std::runtime_error(buf);
    }

    // smallest window targets about 150 expected events, on a round size
    const double half = horizon / 2.0;
    double h1 = round_up_window(150.0 / rate);
    if (h1 > half) h1 = half;

    std::vector<double> windows;
    for (int j = 1; j <= 6; ++j) {
        const double h = h1 * j;
        if (h > half * (1.0 + 1e-12)) break;
        windows.push_back(std::min(h, half));
    }
    return windows;
}

AnalysisOutcome analyze(const RunConfig& config) {
    AnalysisOutcome outcome;

    const EventSeries series = EventSeries::load(config.input_path);

    std::vector<double> windows = config.windows;
    if (windows.empty()) {
        windows = auto_windows(series.size(), series.horizon());
    } else {
        std::sort(windows.begin(), windows.end());
        windows.erase(std::unique(windows.begin(), windows.end()), windows.end());
    }

    // windows beyond half the horizon can never enter the test; keep them
    // out of the calibration but hand the full list to the test so the
    // report records what was dropped
    std::vector<double> usable;
    for (double h : windows)
        if (h <= series.horizon() / 2.0) usable.push_back(h);
    if (usable.empty())
        throw std::invalid_argument(
            "analyze: every requested window exceeds half the horizon");

    // calibration: explicit file beats cache beats a fresh computation
    bool have_calibration = false;
    if (!config.calibration_path.empty()) {
        outcome.calibration = LimitCalibration::load(config.calibration_path);
        have_calibration = true;
    }

    std::string cache_dir = config.cache_dir;
    if (cache_dir.empty()) {
        if (const char* env = std::getenv("MFT_CACHE_DIR")) cache_dir = env;
    }

    if (!have_calibration) {
        // fingerprint of the inputs that determine the calibration
        LimitCalibration stub;
        stub.horizon = series.horizon();
        stub.windows = usable;
        stub.alpha = config.alpha;
        stub.n_sims = config.n_sims;
        stub.grid_step = config.grid_step;
        stub.seed = config.seed;
        const std::string key = stub.cache_key();

        fs::path cache_file;
        if (!cache_dir.empty()) {
            cache_file = fs::path(cache_dir) / (key + ".json");
            if (fs::exists(cache_file)) {
                LimitCalibration cached = LimitCalibration::load(cache_file.string());
                if (cached.cache_key() == key) {
                    outcome.calibration = std::move(cached);
                    outcome.calibration_from_cache = true;
                    have_calibration = true;
                } else {
                    outcome.warnings.push_back("cache entry '" + cache_file.string() +
                                               "' does not match its key; recomputing");
                }
            }
        }
        if (!have_calibration) {
            outcome.calibration = calibrate(series.horizon(), usable, config.alpha,
                                            config.n_sims, config.grid_step,
                                            config.seed);
            if (!cache_file.empty()) {
                fs::create_directories(cache_file.parent_path());
                outcome.calibration.save(cache_file.string());
            }
        }
    }

    outcome.report = detect_change_points(series, windows, outcome.calibration);
    for (double h : outcome.report.test.dropped_windows)
        outcome.warnings.push_back("window " + window_tag(h) +
                                   " exceeds half the horizon and was dropped");

    if (!config.output_dir.empty()) {
        const fs::path dir(config.output_dir);
        fs::create_directories(dir);
        write_text_file(dir / "report.json", outcome.report.to_json());
        write_text_file(dir / "calibration.json", outcome.calibration.to_json());

        std::ofstream rates(dir / "rates.csv");
        if (!rates) throw std::runtime_error("cannot write rates.csv");
        rates << "begin,end,events,rate\n";
        char line[160];
        for (const SegmentRate& s : outcome.report.rates) {
            std::snprintf(line, sizeof(line), "%.9g,%.9g,%zu,%.9g\n", s.begin, s.end,
                          s.events, s.rate);
            rates << line;
        }

        if (config.write_traces) {
            for (const WindowTestResult& w : outcome.report.test.windows) {
                const StepProcess g = g_process(series, w.h);
                g.save_csv((dir / ("trace_h" + window_tag(w.h) + ".csv")).string());
                const WindowCalibration& wc = outcome.calibration.for_window(w.h);
                const StepProcess r = r_process(g, wc.mean, std::sqrt(wc.var));
                r.save_csv((dir / ("trace_r_h" + window_tag(w.h) + ".csv")).string());
            }
        }
    }

    return outcome;
}

} // namespace mft
