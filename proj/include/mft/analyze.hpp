#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mft/change_points.hpp"
#include "mft/event_series.hpp"
#include "mft/limit.hpp"

namespace mft {

// Options for an end-to-end run on one event file.
struct RunConfig {
    std::string input_path;
    std::vector<double> windows;    // empty: choose automatically
    double alpha = 0.05;
    int n_sims = 10000;
    double grid_step = 0.0;         // 0: default
    std::uint64_t seed = 1;
    std::string output_dir;         // empty: write no files
    std::string calibration_path;   // explicit calibration to load
    std::string cache_dir;          // calibration cache; falls back to $MFT_CACHE_DIR
    bool write_traces = false;      // per-window G and R CSV files
};

// Window ladder from the global event rate: the smallest window targets at
// least 150 expected events, rounded up to a round size, and up to six
// multiples of it are used, capped at half the horizon. Throws when even
// h = T/2 would hold fewer than 100 expected events.
std::vector<double> auto_windows(std::size_t n_events, double horizon);

struct AnalysisOutcome {
    ChangePointReport report;
    LimitCalibration calibration;
    bool calibration_from_cache = false;
    std::vector<std::string> warnings;
};

// Load events, obtain the calibration (explicit file, cache, or computed),
// run the test and, on rejection, the change point estimation; write
// report.json, calibration.json and optional traces into output_dir.
AnalysisOutcome analyze(const RunConfig& config);

} // namespace mft
