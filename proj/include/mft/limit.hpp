#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mft {

// Brownian motion sampled on the regular grid {0, step, ..., horizon}. The
// requested spacing is snapped so that an integer number of steps covers the
// horizon exactly; w[0] = 0.
struct BrownianPath {
    double step = 0.0;
    std::vector<double> w;

    double horizon() const { return step * static_cast<double>(w.size() - 1); }
};

BrownianPath simulate_brownian_path(double horizon, double grid_step,
                                    std::mt19937_64& eng);

// The limit of the filtered derivative under constant rate:
//   L_{h,t} = ((W_{t+h} - W_t) - (W_t - W_{t-h})) / sqrt(2h),
// a 2h-dependent, zero-mean, unit-variance process. Its autocovariance at
// lag v (equal to the correlation) is
//   1 - 3|v| / (2h)        for |v| <= h,
//   -1 + |v| / (2h)        for h < |v| <= 2h,
//   0                      for |v| >= 2h.
double limit_autocovariance(double h, double v);

// L_{h,t} for every grid point t of the path with h <= t <= horizon - h.
// h is snapped to a whole number of grid steps (at least one).
std::vector<double> limit_process_on_grid(const BrownianPath& path, double h);

struct WindowCalibration {
    double h = 0.0;       // requested window
    double h_grid = 0.0;  // window after snapping to the simulation grid
    double mean = 0.0;    // mean of max_t |L_{h,t}| across draws
    double var = 0.0;     // corrected variance of the same
};

// Monte Carlo calibration of the test: per window the distribution of
// M*_h = max |L_{h,.}|, and the rejection threshold Q as the empirical
// (1-alpha)-quantile of M* = max_h (M*_h - mean_h) / sd_h. Fully determined
// by (horizon, windows, alpha, n_sims, grid_step, seed).
struct LimitCalibration {
    double horizon = 0.0;
    std::vector<double> windows;  // ascending, deduplicated
    double alpha = 0.05;
    int n_sims = 0;
    double grid_step = 0.0;       // as requested; 0 means the default
    std::uint64_t seed = 0;
    double grid_step_used = 0.0;
    std::vector<WindowCalibration> per_window;
    double threshold = 0.0;       // Q

    const WindowCalibration& for_window(double h) const;  // throws if unknown
    bool has_window(double h) const;

    std::string to_json() const;
    static LimitCalibration from_json(const std::string& text);
    void save(const std::string& path) const;
    static LimitCalibration load(const std::string& path);

    // Stable fingerprint of the defining inputs; used for cache file names
    // and to link test results back to their calibration.
    std::string cache_key() const;
};

// grid_step 0 selects the default min(windows)/50, floored so the path stays
// under two million points. The quantile uses the ceil((1-alpha) * n_sims)-th
// order statistic.
LimitCalibration calibrate(double horizon, std::vector<double> windows,
                           double alpha, int n_sims, double grid_step,
                           std::uint64_t seed);

} // namespace mft
