#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mft/event_series.hpp"
#include "mft/limit.hpp"
#include "mft/multiple_filter_test.hpp"
#include "mft/step_process.hpp"

namespace mft {

struct Detection {
    double at = 0.0;      // estimated change point
    double window = 0.0;  // window that produced it
    double height = 0.0;  // standardized statistic at the estimate
    int order = 0;        // detection order within the window (0 = first)
};

// Single filter algorithm: repeatedly take the maximum of the standardized
// process outside the neighborhoods (c - h, c + h) of previous detections;
// stop once it drops to the threshold or nothing remains. Detections come
// out in order of decreasing height.
std::vector<Detection> sfa(const StepProcess& r, double h, double threshold);

// Multi filter combination. per_window holds the sfa outputs for windows in
// ascending order. Every detection of the smallest window is kept; a later
// detection c for window h is kept only if its neighborhood
// (c - h, c + h) ∩ (h, T - h] contains no change point accepted so far
// (including ones accepted earlier in the same pass). Result sorted by time.
std::vector<Detection> mfa(const std::vector<std::vector<Detection>>& per_window,
                           double horizon);

struct SegmentRate {
    double begin = 0.0;   // segment is (begin, end]
    double end = 0.0;
    std::size_t events = 0;
    double rate = 0.0;
};

// Empirical rate per segment between consecutive change points (plus the
// boundaries 0 and T).
std::vector<SegmentRate> estimate_rates(const EventSeries& series,
                                        const std::vector<double>& change_points);

StepProcess rate_step(const std::vector<SegmentRate>& rates);

// Whether `point` lies in the h-neighborhood (estimate - h, estimate + h)
// ∩ (h, T - h] of an estimate; the scoring rule for simulation studies.
bool neighborhood_contains(double estimate, double window, double horizon,
                           double point);

struct ChangePointReport {
    TestResult test;
    std::vector<std::vector<Detection>> per_window;  // aligned with test.windows
    std::vector<Detection> accepted;                 // mfa output, sorted by time
    std::vector<SegmentRate> rates;

    std::string to_json() const;
};

// Full pipeline: run the test; on rejection run the single filter algorithm
// per window and combine; estimate segment rates from the accepted points.
ChangePointReport detect_change_points(const EventSeries& series,
                                       const std::vector<double>& windows,
                                       const LimitCalibration& calibration);

} // namespace mft
