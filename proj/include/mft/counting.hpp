#pragma once

#include <cstddef>
#include <vector>

#include "mft/event_series.hpp"

namespace mft {

enum class Side { left, right };

// Number of events in the half-open interval (a, b]. Requires
// 0 <= a <= b <= horizon.
std::size_t count(const EventSeries& series, double a, double b);

// Life times that lie completely inside the window (t-h, t] (left) or
// (t, t+h] (right), i.e. the gaps between consecutive events falling in the
// window. A life time qualifies only if both of its endpoints are events in
// the window, so the gap from 0 to the first event never qualifies.
std::vector<double> window_lifetimes(const EventSeries& series, double t, double h, Side side);

struct WindowStats {
    std::size_t n_left = 0;   // events in (t-h, t]
    std::size_t n_right = 0;  // events in (t, t+h]
    double mu_left = 0.0;     // life-time mean, 0 if the window has no life time
    double mu_right = 0.0;
    double var_left = 0.0;    // corrected sample variance, 0 with < 2 life times
    double var_right = 0.0;
    double s_hat_sq = 0.0;    // pooled variance estimate of the count difference
};

// Estimates for both windows around t. s_hat_sq follows
//   (var_right / mu_right^3 + var_left / mu_left^3) * h
// and is 0 unless each window contains at least two complete life times.
WindowStats window_stats(const EventSeries& series, double t, double h);

} // namespace mft
