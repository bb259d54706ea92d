#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mft/event_series.hpp"

namespace mft {

// Comparison method: permutation test on the unnormalized count differences.
// Its statistic ignores the life-time variance structure, which is exactly
// why it misbehaves when the variance varies along the sequence; it is kept
// for side-by-side studies against the calibrated test.

struct BootstrapResult {
    double statistic = 0.0;
    double threshold = 0.0;
    double alpha = 0.0;
    int n_permutations = 0;
    bool reject = false;
};

// max over the windows and over t in (h, T-h] of |N_(t,t+h] - N_(t-h,t]|.
double count_statistic(const EventSeries& series, const std::vector<double>& windows);

// Random permutation of the whole life-time sequence (the gap from 0 to the
// first event included), events rebuilt as cumulative sums; the horizon is
// kept, so event count and total duration are preserved.
EventSeries permute_lifetimes(const EventSeries& series, std::mt19937_64& eng);

// Permutation test: reject when the observed statistic exceeds the empirical
// (1-alpha)-quantile of the permuted statistics.
BootstrapResult bootstrap_test(const EventSeries& series,
                               const std::vector<double>& windows, double alpha,
                               int n_permutations, std::uint64_t seed);

} // namespace mft
