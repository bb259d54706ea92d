#include "mft/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mft {

namespace {

// index of the last event <= x, or -1
std::ptrdiff_t last_at_or_before(const std::vector<double>& times, double x) {
    return std::upper_bound(times.begin(), times.end(), x) - times.begin() - 1;
}

void check_interval(const EventSeries& series, double a, double b) {
    if (!(a <= b))
        throw std::invalid_argument("count: interval with a > b");
    if (a < 0.0 || b > series.horizon())
        throw std::out_of_range("count: interval (" + std::to_string(a) + ", " +
                                std::to_string(b) + "] outside [0, T]");
}

struct OneSide {
    std::size_t n = 0;      // events in the window
    double mu = 0.0;
    double var = 0.0;
    std::size_t k = 0;      // complete life times in the window
};

OneSide side_stats(const std::vector<double>& times, double a, double b) {
    OneSide r;
    const std::ptrdiff_t la = last_at_or_before(times, a);
    const std::ptrdiff_t lb = last_at_or_before(times, b);
    r.n = static_cast<std::size_t>(lb - la);
    if (lb - la >= 2) {
        // life times between consecutive events inside (a, b]
        double sum = 0.0;
        for (std::ptrdiff_t j = la + 2; j <= lb; ++j) sum += times[j] - times[j - 1];
        r.k = static_cast<std::size_t>(lb - la - 1);
        r.mu = sum / static_cast<double>(r.k);
        if (r.k >= 2) {
            double ss = 0.0;
            for (std::ptrdiff_t j = la + 2; j <= lb; ++j) {
                const double d = (times[j] - times[j - 1]) - r.mu;
                ss += d * d;
            }
            r.var = ss / static_cast<double>(r.k - 1);
        }
    }
    return r;
}

} // namespace

std::size_t count(const EventSeries& series, double a, double b) {
    check_interval(series, a, b);
    const auto& times = series.times();
    return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), b) -
                                    std::upper_bound(times.begin(), times.end(), a));
}

std::vector<double> window_lifetimes(const EventSeries& series, double t, double h,
                                     Side side) {
    if (!(h > 0.0)) throw std::invalid_argument("window_lifetimes: h must be positive");
    const double a = side == Side::left ? t - h : t;
    const double b = side == Side::left ? t : t + h;
    check_interval(series, a, b);

    const auto& times = series.times();
    const std::ptrdiff_t la = last_at_or_before(times, a);
    const std::ptrdiff_t lb = last_at_or_before(times, b);
    std::vector<double> gaps;
    for (std::ptrdiff_t j = la + 2; j <= lb; ++j) gaps.push_back(times[j] - times[j - 1]);
    return gaps;
}

WindowStats window_stats(const EventSeries& series, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("window_stats: h must be positive");
    check_interval(series, t - h, t + h);

    const auto& times = series.times();
    const OneSide le = side_stats(times, t - h, t);
    const OneSide ri = side_stats(times, t, t + h);

    WindowStats w;
    w.n_left = le.n;
    w.n_right = ri.n;
    w.mu_left = le.mu;
    w.mu_right = ri.mu;
    w.var_left = le.var;
    w.var_right = ri.var;
    // zero unless each window holds at least two complete life times
    if (le.k >= 2 && ri.k >= 2)
        w.s_hat_sq = (ri.var / (ri.mu * ri.mu * ri.mu) +
                      le.var / (le.mu * le.mu * le.mu)) * h;
    return w;
}

} // namespace mft
