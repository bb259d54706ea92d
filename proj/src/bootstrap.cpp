#include "mft/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mft/rng.hpp"

namespace mft {

namespace {

// max_t |N_(t,t+h] - N_(t-h,t]| for one window, exact over all of (h, T-h].
// The difference changes by +1 at S_i - h and S_i + h and by -2 at S_i; the
// three shifted copies of the sorted event times are merged and all jumps at
// one location are applied before the value is read.
double max_abs_diff_one_window(const std::vector<double>& s, double horizon, double h) {
    const double lo = h, hi = horizon - h;
    const std::size_t n = s.size();

    // state at t = lo: counts over (0, h] and (h, 2h]
    const auto upper = [&s](double x) {
        return static_cast<std::ptrdiff_t>(
            std::upper_bound(s.begin(), s.end(), x) - s.begin());
    };
    std::ptrdiff_t d = upper(lo + h) - 2 * upper(lo);  // N(t+h) - 2 N(t) + N(t-h), t = lo
    double best = std::fabs(static_cast<double>(d));

    // merge positions S-h (delta +1), S (delta -2), S+h (delta +1)
    std::size_t ia = static_cast<std::size_t>(upper(lo + h));  // next S with S-h > lo
    std::size_t ib = static_cast<std::size_t>(upper(lo));
    std::size_t ic = 0;  // S + h > lo always (S > 0)
    constexpr double inf = std::numeric_limits<double>::infinity();
    while (true) {
        const double va = ia < n ? s[ia] - h : inf;
        const double vb = ib < n ? s[ib] : inf;
        const double vc = ic < n ? s[ic] + h : inf;
        const double v = std::min({va, vb, vc});
        if (v >= hi) break;
        // apply every jump at this location before evaluating
        while (ia < n && s[ia] - h == v) { ++d; ++ia; }
        while (ib < n && s[ib] == v) { d -= 2; ++ib; }
        while (ic < n && s[ic] + h == v) { ++d; ++ic; }
        const double a = std::fabs(static_cast<double>(d));
        if (a > best) best = a;
    }
    return best;
}

} // namespace

double count_statistic(const EventSeries& series, const std::vector<double>& windows) {
    if (windows.empty())
        throw std::invalid_argument("count_statistic: need at least one window");
    const double T = series.horizon();
    double best = 0.0;
    for (double h : windows) {
        if (!(h > 0.0) || !(h <= T / 2.0))
            throw std::invalid_argument("count_statistic: windows must lie in (0, T/2]");
        best = std::max(best, max_abs_diff_one_window(series.times(), T, h));
    }
    return best;
}

EventSeries permute_lifetimes(const EventSeries& series, std::mt19937_64& eng) {
    std::vector<double> gaps = series.lifetimes();
    std::shuffle(gaps.begin(), gaps.end(), eng);
    std::vector<double> times(gaps.size());
    double t = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        t += gaps[i];
        times[i] = t;
    }
    // the multiset of gaps is unchanged, so the final event matches the
    // original up to float roundoff; the horizon is kept as-is
    return EventSeries::from_trusted(std::move(times), series.horizon());
}

BootstrapResult bootstrap_test(const EventSeries& series,
                               const std::vector<double>& windows, double alpha,
                               int n_permutations, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("bootstrap_test: alpha must lie in (0, 1)");
    if (n_permutations < 1)
        throw std::invalid_argument("bootstrap_test: need at least one permutation");

    BootstrapResult result;
    result.alpha = alpha;
    result.n_permutations = n_permutations;
    result.statistic = count_statistic(series, windows);

    std::vector<double> stats(n_permutations);
    for (int b = 0; b < n_permutations; ++b) {
        std::mt19937_64 eng = substream(seed, static_cast<std::uint64_t>(b));
        stats[b] = count_statistic(permute_lifetimes(series, eng), windows);
    }
    std::sort(stats.begin(), stats.end());
    const int k = static_cast<int>(
        std::ceil((1.0 - alpha) * static_cast<double>(n_permutations) - 1e-12));
    result.threshold = stats[std::max(k, 1) - 1];
    result.reject = result.statistic > result.threshold;
    return result;
}

} // namespace mft
