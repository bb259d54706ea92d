#include "mft/filtered_derivative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mft {

namespace {

// Jump candidates of both window counts: every t where a window edge meets
// an event, i.e. {S_i - h, S_i, S_i + h}, restricted to the open analysis
// region. The three shifted copies of the (sorted) event times are merged.
std::vector<double> breakpoint_candidates(const std::vector<double>& s, double h,
                                          double lo, double hi) {
    std::vector<double> bp;
    bp.reserve(3 * s.size());
    std::size_t ia = 0, ib = 0, ic = 0;
    const std::size_t n = s.size();
    auto head = [&](std::size_t i, double shift) {
        return i < n ? s[i] + shift : std::numeric_limits<double>::infinity();
    };
    while (ia < n || ib < n || ic < n) {
        const double va = head(ia, -h), vb = head(ib, 0.0), vc = head(ic, h);
        double v = std::min({va, vb, vc});
        if (v == va) ++ia;
        else if (v == vb) ++ib;
        else ++ic;
        if (v > lo && v < hi && (bp.empty() || v > bp.back())) bp.push_back(v);
        if (v >= hi) break;
    }
    return bp;
}

struct SweepValue {
    // counts and life-time aggregates of both windows around t
    std::ptrdiff_t n_le, n_ri;
    double sum_le, sumsq_le, sum_ri, sumsq_ri;
    std::ptrdiff_t k_le, k_ri;
};

// Evaluates the windows at each query point (queries ascending) using
// prefix sums over the life times; O(n + #queries).
template <typename Emit>
void sweep(const std::vector<double>& s, double h, const std::vector<double>& queries,
           Emit&& emit) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.size());
    // prefix[i+1] = sum of life times up to event i; life time 0 runs from 0
    std::vector<double> pre(n + 1, 0.0), presq(n + 1, 0.0);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double gap = i == 0 ? s[0] : s[i] - s[i - 1];
        pre[i + 1] = pre[i] + gap;
        presq[i + 1] = presq[i] + gap * gap;
    }

    std::ptrdiff_t la = -1, lt = -1, lb = -1;  // last event index <= t-h / t / t+h
    for (const double t : queries) {
        while (la + 1 < n && s[la + 1] <= t - h) ++la;
        while (lt + 1 < n && s[lt + 1] <= t) ++lt;
        while (lb + 1 < n && s[lb + 1] <= t + h) ++lb;

        SweepValue v;
        v.n_le = lt - la;
        v.n_ri = lb - lt;
        v.k_le = std::max<std::ptrdiff_t>(v.n_le - 1, 0);
        v.k_ri = std::max<std::ptrdiff_t>(v.n_ri - 1, 0);
        // life times j with both endpoints in the window: j in [la+2, lt],
        // i.e. prefix range (la+1, lt]
        v.sum_le = v.k_le > 0 ? pre[lt + 1] - pre[la + 2] : 0.0;
        v.sumsq_le = v.k_le > 0 ? presq[lt + 1] - presq[la + 2] : 0.0;
        v.sum_ri = v.k_ri > 0 ? pre[lb + 1] - pre[lt + 2] : 0.0;
        v.sumsq_ri = v.k_ri > 0 ? presq[lb + 1] - presq[lt + 2] : 0.0;
        emit(v);
    }
}

void check_window(const EventSeries& series, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("filtered derivative: window must be positive");
    if (!(h <= series.horizon() / 2.0))
        throw std::invalid_argument("filtered derivative: window exceeds half the horizon");
}

// midpoints of the constant segments; the representative evaluation points
std::vector<double> segment_queries(const std::vector<double>& bp, double lo, double hi) {
    std::vector<double> q;
    q.reserve(bp.size() + 1);
    if (bp.empty()) {
        q.push_back(0.5 * (lo + hi));
        return q;
    }
    q.push_back(0.5 * (lo + bp.front()));
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) q.push_back(0.5 * (bp[i] + bp[i + 1]));
    q.push_back(0.5 * (bp.back() + hi));
    return q;
}

} // namespace

StepProcess g_process(const EventSeries& series, double h) {
    check_window(series, h);
    const double lo = h, hi = series.horizon() - h;
    const auto& s = series.times();

    std::vector<double> bp = breakpoint_candidates(s, h, lo, hi);
    std::vector<double> values;
    values.reserve(bp.size() + 1);

    sweep(s, h, segment_queries(bp, lo, hi), [&](const SweepValue& v) {
        double g = 0.0;
        if (v.k_le >= 2 && v.k_ri >= 2) {
            const double kl = static_cast<double>(v.k_le);
            const double kr = static_cast<double>(v.k_ri);
            const double mu_le = v.sum_le / kl;
            const double mu_ri = v.sum_ri / kr;
            const double var_le =
                std::max(0.0, (v.sumsq_le - v.sum_le * v.sum_le / kl) / (kl - 1.0));
            const double var_ri =
                std::max(0.0, (v.sumsq_ri - v.sum_ri * v.sum_ri / kr) / (kr - 1.0));
            const double s_sq = (var_ri / (mu_ri * mu_ri * mu_ri) +
                                 var_le / (mu_le * mu_le * mu_le)) * h;
            if (s_sq > 0.0)
                g = static_cast<double>(v.n_ri - v.n_le) / std::sqrt(s_sq);
        }
        values.push_back(g);
    });

    return StepProcess(lo, hi, std::move(bp), std::move(values));
}

StepProcess count_difference(const EventSeries& series, double h) {
    check_window(series, h);
    const double lo = h, hi = series.horizon() - h;
    const auto& s = series.times();

    std::vector<double> bp = breakpoint_candidates(s, h, lo, hi);
    std::vector<double> values;
    values.reserve(bp.size() + 1);
    sweep(s, h, segment_queries(bp, lo, hi), [&](const SweepValue& v) {
        values.push_back(static_cast<double>(v.n_ri - v.n_le));
    });
    return StepProcess(lo, hi, std::move(bp), std::move(values));
}

StepProcess r_process(const StepProcess& g, double mean, double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("r_process: sd must be positive");
    std::vector<double> values(g.values().size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = (std::fabs(g.values()[i]) - mean) / sd;
    return StepProcess(g.lo(), g.hi(), g.breakpoints(), std::move(values));
}

} // namespace mft
