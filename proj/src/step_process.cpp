#include "mft/step_process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mft {

StepProcess::StepProcess(double lo, double hi, std::vector<double> breakpoints,
                         std::vector<double> values)
    : lo_(lo), hi_(hi), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (!std::isfinite(lo_) || !std::isfinite(hi_) || !(lo_ <= hi_))
        throw std::invalid_argument("StepProcess: bad domain");
    if (values_.size() != breakpoints_.size() + 1)
        throw std::invalid_argument("StepProcess: need one value more than breakpoints");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        const double b = breakpoints_[i];
        if (!(b > lo_ && b < hi_))
            throw std::invalid_argument("StepProcess: breakpoint outside the open domain");
        if (i > 0 && !(b > breakpoints_[i - 1]))
            throw std::invalid_argument("StepProcess: breakpoints not strictly increasing");
    }
}

double StepProcess::operator()(double t) const {
    if (!(t >= lo_ && t <= hi_))
        throw std::out_of_range("StepProcess: evaluation outside the domain");
    // number of breakpoints <= t selects the segment (right continuity)
    const std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
        breakpoints_.begin());
    return values_[idx];
}

StepProcess::Extremum StepProcess::max() const {
    Extremum best{values_[0], lo_};
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i] > best.value) best = {values_[i], breakpoints_[i - 1]};
    return best;
}

StepProcess::Extremum StepProcess::max_abs() const {
    Extremum best{std::fabs(values_[0]), lo_};
    for (std::size_t i = 1; i < values_.size(); ++i) {
        const double v = std::fabs(values_[i]);
        if (v > best.value) best = {v, breakpoints_[i - 1]};
    }
    return best;
}

std::optional<StepProcess::Extremum> StepProcess::max_excluding(
    const std::vector<std::pair<double, double>>& excluded) const {
    // merge the open intervals; touching intervals stay separate because the
    // shared endpoint itself is not excluded
    std::vector<std::pair<double, double>> open;
    for (const auto& e : excluded)
        if (e.second > e.first) open.push_back(e);
    std::sort(open.begin(), open.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& e : open) {
        if (!merged.empty() && e.first < merged.back().second)
            merged.back().second = std::max(merged.back().second, e.second);
        else
            merged.push_back(e);
    }

    // Segments and merged intervals are both sorted: one joint sweep. After
    // merging, consecutive intervals do not overlap, so the earliest free
    // point of a segment needs at most one jump to an interval end.
    std::optional<Extremum> best;
    const std::size_t n = values_.size();
    std::size_t mi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double seg_lo = i == 0 ? lo_ : breakpoints_[i - 1];
        const double seg_hi = i + 1 == n ? hi_ : breakpoints_[i];
        double p = seg_lo;
        while (mi < merged.size() && merged[mi].second <= p) ++mi;
        if (mi < merged.size() && merged[mi].first < p && p < merged[mi].second)
            p = merged[mi].second;
        // segment i covers [seg_lo, seg_hi), the final one [seg_lo, hi]
        const bool inside = i + 1 == n ? (p <= seg_hi) : (p < seg_hi);
        if (!inside) continue;
        if (!best || values_[i] > best->value) best = Extremum{values_[i], p};
    }
    return best;
}

void StepProcess::write_csv(std::ostream& out, int precision) const {
    if (precision < 1 || precision > 17)
        throw std::invalid_argument("StepProcess: csv precision out of range");
    out << "t_start,t_end,value\n";
    char buf[128];
    const std::size_t n = values_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i == 0 ? lo_ : breakpoints_[i - 1];
        const double b = i + 1 == n ? hi_ : breakpoints_[i];
        std::snprintf(buf, sizeof(buf), "%.*g,%.*g,%.*g\n", precision, a, precision, b,
                      precision, values_[i]);
        out << buf;
    }
}

void StepProcess::save_csv(const std::string& path, int precision) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv file: " + path);
    write_csv(out, precision);
    if (!out.flush()) throw std::runtime_error("failed writing csv file: " + path);
}

} // namespace mft
