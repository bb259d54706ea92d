#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace mft {

// An event stream observed on (0, T]: strictly increasing event times, all
// positive and no later than the observation horizon T.
class EventSeries {
public:
    // Validates times (finite, strictly increasing, inside (0, horizon]).
    EventSeries(std::vector<double> times, double horizon);

    // Skips validation; for internal callers that construct times which are
    // correct by construction (e.g. cumulative sums of positive life times).
    static EventSeries from_trusted(std::vector<double> times, double horizon);

    const std::vector<double>& times() const { return times_; }
    double horizon() const { return horizon_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

    // Life times between consecutive events; element 0 is the gap from 0 to
    // the first event.
    std::vector<double> lifetimes() const;

    // Text format: optional "# T=<horizon>" first line, then one event time
    // per line. Without the header the horizon defaults to the last event.
    static EventSeries load(const std::string& path);
    static EventSeries parse(std::istream& in, const std::string& name = "<stream>");
    void save(const std::string& path) const;
    void write(std::ostream& out) const;

private:
    EventSeries() = default;

    std::vector<double> times_;
    double horizon_ = 0.0;
};

} // namespace mft
