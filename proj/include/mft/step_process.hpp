#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mft {

// A right-continuous piecewise-constant function on [lo, hi]. Jump locations
// lie strictly inside the interval; values has one entry more than
// breakpoints (value k applies on [breakpoint k-1, breakpoint k)).
class StepProcess {
public:
    StepProcess(double lo, double hi, std::vector<double> breakpoints,
                std::vector<double> values);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }

    // Evaluation at t in [lo, hi].
    double operator()(double t) const;

    struct Extremum {
        double value = 0.0;
        double at = 0.0;  // infimum of the maximizing set
    };

    Extremum max() const;
    Extremum max_abs() const;  // maximum of |value|

    // Maximum over the domain with the given open intervals removed. The
    // endpoints of an excluded interval stay available. Returns nullopt when
    // the exclusions cover the whole domain.
    std::optional<Extremum> max_excluding(
        const std::vector<std::pair<double, double>>& excluded) const;

    // CSV rows t_start,t_end,value, one per constant segment.
    void write_csv(std::ostream& out, int precision = 9) const;
    void save_csv(const std::string& path, int precision = 9) const;

private:
    double lo_;
    double hi_;
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

} // namespace mft
