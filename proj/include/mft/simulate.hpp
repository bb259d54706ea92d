#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mft/event_series.hpp"

namespace mft {

struct GammaParams {
    double shape = 1.0;
    double rate = 1.0;

    double mean() const { return shape / rate; }
    double variance() const { return shape / (rate * rate); }
};

// Distribution plan for an independent life-time sequence with constant mean
// and a variance profile that may change along the sequence. Life time i
// (1-based) is Gamma(shape_i, rate_i) with shape_i / rate_i identical for
// all i.
struct LifetimeSchedule {
    enum class Kind { iid, converging, alternating, grid_balanced };

    Kind kind = Kind::iid;
    GammaParams a;       // iid/converging/grid_balanced base; alternating: first block
    GammaParams b;       // alternating: second block
    int grid = 0;        // g: alternating switches every g/2 draws; grid_balanced
                         // balances the mean variance over blocks of g
    double decay = 0.0;  // converging: rate_i = a.rate + decay / i

    static LifetimeSchedule make_iid(GammaParams p);
    static LifetimeSchedule make_converging(GammaParams limit, double decay);
    static LifetimeSchedule make_alternating(GammaParams a, GammaParams b, int grid);
    static LifetimeSchedule make_grid_balanced(GammaParams p, int grid);

    double mean() const;  // the common life-time mean
    GammaParams params_for(std::size_t i) const;  // i is 1-based
    void validate() const;
};

// One realization on (0, horizon]: cumulative sums of independent life times
// drawn from the schedule, truncated at the horizon.
EventSeries simulate_rpvv(const LifetimeSchedule& schedule, double horizon,
                          std::uint64_t seed);

// Rate change points: segment k carries its own schedule. Each segment's
// process is simulated from time 0 with an independent stream and restricted
// to (c_k, c_{k+1}], so a boundary behaves like a window onto a process that
// has been running, not like a restart.
struct ChangePointModel {
    double horizon = 0.0;
    std::vector<double> change_points;        // strictly increasing, in (0, horizon)
    std::vector<LifetimeSchedule> segments;   // change_points.size() + 1 entries

    void validate() const;
};

EventSeries simulate_change_points(const ChangePointModel& model, std::uint64_t seed);

// Model with change points at random positions: change point spacings are
// uniform on (gap_min, gap_max] (a degenerate spacing gap_min == gap_max is
// allowed); the segment after an odd change point uses one of processes
// 2..4 picked uniformly, the segment after an even change point returns to
// process 1. All four processes run from time 0 and segments are
// restrictions, as in ChangePointModel.
struct RandomCpModel {
    double horizon = 700.0;
    double shape = 2.0;
    std::vector<double> rates = {28.0, 24.0, 20.0, 18.0};
    double gap_min = 0.0;
    double gap_max = 100.0;

    void validate() const;
};

struct RandomCpDraw {
    EventSeries events;
    std::vector<double> change_points;
    std::vector<std::size_t> segment_process;  // index into rates, one per segment
};

RandomCpDraw simulate_random_cp_model(const RandomCpModel& model, std::uint64_t seed);

} // namespace mft
