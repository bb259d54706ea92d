#include "mft/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mft/rng.hpp"

namespace mft {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // radians
constexpr double kGridWobble = 0.8;                 // relative variance swing
constexpr std::size_t kMaxEvents = 100'000'000;

void check_gamma(const GammaParams& p, const char* what) {
    if (!(p.shape > 0.0) || !(p.rate > 0.0))
        throw std::invalid_argument(std::string(what) + ": gamma shape and rate must be positive");
}

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

} // namespace

LifetimeSchedule LifetimeSchedule::make_iid(GammaParams p) {
    LifetimeSchedule s;
    s.kind = Kind::iid;
    s.a = p;
    s.validate();
    return s;
}

LifetimeSchedule LifetimeSchedule::make_converging(GammaParams limit, double decay) {
    LifetimeSchedule s;
    s.kind = Kind::converging;
    s.a = limit;
    s.decay = decay;
    s.validate();
    return s;
}

LifetimeSchedule LifetimeSchedule::make_alternating(GammaParams a, GammaParams b, int grid) {
    LifetimeSchedule s;
    s.kind = Kind::alternating;
    s.a = a;
    s.b = b;
    s.grid = grid;
    s.validate();
    return s;
}

LifetimeSchedule LifetimeSchedule::make_grid_balanced(GammaParams p, int grid) {
    LifetimeSchedule s;
    s.kind = Kind::grid_balanced;
    s.a = p;
    s.grid = grid;
    s.validate();
    return s;
}

double LifetimeSchedule::mean() const { return a.mean(); }

void LifetimeSchedule::validate() const {
    check_gamma(a, "LifetimeSchedule");
    switch (kind) {
        case Kind::iid:
            break;
        case Kind::converging:
            if (decay < 0.0)
                throw std::invalid_argument("LifetimeSchedule: converging decay must be >= 0");
            break;
        case Kind::alternating:
            check_gamma(b, "LifetimeSchedule");
            if (grid < 2 || grid % 2 != 0)
                throw std::invalid_argument("LifetimeSchedule: alternating grid must be even and >= 2");
            if (!close_rel(a.mean(), b.mean(), 1e-9))
                throw std::invalid_argument("LifetimeSchedule: alternating blocks must share the mean");
            break;
        case Kind::grid_balanced:
            if (grid < 2)
                throw std::invalid_argument("LifetimeSchedule: balancing grid must be >= 2");
            break;
    }
}

GammaParams LifetimeSchedule::params_for(std::size_t i) const {
    if (i == 0) throw std::invalid_argument("LifetimeSchedule: life-time index is 1-based");
    switch (kind) {
        case Kind::iid:
            return a;
        case Kind::converging: {
            // rate_i = rate_inf + decay / i with the mean pinned, so the
            // variance mu / rate_i decreases towards its limit
            const double rate = a.rate + decay / static_cast<double>(i);
            return GammaParams{a.mean() * rate, rate};
        }
        case Kind::alternating: {
            const std::size_t half = static_cast<std::size_t>(grid) / 2;
            return ((i - 1) / half) % 2 == 0 ? a : b;
        }
        case Kind::grid_balanced: {
            // deterministic variance profile: within every block of `grid`
            // life times a full cosine period, so the block mean variance is
            // exactly the base variance; the phase moves from block to block
            const std::size_t g = static_cast<std::size_t>(grid);
            const std::size_t j = (i - 1) % g;
            const std::size_t block = (i - 1) / g;
            const double phase = static_cast<double>(block) * kGoldenAngle;
            const double v = a.variance() *
                (1.0 + kGridWobble * std::cos(2.0 * std::numbers::pi *
                                              static_cast<double>(j) / static_cast<double>(g) +
                                              phase));
            const double mu = a.mean();
            return GammaParams{mu * mu / v, mu / v};
        }
    }
    throw std::logic_error("LifetimeSchedule: unknown kind");
}

EventSeries simulate_rpvv(const LifetimeSchedule& schedule, double horizon,
                          std::uint64_t seed) {
    schedule.validate();
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("simulate_rpvv: horizon must be positive and finite");

    std::mt19937_64 eng = substream(seed, 0);
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(std::min(
        1.0e7, horizon / schedule.mean() * 1.25 + 64.0)));

    double t = 0.0;
    for (std::size_t i = 1;; ++i) {
        const GammaParams p = schedule.params_for(i);
        std::gamma_distribution<double> gamma(p.shape, 1.0 / p.rate);
        t += gamma(eng);
        if (t > horizon) break;
        times.push_back(t);
        if (times.size() > kMaxEvents)
            throw std::runtime_error("simulate_rpvv: more than 1e8 events; horizon/rate too large");
    }
    return EventSeries::from_trusted(std::move(times), horizon);
}

void ChangePointModel::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("ChangePointModel: horizon must be positive and finite");
    if (segments.size() != change_points.size() + 1)
        throw std::invalid_argument("ChangePointModel: need one segment more than change points");
    for (std::size_t i = 0; i < change_points.size(); ++i) {
        const double c = change_points[i];
        if (!(c > 0.0 && c < horizon))
            throw std::invalid_argument("ChangePointModel: change point outside (0, T)");
        if (i > 0 && !(c > change_points[i - 1]))
            throw std::invalid_argument("ChangePointModel: change points not strictly increasing");
    }
    for (const auto& s : segments) s.validate();
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (close_rel(segments[i].mean(), segments[i + 1].mean(), 1e-9))
            throw std::invalid_argument(
                "ChangePointModel: adjacent segments must have different means");
    }
}

EventSeries simulate_change_points(const ChangePointModel& model, std::uint64_t seed) {
    model.validate();
    std::vector<double> times;
    for (std::size_t k = 0; k < model.segments.size(); ++k) {
        const double begin = k == 0 ? 0.0 : model.change_points[k - 1];
        const double end = k == model.change_points.size() ? model.horizon
                                                           : model.change_points[k];
        // the segment's process runs from 0; keep its events in (begin, end]
        const EventSeries full =
            simulate_rpvv(model.segments[k], end, substream_key(seed, k));
        const auto& ft = full.times();
        auto first = std::upper_bound(ft.begin(), ft.end(), begin);
        auto last = std::upper_bound(ft.begin(), ft.end(), end);
        times.insert(times.end(), first, last);
    }
    return EventSeries::from_trusted(std::move(times), model.horizon);
}

void RandomCpModel::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("RandomCpModel: horizon must be positive and finite");
    if (!(shape > 0.0))
        throw std::invalid_argument("RandomCpModel: shape must be positive");
    if (rates.size() < 2)
        throw std::invalid_argument("RandomCpModel: need a base process and an alternative");
    for (double r : rates)
        if (!(r > 0.0)) throw std::invalid_argument("RandomCpModel: rates must be positive");
    for (std::size_t j = 1; j < rates.size(); ++j)
        if (close_rel(rates[j], rates[0], 1e-9))
            throw std::invalid_argument(
                "RandomCpModel: alternative rates must differ from the base rate");
    if (!(gap_min >= 0.0) || !(gap_max >= gap_min) || !(gap_max > 0.0))
        throw std::invalid_argument("RandomCpModel: need 0 <= gap_min <= gap_max, gap_max > 0");
}

RandomCpDraw simulate_random_cp_model(const RandomCpModel& model, std::uint64_t seed) {
    model.validate();

    // change point locations: cumulative uniform spacings on (gap_min, gap_max]
    std::vector<double> cps;
    {
        std::mt19937_64 eng = substream(seed, 1'000'000);
        std::uniform_real_distribution<double> unif(0.0, model.gap_max - model.gap_min);
        double t = 0.0;
        while (true) {
            // gap_max - draw maps [0, gap_max - gap_min) onto (gap_min, gap_max]
            t += model.gap_max - unif(eng);
            if (!(t < model.horizon)) break;
            cps.push_back(t);
        }
    }

    // which process serves each segment
    std::vector<std::size_t> source(cps.size() + 1);
    {
        std::mt19937_64 eng = substream(seed, 1'000'001);
        std::uniform_int_distribution<std::size_t> pick(1, model.rates.size() - 1);
        for (std::size_t s = 0; s < source.size(); ++s)
            source[s] = s % 2 == 0 ? 0 : pick(eng);
    }

    // one full realization per process, segments are restrictions
    std::vector<EventSeries> procs;
    procs.reserve(model.rates.size());
    for (std::size_t j = 0; j < model.rates.size(); ++j)
        procs.push_back(simulate_rpvv(
            LifetimeSchedule::make_iid(GammaParams{model.shape, model.rates[j]}),
            model.horizon, substream_key(seed, j)));

    std::vector<double> times;
    for (std::size_t s = 0; s < source.size(); ++s) {
        const double begin = s == 0 ? 0.0 : cps[s - 1];
        const double end = s == cps.size() ? model.horizon : cps[s];
        const auto& ft = procs[source[s]].times();
        auto first = std::upper_bound(ft.begin(), ft.end(), begin);
        auto last = std::upper_bound(ft.begin(), ft.end(), end);
        times.insert(times.end(), first, last);
    }

    RandomCpDraw draw{EventSeries::from_trusted(std::move(times), model.horizon),
                      std::move(cps), std::move(source)};
    return draw;
}

} // namespace mft
