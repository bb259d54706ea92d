#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mft/counting.hpp"
#include "mft/rng.hpp"
#include "mft/simulate.hpp"
#include "support/oracle.hpp"

using namespace mft;

namespace {

EventSeries random_series(std::uint64_t seed, std::size_t n, double horizon) {
    std::mt19937_64 eng = substream(seed, 77);
    std::uniform_real_distribution<double> u(1e-6, horizon);
    std::vector<double> t(n);
    for (double& x : t) x = u(eng);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return EventSeries(std::move(t), horizon);
}

} // namespace

TEST_CASE("count matches the definition on hand examples", "[counting]") {
    const EventSeries s({1.0, 2.0, 3.0}, 10.0);
    CHECK(count(s, 0.0, 2.0) == 2);    // right-closed
    CHECK(count(s, 2.0, 2.0) == 0);    // empty interval
    CHECK(count(s, 0.5, 1.0) == 1);    // boundary inclusion of b
    CHECK(count(s, 1.0, 3.0) == 2);    // left-open
    CHECK(count(s, 0.0, 10.0) == 3);

    CHECK_THROWS_AS(count(s, 3.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(count(s, -0.5, 2.0), std::out_of_range);
    CHECK_THROWS_AS(count(s, 0.0, 10.5), std::out_of_range);
}

TEST_CASE("count agrees with a linear-scan oracle on random intervals", "[counting]") {
    const EventSeries s = random_series(1, 200, 50.0);
    std::mt19937_64 eng = substream(2, 0);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 300; ++i) {
        double a = u(eng), b = u(eng);
        if (a > b) std::swap(a, b);
        CHECK(count(s, a, b) == oracle::count(s, a, b));
    }
}

TEST_CASE("count is additive over adjacent intervals", "[counting]") {
    const EventSeries s = random_series(3, 150, 20.0);
    std::mt19937_64 eng = substream(4, 0);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        double x[3] = {u(eng), u(eng), u(eng)};
        std::sort(x, x + 3);
        CHECK(count(s, x[0], x[1]) + count(s, x[1], x[2]) == count(s, x[0], x[2]));
    }
}

TEST_CASE("window life times keep only fully contained pairs", "[counting]") {
    // left window (0.5, 2.5]: only the pair (1,2) lies inside
    const EventSeries a({1.0, 2.0, 3.0, 4.0}, 10.0);
    CHECK(window_lifetimes(a, 2.5, 2.0, Side::left) == std::vector<double>{1.0});

    // right window (1.5, 2.5] of a 0.5-periodic series: single pair (2, 2.5)
    const EventSeries b({0.5, 1.0, 1.5, 2.0, 2.5}, 5.0);
    CHECK(window_lifetimes(b, 1.5, 1.0, Side::right) == std::vector<double>{0.5});

    // zero or one event in the window: no pair, empty list
    const EventSeries c({1.0, 5.0}, 10.0);
    CHECK(window_lifetimes(c, 5.0, 2.0, Side::left).empty());
    CHECK(window_lifetimes(c, 5.0, 2.0, Side::right).empty());

    // the gap from 0 to the first event never qualifies
    const EventSeries d({1.0, 2.0}, 10.0);
    CHECK(window_lifetimes(d, 2.0, 2.0, Side::left) == std::vector<double>{1.0});
}

TEST_CASE("window life times match the pair-enumeration oracle", "[counting]") {
    const EventSeries s = random_series(5, 120, 30.0);
    std::mt19937_64 eng = substream(6, 0);
    std::uniform_real_distribution<double> ut(5.0, 25.0), uh(0.5, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double t = ut(eng);
        const double h = std::min(uh(eng), std::min(t, 30.0 - t));
        CHECK(window_lifetimes(s, t, h, Side::left) ==
              oracle::window_lifetimes(s, t - h, t));
        CHECK(window_lifetimes(s, t, h, Side::right) ==
              oracle::window_lifetimes(s, t, t + h));
    }
}

TEST_CASE("window stats apply the zero conventions and the pooled formula",
          "[counting]") {
    // construct life times with mean 1 and corrected variance 0.2 on both
    // sides: {0.8, 1.2, 1.2, 0.8} has mean 1, corrected variance 0.16/3... use
    // {1 - d, 1 + d} with d = sqrt(0.1): corrected variance = 2 d^2 / 1 = 0.2
    const double d = std::sqrt(0.1);
    const std::vector<double> times = {
        100.0, 101.0 - d, 102.0,                   // left pairs: 1 - d, 1 + d
        102.0 + 60.0, 163.0 - d, 164.0};           // right pairs at t = 150 + ...
    // left window (75, 150], right (150, 225] with h = 75
    const EventSeries s(times, 400.0);
    const WindowStats w = window_stats(s, 150.0, 75.0);
    CHECK(w.n_left == 3);
    CHECK(w.n_right == 3);
    CHECK_THAT(w.mu_left, Catch::Matchers::WithinRel(1.0, 1e-12));
    CHECK_THAT(w.mu_right, Catch::Matchers::WithinRel(1.0, 1e-12));
    CHECK_THAT(w.var_left, Catch::Matchers::WithinRel(0.2, 1e-12));
    CHECK_THAT(w.var_right, Catch::Matchers::WithinRel(0.2, 1e-12));
    CHECK_THAT(w.s_hat_sq, Catch::Matchers::WithinRel(30.0, 1e-12));  // (0.2+0.2)*75

    // one side short of two life times forces s_hat_sq to 0
    const EventSeries sparse({100.0, 101.0, 102.0, 200.0}, 400.0);
    const WindowStats ws = window_stats(sparse, 150.0, 75.0);
    CHECK(ws.s_hat_sq == 0.0);
    CHECK(ws.var_right == 0.0);
    CHECK(ws.mu_left > 0.0);

    const EventSeries empty_side({100.0, 101.0, 102.0}, 400.0);
    const WindowStats we = window_stats(empty_side, 150.0, 75.0);
    CHECK(we.mu_right == 0.0);
    CHECK(we.s_hat_sq == 0.0);
}

TEST_CASE("window stats equal direct recomputation from the life-time lists",
          "[counting]") {
    const EventSeries s = random_series(7, 400, 40.0);
    std::mt19937_64 eng = substream(8, 0);
    std::uniform_real_distribution<double> ut(8.0, 32.0);
    for (int i = 0; i < 50; ++i) {
        const double t = ut(eng), h = 8.0;
        const WindowStats w = window_stats(s, t, h);
        const auto le = oracle::window_lifetimes(s, t - h, t);
        const auto ri = oracle::window_lifetimes(s, t, t + h);
        CHECK(w.n_left == oracle::count(s, t - h, t));
        CHECK(w.n_right == oracle::count(s, t, t + h));
        CHECK_THAT(w.mu_left, Catch::Matchers::WithinAbs(oracle::mean(le), 1e-12));
        CHECK_THAT(w.var_left,
                   Catch::Matchers::WithinAbs(oracle::corrected_variance(le), 1e-12));
        CHECK_THAT(w.mu_right, Catch::Matchers::WithinAbs(oracle::mean(ri), 1e-12));
        CHECK_THAT(w.var_right,
                   Catch::Matchers::WithinAbs(oracle::corrected_variance(ri), 1e-12));
    }
}

TEST_CASE("s_hat_sq concentrates near its asymptotic value", "[counting]") {
    // Gamma(2, 24): mu = 1/12, sigma^2 = 1/288, so 2 h sigma^2 / mu^3 = 12 h
    const double h = 50.0;
    const auto schedule = LifetimeSchedule::make_iid(GammaParams{2.0, 24.0});
    double sum = 0.0;
    const int reps = 300;
    for (int r = 0; r < reps; ++r) {
        const EventSeries s = simulate_rpvv(schedule, 200.0, substream_key(11, r));
        sum += window_stats(s, 100.0, h).s_hat_sq;
    }
    const double mean_s_sq = sum / reps;
    CHECK_THAT(mean_s_sq, Catch::Matchers::WithinAbs(600.0, 30.0));  // within 5%
}
