#include <catch_amalgamated.hpp>

#include <cmath>

#include "mft/limit.hpp"
#include "mft/rng.hpp"

using namespace mft;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("analytic autocovariance has the triangular shape", "[limit]") {
    const double h = 8.0;
    CHECK(limit_autocovariance(h, 0.0) == 1.0);
    CHECK_THAT(limit_autocovariance(h, h / 2.0), WithinAbs(0.25, 1e-15));
    CHECK_THAT(limit_autocovariance(h, h), WithinAbs(-0.5, 1e-15));
    CHECK_THAT(limit_autocovariance(h, 1.5 * h), WithinAbs(-0.25, 1e-15));
    CHECK(limit_autocovariance(h, 2.0 * h) == 0.0);
    CHECK(limit_autocovariance(h, 3.0 * h) == 0.0);
    // symmetric in the lag
    CHECK(limit_autocovariance(h, -h) == limit_autocovariance(h, h));
    CHECK_THROWS_AS(limit_autocovariance(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("simulated limit process matches its covariance", "[limit]") {
    const double T = 60.0, h = 6.0, step = 0.1;
    const int draws = 4000;
    // L at t0 and t0 + h should correlate at about -1/2
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int i = 0; i < draws; ++i) {
        std::mt19937_64 eng = substream(17, i);
        const BrownianPath path = simulate_brownian_path(T, step, eng);
        const std::vector<double> l = limit_process_on_grid(path, h);
        // grid index of t0 = 24 inside [h, T-h]: l[k] corresponds to t = h + k*step
        const double x = l[180];              // t = 6 + 18 = 24
        const double y = l[180 + 60];         // t = 30 = 24 + h
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    const double n = draws;
    const double mx = sx / n, my = sy / n;
    const double vx = sxx / n - mx * mx, vy = syy / n - my * my;
    const double corr = (sxy / n - mx * my) / std::sqrt(vx * vy);
    CHECK_THAT(corr, WithinAbs(-0.5, 0.05));
    CHECK_THAT(vx, WithinAbs(1.0, 0.08));  // unit variance
    CHECK_THAT(mx, WithinAbs(0.0, 0.05));
}

TEST_CASE("brownian path snaps the grid and is seed-stable", "[limit]") {
    std::mt19937_64 eng = substream(3, 0);
    const BrownianPath p = simulate_brownian_path(10.0, 0.3, eng);
    // 10/0.3 is not integral: the step snaps so that K * step == horizon
    CHECK(p.w.size() >= 2);
    CHECK_THAT(p.horizon(), WithinRel(10.0, 1e-12));
    CHECK(p.w[0] == 0.0);

    std::mt19937_64 e1 = substream(3, 0), e2 = substream(3, 0);
    CHECK(simulate_brownian_path(10.0, 0.3, e1).w == simulate_brownian_path(10.0, 0.3, e2).w);
}

TEST_CASE("calibration is canonical in its window set", "[limit]") {
    const LimitCalibration a = calibrate(300.0, {50.0, 10.0, 10.0, 25.0}, 0.05, 500, 0.0, 9);
    const LimitCalibration b = calibrate(300.0, {10.0, 25.0, 50.0}, 0.05, 500, 0.0, 9);
    CHECK(a.threshold == b.threshold);
    CHECK(a.windows == b.windows);
    REQUIRE(a.per_window.size() == 3);
    CHECK(a.per_window[0].h == 10.0);
    CHECK(a.cache_key() == b.cache_key());

    // identical inputs reproduce bit-identically; another seed differs
    const LimitCalibration c = calibrate(300.0, {10.0, 25.0, 50.0}, 0.05, 500, 0.0, 9);
    CHECK(c.threshold == b.threshold);
    const LimitCalibration d = calibrate(300.0, {10.0, 25.0, 50.0}, 0.05, 500, 0.0, 10);
    CHECK(d.threshold != b.threshold);
    CHECK(d.cache_key() != b.cache_key());
}

TEST_CASE("threshold grows as alpha shrinks", "[limit]") {
    const std::vector<double> H = {20.0, 40.0};
    const LimitCalibration q10 = calibrate(400.0, H, 0.10, 600, 0.0, 4);
    const LimitCalibration q05 = calibrate(400.0, H, 0.05, 600, 0.0, 4);
    const LimitCalibration q01 = calibrate(400.0, H, 0.01, 600, 0.0, 4);
    CHECK(q10.threshold < q05.threshold);
    CHECK(q05.threshold < q01.threshold);

    // per-window statistics do not depend on alpha
    CHECK(q10.per_window[0].mean == q05.per_window[0].mean);
    CHECK(q10.per_window[1].var == q05.per_window[1].var);
}

TEST_CASE("calibration validates its inputs", "[limit]") {
    CHECK_THROWS_AS(calibrate(100.0, {}, 0.05, 100, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(calibrate(100.0, {60.0}, 0.05, 100, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(calibrate(100.0, {10.0}, 0.0, 100, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(calibrate(100.0, {10.0}, 1.0, 100, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(calibrate(100.0, {10.0}, 0.05, 1, 0.0, 1), std::invalid_argument);
    CHECK_NOTHROW(calibrate(100.0, {50.0}, 0.05, 64, 0.0, 1));  // h = T/2 allowed
}

TEST_CASE("calibration json round trip is lossless", "[limit]") {
    const LimitCalibration a = calibrate(250.0, {12.5, 25.0}, 0.05, 400, 0.0, 2);
    const LimitCalibration b = LimitCalibration::from_json(a.to_json());
    CHECK(b.horizon == a.horizon);
    CHECK(b.windows == a.windows);
    CHECK(b.alpha == a.alpha);
    CHECK(b.n_sims == a.n_sims);
    CHECK(b.grid_step == a.grid_step);
    CHECK(b.grid_step_used == a.grid_step_used);
    CHECK(b.seed == a.seed);
    CHECK(b.threshold == a.threshold);
    REQUIRE(b.per_window.size() == a.per_window.size());
    for (std::size_t i = 0; i < a.per_window.size(); ++i) {
        CHECK(b.per_window[i].h == a.per_window[i].h);
        CHECK(b.per_window[i].h_grid == a.per_window[i].h_grid);
        CHECK(b.per_window[i].mean == a.per_window[i].mean);
        CHECK(b.per_window[i].var == a.per_window[i].var);
    }
    CHECK(b.cache_key() == a.cache_key());

    CHECK(a.has_window(12.5));
    CHECK_FALSE(a.has_window(13.0));
    CHECK_THROWS_AS(a.for_window(13.0), std::out_of_range);
    CHECK(a.for_window(25.0).h == 25.0);

    CHECK_THROWS_AS(LimitCalibration::from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(LimitCalibration::from_json("not json"), std::invalid_argument);
}

TEST_CASE("per-window maxima statistics look right at scale", "[limit]") {
    // mean of max |L| grows with the number of independent 2h-blocks, so a
    // smaller window on the same horizon has the larger mean
    const LimitCalibration cal = calibrate(700.0, {10.0, 150.0}, 0.05, 800, 0.0, 8);
    CHECK(cal.per_window[0].mean > cal.per_window[1].mean);
    CHECK(cal.per_window[0].mean > 2.5);   // roughly 3.3 at T/h = 70
    CHECK(cal.per_window[0].mean < 4.0);
    CHECK(cal.per_window[1].mean > 1.5);   // roughly 2.2 at T/h ~ 4.7
    CHECK(cal.per_window[1].mean < 3.0);
    CHECK(cal.per_window[0].var > 0.0);
}
