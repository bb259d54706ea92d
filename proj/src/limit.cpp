#include "mft/limit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mft/rng.hpp"

namespace mft {

namespace {

constexpr std::size_t kMaxPathPoints = 2'000'000;

bool window_matches(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max({std::fabs(a), std::fabs(b), 1.0});
}

std::vector<double> canonical_windows(std::vector<double> windows) {
    if (windows.empty())
        throw std::invalid_argument("calibrate: need at least one window");
    std::sort(windows.begin(), windows.end());
    windows.erase(std::unique(windows.begin(), windows.end()), windows.end());
    return windows;
}

double default_grid_step(double horizon, const std::vector<double>& windows) {
    const double requested = windows.front() / 50.0;
    const double floor_step = horizon / static_cast<double>(kMaxPathPoints);
    return std::max(requested, floor_step);
}

std::size_t grid_points(double horizon, double step, const char* what) {
    const double ratio = horizon / step;
    if (!(ratio <= static_cast<double>(kMaxPathPoints) * 1.01))
        throw std::invalid_argument(std::string(what) +
                                    ": grid step yields more than 2e6 points");
    return static_cast<std::size_t>(std::max<long long>(1, std::llround(ratio)));
}

// max_k |W[k+m] - 2 W[k] + W[k-m]| / sqrt(2 m step) over the grid
double max_abs_limit(const std::vector<double>& w, std::size_t m, double step) {
    const std::size_t K = w.size() - 1;
    const double norm = 1.0 / std::sqrt(2.0 * static_cast<double>(m) * step);
    double best = 0.0;
    for (std::size_t k = m; k + m <= K; ++k) {
        const double v = std::fabs(w[k + m] - 2.0 * w[k] + w[k - m]);
        if (v > best) best = v;
    }
    return best * norm;
}

} // namespace

BrownianPath simulate_brownian_path(double horizon, double grid_step,
                                    std::mt19937_64& eng) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("simulate_brownian_path: horizon must be positive");
    if (!(grid_step > 0.0) || !std::isfinite(grid_step))
        throw std::invalid_argument("simulate_brownian_path: grid step must be positive");

    const std::size_t K = grid_points(horizon, grid_step, "simulate_brownian_path");

    BrownianPath path;
    path.step = horizon / static_cast<double>(K);
    path.w.resize(K + 1);
    path.w[0] = 0.0;
    std::normal_distribution<double> normal(0.0, std::sqrt(path.step));
    for (std::size_t k = 1; k <= K; ++k) path.w[k] = path.w[k - 1] + normal(eng);
    return path;
}

double limit_autocovariance(double h, double v) {
    if (!(h > 0.0)) throw std::invalid_argument("limit_autocovariance: h must be positive");
    const double av = std::fabs(v);
    if (av <= h) return 1.0 - 1.5 * av / h;
    if (av <= 2.0 * h) return -1.0 + av / (2.0 * h);
    return 0.0;
}

std::vector<double> limit_process_on_grid(const BrownianPath& path, double h) {
    const std::size_t K = path.w.size() - 1;
    const std::size_t m = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(h / path.step)));
    if (2 * m > K)
        throw std::invalid_argument("limit_process_on_grid: window exceeds half the horizon");
    const double norm = 1.0 / std::sqrt(2.0 * static_cast<double>(m) * path.step);
    std::vector<double> values;
    values.reserve(K - 2 * m + 1);
    for (std::size_t k = m; k + m <= K; ++k)
        values.push_back((path.w[k + m] - 2.0 * path.w[k] + path.w[k - m]) * norm);
    return values;
}

LimitCalibration calibrate(double horizon, std::vector<double> windows, double alpha,
                           int n_sims, double grid_step, std::uint64_t seed) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("calibrate: horizon must be positive and finite");
    windows = canonical_windows(std::move(windows));
    for (double h : windows)
        if (!(h > 0.0) || !(h <= horizon / 2.0))
            throw std::invalid_argument("calibrate: windows must lie in (0, T/2]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("calibrate: alpha must lie in (0, 1)");
    if (n_sims < 2) throw std::invalid_argument("calibrate: need at least two draws");

    LimitCalibration cal;
    cal.horizon = horizon;
    cal.windows = windows;
    cal.alpha = alpha;
    cal.n_sims = n_sims;
    cal.grid_step = grid_step;
    cal.seed = seed;

    const double step = grid_step > 0.0 ? grid_step : default_grid_step(horizon, windows);
    const std::size_t K = grid_points(horizon, step, "calibrate");
    const double step_used = horizon / static_cast<double>(K);
    cal.grid_step_used = step_used;

    std::vector<std::size_t> ms(windows.size());
    for (std::size_t j = 0; j < windows.size(); ++j) {
        ms[j] = static_cast<std::size_t>(
            std::max<long long>(1, std::llround(windows[j] / step_used)));
        if (2 * ms[j] > K)
            throw std::invalid_argument("calibrate: window exceeds half the horizon on the grid");
    }

    // per-draw maxima of |L| for every window; draw i uses substream i so the
    // result does not depend on evaluation order
    std::vector<std::vector<double>> maxima(windows.size(),
                                            std::vector<double>(n_sims));
    std::vector<double> w(K + 1);
    const double inc_sd = std::sqrt(step_used);
    for (int i = 0; i < n_sims; ++i) {
        std::mt19937_64 eng = substream(seed, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> normal(0.0, inc_sd);
        w[0] = 0.0;
        for (std::size_t k = 1; k <= K; ++k) w[k] = w[k - 1] + normal(eng);
        for (std::size_t j = 0; j < windows.size(); ++j)
            maxima[j][i] = max_abs_limit(w, ms[j], step_used);
    }

    cal.per_window.resize(windows.size());
    for (std::size_t j = 0; j < windows.size(); ++j) {
        double mean = 0.0;
        for (double v : maxima[j]) mean += v;
        mean /= static_cast<double>(n_sims);
        double var = 0.0;
        for (double v : maxima[j]) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n_sims - 1);
        if (!(var > 0.0))
            throw std::runtime_error("calibrate: degenerate window maxima (zero variance)");
        cal.per_window[j] = WindowCalibration{
            windows[j], static_cast<double>(ms[j]) * step_used, mean, var};
    }

    // standardized across-window maxima; Q is the ceil((1-alpha) n)-th order
    // statistic, i.e. the right-continuous empirical quantile
    std::vector<double> mstar(n_sims);
    for (int i = 0; i < n_sims; ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < windows.size(); ++j) {
            const double z = (maxima[j][i] - cal.per_window[j].mean) /
                             std::sqrt(cal.per_window[j].var);
            m = std::max(m, z);
        }
        mstar[i] = m;
    }
    std::sort(mstar.begin(), mstar.end());
    const int k = static_cast<int>(
        std::ceil((1.0 - alpha) * static_cast<double>(n_sims) - 1e-12));
    cal.threshold = mstar[std::max(k, 1) - 1];
    return cal;
}

bool LimitCalibration::has_window(double h) const {
    for (const auto& w : per_window)
        if (window_matches(w.h, h)) return true;
    return false;
}

const WindowCalibration& LimitCalibration::for_window(double h) const {
    for (const auto& w : per_window)
        if (window_matches(w.h, h)) return w;
    throw std::out_of_range("calibration does not cover window h=" + std::to_string(h));
}

std::string LimitCalibration::cache_key() const {
    char buf[64];
    std::string canon;
    auto add = [&](const char* name, double v) {
        std::snprintf(buf, sizeof(buf), "%s=%.17g;", name, v);
        canon += buf;
    };
    add("T", horizon);
    for (double h : windows) add("h", h);
    add("alpha", alpha);
    add("n", static_cast<double>(n_sims));
    add("step", grid_step);
    std::snprintf(buf, sizeof(buf), "seed=%llu;", static_cast<unsigned long long>(seed));
    canon += buf;

    std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : canon) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string LimitCalibration::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["kind"] = "calibration";
    j["horizon"] = horizon;
    j["windows"] = windows;
    j["alpha"] = alpha;
    j["n_sims"] = n_sims;
    j["grid_step"] = grid_step;
    j["grid_step_used"] = grid_step_used;
    j["seed"] = seed;
    j["threshold"] = threshold;
    j["key"] = cache_key();
    nlohmann::json per = nlohmann::json::array();
    for (const auto& w : per_window)
        per.push_back({{"h", w.h}, {"h_grid", w.h_grid}, {"mean", w.mean}, {"var", w.var}});
    j["per_window"] = per;
    return j.dump(2) + "\n";
}

LimitCalibration LimitCalibration::from_json(const std::string& text) {
    LimitCalibration cal;
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        if (!j.contains("schema") || j["schema"].get<int>() != 1)
            throw std::invalid_argument("calibration json: unsupported schema");
        cal.horizon = j.at("horizon").get<double>();
        cal.windows = j.at("windows").get<std::vector<double>>();
        cal.alpha = j.at("alpha").get<double>();
        cal.n_sims = j.at("n_sims").get<int>();
        cal.grid_step = j.at("grid_step").get<double>();
        cal.grid_step_used = j.at("grid_step_used").get<double>();
        cal.seed = j.at("seed").get<std::uint64_t>();
        cal.threshold = j.at("threshold").get<double>();
        for (const auto& e : j.at("per_window")) {
            cal.per_window.push_back(WindowCalibration{
                e.at("h").get<double>(), e.at("h_grid").get<double>(),
                e.at("mean").get<double>(), e.at("var").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("calibration json: ") + e.what());
    }
    if (cal.per_window.size() != cal.windows.size())
        throw std::invalid_argument("calibration json: window list mismatch");
    return cal;
}

void LimitCalibration::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write calibration file: " + path);
    out << to_json();
    if (!out.flush()) throw std::runtime_error("failed writing calibration file: " + path);
}

LimitCalibration LimitCalibration::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open calibration file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

} // namespace mft
