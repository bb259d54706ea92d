#include "mft/change_points.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "mft/counting.hpp"
#include "mft/filtered_derivative.hpp"

namespace mft {

std::vector<Detection> sfa(const StepProcess& r, double h, double threshold) {
    if (!(h > 0.0)) throw std::invalid_argument("sfa: window must be positive");

    // hard cap: accepted points are pairwise at least h apart inside a
    // region of length hi - lo, so no more than ceil((hi - lo) / h) fit
    const double span = r.hi() - r.lo();
    const std::size_t cap = static_cast<std::size_t>(
        std::max(1.0, std::ceil(span / h - 1e-12)));

    std::vector<Detection> detections;
    std::vector<std::pair<double, double>> excluded;
    while (true) {
        const auto m = r.max_excluding(excluded);
        if (!m || !(m->value > threshold)) break;
        Detection d;
        d.at = m->at;
        d.window = h;
        d.height = m->value;
        d.order = static_cast<int>(detections.size());
        detections.push_back(d);
        excluded.emplace_back(d.at - h, d.at + h);
        if (detections.size() >= cap) break;
    }
    return detections;
}

std::vector<Detection> mfa(const std::vector<std::vector<Detection>>& per_window,
                           double horizon) {
    // windows ascending; within one window keep detection order, and accept
    // an estimate only if its neighborhood holds no already accepted point
    for (std::size_t j = 1; j < per_window.size(); ++j) {
        if (!per_window[j].empty() && !per_window[j - 1].empty() &&
            per_window[j].front().window < per_window[j - 1].front().window)
            throw std::invalid_argument("mfa: window lists must come in ascending order");
    }

    std::vector<Detection> accepted;
    for (const auto& detections : per_window) {
        for (const Detection& d : detections) {
            bool taken = false;
            for (const Detection& a : accepted) {
                if (neighborhood_contains(d.at, d.window, horizon, a.at)) {
                    taken = true;
                    break;
                }
            }
            if (!taken) accepted.push_back(d);
        }
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const Detection& x, const Detection& y) { return x.at < y.at; });
    return accepted;
}

bool neighborhood_contains(double estimate, double window, double horizon,
                           double point) {
    if (!(point > estimate - window && point < estimate + window)) return false;
    return point > window && point <= horizon - window;
}

std::vector<SegmentRate> estimate_rates(const EventSeries& series,
                                        const std::vector<double>& change_points) {
    for (std::size_t i = 0; i < change_points.size(); ++i) {
        const double c = change_points[i];
        if (!(c > 0.0 && c < series.horizon()))
            throw std::invalid_argument("estimate_rates: change point outside (0, T)");
        if (i > 0 && !(c > change_points[i - 1]))
            throw std::invalid_argument("estimate_rates: change points not sorted");
    }
    std::vector<SegmentRate> rates;
    for (std::size_t s = 0; s <= change_points.size(); ++s) {
        SegmentRate r;
        r.begin = s == 0 ? 0.0 : change_points[s - 1];
        r.end = s == change_points.size() ? series.horizon() : change_points[s];
        r.events = count(series, r.begin, r.end);
        r.rate = static_cast<double>(r.events) / (r.end - r.begin);
        rates.push_back(r);
    }
    return rates;
}

StepProcess rate_step(const std::vector<SegmentRate>& rates) {
    if (rates.empty()) throw std::invalid_argument("rate_step: no segments");
    std::vector<double> breaks;
    std::vector<double> values;
    for (std::size_t s = 0; s < rates.size(); ++s) {
        if (s > 0) breaks.push_back(rates[s].begin);
        values.push_back(rates[s].rate);
    }
    return StepProcess(rates.front().begin, rates.back().end, std::move(breaks),
                       std::move(values));
}

ChangePointReport detect_change_points(const EventSeries& series,
                                       const std::vector<double>& windows,
                                       const LimitCalibration& calibration) {
    ChangePointReport report;
    report.test = run_test(series, windows, calibration);

    if (report.test.reject) {
        for (const auto& wr : report.test.windows) {
            const WindowCalibration& wc = calibration.for_window(wr.h);
            const StepProcess r =
                r_process(g_process(series, wr.h), wc.mean, std::sqrt(wc.var));
            report.per_window.push_back(sfa(r, wr.h, calibration.threshold));
        }
        std::vector<double> cps;
        for (const Detection& d : mfa(report.per_window, series.horizon())) {
            report.accepted.push_back(d);
            cps.push_back(d.at);
        }
        report.rates = estimate_rates(series, cps);
    } else {
        report.per_window.assign(report.test.windows.size(), {});
        report.rates = estimate_rates(series, {});
    }
    return report;
}

std::string ChangePointReport::to_json() const {
    nlohmann::json j = nlohmann::json::parse(test.to_json());
    j["kind"] = "change_point_report";
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t k = 0; k < per_window.size(); ++k) {
        nlohmann::json dets = nlohmann::json::array();
        for (const Detection& d : per_window[k])
            dets.push_back({{"at", d.at}, {"height", d.height}, {"order", d.order}});
        per.push_back({{"h", test.windows[k].h}, {"detections", dets}});
    }
    j["per_window"] = per;
    nlohmann::json acc = nlohmann::json::array();
    for (const Detection& d : accepted)
        acc.push_back({{"at", d.at}, {"window", d.window}, {"order", d.order}});
    j["accepted"] = acc;
    nlohmann::json rj = nlohmann::json::array();
    for (const SegmentRate& r : rates)
        rj.push_back({{"begin", r.begin}, {"end", r.end}, {"events", r.events},
                      {"rate", r.rate}});
    j["rates"] = rj;
    return j.dump(2) + "\n";
}

} // namespace mft
