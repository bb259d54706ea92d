#include "mft/event_series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace mft {

namespace {

void validate(const std::vector<double>& times, double horizon) {
    if (!std::isfinite(horizon) || horizon <= 0.0)
        throw std::invalid_argument("EventSeries: horizon must be positive and finite");
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (!std::isfinite(t))
            throw std::invalid_argument("EventSeries: event " + std::to_string(i) +
                                        " is not finite");
        if (t <= 0.0)
            throw std::invalid_argument("EventSeries: event " + std::to_string(i) +
                                        " is not positive");
        if (i > 0 && t <= times[i - 1])
            throw std::invalid_argument("EventSeries: event " + std::to_string(i) +
                                        " is not after its predecessor");
        if (t > horizon)
            throw std::invalid_argument("EventSeries: event " + std::to_string(i) +
                                        " lies beyond the horizon");
    }
}

std::string format_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    return buf;
}

} // namespace

EventSeries::EventSeries(std::vector<double> times, double horizon) {
    validate(times, horizon);
    times_ = std::move(times);
    horizon_ = horizon;
}

EventSeries EventSeries::from_trusted(std::vector<double> times, double horizon) {
    EventSeries s;
    s.times_ = std::move(times);
    s.horizon_ = horizon;
    return s;
}

std::vector<double> EventSeries::lifetimes() const {
    std::vector<double> gaps(times_.size());
    for (std::size_t i = 0; i < times_.size(); ++i)
        gaps[i] = i == 0 ? times_[0] : times_[i] - times_[i - 1];
    return gaps;
}

EventSeries EventSeries::parse(std::istream& in, const std::string& name) {
    std::vector<double> times;
    double horizon = 0.0;
    bool have_horizon = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip trailing CR from files written on other platforms
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            std::size_t eq = line.find("T=", start);
            if (line_no == 1 && eq != std::string::npos) {
                std::size_t pos = 0;
                const std::string value = line.substr(eq + 2);
                try {
                    horizon = std::stod(value, &pos);
                } catch (const std::exception&) {
                    throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                                ": bad horizon value '" + value + "'");
                }
                have_horizon = true;
            }
            continue;  // other comment lines are ignored
        }
        std::size_t pos = 0;
        double t = 0.0;
        const std::string body = line.substr(start);
        try {
            t = std::stod(body, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos == std::string::npos || body.find_first_not_of(" \t", pos) != std::string::npos)
            throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                        ": not an event time: '" + body + "'");
        times.push_back(t);
    }

    if (!have_horizon) {
        if (times.empty())
            throw std::invalid_argument(name + ": empty series without a '# T=' header "
                                        "has no horizon");
        horizon = times.back();
    }
    try {
        return EventSeries(std::move(times), horizon);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(name + ": " + e.what());
    }
}

EventSeries EventSeries::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open event file: " + path);
    return parse(in, path);
}

void EventSeries::write(std::ostream& out) const {
    out << "# T=" << format_time(horizon_) << "\n";
    for (double t : times_) out << format_time(t) << "\n";
}

void EventSeries::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write event file: " + path);
    write(out);
    if (!out.flush()) throw std::runtime_error("failed writing event file: " + path);
}

} // namespace mft
