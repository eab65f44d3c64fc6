#include "giant/schedule.hpp"

#include <cmath>
#include <string>

#include "giant/error.hpp"

namespace giant {

FrequencySchedule::FrequencySchedule(std::size_t n_atoms, double omega_ref_) : omega_ref(omega_ref_), segments(n_atoms) {}

double FrequencySchedule::atom_end(std::size_t atom) const {
    const auto& s = segments.at(atom);
    return s.empty() ? 0.0 : s.back().t_end;
}

void FrequencySchedule::hold(std::size_t atom, double duration, double omega) {
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("schedule: negative or non-finite duration");
    if (duration == 0.0) return;
    auto& s = segments.at(atom);
    const double t0 = atom_end(atom);
    if (!s.empty() && s.back().omega == omega) {
        s.back().t_end = t0 + duration;
        return;
    }
    s.push_back({t0, t0 + duration, omega});
}

void FrequencySchedule::hold_until(std::size_t atom, double t, double omega) {
    const double t0 = atom_end(atom);
    if (!(t > t0)) return;
    auto& s = segments.at(atom);
    if (!s.empty() && s.back().omega == omega) {
        s.back().t_end = t;
        return;
    }
    s.push_back({t0, t, omega});
}

void FrequencySchedule::hold_all(double duration, const std::vector<double>& omegas) {
    if (omegas.size() != segments.size()) throw ConfigError("schedule: frequency vector length mismatch");
    for (std::size_t a = 0; a < segments.size(); ++a) hold(a, duration, omegas[a]);
}

void FrequencySchedule::pad_to(double t, const std::vector<double>& idle) {
    for (std::size_t a = 0; a < segments.size(); ++a) {
        const double end = atom_end(a);
        if (t > end) hold_until(a, t, segments[a].empty() ? idle.at(a) : segments[a].back().omega);
    }
}

double FrequencySchedule::end_time() const {
    double t = 0.0;
    for (std::size_t a = 0; a < segments.size(); ++a) t = std::max(t, atom_end(a));
    return t;
}

double FrequencySchedule::omega_at(std::size_t atom, double t) const {
    const auto& s = segments.at(atom);
    if (s.empty()) throw ConfigError("schedule: atom " + std::to_string(atom) + " has no segments");
    for (const auto& seg : s)
        if (t < seg.t_end) return seg.omega;
    return s.back().omega;
}

std::vector<double> FrequencySchedule::frequencies_at(double t) const {
    std::vector<double> out(segments.size());
    for (std::size_t a = 0; a < segments.size(); ++a) out[a] = omega_at(a, t);
    return out;
}

std::vector<double> FrequencySchedule::breakpoints() const {
    std::vector<double> t{0.0};
    for (const auto& s : segments)
        for (const auto& seg : s) t.push_back(seg.t_end);
    for (const auto& e : events) t.push_back(e.time);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

double FrequencySchedule::detuning_integral(std::size_t atom, double t0, double t1) const {
    double total = 0.0;
    for (const auto& seg : segments.at(atom)) {
        const double a = std::max(t0, seg.t_start), b = std::min(t1, seg.t_end);
        if (b > a) total += (seg.omega - omega_ref) * (b - a);
    }
    return total;
}

void FrequencySchedule::validate() const {
    const double end = end_time();
    for (std::size_t a = 0; a < segments.size(); ++a) {
        const auto& s = segments[a];
        if (s.empty()) throw ConfigError("schedule: atom " + std::to_string(a) + " has no segments");
        if (s.front().t_start != 0.0) throw ConfigError("schedule: atom " + std::to_string(a) + " does not start at 0");
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!(s[i].t_end > s[i].t_start))
                throw ConfigError("schedule: empty segment " + std::to_string(i) + " on atom " + std::to_string(a));
            if (i > 0 && s[i].t_start != s[i - 1].t_end)
                throw ConfigError("schedule: gap before segment " + std::to_string(i) + " on atom " + std::to_string(a));
            if (!std::isfinite(s[i].omega)) throw ConfigError("schedule: non-finite frequency");
        }
        if (std::abs(s.back().t_end - end) > 1e-12 * std::max(1.0, end))
            throw ConfigError("schedule: atom " + std::to_string(a) + " does not cover [0, T]");
    }
    for (const auto& e : events)
        if (e.time < 0.0 || e.time > end * (1 + 1e-12) + 1e-15) throw ConfigError("schedule: event outside [0, T]");
}

void VirtualZLedger::accumulate(const std::vector<double>& frequencies, double omega_ref, double dt) {
    for (std::size_t a = 0; a < phase.size(); ++a) phase[a] += (frequencies[a] - omega_ref) * dt;
}

}  // namespace giant
