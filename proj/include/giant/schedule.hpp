#pragma once

#include <algorithm>
#include <vector>

namespace giant {

struct Segment {
    double t_start;
    double t_end;
    double omega;
};

// Instantaneous frame update. With compensate set, the accumulated virtual-Z
// ledger is undone and reset; extra_phase adds logical phases e^{i a n}.
struct FrameEvent {
    double time = 0.0;
    bool compensate = true;
    std::vector<double> extra_phase;
};

class FrequencySchedule {
public:
    FrequencySchedule() = default;
    FrequencySchedule(std::size_t n_atoms, double omega_ref);

    std::size_t atoms() const { return segments.size(); }
    void hold(std::size_t atom, double duration, double omega);
    void hold_all(double duration, const std::vector<double>& omegas);
    // Holds until exactly time t (no-op when the atom already reaches t).
    void hold_until(std::size_t atom, double t, double omega);
    // Extends every atom to time t with its last frequency (or `idle` when empty).
    void pad_to(double t, const std::vector<double>& idle);
    void add_event(FrameEvent event) { events.push_back(std::move(event)); }

    double end_time() const;
    double atom_end(std::size_t atom) const;
    double omega_at(std::size_t atom, double t) const;  // right-continuous
    std::vector<double> frequencies_at(double t) const;
    std::vector<double> breakpoints() const;
    double detuning_integral(std::size_t atom, double t0, double t1) const;
    void validate() const;

    double omega_ref = 0.0;
    std::vector<std::vector<Segment>> segments;
    std::vector<FrameEvent> events;
};

struct VirtualZLedger {
    std::vector<double> phase;

    explicit VirtualZLedger(std::size_t n = 0) : phase(n, 0.0) {}
    void accumulate(const std::vector<double>& frequencies, double omega_ref, double dt);
    void reset() { std::fill(phase.begin(), phase.end(), 0.0); }
};

}  // namespace giant
