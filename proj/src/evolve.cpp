#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "giant/error.hpp"
#include "giant/lindblad.hpp"

namespace giant {

namespace {

struct Prepared {
    LindbladGenerator gen;
    CompiledGenerator compiled;
    Mat superop;  // filled lazily for the exact propagator
    std::map<double, Mat> propagators;
};

class GeneratorCache {
public:
    GeneratorCache(const CouplingLayout& layout, const std::vector<AtomSpec>& specs, double omega_ref,
                   std::shared_ptr<const Basis> basis, const EngineOptions& options)
        : layout_(layout), specs_(specs), omega_ref_(omega_ref), basis_(std::move(basis)), options_(options) {}

    Prepared& get(const std::vector<double>& freqs) {
        auto it = cache_.find(freqs);
        if (it != cache_.end()) return *it->second;
        auto p = std::make_unique<Prepared>();
        p->gen = build_generator(layout_, specs_, freqs, omega_ref_, basis_, options_);
        p->compiled = CompiledGenerator::from(p->gen);
        return *cache_.emplace(freqs, std::move(p)).first->second;
    }

private:
    const CouplingLayout& layout_;
    const std::vector<AtomSpec>& specs_;
    double omega_ref_;
    std::shared_ptr<const Basis> basis_;
    EngineOptions options_;
    std::map<std::vector<double>, std::unique_ptr<Prepared>> cache_;
};

void rk4_segment(const CompiledGenerator& gen, Mat& rho, double dt, long long steps) {
    const double h = dt / static_cast<double>(steps);
    const Eigen::Index d = rho.rows();
    Mat k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d), scratch(d, d);
    for (long long s = 0; s < steps; ++s) {
        lindblad_rhs(gen, rho, k1, scratch);
        tmp = rho + (0.5 * h) * k1;
        lindblad_rhs(gen, tmp, k2, scratch);
        tmp = rho + (0.5 * h) * k2;
        lindblad_rhs(gen, tmp, k3, scratch);
        tmp = rho + h * k3;
        lindblad_rhs(gen, tmp, k4, scratch);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

void exact_segment(Prepared& p, Mat& rho, double dt) {
    auto it = p.propagators.find(dt);
    if (it == p.propagators.end()) {
        if (p.superop.size() == 0) p.superop = liouvillian(p.gen);
        it = p.propagators.emplace(dt, expm(p.superop * dt)).first;
    }
    const Eigen::Index d = rho.rows();
    Eigen::Map<Vec> v(rho.data(), d * d);
    const Vec out = it->second * v;
    v = out;
}

}  // namespace

std::vector<Trajectory> evolve_batch(const std::vector<DensityMatrix>& initial, const FrequencySchedule& schedule,
                                     const CouplingLayout& layout, const std::vector<AtomSpec>& specs,
                                     const std::vector<double>& sample_times, const EngineOptions& options,
                                     const StepControl& control) {
    schedule.validate();
    const std::size_t n = layout.size();
    if (schedule.atoms() != n) throw ConfigError("evolve: schedule atom count does not match layout");
    if (initial.empty()) return {};
    const auto basis = initial.front().basis;
    for (const auto& r : initial)
        if (!r.basis || r.basis->atoms() != static_cast<int>(n) || r.basis->dim() != basis->dim())
            throw ConfigError("evolve: state basis does not match layout");

    const double T = schedule.end_time();
    const double eps = 1e-12 * std::max(1.0, T);
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < -eps || sample_times[i] > T + eps)
            throw ConfigError("evolve: sample time outside the schedule");
        if (i > 0 && sample_times[i] < sample_times[i - 1]) throw ConfigError("evolve: sample times not ascending");
    }

    std::vector<double> raw = schedule.breakpoints();
    raw.insert(raw.end(), sample_times.begin(), sample_times.end());
    std::sort(raw.begin(), raw.end());
    std::vector<double> grid;
    for (double t : raw) {
        t = std::clamp(t, 0.0, T);
        if (grid.empty() || t - grid.back() > eps) grid.push_back(t);
    }
    if (grid.back() < T) grid.back() = T;
    auto slot_of = [&](double t) {
        auto it = std::lower_bound(grid.begin(), grid.end(), t - eps);
        return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - grid.begin(), grid.size() - 1));
    };
    std::vector<std::vector<const FrameEvent*>> events(grid.size());
    for (const auto& e : schedule.events) events[slot_of(e.time)].push_back(&e);
    std::vector<std::size_t> sample_slot;
    for (double t : sample_times) sample_slot.push_back(slot_of(t));

    GeneratorCache cache(layout, specs, schedule.omega_ref, basis, options);
    const bool exact = control.method == Propagator::exact ||
                       (control.method == Propagator::automatic && basis->dim() <= control.exact_max_dim);

    const std::size_t m = initial.size();
    std::vector<Trajectory> traj(m);
    std::vector<DensityMatrix> state = initial;
    VirtualZLedger ledger(n);
    std::size_t next_sample = 0;

    auto process_slot = [&](std::size_t k) {
        for (const FrameEvent* e : events[k]) {
            std::vector<double> ph(n, 0.0);
            if (e->compensate) ph = ledger.phase;
            if (!e->extra_phase.empty()) {
                if (e->extra_phase.size() != n) throw ConfigError("frame event phase vector length mismatch");
                for (std::size_t a = 0; a < n; ++a) ph[a] += e->extra_phase[a];
            }
            for (auto& s : state) apply_virtual_z(s, ph);
            if (e->compensate) ledger.reset();
        }
        while (next_sample < sample_slot.size() && sample_slot[next_sample] == k) {
            for (std::size_t i = 0; i < m; ++i) {
                traj[i].times.push_back(sample_times[next_sample]);
                traj[i].states.push_back(state[i]);
                traj[i].ledger.push_back(ledger.phase);
            }
            ++next_sample;
        }
    };

    process_slot(0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double ta = grid[k - 1], tb = grid[k];
        const double dt = tb - ta;
        // Midpoint lookup: breakpoints closer than eps were merged into one grid point.
        const auto freqs = schedule.frequencies_at(0.5 * (ta + tb));
        Prepared& p = cache.get(freqs);
        if (exact) {
            for (auto& s : state) exact_segment(p, s.rho, dt);
        } else {
            const double scale = p.gen.rate_scale();
            double hmax = dt / control.min_steps;
            if (scale > 0.0) hmax = std::min(hmax, control.max_phase / scale);
            hmax *= control.step_factor;
            const double steps_d = std::ceil(dt / hmax - 1e-9);
            if (!(steps_d >= 1.0) || steps_d > static_cast<double>(control.max_steps)) {
                std::ostringstream msg;
                msg << "step underflow in segment " << k - 1 << " [" << ta << ", " << tb << "] us: rate scale "
                    << scale << " requires " << steps_d << " RK4 steps";
                throw NumericError(msg.str());
            }
            for (auto& s : state) rk4_segment(p.compiled, s.rho, dt, static_cast<long long>(steps_d));
        }
        ledger.accumulate(freqs, schedule.omega_ref, dt);
        process_slot(k);
    }
    for (std::size_t i = 0; i < m; ++i) {
        traj[i].final_state = state[i];
        traj[i].final_ledger = ledger.phase;
    }
    return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const FrequencySchedule& schedule, const CouplingLayout& layout,
                  const std::vector<AtomSpec>& specs, const std::vector<double>& sample_times,
                  const EngineOptions& options, const StepControl& control) {
    return evolve_batch({rho0}, schedule, layout, specs, sample_times, options, control).front();
}

}  // namespace giant
