#include "giant/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "giant/error.hpp"
#include "giant/units.hpp"

namespace giant {

ChainHardware chain_hardware(int sites, const TrotterHardware& p) {
    if (sites < 2) throw ConfigError("chain hardware: at least two sites are required");
    if (sites > max_trotter_sites)
        throw CapacityError("chain hardware: " + std::to_string(sites) + " sites exceed the engine limit of " +
                            std::to_string(max_trotter_sites));
    if (!(p.gamma_mhz > 0.0) || !(p.omega0_ghz > 0.0)) throw ConfigError("chain hardware: gamma and omega0 must be positive");
    if (p.gamma_ex < 0.0 || p.gamma_phi < 0.0 || p.t3 < 0.0) throw ConfigError("chain hardware: rates and t3 must be >= 0");
    if (!(p.decay_target > 0.0)) throw ConfigError("chain hardware: decay target must be positive");

    ChainHardware hw;
    hw.params = p;
    hw.gamma = units::angular_from_mhz(p.gamma_mhz);
    hw.layout = preset_chain(sites, {hw.gamma, units::angular_from_ghz(p.omega0_ghz)});
    hw.df = chain_df_frequencies(hw.layout);
    hw.chi = hw.df[0] - hw.df[1];
    hw.specs = uniform_specs(hw.layout, hw.chi, p.gamma_ex, p.gamma_phi);

    // The end site parks where its decay rate is closest to the target, preferably in [n2, n3].
    const int end = hw.layout.atoms.back().atom_id;
    const double target = p.decay_target * hw.gamma;
    hw.decay = choose_decay_frequency(hw.layout, end, target, hw.df[1], hw.df[2]);
    if (std::abs(hw.decay.rate - target) > p.decay_tolerance * hw.gamma) {
        hw.decay = choose_decay_frequency(hw.layout, end, target, hw.df[0], hw.df[4]);
        hw.decay_in_band = false;
    }
    return hw;
}

namespace {

struct Placed {
    std::size_t even;
    std::size_t odd;
    double omega_even;
    double duration;
    bool odd_at_n2;
};

}  // namespace

CompiledSchedule compile(const TrotterPlan& plan, const ChainHardware& hw) {
    const int n = plan.model.sites;
    if (static_cast<int>(hw.layout.size()) != n)
        throw ConfigError("compile: chain has " + std::to_string(hw.layout.size()) + " atoms, model has " +
                          std::to_string(n) + " sites");
    CompiledSchedule c;
    c.idle = chain_addressing(hw.layout, {});
    c.t3 = hw.params.virtual_z ? 0.0 : hw.params.t3;
    const double omega_ref = *std::max_element(c.idle.begin(), c.idle.end());
    FrequencySchedule& s = c.schedule;
    s = FrequencySchedule(n, omega_ref);
    auto id = [&](std::size_t k) { return hw.layout.atoms[k].atom_id; };

    double T = 0.0;
    auto idle_until = [&](double t) {
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) s.hold_until(k, t, c.idle[k]);
    };
    auto record = [&](int step, const std::string& name, double a, double b, bool two) {
        if (step == 0) c.slots.push_back({name, a, b, two});
    };

    std::map<int, std::vector<const PlanGate*>> layers;
    for (const auto& g : plan.step) layers[g.layer].push_back(&g);

    for (int step = 0; step < plan.steps; ++step) {
        for (int layer = 1; layer <= 4; ++layer) {
            auto it = layers.find(layer);
            if (it == layers.end()) continue;
            std::vector<Placed> placed;
            std::vector<GateRequest> requests;
            std::vector<double> extra(n, 0.0);
            bool any_extra = false;
            for (const PlanGate* g : it->second) {
                const std::size_t ka = static_cast<std::size_t>(g->a), kb = static_cast<std::size_t>(g->b);
                const std::size_t even = (ka + 1) % 2 == 0 ? ka : kb;
                const std::size_t odd = even == ka ? kb : ka;
                const bool at_n2 = (odd + 1) % 4 == 1;
                if (g->op == PlanOp::rxy) {
                    const auto p = rxy_protocol(hw.layout, id(odd), id(even), g->theta, c.idle[odd]);
                    requests.push_back({GateKind::rxy, id(odd), id(even)});
                    placed.push_back({even, odd, 0.0, p.duration, at_n2});
                } else if (g->op == PlanOp::rzz) {
                    extra[ka] += g->z_phase;
                    extra[kb] += g->z_phase;
                    any_extra = true;
                    if (g->cz_phase <= 0.0) continue;
                    const auto p = czphi_protocol(hw.layout, hw.specs, id(odd), id(even), c.idle[odd], g->cz_phase);
                    requests.push_back({GateKind::czphi, id(odd), id(even), p.detuning});
                    placed.push_back({even, odd, p.frequencies[1], p.duration, at_n2});
                }
            }
            const auto w = chain_addressing(hw.layout, requests);
            double len = 0.0;
            for (auto& pl : placed) {
                if (pl.omega_even != 0.0 && std::abs(pl.omega_even - w[pl.even]) > 1e-9 * hw.layout.omega0)
                    throw NumericError("compile: addressing and gate protocol disagree");
                pl.omega_even = w[pl.even];
                len = std::max(len, pl.duration);
            }
            if (len > 0.0) {
                const bool xy = layer == 1 || layer == 3;
                for (const auto& pl : placed) {
                    const double start = T + len - pl.duration;
                    s.hold_until(pl.even, start, c.idle[pl.even]);
                    s.hold_until(pl.even, T + len, pl.omega_even);
                    // Exchange gates need the frame phases cleared when they begin.
                    if (xy) s.add_event({start, true, {}});
                    if (step == 0) {
                        double& slot = xy ? (pl.odd_at_n2 ? c.t1 : c.t1p) : (pl.odd_at_n2 ? c.t2 : c.t2p);
                        slot = std::max(slot, pl.duration);
                    }
                }
                idle_until(T + len);
                if (step == 0) ++c.two_qubit_slots;
                record(step, "H" + std::to_string(layer), T, T + len, true);
                T += len;
            }
            if (len > 0.0 || any_extra) {
                idle_until(T + c.t3);
                record(step, "Rz", T, T + c.t3, false);
                T += c.t3;
                s.add_event({T, true, any_extra ? extra : std::vector<double>{}});
            }
        }
        auto d = layers.find(5);
        if (d != layers.end()) {
            const PlanGate* g = d->second.front();
            const double t4 = g->decay / hw.decay.rate;
            const auto k = static_cast<std::size_t>(g->a);
            decay_protocol(hw.layout, id(k), hw.decay.omega, t4, hw.df[0], hw.df[4]);
            if (step == 0) c.t4 = t4;
            s.hold_until(k, T + t4, hw.decay.omega);
            idle_until(T + t4);
            record(step, "decay", T, T + t4, false);
            T += t4;
        }
        s.add_event({T, true, {}});
        c.step_ends.push_back(T);
        if (step == 0) c.step_duration = T;
    }
    c.t0 = c.t1 - c.t1p;
    c.t0p = c.t2 - c.t2p;
    c.total = T;
    return c;
}

namespace {

std::vector<double> initial_populations(int n) {
    std::vector<double> v(n, 0.0);
    v[0] = 1.0;
    return v;
}

}  // namespace

SimulationResult run_trajectory(const TrotterPlan& plan, const ChainHardware& hw, const StepControl& control) {
    const int n = plan.model.sites;
    const auto cs = compile(plan, hw);
    SimulationResult r;
    if (cs.total == 0.0) {
        for (int k = 0; k <= plan.steps; ++k) {
            r.times.push_back(plan.dt * k);
            r.n.push_back(initial_populations(n));
            r.leakage.push_back(0.0);
        }
        return r;
    }
    // One excitation at most: the generator never raises the excitation number.
    const auto basis = std::make_shared<Basis>(n, 1);
    std::vector<int> levels(n, 0);
    levels[0] = 1;
    const auto rho0 = DensityMatrix::product(basis, levels);
    std::vector<double> samples{0.0};
    samples.insert(samples.end(), cs.step_ends.begin(), cs.step_ends.end());
    EngineOptions opts;
    opts.max_excitation = 1;
    opts.secular_exchange = hw.params.secular_exchange;
    const auto traj = evolve(rho0, cs.schedule, hw.layout, hw.specs, samples, opts, control);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::vector<double> pops(n);
        double leak = 0.0;
        for (int k = 0; k < n; ++k) {
            pops[k] = population(traj.states[i], k);
            leak += leakage(traj.states[i], k);
        }
        r.times.push_back(plan.dt * static_cast<double>(i));
        r.n.push_back(std::move(pops));
        r.leakage.push_back(leak);
    }
    return r;
}

SimulationResult run_simulation(const XXZModel& model, const std::vector<double>& t_grid, int steps,
                                const ChainHardware& hw) {
    model.validate();
    if (t_grid.empty()) throw ConfigError("run_simulation: empty time grid");
    SimulationResult r;
    for (double t : t_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("run_simulation: times must be >= 0");
        r.times.push_back(t);
        if (t == 0.0) {
            r.n.push_back(initial_populations(model.sites));
            r.leakage.push_back(0.0);
            continue;
        }
        const auto one = run_trajectory(decompose(model, t, steps), hw);
        r.n.push_back(one.n.back());
        r.leakage.push_back(one.leakage.back());
    }
    return r;
}

oracle::Traces ideal_simulation(const XXZModel& model, const std::vector<double>& t_grid, int steps) {
    model.validate();
    if (t_grid.empty()) throw ConfigError("ideal_simulation: empty time grid");
    const Mat rho0 = oracle::excitation_state(model.sites, 0);
    oracle::Traces out;
    for (double t : t_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("ideal_simulation: times must be >= 0");
        out.times.push_back(t);
        out.n.push_back(t == 0.0 ? oracle::populations(rho0, model.sites)
                                 : oracle::ideal_circuit(decompose(model, t, steps), rho0).n.back());
    }
    return out;
}

ErrorScan error_scan(const XXZModel& model, const std::vector<double>& t_grid, const std::vector<int>& steps,
                     const ChainHardware* hw) {
    if (steps.empty()) throw ConfigError("error_scan: no step counts");
    ErrorScan e;
    e.steps = steps;
    e.exact = oracle::exact_lindblad(model, t_grid, oracle::excitation_state(model.sites, 0));
    for (int l : steps) {
        e.simulated.push_back(hw ? run_simulation(model, t_grid, l, *hw).traces() : ideal_simulation(model, t_grid, l));
        e.reports.push_back(oracle::error_report(e.simulated.back(), e.exact));
    }
    e.l_opt = oracle::optimal_steps(steps, e.reports);
    return e;
}

}  // namespace giant
