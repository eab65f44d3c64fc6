#pragma once

#include <string>
#include <vector>

#include "giant/gates.hpp"
#include "giant/oracle.hpp"
#include "giant/xxz.hpp"

namespace giant {

// Processor parameters. Gamma_ex and Gamma_phi are plain rates in 1/us.
struct TrotterHardware {
    double gamma_mhz = 2.0;
    double gamma_ex = 0.02;
    double gamma_phi = 0.05;
    double omega0_ghz = 3.2;
    double t3 = 0.03;                // single-qubit slot, us
    bool virtual_z = false;          // zero-length single-qubit slots
    double decay_target = 1.36;      // wanted Gamma_0 in units of gamma
    double decay_tolerance = 0.05;   // in units of gamma, before the search leaves [n2, n3]
    // Drop the exchange between atoms parked at different frequencies. Kept, it
    // couples idle neighbours at g/delta ~ 1% per frequency jump and these kicks add up coherently.
    bool secular_exchange = true;
};

// Chain processor built from the hardware parameters.
struct ChainHardware {
    TrotterHardware params;
    CouplingLayout layout;
    std::vector<AtomSpec> specs;
    std::vector<double> df;   // n1..n5
    double gamma = 0.0;       // rad/us
    double chi = 0.0;         // n1 - n2, shared by all atoms
    DecayPoint decay;         // parking point of the end site, rate re-measured
    bool decay_in_band = true;  // decay point lies in [n2, n3]
};

inline constexpr int max_trotter_sites = 5;

ChainHardware chain_hardware(int sites, const TrotterHardware& params = {});

struct Slot {
    std::string name;  // H1..H4, Rz, decay
    double start;
    double end;
    bool two_qubit;
};

// Timing follows the staggered layout: within a two-qubit slot every gate ends
// at the slot end, so a shorter gate starts later. t1 and t1p are the RXY
// durations at the n2 and n5 pairs, t2 and t2p the CZphi durations.
struct CompiledSchedule {
    FrequencySchedule schedule;
    double t0 = 0.0, t1 = 0.0, t1p = 0.0;
    double t0p = 0.0, t2 = 0.0, t2p = 0.0;
    double t3 = 0.0, t4 = 0.0;
    double step_duration = 0.0;
    double total = 0.0;
    std::vector<Slot> slots;        // first step only
    int two_qubit_slots = 0;        // per step
    std::vector<double> step_ends;  // after the step's frame compensation
    std::vector<double> idle;       // idle frequency per site
};

CompiledSchedule compile(const TrotterPlan& plan, const ChainHardware& hw);

struct SimulationResult {
    std::vector<double> times;
    std::vector<std::vector<double>> n;  // [time][site]
    std::vector<double> leakage;         // population outside the qubit levels
    oracle::Traces traces() const { return {times, n}; }
};

// One run of plan.steps steps, sampled at every step boundary.
SimulationResult run_trajectory(const TrotterPlan& plan, const ChainHardware& hw, const StepControl& control = {});
// One run per t with `steps` Trotter steps each; the final populations are reported.
SimulationResult run_simulation(const XXZModel& model, const std::vector<double>& t_grid, int steps,
                                const ChainHardware& hw);
// Same grid evaluated with perfect gates.
oracle::Traces ideal_simulation(const XXZModel& model, const std::vector<double>& t_grid, int steps);

struct ErrorScan {
    std::vector<int> steps;
    oracle::Traces exact;
    std::vector<oracle::Traces> simulated;
    std::vector<oracle::ErrorReport> reports;
    std::vector<int> l_opt;  // per time
};
// hw == nullptr evaluates the plans with perfect gates.
ErrorScan error_scan(const XXZModel& model, const std::vector<double>& t_grid, const std::vector<int>& steps,
                     const ChainHardware* hw);

}  // namespace giant
