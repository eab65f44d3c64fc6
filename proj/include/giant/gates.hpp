#pragma once

#include <array>
#include <map>
#include <vector>

#include "giant/lindblad.hpp"

namespace giant {

enum class GateKind { rxy, cz, czphi, decay, idle };

const char* gate_name(GateKind kind);

// A gate as a frequency assignment held for a fixed time. For cz and czphi the
// first atom is the control (the one promoted to |2>).
struct GateProtocol {
    GateKind kind = GateKind::idle;
    std::vector<int> atoms;           // atom ids
    std::vector<double> frequencies;  // rad/us, parallel to atoms
    double duration = 0.0;            // us
    double angle = 0.0;               // theta for rxy, phi for cz (pi) and czphi
    double coupling = 0.0;            // g that sets the duration, rad/us
    double detuning = 0.0;            // czphi target detuning Delta, rad/us
};

// RXY(theta) = exp(-i theta (s+ s- + s- s+)); a coupling g held for tau gives
// RXY(g tau), so theta = g tau for g > 0 and 2 pi - |g| tau for g < 0.
double rxy_duration(double theta, double g);
// phi = pi (1 + Delta / sqrt(8 g^2 + Delta^2)) and its inverse.
double czphi_phase(double delta, double g);
double czphi_detuning(double phi, double g);
// pi / g' with g' = sqrt(2 g^2 + Delta^2 / 4)
double czphi_duration(double delta, double g);

GateProtocol rxy_protocol(const CouplingLayout& layout, int atom_a, int atom_b, double theta, double omega);
GateProtocol cz_protocol(const CouplingLayout& layout, const std::vector<AtomSpec>& specs, int control, int target,
                         double omega_control, double omega_target);

// Detuning solved with the coupling evaluated at the detuned operating point,
// so that the phase law holds for the coupling the atoms actually see.
struct CzphiPoint {
    double detuning;
    double coupling;
    double duration;
};
CzphiPoint solve_czphi(const CouplingLayout& layout, int control, int target, double omega_resonant, double phi);
GateProtocol czphi_protocol(const CouplingLayout& layout, const std::vector<AtomSpec>& specs, int control,
                            int target, double omega_control, double phi);

GateProtocol decay_protocol(const CouplingLayout& layout, int atom, double omega_decay, double duration,
                            double band_lo, double band_hi);
GateProtocol idle_protocol(const std::vector<int>& atoms, const std::vector<double>& frequencies, double duration);

struct DecayPoint {
    double omega;
    double rate;
};
// Point in [lo, hi] whose individual decay rate is closest to target_rate.
DecayPoint choose_decay_frequency(const CouplingLayout& layout, int atom, double target_rate, double lo, double hi);

// Hardware used for tomography. The layout holds exactly the two gate atoms.
struct GateContext {
    CouplingLayout layout;
    std::vector<AtomSpec> specs;
    EngineOptions engine;
    StepControl control;
};

// Holds the protocol frequencies for its duration, then applies the virtual-Z
// compensation. Atoms outside the protocol keep idle_frequencies.
FrequencySchedule protocol_schedule(const GateProtocol& protocol, const CouplingLayout& layout,
                                    const std::vector<double>& idle_frequencies = {});

// Qubit index n = 2 q_a + q_b over the two layout atoms. Choi matrix
// (1/4) sum |n><m| (x) E(|n><m|) with E projected onto the computational subspace.
Mat choi_of_protocol(const GateProtocol& protocol, const GateContext& context);
Mat unitary_choi(const Mat& u);
double choi_leakage(const Mat& choi);

Mat rxy_unitary(double theta);
Mat czphi_unitary(double phi);
Mat ideal_unitary(const GateProtocol& protocol);

// Uhlmann fidelity [tr sqrt(sqrt(A) B sqrt(A))]^2. Eigenvalues above -1e-8 are
// clamped to zero; more negative ones throw NumericError.
double process_fidelity(const Mat& choi, const Mat& choi_ref);

struct ZOptimized {
    double fidelity;               // after single-qubit Z phases on both sides
    double raw;                    // against the bare target
    std::array<double, 4> phases;  // input a, input b, output a, output b
};
ZOptimized z_optimized_fidelity(const Mat& choi, const Mat& target);

double average_gate_fidelity(double process_fidelity, int d);

struct TwoAtomSetup {
    double gamma_mhz = 2.0;
    double omega0_over_gamma = 1600.0;
    double anharmonicity_over_omega0 = -0.125;
};
GateContext two_atom_context(const TwoAtomSetup& setup, double gamma_ex, double gamma_phi);
// iSWAP (rxy, pi/2) at DF n3, CZ with control at DF n2 and target at DF n1,
// CZphi with control at DF n2.
GateProtocol two_atom_gate(const GateContext& context, GateKind kind, double angle);

struct SweepPoint {
    double gamma_ex;   // 1/us
    double gamma_phi;  // 1/us
    double fidelity;
    double raw_fidelity;
    double leakage;
};
struct FidelityFit {
    double baseline = 0.0;
    double slope_ex = 0.0;   // F = baseline - slope_ex Gamma_ex/g - slope_phi Gamma_phi/g
    double slope_phi = 0.0;
    double residual = 0.0;   // root-mean-square residual
    bool nonlinear = false;  // residual above 1e-3
};
struct SweepResult {
    double coupling;  // g in rad/us
    std::vector<SweepPoint> points;
    FidelityFit fit;
};
// Grids in units of g.
SweepResult fidelity_sweep(GateKind kind, const TwoAtomSetup& setup, const std::vector<double>& ex_over_g,
                           const std::vector<double>& phi_over_g);
FidelityFit fit_plane(const std::vector<SweepPoint>& points, double g);

struct CzphiScanRow {
    double phi;
    double gamma_ex;
    double detuning;
    double duration;
    double fidelity;
    double raw_fidelity;
};
// Gamma_ex values in 1/us.
std::vector<CzphiScanRow> czphi_fidelity_scan(const TwoAtomSetup& setup, const std::vector<double>& phi_grid,
                                              const std::vector<double>& gamma_ex_grid, double gamma_phi);

// Gate requests for addressing. Pair gates name two atom ids; decay names one.
struct GateRequest {
    GateKind kind = GateKind::rxy;
    int a = 0;
    int b = -1;
    double detuning = 0.0;  // added to the retuned atom for czphi
    double omega = 0.0;     // decay parking frequency
};

// The five lowest decoherence-free frequencies of the first chain atom (n1..n5).
std::vector<double> chain_df_frequencies(const CouplingLayout& chain);
// Frequencies by layout index. Sites are counted from 1 along the chain: odd
// sites stay at n2 (site 1 mod 4) or n5 (site 3 mod 4), idle even sites sit at
// n3, and an even site joins a gate by moving to its partner's frequency (rxy)
// or to the partner's frequency shifted down by n2 - n1 (cz, czphi adds Delta).
std::vector<double> chain_addressing(const CouplingLayout& chain, const std::vector<GateRequest>& requests);

// Five-qubit block around (row, col): the centre and its four braided
// neighbours. Idle assignment n2, n4 (upper pair), n5 (centre), n7, n9 (lower
// pair). A gate between the centre and a neighbour retunes the centre to the
// neighbour's frequency (rxy) or to that plus the neighbour's anharmonicity
// (cz, czphi adds Delta).
std::map<int, double> grid_addressing(const CouplingLayout& grid, int cols, int row, int col,
                                      const std::vector<AtomSpec>& specs, const std::vector<GateRequest>& requests);
std::vector<int> grid_block(const CouplingLayout& grid, int cols, int row, int col);

}  // namespace giant
