#pragma once

#include <vector>

#include "giant/linalg.hpp"
#include "giant/xxz.hpp"

// Reference solvers on the spin-1/2 model itself. Nothing here touches the
// three-level engine: operators, integrator and gate matrices are built locally.
namespace giant::oracle {

inline constexpr int max_sites = 8;

// Site 0 is the most significant bit of the 2^N index; bit value 1 is the excited state.
Mat sigma_minus(int sites, int site);
Mat number_operator(int sites, int site);
Mat sigma_z(int sites, int site);
Mat xxz_hamiltonian(const XXZModel& model);
// |1 0 ... 0><1 0 ... 0| with the excitation on `site`.
Mat excitation_state(int sites, int site);

struct Traces {
    std::vector<double> times;
    std::vector<std::vector<double>> n;  // n[time][site]
};

std::vector<double> populations(const Mat& rho, int sites);

struct ExactOptions {
    double step_scale = 1e-3;  // h = step_scale / max(|J|, |Jz|, Gamma)
};

// Dense RK4 on the 2^N density matrix. Times ascending and >= 0.
Traces exact_lindblad(const XXZModel& model, const std::vector<double>& times, const Mat& rho0,
                      const ExactOptions& options = {});
// Final state at time t.
Mat exact_state(const XXZModel& model, double t, const Mat& rho0, const ExactOptions& options = {});

// Perfect gates applied step by step; sampled at the l + 1 step boundaries.
Traces ideal_circuit(const TrotterPlan& plan, const Mat& rho0);
Mat rxy_gate(double theta);
Mat rzz_gate(double phi0);  // exp(i phi0 sz sz)
Mat embed_pair(const Mat& u, int sites, int a, int b);

// exp(-i H t) for a Hermitian 2x2 H, by eigendecomposition.
Mat two_level_block(const Mat& h, double t);

struct ErrorReport {
    std::vector<double> times;
    std::vector<std::vector<double>> dn;  // exact - simulated, [time][site]
    std::vector<double> max_per_time;     // max_k |dn|
    double max_abs = 0.0;
    double mean_abs = 0.0;
};
ErrorReport error_report(const Traces& simulated, const Traces& exact);

// For each time, the step count with the smallest max_k |dn|. Reports must share a time grid.
std::vector<int> optimal_steps(const std::vector<int>& steps, const std::vector<ErrorReport>& reports);

}  // namespace giant::oracle
