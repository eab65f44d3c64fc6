#pragma once

#include <memory>
#include <string>
#include <vector>

#include "giant/basis.hpp"
#include "giant/geometry.hpp"
#include "giant/linalg.hpp"
#include "giant/schedule.hpp"

namespace giant {

struct AtomSpec {
    int atom_id = 0;
    double anharmonicity = 0.0;  // chi = omega_12 - omega_01, rad/us
    double extra_decay = 0.0;    // Gamma_ex, 1/us
    double dephasing = 0.0;      // Gamma_phi, 1/us
};

struct DensityMatrix {
    std::shared_ptr<const Basis> basis;
    Mat rho;

    static DensityMatrix product(std::shared_ptr<const Basis> basis, const std::vector<int>& levels);
    double trace() const { return rho.trace().real(); }
    double purity() const { return (rho * rho).trace().real(); }
    double min_eigenvalue() const;
    // Throws NumericError when Hermiticity, trace or positivity bounds are violated.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-9, double eig_tol = 1e-8) const;
};

struct EngineOptions {
    int max_excitation = -1;      // -1 keeps the full 3^N space
    double secular_window = -1.0; // cross-transition terms kept when |w_a - w_b| below this; <0 selects omega0/50
    bool secular_exchange = false; // also drop coherent exchange between transitions outside the window
};

// One lowering transition of one atom: |lower><lower+1| with matrix-element factor amplitude.
struct Transition {
    int atom = 0;  // layout index
    int lower = 0;
    double omega = 0.0;
    double amplitude = 1.0;
};

struct Channel {
    double rate = 0.0;
    SpMat op;
};

struct LindbladGenerator {
    std::shared_ptr<const Basis> basis;
    Mat hamiltonian;                  // frame rotating at omega_ref
    std::vector<Transition> transitions;
    RMat kossakowski;                 // rates between transitions, waveguide plus extra decay
    std::vector<SpMat> lowering;      // amplitude * |l><l+1| per transition
    std::vector<Channel> channels;    // eigen-decomposed decay channels followed by dephasing
    double min_kossakowski_eigenvalue = 0.0;

    // Sparse H - (i/2) sum rate op^dag op
    SpMat effective_hamiltonian() const;
    // Largest rate or frequency in the generator, used for step control.
    double rate_scale() const;
};

LindbladGenerator build_generator(const CouplingLayout& layout, const std::vector<AtomSpec>& specs,
                                  const std::vector<double>& frequencies, double omega_ref,
                                  std::shared_ptr<const Basis> basis, const EngineOptions& options = {});

enum class Propagator { automatic, rk4, exact };

struct StepControl {
    Propagator method = Propagator::automatic;
    double max_phase = 0.02;          // h <= max_phase / rate_scale
    int min_steps = 50;               // h <= segment / min_steps
    double step_factor = 1.0;         // extra refinement (0.5 halves every step)
    long long max_steps = 50'000'000; // per segment; more is reported as step underflow
    Eigen::Index exact_max_dim = 16;  // automatic uses the exact propagator up to this Hilbert dimension
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<std::vector<double>> ledger;  // virtual-Z ledger at each sample
    DensityMatrix final_state;
    std::vector<double> final_ledger;
};

std::vector<AtomSpec> uniform_specs(const CouplingLayout& layout, double anharmonicity, double extra_decay,
                                    double dephasing);

// Samples must be ascending within [0, schedule end]. Frame events in the
// schedule are applied when reached; samples at an event time see the state
// after the event.
Trajectory evolve(const DensityMatrix& rho0, const FrequencySchedule& schedule, const CouplingLayout& layout,
                  const std::vector<AtomSpec>& specs, const std::vector<double>& sample_times,
                  const EngineOptions& options = {}, const StepControl& control = {});

// Several initial states through the same schedule, sharing generators and propagators.
std::vector<Trajectory> evolve_batch(const std::vector<DensityMatrix>& initial, const FrequencySchedule& schedule,
                                     const CouplingLayout& layout, const std::vector<AtomSpec>& specs,
                                     const std::vector<double>& sample_times, const EngineOptions& options = {},
                                     const StepControl& control = {});
double population(const DensityMatrix& state, int atom);
double leakage(const DensityMatrix& state, int atom);

// diag(1, e^{i phi}, e^{2 i phi}) on each atom: removes the free rotation
// exp(-i delta t n) recorded in the ledger.
void apply_virtual_z(DensityMatrix& state, const std::vector<double>& phases);

// Lindblad right-hand side. The parallel kernel works on the sparse
// effective Hamiltonian and jump operators with OpenMP; the reference kernel is
// a dense serial Eigen evaluation kept for testing.
struct CompiledGenerator {
    SpMat heff;
    std::vector<Channel> jumps;
    static CompiledGenerator from(const LindbladGenerator& gen);
};
// rho must be Hermitian.
void lindblad_rhs(const CompiledGenerator& gen, const Mat& rho, Mat& out, Mat& scratch);
Mat lindblad_rhs_reference(const LindbladGenerator& gen, const Mat& rho);

// Column-stacked superoperator.
Mat liouvillian(const LindbladGenerator& gen);

}  // namespace giant
