#include "giant/lindblad.hpp"

#include <cmath>
#include <string>

#include "giant/error.hpp"

namespace giant {

DensityMatrix DensityMatrix::product(std::shared_ptr<const Basis> basis, const std::vector<int>& levels) {
    const Eigen::Index i = basis->index(levels);
    if (i < 0) throw ConfigError("initial state lies outside the truncated basis");
    DensityMatrix d{basis, Mat::Zero(basis->dim(), basis->dim())};
    d.rho(i, i) = 1.0;
    return d;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
    const double h = hermiticity_error(rho);
    if (h > herm_tol) throw NumericError("density matrix not Hermitian: deviation " + std::to_string(h));
    const double tr = std::abs(rho.trace() - 1.0);
    if (tr > trace_tol) throw NumericError("density matrix trace deviates from 1 by " + std::to_string(tr));
    const double m = min_eigenvalue();
    if (m < -eig_tol) throw NumericError("density matrix has eigenvalue " + std::to_string(m));
}

SpMat LindbladGenerator::effective_hamiltonian() const {
    SpMat h = hamiltonian.sparseView(0.0, 0.0);
    for (const auto& c : channels) {
        SpMat k = SpMat(c.op.adjoint()) * c.op;
        h -= cplx(0.0, 0.5 * c.rate) * k;
    }
    h.prune(cplx(0.0, 0.0));
    return h;
}

double LindbladGenerator::rate_scale() const {
    double s = hamiltonian.cwiseAbs().rowwise().sum().maxCoeff();
    for (const auto& c : channels) {
        double m = 0.0;
        for (int k = 0; k < c.op.outerSize(); ++k)
            for (SpMat::InnerIterator it(c.op, k); it; ++it) m = std::max(m, std::abs(it.value()));
        s += std::abs(c.rate) * m * m;
    }
    return s;
}

std::vector<AtomSpec> uniform_specs(const CouplingLayout& layout, double anharmonicity, double extra_decay,
                                    double dephasing) {
    std::vector<AtomSpec> specs;
    for (const auto& a : layout.atoms) specs.push_back({a.atom_id, anharmonicity, extra_decay, dephasing});
    return specs;
}

namespace {

const AtomSpec& spec_for(const std::vector<AtomSpec>& specs, int atom_id) {
    for (const auto& s : specs)
        if (s.atom_id == atom_id) return s;
    throw ConfigError("no atom spec for atom " + std::to_string(atom_id));
}

}  // namespace

LindbladGenerator build_generator(const CouplingLayout& layout, const std::vector<AtomSpec>& specs,
                                  const std::vector<double>& frequencies, double omega_ref,
                                  std::shared_ptr<const Basis> basis, const EngineOptions& options) {
    const int n = static_cast<int>(layout.size());
    if (static_cast<int>(frequencies.size()) != n)
        throw ConfigError("build_generator: expected " + std::to_string(n) + " frequencies, got " +
                          std::to_string(frequencies.size()));
    if (!basis) basis = std::make_shared<Basis>(n, options.max_excitation);
    if (basis->atoms() != n) throw ConfigError("build_generator: basis size does not match layout");
    const double window = options.secular_window < 0.0 ? layout.omega0 / 50.0 : options.secular_window;

    std::vector<AtomSpec> spec(n);
    for (int a = 0; a < n; ++a) {
        spec[a] = spec_for(specs, layout.atoms[a].atom_id);
        if (spec[a].extra_decay < 0.0 || spec[a].dephasing < 0.0)
            throw ConfigError("atom spec rates must be nonnegative");
    }

    LindbladGenerator gen;
    gen.basis = basis;
    const Eigen::Index d = basis->dim();
    gen.hamiltonian = Mat::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s) {
        double e = 0.0;
        for (int a = 0; a < n; ++a) {
            const double delta = frequencies[a] - omega_ref;
            const int l = basis->level(s, a);
            if (l == 1) e += delta;
            if (l == 2) e += 2.0 * delta + spec[a].anharmonicity;
        }
        gen.hamiltonian(s, s) = e;
    }

    for (int a = 0; a < n; ++a) {
        gen.transitions.push_back({a, 0, frequencies[a], 1.0});
        gen.transitions.push_back({a, 1, frequencies[a] + spec[a].anharmonicity, std::sqrt(2.0)});
    }
    const auto nt = static_cast<Eigen::Index>(gen.transitions.size());
    std::vector<SpMat> unit;
    for (const auto& t : gen.transitions) {
        unit.push_back(basis->transition(t.atom, t.lower + 1, t.lower));
        gen.lowering.push_back(t.amplitude * unit.back());
    }

    gen.kossakowski = RMat::Zero(nt, nt);
    for (Eigen::Index p = 0; p < nt; ++p) {
        const auto& tp = gen.transitions[p];
        const int id_p = layout.atoms[tp.atom].atom_id;
        gen.kossakowski(p, p) = individual_decay(layout, id_p, tp.omega) + spec[tp.atom].extra_decay;
        for (Eigen::Index q = p + 1; q < nt; ++q) {
            const auto& tq = gen.transitions[q];
            if (tq.atom == tp.atom) continue;
            const int id_q = layout.atoms[tq.atom].atom_id;
            const double g = two_frequency_rate(layout, id_p, id_q, tp.omega, tq.omega, PairRate::g);
            const SpMat hop = SpMat(unit[p].adjoint()) * unit[q];
            const Mat dense = Mat(hop) * (tp.amplitude * tq.amplitude * g);
            const bool near = std::abs(tp.omega - tq.omega) <= window;
            if (near || !options.secular_exchange) gen.hamiltonian += dense + dense.adjoint();
            if (near) {
                const double c = two_frequency_rate(layout, id_p, id_q, tp.omega, tq.omega, PairRate::gamma_coll);
                gen.kossakowski(p, q) = gen.kossakowski(q, p) = c;
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<RMat> es(gen.kossakowski);
    const double floor = 1e-12 * layout.max_strength();
    gen.min_kossakowski_eigenvalue = es.eigenvalues().minCoeff();
    for (Eigen::Index k = 0; k < nt; ++k) {
        const double lambda = es.eigenvalues()(k);
        if (std::abs(lambda) <= floor) continue;
        SpMat op(d, d);
        for (Eigen::Index p = 0; p < nt; ++p) {
            const double v = es.eigenvectors()(p, k);
            if (v != 0.0) op += v * gen.lowering[p];
        }
        op.prune(cplx(0.0, 0.0));
        gen.channels.push_back({lambda, op});
    }
    const double deph[3] = {0.0, 1.0, 2.0};
    for (int a = 0; a < n; ++a)
        if (spec[a].dephasing > 0.0) gen.channels.push_back({2.0 * spec[a].dephasing, basis->diagonal(a, deph)});
    return gen;
}

double population(const DensityMatrix& state, int atom) {
    const auto& b = *state.basis;
    if (atom < 0 || atom >= b.atoms()) throw ConfigError("population: unknown atom " + std::to_string(atom));
    double p = 0.0;
    for (Eigen::Index s = 0; s < b.dim(); ++s)
        if (b.level(s, atom) == 1) p += state.rho(s, s).real();
    return p;
}

double leakage(const DensityMatrix& state, int atom) {
    const auto& b = *state.basis;
    if (atom < 0 || atom >= b.atoms()) throw ConfigError("leakage: unknown atom " + std::to_string(atom));
    double p = 0.0;
    for (Eigen::Index s = 0; s < b.dim(); ++s)
        if (b.level(s, atom) == 2) p += state.rho(s, s).real();
    return p;
}

void apply_virtual_z(DensityMatrix& state, const std::vector<double>& phases) {
    const auto& b = *state.basis;
    if (static_cast<int>(phases.size()) != b.atoms()) throw ConfigError("apply_virtual_z: phase vector length mismatch");
    Vec u(b.dim());
    for (Eigen::Index s = 0; s < b.dim(); ++s) {
        double th = 0.0;
        for (int a = 0; a < b.atoms(); ++a) th += b.level(s, a) * phases[a];
        u(s) = std::polar(1.0, th);
    }
    state.rho = u.asDiagonal() * state.rho * u.conjugate().asDiagonal();
}

}  // namespace giant
