#include "giant/gates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "giant/error.hpp"
#include "giant/roots.hpp"
#include "giant/units.hpp"

namespace giant {

namespace {

constexpr double two_pi = units::two_pi;
constexpr double pi = units::pi;

void check_open_angle(double a, const char* what) {
    if (!(a > 0.0 && a < two_pi)) throw ConfigError(std::string(what) + " must lie in (0, 2 pi)");
}

// Decoherence-free means Gamma_ind below this fraction of the strongest coupling.
constexpr double df_tolerance = 1e-6;

void check_df(const CouplingLayout& layout, int atom, double omega) {
    const double gm = layout.atom(atom).max_strength();
    if (!(individual_decay(layout, atom, omega) < df_tolerance * gm))
        throw ConfigError("atom " + std::to_string(atom) + " is not decoherence-free at the requested frequency");
}

double pair_g(const CouplingLayout& layout, int a, int b, double wa, double wb) {
    return two_frequency_rate(layout, a, b, wa, wb, PairRate::g);
}

double anharmonicity_of(const std::vector<AtomSpec>& specs, int atom) {
    for (const auto& s : specs)
        if (s.atom_id == atom) return s.anharmonicity;
    throw ConfigError("no atom spec for atom " + std::to_string(atom));
}

}  // namespace

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::rxy: return "rxy";
        case GateKind::cz: return "cz";
        case GateKind::czphi: return "czphi";
        case GateKind::decay: return "decay";
        case GateKind::idle: return "idle";
    }
    return "?";
}

double rxy_duration(double theta, double g) {
    check_open_angle(theta, "rxy angle");
    if (g == 0.0 || !std::isfinite(g)) throw ConfigError("rxy: coupling vanishes");
    return g > 0.0 ? theta / g : (two_pi - theta) / std::abs(g);
}

double czphi_phase(double delta, double g) { return pi * (1.0 + delta / std::sqrt(8.0 * g * g + delta * delta)); }

double czphi_detuning(double phi, double g) {
    check_open_angle(phi, "czphi phase");
    const double u = phi / pi - 1.0;
    return 2.0 * std::sqrt(2.0) * std::abs(g) * u / std::sqrt(1.0 - u * u);
}

double czphi_duration(double delta, double g) { return pi / std::sqrt(2.0 * g * g + 0.25 * delta * delta); }

GateProtocol rxy_protocol(const CouplingLayout& layout, int atom_a, int atom_b, double theta, double omega) {
    check_open_angle(theta, "rxy angle");
    if (atom_a == atom_b) throw ConfigError("rxy: atoms must differ");
    check_df(layout, atom_a, omega);
    check_df(layout, atom_b, omega);
    const double g = exchange_coupling(layout, atom_a, atom_b, omega);
    if (!(std::abs(g) > df_tolerance * layout.max_strength()))
        throw ConfigError("rxy: atoms " + std::to_string(atom_a) + " and " + std::to_string(atom_b) +
                          " are not braided at this frequency");
    GateProtocol p;
    p.kind = GateKind::rxy;
    p.atoms = {atom_a, atom_b};
    p.frequencies = {omega, omega};
    p.angle = theta;
    p.coupling = g;
    p.duration = rxy_duration(theta, g);
    return p;
}

GateProtocol cz_protocol(const CouplingLayout& layout, const std::vector<AtomSpec>& specs, int control, int target,
                         double omega_control, double omega_target) {
    if (control == target) throw ConfigError("cz: atoms must differ");
    const double chi = anharmonicity_of(specs, control);
    if (std::abs(omega_target - (omega_control + chi)) > 1e-6 * layout.omega0)
        throw ConfigError("cz: resonance omega_target = omega_control + chi_control is not met");
    check_df(layout, control, omega_control);
    check_df(layout, target, omega_target);
    const double g = pair_g(layout, control, target, omega_control + chi, omega_target);
    if (!(std::abs(g) > df_tolerance * layout.max_strength())) throw ConfigError("cz: atoms are not braided");
    GateProtocol p;
    p.kind = GateKind::cz;
    p.atoms = {control, target};
    p.frequencies = {omega_control, omega_target};
    p.angle = pi;
    p.coupling = g;
    p.duration = czphi_duration(0.0, g);
    return p;
}

CzphiPoint solve_czphi(const CouplingLayout& layout, int control, int target, double omega_resonant, double phi) {
    check_open_angle(phi, "czphi phase");
    auto g_at = [&](double delta) { return pair_g(layout, control, target, omega_resonant, omega_resonant + delta); };
    const double g0 = g_at(0.0);
    if (!(std::abs(g0) > df_tolerance * layout.max_strength())) throw ConfigError("czphi: atoms are not braided");
    double delta = 0.0;
    if (phi != pi) {
        const std::function<double(double)> f = [&](double d) { return czphi_phase(d, g_at(d)) - phi; };
        const double d0 = czphi_detuning(phi, g0);
        double width = 0.25 * std::abs(d0) + std::abs(g0);
        Bracket b{d0 - width, d0 + width};
        for (int i = 0; i < 60 && f(b.lo) * f(b.hi) > 0.0; ++i) {
            width *= 2.0;
            b = {d0 - width, d0 + width};
        }
        if (f(b.lo) * f(b.hi) > 0.0) throw NumericError("czphi: no detuning reproduces the requested phase");
        delta = bisect(f, b, 1e-14 * layout.omega0);
    }
    const double g = g_at(delta);
    return {delta, g, czphi_duration(delta, g)};
}

GateProtocol czphi_protocol(const CouplingLayout& layout, const std::vector<AtomSpec>& specs, int control,
                            int target, double omega_control, double phi) {
    if (control == target) throw ConfigError("czphi: atoms must differ");
    const double chi = anharmonicity_of(specs, control);
    check_df(layout, control, omega_control);
    check_df(layout, target, omega_control + chi);
    const auto pt = solve_czphi(layout, control, target, omega_control + chi, phi);
    GateProtocol p;
    p.kind = GateKind::czphi;
    p.atoms = {control, target};
    p.frequencies = {omega_control, omega_control + chi + pt.detuning};
    p.angle = phi;
    p.coupling = pt.coupling;
    p.detuning = pt.detuning;
    p.duration = pt.duration;
    return p;
}

GateProtocol decay_protocol(const CouplingLayout& layout, int atom, double omega_decay, double duration,
                            double band_lo, double band_hi) {
    layout.index_of(atom);
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("decay: duration must be >= 0");
    if (omega_decay < band_lo || omega_decay > band_hi) throw ConfigError("decay: frequency outside the allowed band");
    GateProtocol p;
    p.kind = GateKind::decay;
    p.atoms = {atom};
    p.frequencies = {omega_decay};
    p.duration = duration;
    return p;
}

GateProtocol idle_protocol(const std::vector<int>& atoms, const std::vector<double>& frequencies, double duration) {
    if (atoms.size() != frequencies.size()) throw ConfigError("idle: atom and frequency counts differ");
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("idle: duration must be >= 0");
    GateProtocol p;
    p.kind = GateKind::idle;
    p.atoms = atoms;
    p.frequencies = frequencies;
    p.duration = duration;
    return p;
}

DecayPoint choose_decay_frequency(const CouplingLayout& layout, int atom, double target_rate, double lo, double hi) {
    if (!(hi > lo)) throw ConfigError("decay band is empty");
    const std::function<double(double)> f = [&](double w) { return individual_decay(layout, atom, w) - target_rate; };
    const int samples = 4001;
    DecayPoint best{lo, individual_decay(layout, atom, lo)};
    for (const auto& b : sign_change_brackets(f, lo, hi, samples)) {
        const double w = bisect(f, b, 1e-13 * layout.omega0);
        const double r = individual_decay(layout, atom, w);
        if (std::abs(r - target_rate) < std::abs(best.rate - target_rate)) best = {w, r};
    }
    for (int i = 0; i < samples; ++i) {
        const double w = lo + (hi - lo) * i / (samples - 1);
        const double r = individual_decay(layout, atom, w);
        if (std::abs(r - target_rate) < std::abs(best.rate - target_rate)) best = {w, r};
    }
    return best;
}

FrequencySchedule protocol_schedule(const GateProtocol& protocol, const CouplingLayout& layout,
                                    const std::vector<double>& idle_frequencies) {
    const std::size_t n = layout.size();
    std::vector<double> freqs(n, 0.0);
    std::vector<bool> set(n, false);
    for (std::size_t i = 0; i < protocol.atoms.size(); ++i) {
        const std::size_t k = layout.index_of(protocol.atoms[i]);
        freqs[k] = protocol.frequencies[i];
        set[k] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (set[k]) continue;
        if (idle_frequencies.size() != n) throw ConfigError("protocol schedule: idle frequencies required");
        freqs[k] = idle_frequencies[k];
    }
    FrequencySchedule s(n, *std::max_element(freqs.begin(), freqs.end()));
    s.hold_all(protocol.duration, freqs);
    s.add_event({protocol.duration, true, {}});
    return s;
}

Mat rxy_unitary(double theta) {
    Mat u = Mat::Identity(4, 4);
    u(1, 1) = u(2, 2) = std::cos(theta);
    u(1, 2) = u(2, 1) = -I * std::sin(theta);
    return u;
}

Mat czphi_unitary(double phi) {
    Mat u = Mat::Identity(4, 4);
    u(3, 3) = std::polar(1.0, phi);
    return u;
}

Mat ideal_unitary(const GateProtocol& p) {
    switch (p.kind) {
        case GateKind::rxy: return rxy_unitary(p.angle);
        case GateKind::cz:
        case GateKind::czphi: return czphi_unitary(p.angle);
        case GateKind::idle: return Mat::Identity(4, 4);
        case GateKind::decay: break;
    }
    throw ConfigError("no two-qubit unitary for a decay protocol");
}

Mat unitary_choi(const Mat& u) {
    const Eigen::Index d = u.rows();
    Vec psi = Vec::Zero(d * d);
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index i = 0; i < d; ++i) psi(n * d + i) = u(i, n);
    psi /= std::sqrt(static_cast<double>(d));
    return psi * psi.adjoint();
}

Mat choi_of_protocol(const GateProtocol& protocol, const GateContext& context) {
    const auto& layout = context.layout;
    if (layout.size() != 2) throw ConfigError("tomography needs a two-atom layout");
    if (protocol.kind == GateKind::decay) throw ConfigError("tomography of a decay protocol is not supported");
    const auto basis = std::make_shared<Basis>(2, context.engine.max_excitation);
    Eigen::Index comp[4];
    for (int n = 0; n < 4; ++n) {
        comp[n] = basis->index({n >> 1, n & 1});
        if (comp[n] < 0) throw ConfigError("tomography basis truncates the computational subspace");
    }
    if (protocol.duration == 0.0) return unitary_choi(Mat::Identity(4, 4));
    const auto schedule = protocol_schedule(protocol, layout);
    const Eigen::Index dim = basis->dim();

    // Hermitian inputs: |n><n|, |n><m| + |m><n| and i(|n><m| - |m><n|) for n < m.
    struct Input {
        int n, m, part;
    };
    std::vector<Input> inputs;
    for (int n = 0; n < 4; ++n)
        for (int m = n; m < 4; ++m) {
            inputs.push_back({n, m, 0});
            if (m != n) inputs.push_back({n, m, 1});
        }
    std::vector<DensityMatrix> initial;
    for (const auto& [n, m, part] : inputs) {
        DensityMatrix rho{basis, Mat::Zero(dim, dim)};
        if (part == 0) {
            rho.rho(comp[n], comp[m]) = 1.0;
            rho.rho(comp[m], comp[n]) = 1.0;
        } else {
            rho.rho(comp[n], comp[m]) = I;
            rho.rho(comp[m], comp[n]) = -I;
        }
        initial.push_back(std::move(rho));
    }
    const auto traj = evolve_batch(initial, schedule, layout, context.specs, {}, context.engine, context.control);
    std::vector<Mat> outputs(inputs.size(), Mat(4, 4));
    for (std::size_t k = 0; k < inputs.size(); ++k)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) outputs[k](a, b) = traj[k].final_state.rho(comp[a], comp[b]);

    Mat choi = Mat::Zero(16, 16);
    auto place = [&](int n, int m, const Mat& e) { choi.block(n * 4, m * 4, 4, 4) += 0.25 * e; };
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto [n, m, part] = inputs[k];
        if (n == m) {
            place(n, n, outputs[k]);
            continue;
        }
        if (part != 0) continue;
        const Mat& x = outputs[k];
        const Mat& y = outputs[k + 1];
        place(n, m, 0.5 * (x - I * y));  // E(|n><m|)
        place(m, n, 0.5 * (x + I * y));
    }
    return choi;
}

double choi_leakage(const Mat& choi) { return 1.0 - choi.trace().real(); }

double process_fidelity(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ConfigError("process fidelity: dimension mismatch");
    auto check = [](const Mat& m, const char* which) {
        if (hermiticity_error(m) > 1e-8) throw NumericError(std::string(which) + " Choi matrix is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw NumericError(std::string(which) + " Choi matrix is not positive semidefinite");
    };
    check(a, "first");
    check(b, "second");
    const Mat sa = hermitian_sqrt(a);
    const Mat inner = sa * b * sa;
    const Mat r = hermitian_sqrt(0.5 * (inner + inner.adjoint()));
    const double t = r.trace().real();
    return std::clamp(t * t, 0.0, 1.0);
}

ZOptimized z_optimized_fidelity(const Mat& choi, const Mat& target) {
    if (choi.rows() != 16 || target.rows() != 4) throw ConfigError("z optimisation expects two-qubit inputs");
    Vec psi0(16);
    for (int n = 0; n < 4; ++n)
        for (int i = 0; i < 4; ++i) psi0(n * 4 + i) = 0.5 * target(i, n);
    // Phase exponent of component (n, i) for each parameter.
    auto weight = [](int p, int n, int i) {
        switch (p) {
            case 0: return n >> 1;
            case 1: return n & 1;
            case 2: return i >> 1;
            default: return i & 1;
        }
    };
    auto value = [&](const std::array<double, 4>& x) {
        Vec psi = psi0;
        for (int n = 0; n < 4; ++n)
            for (int i = 0; i < 4; ++i) {
                double th = 0.0;
                for (int p = 0; p < 4; ++p) th += weight(p, n, i) * x[p];
                psi(n * 4 + i) *= std::polar(1.0, th);
            }
        return (psi.adjoint() * choi * psi)(0, 0).real();
    };

    ZOptimized best{-1.0, value({0, 0, 0, 0}), {0, 0, 0, 0}};
    for (int start = 0; start < 16; ++start) {
        std::array<double, 4> x;
        for (int p = 0; p < 4; ++p) x[p] = (start >> p & 1) ? pi : 0.0;
        double f = value(x);
        for (int sweep = 0; sweep < 500; ++sweep) {
            const double before = f;
            for (int p = 0; p < 4; ++p) {
                // F(x_p) = c0 + Re(c1 e^{i x_p}) along one coordinate.
                auto at = [&](double v) {
                    auto y = x;
                    y[p] = v;
                    return value(y);
                };
                const double f0 = at(0.0), f1 = at(0.5 * pi), f2 = at(pi);
                const cplx c1(0.5 * (f0 - f2), 0.5 * (f0 + f2) - f1);
                x[p] = std::abs(c1) > 0.0 ? -std::arg(c1) : x[p];
                f = value(x);
            }
            if (f - before < 1e-15) break;
        }
        if (f > best.fidelity) {
            best.fidelity = f;
            best.phases = x;
        }
    }
    return best;
}

double average_gate_fidelity(double f, int d) {
    if (!(f >= -1e-12 && f <= 1.0 + 1e-12)) throw ConfigError("average gate fidelity: F outside [0, 1]");
    if (d < 2) throw ConfigError("average gate fidelity: d must be >= 2");
    return (d * f + 1.0) / (d + 1.0);
}

GateContext two_atom_context(const TwoAtomSetup& setup, double gamma_ex, double gamma_phi) {
    if (!(setup.gamma_mhz > 0.0) || !(setup.omega0_over_gamma > 0.0)) throw ConfigError("two-atom setup: bad scale");
    if (gamma_ex < 0.0 || gamma_phi < 0.0) throw ConfigError("two-atom setup: rates must be >= 0");
    const double gamma = units::angular_from_mhz(setup.gamma_mhz);
    GateContext c;
    c.layout = preset_two_atom({gamma, setup.omega0_over_gamma * gamma});
    c.specs = uniform_specs(c.layout, setup.anharmonicity_over_omega0 * c.layout.omega0, gamma_ex, gamma_phi);
    return c;
}

GateProtocol two_atom_gate(const GateContext& context, GateKind kind, double angle) {
    const double w0 = context.layout.omega0;
    const int a = context.layout.atoms[0].atom_id, b = context.layout.atoms[1].atom_id;
    switch (kind) {
        case GateKind::rxy: return rxy_protocol(context.layout, a, b, angle, 0.375 * w0);
        case GateKind::cz: return cz_protocol(context.layout, context.specs, a, b, 0.25 * w0, 0.125 * w0);
        case GateKind::czphi: return czphi_protocol(context.layout, context.specs, a, b, 0.25 * w0, angle);
        default: break;
    }
    throw ConfigError("two_atom_gate: unsupported gate kind");
}

FidelityFit fit_plane(const std::vector<SweepPoint>& points, double g) {
    if (points.size() < 3) throw ConfigError("fit needs at least three points");
    RMat a(points.size(), 3);
    Eigen::VectorXd y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = -points[i].gamma_ex / g;
        a(i, 2) = -points[i].gamma_phi / g;
        y(i) = points[i].fidelity;
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    FidelityFit f;
    f.baseline = c(0);
    f.slope_ex = c(1);
    f.slope_phi = c(2);
    f.residual = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(points.size()));
    f.nonlinear = f.residual > 1e-3;
    if (!std::isfinite(f.slope_ex) || !std::isfinite(f.slope_phi)) throw NumericError("fit produced non-finite slopes");
    return f;
}

SweepResult fidelity_sweep(GateKind kind, const TwoAtomSetup& setup, const std::vector<double>& ex_over_g,
                           const std::vector<double>& phi_over_g) {
    if (ex_over_g.empty() || phi_over_g.empty()) throw ConfigError("sweep grids must be non-empty");
    if (kind != GateKind::rxy && kind != GateKind::cz) throw ConfigError("sweep supports iSWAP and CZ");
    const double angle = kind == GateKind::rxy ? 0.5 * pi : pi;
    SweepResult r;
    r.coupling = std::abs(two_atom_gate(two_atom_context(setup, 0.0, 0.0), kind, angle).coupling);
    const Mat target = kind == GateKind::rxy ? rxy_unitary(angle) : czphi_unitary(pi);
    for (double ex : ex_over_g)
        for (double ph : phi_over_g) {
            if (ex < 0.0 || ph < 0.0) throw ConfigError("sweep rates must be >= 0");
            const auto ctx = two_atom_context(setup, ex * r.coupling, ph * r.coupling);
            const Mat choi = choi_of_protocol(two_atom_gate(ctx, kind, angle), ctx);
            const auto z = z_optimized_fidelity(choi, target);
            r.points.push_back({ex * r.coupling, ph * r.coupling, z.fidelity, z.raw, choi_leakage(choi)});
        }
    if (r.points.size() >= 3) r.fit = fit_plane(r.points, r.coupling);
    return r;
}

std::vector<CzphiScanRow> czphi_fidelity_scan(const TwoAtomSetup& setup, const std::vector<double>& phi_grid,
                                              const std::vector<double>& gamma_ex_grid, double gamma_phi) {
    if (phi_grid.empty() || gamma_ex_grid.empty()) throw ConfigError("scan grids must be non-empty");
    std::vector<CzphiScanRow> rows;
    for (double phi : phi_grid) {
        check_open_angle(phi, "czphi phase");
        for (double ex : gamma_ex_grid) {
            const auto ctx = two_atom_context(setup, ex, gamma_phi);
            const auto p = two_atom_gate(ctx, GateKind::czphi, phi);
            const auto z = z_optimized_fidelity(choi_of_protocol(p, ctx), czphi_unitary(phi));
            rows.push_back({phi, ex, p.detuning, p.duration, z.fidelity, z.raw});
        }
    }
    return rows;
}

std::vector<double> chain_df_frequencies(const CouplingLayout& chain) {
    if (chain.atoms.empty()) throw ConfigError("empty chain");
    auto df = find_df_frequencies(chain, chain.atoms[0].atom_id, 1e-9 * chain.omega0, chain.omega0);
    if (df.size() < 5) throw ConfigError("chain layout has fewer than five decoherence-free frequencies");
    df.resize(5);
    return df;
}

std::vector<double> chain_addressing(const CouplingLayout& chain, const std::vector<GateRequest>& requests) {
    const auto df = chain_df_frequencies(chain);
    const std::size_t n = chain.size();
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t site = k + 1;
        w[k] = site % 2 == 0 ? df[2] : (site % 4 == 1 ? df[1] : df[4]);
    }
    std::vector<bool> busy(n, false);
    auto claim = [&](std::size_t k) {
        if (busy[k]) throw ConfigError("addressing: atom " + std::to_string(chain.atoms[k].atom_id) + " is in two gates");
        busy[k] = true;
    };
    for (const auto& r : requests) {
        const std::size_t ka = chain.index_of(r.a);
        if (r.kind == GateKind::decay) {
            claim(ka);
            w[ka] = r.omega;
            continue;
        }
        if (r.kind == GateKind::idle) continue;
        const std::size_t kb = chain.index_of(r.b);
        if (ka + 1 != kb && kb + 1 != ka) throw ConfigError("addressing: gates must act on nearest neighbours");
        claim(ka);
        claim(kb);
        const std::size_t even = (ka + 1) % 2 == 0 ? ka : kb;
        const std::size_t odd = even == ka ? kb : ka;
        switch (r.kind) {
            case GateKind::rxy: w[even] = w[odd]; break;
            case GateKind::cz: w[even] = w[odd] - (df[1] - df[0]); break;
            case GateKind::czphi: w[even] = w[odd] - (df[1] - df[0]) + r.detuning; break;
            default: break;
        }
    }
    return w;
}

std::vector<int> grid_block(const CouplingLayout& grid, int cols, int row, int col) {
    if (cols < 1 || grid.size() % cols != 0) throw ConfigError("grid: column count does not divide the layout");
    const int rows = static_cast<int>(grid.size()) / cols;
    if (row < 1 || row > rows - 2 || col < 1 || col > cols - 2)
        throw ConfigError("grid: five-qubit block needs an interior centre");
    return {grid_atom_id(cols, row - 1, col), grid_atom_id(cols, row - 1, col + 1), grid_atom_id(cols, row, col),
            grid_atom_id(cols, row + 1, col - 1), grid_atom_id(cols, row + 1, col)};
}

std::map<int, double> grid_addressing(const CouplingLayout& grid, int cols, int row, int col,
                                      const std::vector<AtomSpec>& specs, const std::vector<GateRequest>& requests) {
    const auto block = grid_block(grid, cols, row, col);
    const int centre = block[2];
    auto df = find_df_frequencies(grid, centre, 1e-9 * grid.omega0, 0.5 * grid.omega0);
    if (df.size() < 9) throw ConfigError("grid layout has fewer than nine decoherence-free frequencies");
    const int idle_index[5] = {1, 3, 4, 6, 8};
    std::map<int, double> w;
    for (int i = 0; i < 5; ++i) w[block[i]] = df[idle_index[i]];
    if (requests.size() > 1) throw ConfigError("addressing: the block centre can take part in one gate at a time");
    for (const auto& r : requests) {
        if (r.kind == GateKind::idle) continue;
        if (r.kind == GateKind::decay) throw ConfigError("addressing: decay requests are not supported on the grid");
        const int other = r.a == centre ? r.b : (r.b == centre ? r.a : -1);
        if (other < 0 || other == centre || !w.count(other))
            throw ConfigError("addressing: gates must pair the block centre with a braided neighbour");
        switch (r.kind) {
            case GateKind::rxy: w[centre] = w[other]; break;
            case GateKind::cz: w[centre] = w[other] + anharmonicity_of(specs, other); break;
            case GateKind::czphi: w[centre] = w[other] + anharmonicity_of(specs, other) + r.detuning; break;
            default: break;
        }
    }
    return w;
}

}  // namespace giant
