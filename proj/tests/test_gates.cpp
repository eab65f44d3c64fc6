#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "giant/error.hpp"
#include "giant/gates.hpp"
#include "giant/oracle.hpp"
#include "giant/units.hpp"

using namespace giant;

namespace {

constexpr double pi = units::pi;
constexpr double two_pi = units::two_pi;

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, two_pi)); }

// Trace-norm form of the Uhlmann fidelity, ||sqrt(A) sqrt(B)||_1^2, with square
// roots taken from a fresh eigen-decomposition.
double fidelity_by_svd(const Mat& a, const Mat& b) {
    auto root = [](const Mat& m) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return Mat(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
    };
    Eigen::JacobiSVD<Mat> svd(root(a) * root(b));
    const double s = svd.singularValues().sum();
    return s * s;
}

Mat random_choi(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Mat a(16, 16);
    for (Eigen::Index i = 0; i < 16; ++i)
        for (Eigen::Index j = 0; j < 16; ++j) a(i, j) = cplx(n(rng), n(rng));
    Mat r = a * a.adjoint();
    return r / r.trace();
}

// Choi (1/4) sum |n><m| (x) E(|n><m|) to the matrix acting on column-stacked 4x4 inputs.
Mat superop_of(const Mat& choi) {
    Mat s = Mat::Zero(16, 16);
    for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) s(j * 4 + i, m * 4 + n) = 4.0 * choi(n * 4 + i, m * 4 + j);
    return s;
}

Mat choi_of(const Mat& superop) {
    Mat c = Mat::Zero(16, 16);
    for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) c(n * 4 + i, m * 4 + j) = 0.25 * superop(j * 4 + i, m * 4 + n);
    return c;
}

GateContext quiet_context(double omega0_over_gamma = 1600.0) {
    TwoAtomSetup s;
    s.omega0_over_gamma = omega0_over_gamma;
    return two_atom_context(s, 0.0, 0.0);
}

struct Chain4 {
    CouplingLayout layout = preset_chain(4, {units::angular_from_mhz(2.0), units::angular_from_ghz(3.2)});
    std::vector<double> df = chain_df_frequencies(layout);
    std::vector<AtomSpec> specs = uniform_specs(layout, df[0] - df[1], 0.0, 0.0);
    int id(int site) const { return layout.atoms[site - 1].atom_id; }
};

// Single excitation on `site` (1-based) evolved under fixed frequencies for t.
std::vector<double> chain_populations(const Chain4& c, int site, const std::vector<double>& w, double t) {
    const auto basis = std::make_shared<Basis>(4, 1);
    std::vector<int> lv(4, 0);
    lv[site - 1] = 1;
    FrequencySchedule s(4, *std::max_element(w.begin(), w.end()));
    s.hold_all(t, w);
    EngineOptions o;
    o.max_excitation = 1;
    const auto tr = evolve(DensityMatrix::product(basis, lv), s, c.layout, c.specs, {t}, o);
    std::vector<double> n(4);
    for (int k = 0; k < 4; ++k) n[k] = population(tr.final_state, k);
    return n;
}

}  // namespace

TEST(Rxy, DurationBranches) {
    EXPECT_DOUBLE_EQ(rxy_duration(pi / 2, 2.0), pi / 4);
    EXPECT_NEAR(rxy_duration(1.5 * pi, -3.0), pi / 6, 1e-15);
    EXPECT_NEAR(rxy_duration(1e-9, 5.0), 2e-10, 1e-22);
    EXPECT_THROW(rxy_duration(0.0, 1.0), ConfigError);
    EXPECT_THROW(rxy_duration(two_pi, 1.0), ConfigError);
    EXPECT_THROW(rxy_duration(1.0, 0.0), ConfigError);
}

TEST(Rxy, IswapAtDF3) {
    const auto ctx = quiet_context();
    const double gamma = ctx.layout.max_strength();
    const auto p = two_atom_gate(ctx, GateKind::rxy, pi / 2);
    EXPECT_NEAR(p.coupling / gamma, 2.1, 0.05);
    EXPECT_NEAR(p.duration, pi / (2 * p.coupling), 1e-15);
    const Mat choi = choi_of_protocol(p, ctx);
    EXPECT_GE(z_optimized_fidelity(choi, rxy_unitary(pi / 2)).fidelity, 0.999);
}

TEST(Rxy, NegativeCoupling) {
    // At 7 omega0/8 the |1>-|2> line sits at 3 omega0/4, away from the bright point at omega0/2.
    const auto ctx = quiet_context();
    const auto& l = ctx.layout;
    const auto p = rxy_protocol(l, l.atoms[0].atom_id, l.atoms[1].atom_id, 1.5 * pi, 0.875 * l.omega0);
    ASSERT_LT(p.coupling, 0.0);
    EXPECT_NEAR(p.duration, pi / (2 * std::abs(p.coupling)), 1e-15);
    const Mat choi = choi_of_protocol(p, ctx);
    EXPECT_GE(z_optimized_fidelity(choi, rxy_unitary(1.5 * pi)).fidelity, 0.999);
}

TEST(Rxy, RejectsUnbraidedOrNonDF) {
    const auto ctx = quiet_context();
    const auto& l = ctx.layout;
    const int a = l.atoms[0].atom_id, b = l.atoms[1].atom_id;
    EXPECT_THROW(rxy_protocol(l, a, b, 1.0, 0.3 * l.omega0), ConfigError);
    EXPECT_THROW(rxy_protocol(l, a, b, 1.0, 0.5 * l.omega0), ConfigError);
    EXPECT_THROW(rxy_protocol(l, a, a, 1.0, 0.375 * l.omega0), ConfigError);
    EXPECT_THROW(rxy_protocol(l, a, b, 0.0, 0.375 * l.omega0), ConfigError);
}

TEST(Rxy, CompositionAddsAngles) {
    // Large omega0 pushes the detuned exchange with |2> out of the way.
    const auto ctx = quiet_context(1e5);
    const double t1 = 0.7, t2 = 5.9;
    const Mat s1 = superop_of(choi_of_protocol(two_atom_gate(ctx, GateKind::rxy, t1), ctx));
    const Mat s2 = superop_of(choi_of_protocol(two_atom_gate(ctx, GateKind::rxy, t2), ctx));
    const Mat composed = choi_of(s2 * s1);
    const Mat target = unitary_choi(rxy_unitary(std::fmod(t1 + t2, two_pi)));
    EXPECT_GE(process_fidelity(composed, target), 1.0 - 1e-6);
}

TEST(Cz, ClosedSystemPhaseAndLeakage) {
    const auto ctx = quiet_context();
    const auto p = two_atom_gate(ctx, GateKind::cz, pi);
    EXPECT_NEAR(p.duration, pi / (std::sqrt(2.0) * std::abs(p.coupling)), 1e-15);
    const Mat choi = choi_of_protocol(p, ctx);
    EXPECT_LT(choi_leakage(choi), 1e-4);
    EXPECT_GE(z_optimized_fidelity(choi, czphi_unitary(pi)).fidelity, 0.999);
}

TEST(Cz, TwiceIsIdentity) {
    const auto ctx = quiet_context();
    const Mat once = choi_of_protocol(two_atom_gate(ctx, GateKind::cz, pi), ctx);
    const double err = 1.0 - z_optimized_fidelity(once, czphi_unitary(pi)).fidelity;
    const Mat s = superop_of(once);
    const Mat twice = choi_of(s * s);
    const auto z = z_optimized_fidelity(twice, Mat::Identity(4, 4));
    EXPECT_GE(z.fidelity, 1.0 - 2.5 * err);
}

TEST(Cz, ResonanceChecked) {
    const auto ctx = quiet_context();
    const auto& l = ctx.layout;
    EXPECT_THROW(cz_protocol(l, ctx.specs, l.atoms[0].atom_id, l.atoms[1].atom_id, 0.25 * l.omega0, 0.25 * l.omega0),
                 ConfigError);
}

TEST(Czphi, DetuningInversion) {
    const double g = 3.0;
    EXPECT_DOUBLE_EQ(czphi_detuning(pi, g), 0.0);
    EXPECT_NEAR(czphi_detuning(1.5 * pi, g) / g, 2.0 * std::sqrt(2.0) * 0.5 / std::sqrt(0.75), 1e-12);
    EXPECT_NEAR(czphi_detuning(1.5 * pi, g) / g, 1.633, 1e-3);
    EXPECT_NEAR(czphi_detuning(0.5 * pi, g) / g, -1.633, 1e-3);
    for (double phi = 0.05; phi < two_pi; phi += 0.3) EXPECT_NEAR(czphi_phase(czphi_detuning(phi, g), g), phi, 1e-12);
    EXPECT_THROW(czphi_detuning(0.0, g), ConfigError);
    EXPECT_THROW(czphi_detuning(two_pi, g), ConfigError);
    EXPECT_NEAR(czphi_duration(0.0, g), pi / (std::sqrt(2.0) * g), 1e-15);
}

TEST(Czphi, DurationPeaksAtPi) {
    const double g = 1.0;
    auto tau = [&](double phi) { return czphi_duration(czphi_detuning(phi, g), g); };
    const double peak = tau(pi);
    double prev = peak;
    for (double d = 0.05; d < 0.99 * pi; d += 0.05) {
        const double up = tau(pi + d), down = tau(pi - d);
        EXPECT_LT(up, prev);
        EXPECT_NEAR(up, down, 1e-12);
        prev = up;
    }
}

TEST(Czphi, PhaseLawFromTwoLevelBlock) {
    const double g = 1.7;
    for (int i = 0; i < 20; ++i) {
        const double delta = -4.0 * g + 8.0 * g * i / 19.0;
        // {|11>, |20>}: |20> sits delta below |11>, coupled by sqrt(2) g.
        Mat h(2, 2);
        h << 0.0, std::sqrt(2.0) * g, std::sqrt(2.0) * g, -delta;
        const double gp = std::sqrt(2.0 * g * g + 0.25 * delta * delta);
        const Mat u = oracle::two_level_block(h, pi / gp);
        EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
        EXPECT_LT(angle_gap(std::arg(u(0, 0)), czphi_phase(delta, g)), 1e-9) << "delta/g = " << delta / g;
    }
}

TEST(Czphi, ProtocolHitsRequestedPhase) {
    const auto ctx = quiet_context();
    for (double phi : {0.4 * pi, 1.3 * pi}) {
        const auto p = two_atom_gate(ctx, GateKind::czphi, phi);
        EXPECT_NEAR(czphi_phase(p.detuning, p.coupling), phi, 1e-9);
        const Mat choi = choi_of_protocol(p, ctx);
        EXPECT_GE(z_optimized_fidelity(choi, czphi_unitary(phi)).fidelity, 0.995);
    }
}

TEST(Fidelity, MatchesTraceNormOracle) {
    const Mat iswap = unitary_choi(rxy_unitary(pi / 2));
    const Mat cz = unitary_choi(czphi_unitary(pi));
    EXPECT_NEAR(process_fidelity(iswap, cz), fidelity_by_svd(iswap, cz), 1e-9);
    const Mat a = random_choi(1), b = random_choi(2);
    EXPECT_NEAR(process_fidelity(a, b), fidelity_by_svd(a, b), 1e-9);
    EXPECT_NEAR(process_fidelity(a, b), process_fidelity(b, a), 1e-9);
    EXPECT_NEAR(process_fidelity(a, a), 1.0, 1e-9);
}

TEST(Fidelity, OrthogonalChoiStatesGiveZero) {
    Mat zi = Mat::Identity(4, 4);
    zi(2, 2) = zi(3, 3) = -1.0;  // Z on the first qubit
    EXPECT_NEAR(process_fidelity(unitary_choi(Mat::Identity(4, 4)), unitary_choi(zi)), 0.0, 1e-12);
}

TEST(Fidelity, RejectsNonPositive) {
    Mat neg = Mat::Zero(16, 16);
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    EXPECT_THROW(process_fidelity(neg, unitary_choi(Mat::Identity(4, 4))), NumericError);
}

TEST(Fidelity, AverageGateFidelity) {
    EXPECT_DOUBLE_EQ(average_gate_fidelity(1.0, 4), 1.0);
    EXPECT_DOUBLE_EQ(average_gate_fidelity(0.0, 4), 0.2);
    const double x = 1e-3;
    EXPECT_NEAR(1.0 - average_gate_fidelity(1.0 - 1.57 * x, 4), 1.256 * x, 1e-12);
    EXPECT_THROW(average_gate_fidelity(1.2, 4), ConfigError);
    EXPECT_THROW(average_gate_fidelity(0.5, 1), ConfigError);
}

TEST(Fidelity, ZeroDurationIsIdentity) {
    const auto ctx = quiet_context();
    const auto p = idle_protocol({ctx.layout.atoms[0].atom_id, ctx.layout.atoms[1].atom_id},
                                 {0.25 * ctx.layout.omega0, 0.375 * ctx.layout.omega0}, 0.0);
    const Mat choi = choi_of_protocol(p, ctx);
    EXPECT_NEAR(process_fidelity(choi, unitary_choi(Mat::Identity(4, 4))), 1.0, 1e-12);
}

TEST(Fidelity, PlaneFitRecoversSlopes) {
    std::vector<SweepPoint> pts;
    const double g = 10.0;
    for (double ex : {0.0, 0.01, 0.02})
        for (double ph : {0.0, 0.01, 0.02}) pts.push_back({ex * g, ph * g, 0.999 - 1.5 * ex - 2.5 * ph, 0.0, 0.0});
    const auto f = fit_plane(pts, g);
    EXPECT_NEAR(f.baseline, 0.999, 1e-12);
    EXPECT_NEAR(f.slope_ex, 1.5, 1e-9);
    EXPECT_NEAR(f.slope_phi, 2.5, 1e-9);
    EXPECT_LT(f.residual, 1e-12);
    EXPECT_FALSE(f.nonlinear);
}

TEST(ChainAddressing, CasesFromTheFrequencyTable) {
    const Chain4 c;
    const auto& df = c.df;
    const auto idle = chain_addressing(c.layout, {});
    EXPECT_EQ(idle, (std::vector<double>{df[1], df[2], df[4], df[2]}));
    const auto h1 = chain_addressing(c.layout, {{GateKind::rxy, c.id(1), c.id(2)}, {GateKind::rxy, c.id(3), c.id(4)}});
    EXPECT_EQ(h1, (std::vector<double>{df[1], df[1], df[4], df[4]}));
    const auto h3 = chain_addressing(c.layout, {{GateKind::rxy, c.id(2), c.id(3)}});
    EXPECT_EQ(h3, (std::vector<double>{df[1], df[4], df[4], df[2]}));
    const auto cz = chain_addressing(c.layout, {{GateKind::cz, c.id(2), c.id(3)}});
    EXPECT_NEAR(cz[1], df[3], 1e-9 * c.layout.omega0);
    const auto cz12 = chain_addressing(c.layout, {{GateKind::cz, c.id(1), c.id(2)}});
    EXPECT_NEAR(cz12[1], df[0], 1e-9 * c.layout.omega0);
    EXPECT_THROW(chain_addressing(c.layout, {{GateKind::rxy, c.id(1), c.id(3)}}), ConfigError);
    EXPECT_THROW(chain_addressing(c.layout, {{GateKind::rxy, c.id(1), c.id(2)}, {GateKind::rxy, c.id(2), c.id(3)}}),
                 ConfigError);
}

TEST(ChainAddressing, SpectatorsStayDetunedAndQuiet) {
    const Chain4 c;
    const double spacing = c.df[1] - c.df[0];
    struct Case {
        std::vector<GateRequest> req;
        int a, b;
    };
    const std::vector<Case> cases = {{{{GateKind::rxy, c.id(1), c.id(2)}}, 1, 2},
                                     {{{GateKind::rxy, c.id(3), c.id(4)}}, 3, 4},
                                     {{{GateKind::rxy, c.id(2), c.id(3)}}, 2, 3}};
    for (const auto& cs : cases) {
        const auto w = chain_addressing(c.layout, cs.req);
        for (int s = 1; s < 4; ++s) {
            if (s == cs.a && s + 1 == cs.b) continue;
            EXPECT_GE(std::abs(w[s - 1] - w[s]), spacing - 1e-9 * c.layout.omega0) << "pair " << s << "," << s + 1;
        }
        const double g = exchange_coupling(c.layout, c.id(cs.a), c.id(cs.b), w[cs.a - 1]);
        const auto n = chain_populations(c, cs.a, w, pi / (2 * std::abs(g)));
        EXPECT_GT(n[cs.b - 1], 0.99);
        for (int s = 1; s <= 4; ++s)
            if (s != cs.a && s != cs.b) EXPECT_LT(n[s - 1], 1e-3) << "spectator " << s;
    }
}

TEST(Decay, ParkedAtomDecaysAtMeasuredRate) {
    const Chain4 c;
    const double gamma = units::angular_from_mhz(2.0);
    const auto pt = choose_decay_frequency(c.layout, c.id(4), 1.36 * gamma, c.df[0], c.df[4]);
    EXPECT_NEAR(pt.rate / gamma, 1.36, 1e-3);
    auto w = chain_addressing(c.layout, {});
    w[3] = pt.omega;
    const double t = 1.0 / pt.rate;
    const auto n = chain_populations(c, 4, w, t);
    EXPECT_NEAR(n[3], std::exp(-1.0), 0.02 * std::exp(-1.0));
    // Spectators only see off-resonant exchange: at most 4 g^2 / delta^2.
    for (int s = 0; s < 3; ++s) {
        const double g = exchange_coupling(c.layout, c.id(s + 1), c.id(4), 0.5 * (w[s] + w[3]));
        const double d = w[3] - w[s];
        EXPECT_LT(n[s], 4.0 * g * g / (d * d)) << "spectator " << s + 1;
    }
}

TEST(Decay, ProtocolBand) {
    const Chain4 c;
    const auto p = decay_protocol(c.layout, c.id(4), 0.2 * c.layout.omega0, 0.0, c.df[1], c.df[2]);
    EXPECT_EQ(p.duration, 0.0);
    EXPECT_THROW(decay_protocol(c.layout, c.id(4), 0.3 * c.layout.omega0, 1.0, c.df[1], c.df[2]), ConfigError);
    EXPECT_THROW(decay_protocol(c.layout, c.id(4), 0.2 * c.layout.omega0, -1.0, c.df[1], c.df[2]), ConfigError);
}

TEST(GridAddressing, BlockAssignments) {
    const auto grid = preset_grid(3, 3, {units::angular_from_mhz(2.0), units::angular_from_ghz(3.2)});
    const auto specs = uniform_specs(grid, -grid.omega0 / 20, 0.0, 0.0);
    const auto block = grid_block(grid, 3, 1, 1);
    const auto df = find_df_frequencies(grid, block[2], 1e-9 * grid.omega0, 0.5 * grid.omega0);
    ASSERT_GE(df.size(), 9u);
    const auto idle = grid_addressing(grid, 3, 1, 1, specs, {});
    const int expect[5] = {1, 3, 4, 6, 8};
    for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(idle.at(block[i]), df[expect[i]]);
    const auto rxy = grid_addressing(grid, 3, 1, 1, specs, {{GateKind::rxy, block[0], block[2]}});
    EXPECT_DOUBLE_EQ(rxy.at(block[2]), df[1]);
    const auto cz = grid_addressing(grid, 3, 1, 1, specs, {{GateKind::cz, block[0], block[2]}});
    EXPECT_NEAR(cz.at(block[2]), df[0], 1e-9 * grid.omega0);
    EXPECT_THROW(grid_addressing(grid, 3, 1, 1, specs, {{GateKind::rxy, block[0], block[1]}}), ConfigError);
    EXPECT_THROW(
        grid_addressing(grid, 3, 1, 1, specs, {{GateKind::rxy, block[0], block[2]}, {GateKind::rxy, block[4], block[2]}}),
        ConfigError);
    EXPECT_THROW(grid_block(grid, 3, 0, 1), ConfigError);
}
