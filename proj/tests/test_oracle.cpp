#include <cmath>

#include <gtest/gtest.h>

#include "giant/error.hpp"
#include "giant/oracle.hpp"
#include "giant/units.hpp"
#include "giant/xxz.hpp"

using namespace giant;
using namespace giant::oracle;

namespace {

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(t_max * i / n);
    return t;
}

double max_error(const Traces& a, const Traces& b) { return error_report(a, b).max_abs; }

}  // namespace

TEST(Operators, NumberAndSigmaZAgree) {
    const Mat rho = excitation_state(3, 1);
    for (int k = 0; k < 3; ++k) {
        const double n = (number_operator(3, k) * rho).trace().real();
        const double z = (sigma_z(3, k) * rho).trace().real();
        EXPECT_NEAR(n, 0.5 * (z + 1.0), 1e-12);
    }
    const auto n = populations(rho, 3);
    EXPECT_EQ(n, (std::vector<double>{0.0, 1.0, 0.0}));
    EXPECT_THROW(sigma_minus(max_sites + 1, 0), CapacityError);
    EXPECT_THROW(sigma_minus(2, 2), ConfigError);
}

TEST(Operators, HamiltonianIsHermitianAndConservesExcitations) {
    const Mat h = xxz_hamiltonian({4, 0.7, 1.3, 0.0});
    EXPECT_LT(hermiticity_error(h), 1e-14);
    Mat total = Mat::Zero(h.rows(), h.cols());
    for (int k = 0; k < 4; ++k) total += number_operator(4, k);
    EXPECT_LT((h * total - total * h).norm(), 1e-12);
}

TEST(Exact, TwoSiteSwapIsSinSquared) {
    const double J = 0.8;
    const auto ts = grid(3.0, 30);
    const auto tr = exact_lindblad({2, J, 0.0, 0.0}, ts, excitation_state(2, 0));
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double s = std::sin(2.0 * J * ts[i]);
        EXPECT_NEAR(tr.n[i][1], s * s, 1e-9);
        EXPECT_NEAR(tr.n[i][0] + tr.n[i][1], 1.0, 1e-12);
    }
}

TEST(Exact, NoCouplingMeansConstantTraces) {
    const auto tr = exact_lindblad({4, 0.0, 0.0, 0.0}, grid(2.0, 5), excitation_state(4, 2));
    for (const auto& n : tr.n) EXPECT_EQ(n, (std::vector<double>{0.0, 0.0, 1.0, 0.0}));
}

TEST(Exact, TotalExcitationNeverGrows) {
    const auto tr = exact_lindblad({4, 1.0, 0.5, 1.0}, grid(4.0, 80), excitation_state(4, 0));
    double prev = 1.0 + 1e-12;
    for (const auto& n : tr.n) {
        double s = 0.0;
        for (double v : n) s += v;
        EXPECT_LE(s, prev + 1e-12);
        prev = s;
    }
    EXPECT_LT(prev, 0.9);
}

TEST(Exact, StepHalvingIsConverged) {
    const XXZModel m{4, 1.0, 2.0, 1.0};
    const auto ts = grid(2.0, 10);
    const auto a = exact_lindblad(m, ts, excitation_state(4, 0));
    const auto b = exact_lindblad(m, ts, excitation_state(4, 0), {0.5e-3});
    EXPECT_LT(max_error(a, b), 1e-10);
}

TEST(Exact, ClosedEvolutionConservesEnergyAndPurity) {
    const XXZModel m{4, 1.0, 1.5, 0.0};
    Mat psi = Mat::Zero(16, 1);
    psi(8) = 0.6;
    psi(5) = cplx(0.0, 0.8);
    const Mat rho0 = psi * psi.adjoint();
    const Mat h = xxz_hamiltonian(m);
    const Mat rho = exact_state(m, 3.0, rho0);
    const double e0 = (h * rho0).trace().real(), e1 = (h * rho).trace().real();
    EXPECT_NEAR(e1, e0, 1e-9 * std::abs(e0));
    EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-9);
}

TEST(Exact, RejectsBadTimes) {
    const XXZModel m{2, 1.0, 0.0, 0.0};
    EXPECT_THROW(exact_lindblad(m, {1.0, 0.5}, excitation_state(2, 0)), ConfigError);
    EXPECT_THROW(exact_lindblad(m, {-1.0}, excitation_state(2, 0)), ConfigError);
    EXPECT_THROW(exact_lindblad(m, {1.0}, excitation_state(3, 0)), ConfigError);
}

TEST(Gates, RzzIsDiagonalPhase) {
    const Mat u = rzz_gate(0.3);
    EXPECT_NEAR(std::arg(u(0, 0)), 0.3, 1e-15);
    EXPECT_NEAR(std::arg(u(1, 1)), -0.3, 1e-15);
    EXPECT_LT((u * u.adjoint() - Mat::Identity(4, 4)).norm(), 1e-14);
}

TEST(Gates, EmbeddedPairMatchesDirectExponential) {
    // exp(-i theta (s+_a s-_b + h.c.)) built from the operators directly
    const int n = 3, a = 0, b = 2;
    const double theta = 0.9;
    const Mat sa = sigma_minus(n, a), sb = sigma_minus(n, b);
    const Mat x = sa.adjoint() * sb + sb.adjoint() * sa;
    const Mat direct = expm(Mat(-I * theta * x));
    EXPECT_LT((embed_pair(rxy_gate(theta), n, a, b) - direct).norm(), 1e-12);
    EXPECT_THROW(embed_pair(rxy_gate(theta), n, 1, 1), ConfigError);
}

TEST(Circuit, QuarterTurnSwapsTheFirstPair) {
    TrotterPlan p;
    p.model = {2, 1.0, 0.0, 0.0};
    p.steps = 1;
    p.dt = 1.0;
    PlanGate g;
    g.op = PlanOp::rxy;
    g.a = 0;
    g.b = 1;
    g.theta = 0.5 * units::pi;
    p.step.push_back(g);
    const auto tr = ideal_circuit(p, excitation_state(2, 0));
    EXPECT_NEAR(tr.n.back()[1], 1.0, 1e-14);
    EXPECT_NEAR(tr.n.back()[0], 0.0, 1e-14);
}

TEST(Circuit, DecayChannelMatchesExponential) {
    const XXZModel m{2, 0.0, 0.0, 0.7};
    const auto plan = decompose(m, 2.0, 5);
    const auto tr = ideal_circuit(plan, excitation_state(2, 1));
    for (std::size_t i = 0; i < tr.times.size(); ++i) EXPECT_NEAR(tr.n[i][1], std::exp(-0.7 * tr.times[i]), 1e-12);
}

TEST(Circuit, ConvergesToExactForManySteps) {
    const XXZModel m{4, 1.0, 0.0, 1.0};
    const auto rho0 = excitation_state(4, 0);
    double worst = 0.0;
    for (double t : {1.0, 2.0, 3.0, 4.0}) {
        const auto ideal = ideal_circuit(decompose(m, t, 400), rho0);
        const auto exact = exact_lindblad(m, {t}, rho0);
        for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(ideal.n.back()[k] - exact.n.back()[k]));
    }
    EXPECT_LT(worst, 2e-3);
}

TEST(Circuit, FirstOrderErrorHalvesWithSteps) {
    const XXZModel m{4, 1.0, 0.0, 1.0};
    const auto rho0 = excitation_state(4, 0);
    const double t = 2.0;
    const auto exact = exact_lindblad(m, {t}, rho0).n.back();
    auto err = [&](int l) {
        const auto n = ideal_circuit(decompose(m, t, l), rho0).n.back();
        double e = 0.0;
        for (int k = 0; k < 4; ++k) e = std::max(e, std::abs(n[k] - exact[k]));
        return e;
    };
    for (int l : {10, 20, 40}) {
        const double r = err(l) / err(2 * l);
        EXPECT_GE(r, 1.5) << "l = " << l;
        EXPECT_LE(r, 2.5) << "l = " << l;
    }
}

TEST(TwoLevel, BlockPropagator) {
    Mat h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    EXPECT_LT((two_level_block(h, 0.0) - Mat::Identity(2, 2)).norm(), 1e-14);
    const Mat u = two_level_block(h, units::pi);
    EXPECT_NEAR(u(0, 0).real(), -1.0, 1e-12);
    Mat bad = h;
    bad(0, 1) = 2.0;
    EXPECT_THROW(two_level_block(bad, 1.0), ConfigError);
    EXPECT_THROW(two_level_block(Mat::Identity(3, 3), 1.0), ConfigError);
}

TEST(Report, TrivialCases) {
    Traces a{{0.0, 1.0}, {{1.0, 0.0}, {0.5, 0.5}}};
    const auto same = error_report(a, a);
    EXPECT_EQ(same.max_abs, 0.0);
    EXPECT_EQ(same.mean_abs, 0.0);
    Traces b = a;
    b.n[1][0] += 0.01;
    const auto off = error_report(b, a);
    EXPECT_NEAR(off.max_abs, 0.01, 1e-15);
    EXPECT_NEAR(off.dn[1][0], -0.01, 1e-15);
    Traces c{{0.0, 2.0}, a.n};
    EXPECT_THROW(error_report(c, a), ConfigError);
    Traces d{{0.0}, {{1.0, 0.0}}};
    EXPECT_THROW(error_report(d, a), ConfigError);
}

TEST(Report, OptimalStepsPicksSmallestError) {
    ErrorReport small, large;
    small.times = large.times = {0.0, 1.0};
    small.max_per_time = {0.1, 0.3};
    large.max_per_time = {0.2, 0.1};
    EXPECT_EQ(optimal_steps({10, 20}, {small, large}), (std::vector<int>{10, 20}));
    EXPECT_THROW(optimal_steps({10}, {small, large}), ConfigError);
}
