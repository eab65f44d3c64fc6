#include "giant/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "giant/error.hpp"

namespace giant::oracle {

namespace {

void check_sites(int sites) {
    if (sites < 1) throw ConfigError("oracle: at least one site is required");
    if (sites > max_sites) throw CapacityError("oracle: " + std::to_string(sites) + " sites exceed the dense limit");
}

Eigen::Index dim_of(int sites) { return Eigen::Index{1} << sites; }

int bit(Eigen::Index state, int sites, int site) { return static_cast<int>((state >> (sites - 1 - site)) & 1); }

struct Liouvillian {
    Mat h;
    Mat jump;     // sqrt(Gamma) s-
    Mat jump_dag_jump;

    Mat apply(const Mat& rho) const {
        Mat out = -I * (h * rho - rho * h);
        if (jump.size() > 0) out += jump * rho * jump.adjoint() - 0.5 * (jump_dag_jump * rho + rho * jump_dag_jump);
        return out;
    }
};

Liouvillian model_liouvillian(const XXZModel& m) {
    Liouvillian l;
    l.h = xxz_hamiltonian(m);
    if (m.Gamma > 0.0) {
        l.jump = std::sqrt(m.Gamma) * sigma_minus(m.sites, m.sites - 1);
        l.jump_dag_jump = l.jump.adjoint() * l.jump;
    }
    return l;
}

void rk4(const Liouvillian& l, Mat& rho, double span, double h) {
    if (span <= 0.0) return;
    const auto n = static_cast<long long>(std::ceil(span / h - 1e-9));
    const double dt = span / static_cast<double>(n);
    for (long long s = 0; s < n; ++s) {
        const Mat k1 = l.apply(rho);
        const Mat k2 = l.apply(rho + 0.5 * dt * k1);
        const Mat k3 = l.apply(rho + 0.5 * dt * k2);
        const Mat k4 = l.apply(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

double step_size(const XXZModel& m, const ExactOptions& o) {
    const double scale = std::max({std::abs(m.J), std::abs(m.Jz), m.Gamma});
    if (!(o.step_scale > 0.0)) throw ConfigError("oracle: step scale must be positive");
    return scale > 0.0 ? o.step_scale / scale : 0.0;
}

void check_state(const Mat& rho, int sites) {
    if (rho.rows() != dim_of(sites) || rho.cols() != dim_of(sites))
        throw ConfigError("oracle: state dimension does not match the site count");
}

}  // namespace

Mat sigma_minus(int sites, int site) {
    check_sites(sites);
    if (site < 0 || site >= sites) throw ConfigError("oracle: site out of range");
    const Eigen::Index d = dim_of(sites);
    const Eigen::Index mask = Eigen::Index{1} << (sites - 1 - site);
    Mat s = Mat::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        if (k & mask) s(k ^ mask, k) = 1.0;
    return s;
}

Mat number_operator(int sites, int site) {
    const Mat s = sigma_minus(sites, site);
    return s.adjoint() * s;
}

Mat sigma_z(int sites, int site) {
    const Mat s = sigma_minus(sites, site);
    return s.adjoint() * s - s * s.adjoint();
}

Mat xxz_hamiltonian(const XXZModel& m) {
    m.validate();
    check_sites(m.sites);
    const Eigen::Index d = dim_of(m.sites);
    Mat h = Mat::Zero(d, d);
    for (int k = 0; k + 1 < m.sites; ++k) {
        const Mat a = sigma_minus(m.sites, k), b = sigma_minus(m.sites, k + 1);
        // sx sx + sy sy = 2 (s+ s- + s- s+)
        h += 2.0 * m.J * (a.adjoint() * b + a * b.adjoint());
        h += m.Jz * sigma_z(m.sites, k) * sigma_z(m.sites, k + 1);
    }
    return h;
}

Mat excitation_state(int sites, int site) {
    check_sites(sites);
    if (site < 0 || site >= sites) throw ConfigError("oracle: site out of range");
    const Eigen::Index d = dim_of(sites);
    Mat rho = Mat::Zero(d, d);
    const Eigen::Index k = Eigen::Index{1} << (sites - 1 - site);
    rho(k, k) = 1.0;
    return rho;
}

std::vector<double> populations(const Mat& rho, int sites) {
    check_state(rho, sites);
    std::vector<double> n(sites, 0.0);
    for (Eigen::Index k = 0; k < rho.rows(); ++k)
        for (int s = 0; s < sites; ++s)
            if (bit(k, sites, s)) n[s] += rho(k, k).real();
    return n;
}

Traces exact_lindblad(const XXZModel& model, const std::vector<double>& times, const Mat& rho0,
                      const ExactOptions& options) {
    model.validate();
    check_sites(model.sites);
    check_state(rho0, model.sites);
    const auto l = model_liouvillian(model);
    const double h = step_size(model, options);
    Traces out;
    Mat rho = rho0;
    double now = 0.0;
    for (double t : times) {
        if (!(t >= now) || !std::isfinite(t)) throw ConfigError("oracle: times must be ascending and nonnegative");
        if (h > 0.0) rk4(l, rho, t - now, h);
        now = t;
        out.times.push_back(t);
        out.n.push_back(populations(rho, model.sites));
    }
    return out;
}

Mat exact_state(const XXZModel& model, double t, const Mat& rho0, const ExactOptions& options) {
    model.validate();
    check_sites(model.sites);
    check_state(rho0, model.sites);
    if (!(t >= 0.0)) throw ConfigError("oracle: t must be nonnegative");
    Mat rho = rho0;
    const double h = step_size(model, options);
    if (h > 0.0) rk4(model_liouvillian(model), rho, t, h);
    return rho;
}

Mat rxy_gate(double theta) {
    Mat u = Mat::Identity(4, 4);
    u(1, 1) = u(2, 2) = std::cos(theta);
    u(1, 2) = u(2, 1) = -I * std::sin(theta);
    return u;
}

Mat rzz_gate(double phi0) {
    // sz sz on |00>, |01>, |10>, |11> with 1 excited: +1, -1, -1, +1
    Mat u = Mat::Zero(4, 4);
    const double zz[4] = {1.0, -1.0, -1.0, 1.0};
    for (int k = 0; k < 4; ++k) u(k, k) = std::polar(1.0, phi0 * zz[k]);
    return u;
}

Mat embed_pair(const Mat& u, int sites, int a, int b) {
    check_sites(sites);
    if (a < 0 || b < 0 || a >= sites || b >= sites || a == b) throw ConfigError("oracle: bad gate sites");
    const Eigen::Index d = dim_of(sites);
    const Eigen::Index ma = Eigen::Index{1} << (sites - 1 - a), mb = Eigen::Index{1} << (sites - 1 - b);
    Mat full = Mat::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        const int in = 2 * bit(col, sites, a) + bit(col, sites, b);
        const Eigen::Index rest = col & ~(ma | mb);
        for (int out = 0; out < 4; ++out) {
            const Eigen::Index row = rest | ((out >> 1) ? ma : 0) | ((out & 1) ? mb : 0);
            full(row, col) = u(out, in);
        }
    }
    return full;
}

Traces ideal_circuit(const TrotterPlan& plan, const Mat& rho0) {
    const int n = plan.model.sites;
    check_sites(n);
    check_state(rho0, n);
    // One Trotter step as a list of Kraus sets.
    std::vector<std::vector<Mat>> ops;
    for (const auto& g : plan.step) {
        switch (g.op) {
            case PlanOp::rxy: ops.push_back({embed_pair(rxy_gate(g.theta), n, g.a, g.b)}); break;
            case PlanOp::rzz: ops.push_back({embed_pair(rzz_gate(g.phi0), n, g.a, g.b)}); break;
            case PlanOp::decay: {
                const double p = 1.0 - std::exp(-g.decay);
                const Mat s = sigma_minus(n, g.a);
                const Mat k0 = Mat::Identity(s.rows(), s.cols()) + (std::sqrt(1.0 - p) - 1.0) * s.adjoint() * s;
                ops.push_back({k0, std::sqrt(p) * s});
                break;
            }
        }
    }
    Traces out;
    Mat rho = rho0;
    out.times.push_back(0.0);
    out.n.push_back(populations(rho, n));
    for (int s = 1; s <= plan.steps; ++s) {
        for (const auto& kraus : ops) {
            Mat next = Mat::Zero(rho.rows(), rho.cols());
            for (const auto& k : kraus) next += k * rho * k.adjoint();
            rho = std::move(next);
        }
        out.times.push_back(plan.dt * s);
        out.n.push_back(populations(rho, n));
    }
    return out;
}

Mat two_level_block(const Mat& h, double t) {
    if (h.rows() != 2 || h.cols() != 2) throw ConfigError("two_level_block: expected a 2x2 matrix");
    if (hermiticity_error(h) > 1e-12 * std::max(1.0, h.norm()))
        throw ConfigError("two_level_block: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
    Vec phases(2);
    for (int k = 0; k < 2; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ErrorReport error_report(const Traces& simulated, const Traces& exact) {
    if (simulated.times.size() != exact.times.size()) throw ConfigError("error_report: time grids differ in length");
    ErrorReport r;
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < exact.times.size(); ++i) {
        if (std::abs(simulated.times[i] - exact.times[i]) > 1e-9 * std::max(1.0, std::abs(exact.times[i])))
            throw ConfigError("error_report: time grids differ");
        if (simulated.n[i].size() != exact.n[i].size()) throw ConfigError("error_report: site counts differ");
        std::vector<double> row;
        double m = 0.0;
        for (std::size_t k = 0; k < exact.n[i].size(); ++k) {
            const double d = exact.n[i][k] - simulated.n[i][k];
            row.push_back(d);
            m = std::max(m, std::abs(d));
            total += std::abs(d);
            ++count;
        }
        r.times.push_back(exact.times[i]);
        r.dn.push_back(std::move(row));
        r.max_per_time.push_back(m);
        r.max_abs = std::max(r.max_abs, m);
    }
    r.mean_abs = count ? total / static_cast<double>(count) : 0.0;
    return r;
}

std::vector<int> optimal_steps(const std::vector<int>& steps, const std::vector<ErrorReport>& reports) {
    if (steps.empty() || steps.size() != reports.size()) throw ConfigError("optimal_steps: one report per step count");
    const std::size_t nt = reports.front().times.size();
    for (const auto& r : reports)
        if (r.times.size() != nt) throw ConfigError("optimal_steps: reports use different time grids");
    std::vector<int> best(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        std::size_t arg = 0;
        for (std::size_t j = 1; j < reports.size(); ++j)
            if (reports[j].max_per_time[i] < reports[arg].max_per_time[i]) arg = j;
        best[i] = steps[arg];
    }
    return best;
}

}  // namespace giant::oracle
