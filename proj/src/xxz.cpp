#include "giant/xxz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "giant/error.hpp"
#include "giant/units.hpp"

namespace giant {

void XXZModel::validate() const {
    if (sites < 2 || sites % 2 != 0) throw ConfigError("xxz: the site count must be even and at least 2");
    for (double v : {J, Jz, Gamma})
        if (!std::isfinite(v)) throw ConfigError("xxz: non-finite coupling");
    if (Gamma < 0.0) throw ConfigError("xxz: Gamma must be >= 0");
}

int TrotterPlan::count(PlanOp op) const {
    return static_cast<int>(std::count_if(step.begin(), step.end(), [op](const PlanGate& g) { return g.op == op; }));
}

double wrap_angle(double a) {
    double r = std::fmod(a, units::two_pi);
    if (r < 0.0) r += units::two_pi;
    if (r >= units::two_pi) r = 0.0;
    return r;
}

namespace {

// An angle that wraps to within this of 0 mod 2 pi is treated as the identity.
constexpr double angle_floor = 1e-12;

bool nontrivial(double wrapped) { return wrapped > angle_floor && wrapped < units::two_pi - angle_floor; }

}  // namespace

TrotterPlan decompose(const XXZModel& model, double t, int steps) {
    model.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("decompose: t must be positive");
    if (steps < 1) throw ConfigError("decompose: at least one Trotter step is required");
    TrotterPlan p;
    p.model = model;
    p.t = t;
    p.steps = steps;
    p.dt = t / steps;
    const int n = model.sites;

    auto pairs = [&](int layer, int first) {
        const bool xy = layer == 1 || layer == 3;
        for (int a = first; a + 1 < n; a += 2) {
            PlanGate g;
            g.layer = layer;
            g.a = a;
            g.b = a + 1;
            if (xy) {
                g.op = PlanOp::rxy;
                g.theta = wrap_angle(2.0 * model.J * p.dt);
                if (!nontrivial(g.theta)) continue;
            } else {
                g.op = PlanOp::rzz;
                g.phi0 = -model.Jz * p.dt;
                g.cz_phase = wrap_angle(4.0 * g.phi0);
                g.z_phase = -2.0 * g.phi0;
                if (!nontrivial(g.cz_phase) && !nontrivial(wrap_angle(g.z_phase))) continue;
            }
            p.step.push_back(g);
        }
    };
    pairs(1, 0);
    pairs(2, 0);
    pairs(3, 1);
    pairs(4, 1);
    if (model.Gamma > 0.0) {
        PlanGate g;
        g.op = PlanOp::decay;
        g.layer = 5;
        g.a = n - 1;
        g.decay = model.Gamma * p.dt;
        p.step.push_back(g);
    }
    return p;
}

}  // namespace giant
