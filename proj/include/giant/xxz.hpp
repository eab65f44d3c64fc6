#pragma once

#include <vector>

namespace giant {

// H = sum_k J (sx sx + sy sy) + Jz sz sz on neighbouring sites, with
// L = sqrt(Gamma) s- on the last site. Rates in rad/us (or any consistent unit).
struct XXZModel {
    int sites = 4;
    double J = 1.0;
    double Jz = 0.0;
    double Gamma = 0.0;
    void validate() const;
};

enum class PlanOp { rxy, rzz, decay };

// One gate of a Trotter step. Sites are 0-based.
struct PlanGate {
    PlanOp op = PlanOp::rxy;
    int layer = 1;          // 1..4 for H1..H4, 5 for the end-site decay
    int a = 0;
    int b = -1;
    double theta = 0.0;     // rxy: RXY(theta) = exp(-i theta (s+ s- + s- s+)), in (0, 2 pi)
    double phi0 = 0.0;      // rzz: exp(i phi0 sz sz) with phi0 = -Jz dt
    double cz_phase = 0.0;  // rzz: CZphi angle 4 phi0 reduced into (0, 2 pi)
    double z_phase = 0.0;   // rzz: phase -2 phi0 on |1> of both qubits
    double decay = 0.0;     // Gamma dt
};

struct TrotterPlan {
    XXZModel model;
    double t = 0.0;
    int steps = 1;
    double dt = 0.0;
    std::vector<PlanGate> step;  // H1, H2, H3, H4, L5 order; zero terms omitted

    int count(PlanOp op) const;
};

// Reduces an angle into [0, 2 pi).
double wrap_angle(double a);

TrotterPlan decompose(const XXZModel& model, double t, int steps);

}  // namespace giant
