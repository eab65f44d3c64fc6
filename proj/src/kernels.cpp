#include "giant/lindblad.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace giant {

CompiledGenerator CompiledGenerator::from(const LindbladGenerator& gen) {
    CompiledGenerator c;
    c.heff = gen.effective_hamiltonian();
    c.heff.makeCompressed();
    c.jumps = gen.channels;
    for (auto& j : c.jumps) j.op.makeCompressed();
    return c;
}

// out = -i (Heff rho - rho Heff^dag) + sum_k rate_k J_k rho J_k^dag, for Hermitian rho.
// The Hamiltonian part is X + X^dag with X = -i Heff rho, and each jump term is
// (J rho) J^dag. Work is split over columns.
void lindblad_rhs(const CompiledGenerator& gen, const Mat& rho, Mat& out, Mat& scratch) {
    const Eigen::Index d = rho.rows();
    out.resize(d, d);
    scratch.resize(d, d);
    const SpMat& h = gen.heff;

#pragma omp parallel for schedule(static) if (d >= 32)
    for (Eigen::Index b = 0; b < d; ++b) scratch.col(b).noalias() = -I * (h * rho.col(b));
#pragma omp parallel for schedule(static) if (d >= 32)
    for (Eigen::Index b = 0; b < d; ++b) out.col(b) = scratch.col(b) + scratch.row(b).adjoint();

    for (const auto& ch : gen.jumps) {
        const SpMat& j = ch.op;
#pragma omp parallel for schedule(static) if (d >= 32)
        for (Eigen::Index b = 0; b < d; ++b) scratch.col(b).noalias() = j * rho.col(b);
#pragma omp parallel for schedule(static) if (d >= 32)
        for (Eigen::Index b = 0; b < d; ++b)
            for (SpMat::InnerIterator it(j, b); it; ++it) out.col(b) += (ch.rate * std::conj(it.value())) * scratch.col(it.col());
    }
}

Mat lindblad_rhs_reference(const LindbladGenerator& gen, const Mat& rho) {
    Mat heff = gen.hamiltonian;
    for (const auto& c : gen.channels) {
        const Mat op = c.op;
        heff -= cplx(0.0, 0.5 * c.rate) * op.adjoint() * op;
    }
    Mat out = -I * (heff * rho - rho * heff.adjoint());
    for (const auto& c : gen.channels) {
        const Mat op = c.op;
        out += c.rate * op * rho * op.adjoint();
    }
    return out;
}

Mat liouvillian(const LindbladGenerator& gen) {
    const Eigen::Index d = gen.basis->dim();
    const Mat id = Mat::Identity(d, d);
    const Mat heff = Mat(gen.effective_hamiltonian());
    Mat l = -I * kron(id, heff) + I * kron(heff.conjugate(), id);
    for (const auto& c : gen.channels) {
        const Mat op = c.op;
        l += c.rate * kron(op.conjugate(), op);
    }
    return l;
}

}  // namespace giant
