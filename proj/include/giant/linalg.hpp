#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace giant {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr cplx I{0.0, 1.0};

// Dense matrix exponential (scaling and squaring, Pade).
Mat expm(const Mat& a);

// Square root of a Hermitian matrix with negative eigenvalues clamped to zero.
Mat hermitian_sqrt(const Mat& a);

// Kronecker product of dense matrices.
Mat kron(const Mat& a, const Mat& b);

double hermiticity_error(const Mat& a);

}  // namespace giant
