#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace entanglemeter {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Seeded engine used by every randomized routine in the library.
using Rng = std::mt19937_64;

/// Ascending eigenvalues of a Hermitian matrix. Only the lower triangle is read.
inline RealVector hermitian_eigenvalues(const Matrix& h) {
  if (h.rows() == 1) {
    return RealVector::Constant(1, h(0, 0).real());
  }
  if (h.rows() == 2) {
    // closed form; this path dominates the roof search on qubit blocks
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(1, 0)));
    RealVector out(2);
    out << mean - half_gap, mean + half_gap;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// ‖H‖₁ for Hermitian H: sum of absolute eigenvalues.
inline double trace_norm_hermitian(const Matrix& h) {
  return hermitian_eigenvalues(h).cwiseAbs().sum();
}

/// ‖M‖₁ for an arbitrary (possibly rectangular) matrix: sum of singular values.
inline double trace_norm(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

/// Largest elementwise |M - M†|.
inline double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// Vector of i.i.d. standard complex Gaussians (real and imaginary parts N(0, 1/2)).
inline Vector complex_gaussian(Index size, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = cplx(normal(rng), normal(rng));
  return v;
}

inline Vector random_unit_vector(Index size, Rng& rng) {
  Vector v = complex_gaussian(size, rng);
  return v / v.norm();
}

/// Orthonormalizes the columns of a tall matrix (rows >= cols). The result spans
/// the same column space; each column's phase follows the R factor's diagonal.
inline Matrix orthonormal_columns(const Matrix& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < x.cols(); ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

/// Haar-distributed d×d unitary (Ginibre matrix + phase-corrected QR).
inline Matrix haar_unitary(Index d, Rng& rng) {
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j) g.col(j) = complex_gaussian(d, rng);
  return orthonormal_columns(g);
}

}  // namespace entanglemeter
