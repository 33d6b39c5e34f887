#include "bqt/linalg.hpp"

#include <cmath>
#include <string>

#include "bqt/error.hpp"

namespace bqt {

Bloch QubitDensity::bloch() const {
  return Bloch(2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
               (rho(0, 0) - rho(1, 1)).real());
}

QubitDensity QubitDensity::from_bloch(const Bloch& r) {
  QubitDensity q;
  q.rho(0, 0) = 0.5 * (1.0 + r.z());
  q.rho(1, 1) = 0.5 * (1.0 - r.z());
  q.rho(0, 1) = 0.5 * Complex(r.x(), -r.y());
  q.rho(1, 0) = 0.5 * Complex(r.x(), r.y());
  return q;
}

QubitDensity QubitDensity::pure(Complex a0, Complex a1) {
  Eigen::Vector2cd v(a0, a1);
  QubitDensity q;
  q.rho = v * v.adjoint();
  return q;
}

namespace linalg {

HermitianEigen eigh(const MatX& m) {
  Eigen::SelfAdjointEigenSolver<MatX> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::MalformedState, "Hermitian eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

MatX sqrt_psd(const MatX& m, double tol) {
  HermitianEigen e = eigh(m);
  Eigen::VectorXd roots(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double v = e.values(i);
    if (v < -tol) {
      throw Error(ErrorCode::MalformedState,
                  "negative eigenvalue " + std::to_string(v) + " in square root");
    }
    roots(i) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return e.vectors * roots.asDiagonal() * e.vectors.adjoint();
}

double hermiticity_defect(const MatX& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_density(const MatX& m, double tol, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::MalformedState, std::string(what) + ": not a square matrix");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::MalformedState, std::string(what) + ": non-finite entries");
  }
  if (hermiticity_defect(m) > tol) {
    throw Error(ErrorCode::MalformedState, std::string(what) + ": not Hermitian");
  }
  if (std::abs(m.trace() - Complex(1.0)) > tol) {
    throw Error(ErrorCode::MalformedState, std::string(what) + ": trace differs from 1");
  }
  MatX h = 0.5 * (m + m.adjoint());
  if (eigh(h).values(0) < -tol) {
    throw Error(ErrorCode::MalformedState, std::string(what) + ": not positive semidefinite");
  }
}

const Mat2& pauli_x() {
  static const Mat2 x = (Mat2() << 0, 1, 1, 0).finished();
  return x;
}

const Mat2& pauli_y() {
  static const Mat2 y = (Mat2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return y;
}

const Mat2& pauli_z() {
  static const Mat2 z = (Mat2() << 1, 0, 0, -1).finished();
  return z;
}

}  // namespace linalg
}  // namespace bqt
