#pragma once

#include <vector>

#include "bqt/types.hpp"

namespace bqt::linalg {

// Eigenvalues below zero but above this are treated as round-off.
inline constexpr double kClampTolerance = 1e-10;

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  MatX vectors;            // columns
};

HermitianEigen eigh(const MatX& m);

// Principal square root of a PSD matrix. Eigenvalues in [-tol, 0) are clamped
// to zero; more negative ones raise MalformedState.
MatX sqrt_psd(const MatX& m, double tol = kClampTolerance);

double hermiticity_defect(const MatX& m);

// Throws MalformedState unless m is Hermitian, unit-trace, and PSD, all to tol.
void require_density(const MatX& m, double tol, const char* what);

const Mat2& pauli_x();
const Mat2& pauli_y();
const Mat2& pauli_z();

}  // namespace bqt::linalg
