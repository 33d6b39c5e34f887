#pragma once

#include <complex>

#include <Eigen/Dense>

namespace bqt {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using Bloch = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

// The pre-shared channel: overlap p in [0,1], probe count n >= 2, and the
// parity index m, of which only the parity matters.
struct ChannelParams {
  double p = 0.0;
  int n = 3;
  int m = 0;

  // cos(m*pi) as an exact +-1.
  double parity_sign() const noexcept { return (m % 2 == 0) ? 1.0 : -1.0; }

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

// Single-qubit density matrix in the logical basis {|eta_e>, |eta_o>}.
struct QubitDensity {
  Mat2 rho = Mat2::Zero();

  Bloch bloch() const;
  static QubitDensity from_bloch(const Bloch& r);
  static QubitDensity pure(Complex a0, Complex a1);
};

// Two-qubit density matrix in the ordered basis {ee, eo, oe, oo}; the first
// factor is the more significant index bit.
struct PairDensity {
  Mat4 rho = Mat4::Zero();
};

}  // namespace bqt
