#include "bqt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"
#include "bqt/linalg.hpp"

namespace bqt::metrics {

namespace {

constexpr double kStateTolerance = 1e-9;
constexpr double kSupportFloor = 1e-12;
constexpr double kMinGap = 1e-8;

double clamped_sqrt(double v) {
  if (v < -linalg::kClampTolerance) {
    throw Error(ErrorCode::MalformedState, "negative eigenvalue " + std::to_string(v));
  }
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

struct Spectrum {
  Eigen::VectorXd values;
  MatX vectors;
};

Spectrum spectrum_at(const ParamFamily& family, double xi) {
  MatX rho = family.evaluate(xi);
  linalg::HermitianEigen e = linalg::eigh(0.5 * (rho + rho.adjoint()));
  return {e.values, e.vectors};
}

// Rotate each column of `moved` so that its overlap with the matching column
// of `ref` is real and non-negative.
void align_phases(const MatX& ref, MatX& moved) {
  for (Eigen::Index k = 0; k < ref.cols(); ++k) {
    Complex ov = ref.col(k).dot(moved.col(k));
    double mag = std::abs(ov);
    if (mag > 0.0) moved.col(k) *= std::conj(ov) / mag;
  }
}

struct Derivatives {
  Eigen::VectorXd dvalues;
  MatX dvectors;
};

Derivatives central_difference(const ParamFamily& family, const Spectrum& at, double xi0,
                               double h) {
  Spectrum lo = spectrum_at(family, xi0 - h);
  Spectrum hi = spectrum_at(family, xi0 + h);
  align_phases(at.vectors, lo.vectors);
  align_phases(at.vectors, hi.vectors);
  return {(hi.values - lo.values) / (2.0 * h), (hi.vectors - lo.vectors) / (2.0 * h)};
}

}  // namespace

QubitDensity partial_trace(const PairDensity& rho, Keep keep) {
  linalg::require_density(rho.rho, kStateTolerance, "partial_trace input");
  QubitDensity out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < 2; ++k) {
        s += keep == Keep::First ? rho.rho(2 * i + k, 2 * j + k) : rho.rho(2 * k + i, 2 * k + j);
      }
      out.rho(i, j) = s;
    }
  }
  return out;
}

double concurrence(const PairDensity& state) {
  linalg::require_density(state.rho, kStateTolerance, "concurrence input");
  const Mat2& sy = linalg::pauli_y();
  Mat4 flip;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) flip(i, j) = sy(i / 2, j / 2) * sy(i % 2, j % 2);
  }
  // The lambdas are the singular values of W^T (sy x sy) W for any
  // decomposition rho = W W^dagger. Working from the eigenvector
  // decomposition avoids square roots of near-zero eigenvalues.
  const linalg::HermitianEigen eig = linalg::eigh(state.rho);
  const double top = std::max(eig.values.maxCoeff(), 0.0);
  Mat4 w = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    const double mu = eig.values(k);
    if (mu > 1e-14 * top) w.col(k) = std::sqrt(mu) * eig.vectors.col(k);
  }
  const Mat4 tau = w.transpose() * flip * w;
  const Eigen::Vector4d sv = Eigen::JacobiSVD<Mat4>(tau).singularValues();
  std::vector<double> s(sv.data(), sv.data() + 4);
  std::sort(s.begin(), s.end(), std::greater<>());
  return std::clamp(s[0] - s[1] - s[2] - s[3], 0.0, 1.0);
}

double concurrence_closed_form(const ChannelParams& params) {
  coherent::validate(params);
  const double c = params.parity_sign();
  const double p = params.p;
  const double pref = (1.0 - p) * (1.0 + p) /
                      (2.0 * coherent::one_plus_signed_power(p, params.n, c));
  const double one_plus_q = coherent::one_plus_signed_power(p, params.n - 2, c);
  const double one_minus_q = coherent::one_plus_signed_power(p, params.n - 2, -c);
  const double c_plus = pref * (std::abs(one_plus_q) - one_minus_q);
  const double c_minus = pref * (std::abs(one_minus_q) - one_plus_q);
  return std::max({0.0, c_plus, c_minus});
}

double uhlmann_fidelity(const MatX& rho, const MatX& sigma) {
  linalg::require_density(rho, kStateTolerance, "fidelity argument rho");
  linalg::require_density(sigma, kStateTolerance, "fidelity argument sigma");
  MatX root = linalg::sqrt_psd(rho);
  MatX inner = root * sigma * root;
  Eigen::VectorXd ev = linalg::eigh(0.5 * (inner + inner.adjoint())).values;
  double tr = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) tr += clamped_sqrt(ev(i));
  return tr * tr;
}

double uhlmann_fidelity(const QubitDensity& rho, const QubitDensity& sigma) {
  return uhlmann_fidelity(MatX(rho.rho), MatX(sigma.rho));
}

double qfi_bloch_unchecked(const Bloch& r, const Bloch& dr) {
  return dr.squaredNorm() + std::pow(r.dot(dr), 2) / (1.0 - r.squaredNorm());
}

double qfi_bloch(const Bloch& r, const Bloch& dr) {
  const double norm = r.norm();
  if (norm > 1.0 + 1e-9) {
    throw Error(ErrorCode::InvalidBloch, "Bloch vector norm " + std::to_string(norm) + " exceeds 1");
  }
  if (norm < 1.0 - 1e-9) return qfi_bloch_unchecked(r, dr);
  const double radial = std::abs(r.dot(dr));
  if (radial > 1e-6) {
    throw Error(ErrorCode::InconsistentFamily,
                "pure family with changing purity, r.dr = " + std::to_string(radial));
  }
  return dr.squaredNorm();
}

double qfi_spectral(const ParamFamily& family, double xi0) {
  if (!(family.step > 0.0)) {
    throw Error(ErrorCode::OutOfRange, "differentiation step must be positive");
  }
  const Spectrum at = spectrum_at(family, xi0);
  const Eigen::Index d = at.values.size();

  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    const bool in_support = at.values(k + 1) >= kSupportFloor;
    if (in_support && at.values(k + 1) - at.values(k) < kMinGap) {
      throw Error(ErrorCode::DegenerateSpectrum, "eigenvalue gap below 1e-8");
    }
  }

  Derivatives der = central_difference(family, at, xi0, family.step);
  if (family.richardson) {
    Derivatives half = central_difference(family, at, xi0, family.step / 2.0);
    der.dvalues = (4.0 * half.dvalues - der.dvalues) / 3.0;
    der.dvectors = (4.0 * half.dvectors - der.dvectors) / 3.0;
  }

  double classical = 0.0;
  double pure = 0.0;
  double correction = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double lk = at.values(k);
    if (lk < kSupportFloor) continue;
    const auto psi = at.vectors.col(k);
    const auto dpsi = der.dvectors.col(k);
    classical += der.dvalues(k) * der.dvalues(k) / lk;
    pure += 4.0 * lk * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
    for (Eigen::Index l = 0; l < d; ++l) {
      const double ll = at.values(l);
      if (l == k || ll < kSupportFloor) continue;
      correction += 8.0 * lk * ll / (lk + ll) * std::norm(psi.dot(der.dvectors.col(l)));
    }
  }
  return std::max(0.0, classical + pure - correction);
}

double classical_speed_alpha(std::span<const double> pprime, double alpha) {
  if (!(alpha >= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "alpha must be >= 1");
  }
  double total = 0.0;
  double acc = 0.0;
  for (double v : pprime) {
    total += v;
    acc += std::pow(std::abs(v), alpha);
  }
  if (std::abs(total) > 1e-9) {
    throw Error(ErrorCode::OutOfRange, "probability derivative must sum to zero");
  }
  return std::pow(0.5 * acc, 1.0 / alpha);
}

namespace {

void require_traceless_hermitian(const MatX& drho) {
  if (drho.rows() != drho.cols()) {
    throw Error(ErrorCode::MalformedState, "derivative matrix must be square");
  }
  if (linalg::hermiticity_defect(drho) > 1e-9) {
    throw Error(ErrorCode::MalformedState, "derivative matrix must be Hermitian");
  }
  if (std::abs(drho.trace()) > 1e-9) {
    throw Error(ErrorCode::MalformedState, "derivative matrix must be traceless");
  }
}

}  // namespace

double quantum_speed_alpha(const MatX& drho, double alpha) {
  if (!(alpha >= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "alpha must be >= 1");
  }
  if (alpha == 2.0) return hss(drho);
  require_traceless_hermitian(drho);
  Eigen::JacobiSVD<MatX> svd(drho);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    acc += std::pow(svd.singularValues()(i), alpha);
  }
  return std::pow(0.5 * acc, 1.0 / alpha);
}

double hss(const MatX& drho) {
  require_traceless_hermitian(drho);
  return std::sqrt(0.5 * drho.cwiseAbs2().sum());
}

}  // namespace bqt::metrics
