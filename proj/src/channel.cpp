#include "bqt/channel.hpp"

#include <cmath>
#include <string>

#include "bqt/error.hpp"

namespace bqt::coherent {

namespace {

// std::pow gives pow(0, 0) == 1, which is the convention used throughout.
double power(double base, int exponent) { return std::pow(base, exponent); }

}  // namespace

double one_plus_signed_power(double p, int k, double sign) {
  if (sign < 0.0 && p > 0.5 && k > 0) return -std::expm1(k * std::log1p(p - 1.0));
  return 1.0 + sign * power(p, k);
}

namespace {

double denominator(const ChannelParams& params) {
  return one_plus_signed_power(params.p, params.n, params.parity_sign());
}

}  // namespace

std::string_view to_string(LimitKind kind) noexcept {
  switch (kind) {
    case LimitKind::GHZ: return "GHZ";
    case LimitKind::Ground: return "Ground";
    case LimitKind::W: return "W";
    case LimitKind::Generic: return "Generic";
  }
  return "Generic";
}

void validate(const ChannelParams& params) {
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "overlap p must lie in [0, 1], got " + std::to_string(params.p));
  }
  if (params.n < 2) {
    throw Error(ErrorCode::OutOfRange, "probe count n must be >= 2, got " + std::to_string(params.n));
  }
  if (denominator(params) <= 1e-15) {
    throw Error(ErrorCode::DegenerateChannel,
                "1 + p^n cos(m pi) vanishes; use p = 1 - eps for odd m");
  }
}

double normalization_factor(const ChannelParams& params) {
  validate(params);
  return 1.0 / std::sqrt(2.0 * denominator(params));
}

LogicalEncoding logical_encoding(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "overlap p must lie in [0, 1], got " + std::to_string(p));
  }
  return {std::sqrt((1.0 + p) / 2.0), std::sqrt((1.0 - p) / 2.0)};
}

SplitCoefficients split_coefficients(const ChannelParams& params, int r) {
  const double norm = normalization_factor(params);
  if (r < 1 || r > params.n - 1) {
    throw Error(ErrorCode::OutOfRange, "split index r must satisfy 1 <= r <= n-1");
  }
  const double c = params.parity_sign();
  auto a_k = [&](int k) { return std::sqrt((1.0 + power(params.p, k)) / 2.0); };
  auto b_k = [&](int k) { return std::sqrt(one_plus_signed_power(params.p, k, -1.0) / 2.0); };
  const int s = params.n - r;
  return {norm * (1.0 + c) * a_k(r) * a_k(s), norm * (1.0 - c) * a_k(r) * b_k(s),
          norm * (1.0 - c) * a_k(s) * b_k(r), norm * (1.0 + c) * b_k(r) * b_k(s)};
}

PairDensity reduced_pair_state(const ChannelParams& params) {
  const double norm2 = 1.0 / (2.0 * denominator(params));
  const double p = params.p;
  const double a2 = (1.0 + p) / 2.0;
  const double b2 = (1.0 - p) / 2.0;
  const double ab = std::sqrt((1.0 - p) * (1.0 + p)) / 2.0;

  // |eta,eta> and |-eta,-eta> in the logical two-mode basis are
  // (a^2, ab, ab, b^2) and (a^2, -ab, -ab, b^2). The traced-out n-2 modes
  // weight the cross terms by q = p^{n-2} cos(m pi), so the even-even block
  // carries 2(1+q) and the odd-odd block 2(1-q).
  const double c = params.parity_sign();
  const double even_w = 2.0 * norm2 * one_plus_signed_power(p, params.n - 2, c);
  const double odd_w = 2.0 * norm2 * one_plus_signed_power(p, params.n - 2, -c);
  const double even[2] = {a2, b2};
  Eigen::Matrix4d real = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) real(3 * i, 3 * j) = real(3 * j, 3 * i) = even_w * even[i] * even[j];
  }
  real(1, 1) = real(1, 2) = real(2, 1) = real(2, 2) = odd_w * ab * ab;
  PairDensity out;
  out.rho = real.cast<Complex>();
  return out;
}

QubitDensity reduced_single_state(const ChannelParams& params) {
  const PairDensity pair = reduced_pair_state(params);
  QubitDensity out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.rho(i, j) = pair.rho(2 * i, 2 * j) + pair.rho(2 * i + 1, 2 * j + 1);
    }
  }
  return out;
}

LimitKind classify_limit(const ChannelParams& params, double tol) {
  if (params.p <= tol) return LimitKind::GHZ;
  if (params.p >= 1.0 - tol) return params.m % 2 == 0 ? LimitKind::Ground : LimitKind::W;
  return LimitKind::Generic;
}

Mat4 printed_pair_state(const ChannelParams& params) {
  const double norm = normalization_factor(params);
  const LogicalEncoding enc = logical_encoding(params.p);
  const double a2 = enc.a * enc.a;
  const double b2 = enc.b * enc.b;
  const double qc = power(params.p, params.n - 2) * params.parity_sign();
  const double pref = 2.0 * norm * norm;

  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = m(3, 3) = pref * (a2 * a2 + b2 * b2) * (1.0 + qc);
  const double mid = pref * a2 * b2 * (1.0 - qc);
  m(1, 1) = m(1, 2) = m(2, 1) = m(2, 2) = mid;
  m(0, 3) = m(3, 0) = pref * a2 * b2 * (1.0 + qc);
  return m.cast<Complex>();
}

double printed_single_coefficient(const ChannelParams& params) {
  validate(params);
  return lambda(params) / (4.0 * denominator(params));
}

double lambda(const ChannelParams& params) {
  const double p2 = params.p * params.p;
  return 3.0 + p2 + (3.0 * p2 + 1.0) * power(params.p, params.n - 2) * params.parity_sign();
}

}  // namespace bqt::coherent
