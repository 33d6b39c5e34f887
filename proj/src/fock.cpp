#include "bqt/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"

namespace bqt::fock {

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const Complex& c : amplitudes) s += std::norm(c);
  return s;
}

double FockVector::norm_deviation() const { return std::abs(norm_squared() - 1.0); }

int required_cutoff(Complex eta) {
  const double mean = std::norm(eta);
  return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(mean + 1.0)));
}

namespace {

// Poisson tail sum_{k > cutoff} e^{-x} x^k / k!, continued from the last
// retained weight.
double poisson_tail(double mean, double last_weight, int cutoff) {
  double term = last_weight;
  double tail = 0.0;
  for (int k = cutoff + 1; k < cutoff + 10000; ++k) {
    term *= mean / k;
    tail += term;
    if (term < 1e-300 || term < tail * 1e-17) break;
  }
  return tail;
}

FockVector scaled_sum(const FockVector& u, const FockVector& v, double su, double sv) {
  FockVector out;
  out.cutoff = u.cutoff;
  out.tail_bound = std::max(u.tail_bound, v.tail_bound);
  out.amplitudes.resize(u.amplitudes.size());
  for (std::size_t k = 0; k < u.amplitudes.size(); ++k) {
    out.amplitudes[k] = su * u.amplitudes[k] + sv * v.amplitudes[k];
  }
  return out;
}

Complex integer_power(Complex base, int exponent) {
  Complex result = 1.0;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace

FockVector coherent_fock(Complex eta, int cutoff) {
  if (cutoff < 1) {
    throw Error(ErrorCode::CutoffTooSmall, "cutoff must be at least 1");
  }
  // The vacuum is represented exactly at any cutoff.
  if (eta != Complex(0.0) && cutoff < required_cutoff(eta)) {
    throw Error(ErrorCode::CutoffTooSmall,
                "cutoff " + std::to_string(cutoff) + " below required " +
                    std::to_string(required_cutoff(eta)) + " for |eta|^2 = " +
                    std::to_string(std::norm(eta)));
  }
  FockVector v;
  v.cutoff = cutoff;
  v.amplitudes.resize(static_cast<std::size_t>(cutoff) + 1);
  v.amplitudes[0] = std::exp(-0.5 * std::norm(eta));
  for (int k = 0; k < cutoff; ++k) {
    v.amplitudes[k + 1] = v.amplitudes[k] * eta / std::sqrt(static_cast<double>(k + 1));
  }
  v.tail_bound = poisson_tail(std::norm(eta), std::norm(v.amplitudes.back()), cutoff);
  return v;
}

Complex overlap(const FockVector& u, const FockVector& v) {
  if (u.cutoff != v.cutoff || u.amplitudes.size() != v.amplitudes.size()) {
    throw Error(ErrorCode::CutoffMismatch, "overlap requires equal cutoffs");
  }
  Complex s = 0.0;
  for (std::size_t k = 0; k < u.amplitudes.size(); ++k) {
    s += std::conj(u.amplitudes[k]) * v.amplitudes[k];
  }
  return s;
}

EvenOdd even_odd_fock(Complex eta, int cutoff) {
  if (eta == Complex(0.0)) {
    throw Error(ErrorCode::DegenerateState, "odd coherent state has zero norm at eta = 0");
  }
  const FockVector pos = coherent_fock(eta, cutoff);
  const FockVector neg = coherent_fock(-eta, cutoff);
  const double p = std::exp(-2.0 * std::norm(eta));
  const double n_plus = 1.0 / std::sqrt(2.0 * (1.0 + p));
  const double n_minus = 1.0 / std::sqrt(2.0 * (1.0 - p));
  return {scaled_sum(pos, neg, n_plus, n_plus), scaled_sum(pos, neg, n_minus, -n_minus)};
}

EncodingReport validate_encoding(Complex eta, int cutoff) {
  const EvenOdd basis = even_odd_fock(eta, cutoff);
  const FockVector state = coherent_fock(eta, cutoff);
  EncodingReport r;
  r.p = std::exp(-2.0 * std::norm(eta));
  const coherent::LogicalEncoding enc = coherent::logical_encoding(r.p);
  r.a_closed = enc.a;
  r.b_closed = enc.b;
  r.even_overlap = overlap(basis.even, state);
  r.odd_overlap = overlap(basis.odd, state);
  r.max_deviation = std::max(std::abs(r.even_overlap - enc.a), std::abs(r.odd_overlap - enc.b));
  return r;
}

Mat2 multipartite_gram(Complex eta, int n, int cutoff) {
  if (n < 2) {
    throw Error(ErrorCode::OutOfRange, "probe count n must be >= 2");
  }
  const FockVector pos = coherent_fock(eta, cutoff);
  const FockVector neg = coherent_fock(-eta, cutoff);
  const FockVector* basis[2] = {&pos, &neg};
  Mat2 g;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      g(i, j) = integer_power(overlap(*basis[i], *basis[j]), n);
    }
  }
  return g;
}

}  // namespace bqt::fock
