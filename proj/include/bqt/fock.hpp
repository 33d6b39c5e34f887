#pragma once

#include <vector>

#include "bqt/types.hpp"

// Truncated Fock-space arithmetic for single-mode coherent states.
namespace bqt::fock {

struct FockVector {
  std::vector<Complex> amplitudes;  // photon numbers 0..cutoff
  int cutoff = 0;
  double tail_bound = 0.0;  // Poisson mass beyond the cutoff

  double norm_squared() const;
  double norm_deviation() const;
};

// Smallest cutoff accepted for amplitude eta: mean photon number plus ten
// standard deviations.
int required_cutoff(Complex eta);

FockVector coherent_fock(Complex eta, int cutoff);

Complex overlap(const FockVector& u, const FockVector& v);

struct EvenOdd {
  FockVector even;
  FockVector odd;
};

EvenOdd even_odd_fock(Complex eta, int cutoff);

struct EncodingReport {
  double p = 0.0;
  Complex even_overlap;  // <eta_e|eta>
  Complex odd_overlap;   // <eta_o|eta>
  double a_closed = 0.0;
  double b_closed = 0.0;
  double max_deviation = 0.0;
};

EncodingReport validate_encoding(Complex eta, int cutoff);

// Gram matrix of {|eta>^n, |-eta>^n} built from single-mode Fock overlaps.
Mat2 multipartite_gram(Complex eta, int n, int cutoff);

}  // namespace bqt::fock
