#pragma once

#include <string_view>

#include "bqt/types.hpp"

// Closed-form algebra of the multipartite coherent channel
//   |psi> = N (|eta>^n + e^{i m pi} |-eta>^n),  p = <eta|-eta> = exp(-2|eta|^2).
namespace bqt::coherent {

struct LogicalEncoding {
  double a = 0.0;  // <eta_e|eta>
  double b = 0.0;  // <eta_o|eta>
};

// Amplitudes of the channel split into r and n-r modes, in the basis
// {|0>_r|0>_{n-r}, |0>|1>, |1>|0>, |1>|1>}.
struct SplitCoefficients {
  Complex g00, g01, g10, g11;
};

enum class LimitKind { GHZ, Ground, W, Generic };

std::string_view to_string(LimitKind kind) noexcept;

// Checks 0 <= p <= 1 and n >= 2 (OutOfRange) and the denominator
// 1 + p^n cos(m pi) (DegenerateChannel).
void validate(const ChannelParams& params);

double normalization_factor(const ChannelParams& params);

// 1 + sign * p^k, evaluated without cancellation when p is close to 1.
double one_plus_signed_power(double p, int k, double sign);

LogicalEncoding logical_encoding(double p);

SplitCoefficients split_coefficients(const ChannelParams& params, int r);

PairDensity reduced_pair_state(const ChannelParams& params);

QubitDensity reduced_single_state(const ChannelParams& params);

LimitKind classify_limit(const ChannelParams& params, double tol);

// The printed even/odd expansion of the pair state. Its trace is not one in
// general; kept for the compare report.
Mat4 printed_pair_state(const ChannelParams& params);

// Coefficient c of the printed single-mode residue c * I.
double printed_single_coefficient(const ChannelParams& params);

// 3 + p^2 + (3p^2 + 1) p^{n-2} cos(m pi).
double lambda(const ChannelParams& params);

}  // namespace bqt::coherent
