#pragma once

#include <functional>
#include <span>

#include "bqt/types.hpp"

// Model-independent quantum-information metrics.
namespace bqt::metrics {

enum class Keep { First, Second };

QubitDensity partial_trace(const PairDensity& rho, Keep keep);

// Wootters concurrence from the spin-flipped spectrum.
double concurrence(const PairDensity& rho);

// max{0, C+, C-} for the channel pair state.
double concurrence_closed_form(const ChannelParams& params);

// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double uhlmann_fidelity(const MatX& rho, const MatX& sigma);
double uhlmann_fidelity(const QubitDensity& rho, const QubitDensity& sigma);

// Single-qubit QFI from a Bloch vector and its derivative. Requires
// |r| <= 1 + 1e-9 (InvalidBloch otherwise).
double qfi_bloch(const Bloch& r, const Bloch& dr);

// The same expression with no domain check; used to report what the formula
// yields for vectors outside the Bloch ball.
double qfi_bloch_unchecked(const Bloch& r, const Bloch& dr);

struct ParamFamily {
  std::function<MatX(double)> evaluate;
  double step = 1e-5;
  bool richardson = false;
};

// Spectral QFI via eigen-decomposition and central differences.
double qfi_spectral(const ParamFamily& family, double xi0);

double classical_speed_alpha(std::span<const double> pprime, double alpha);

double quantum_speed_alpha(const MatX& drho, double alpha);

// Hilbert-Schmidt speed sqrt(Tr[drho^2] / 2).
double hss(const MatX& drho);

}  // namespace bqt::metrics
