#include "bqt/kernels.hpp"

namespace bqt::kernels::serial {

void apply_controlled(std::span<Amp> amps, std::uint64_t control_mask, unsigned target,
                      const Matrix2& u) {
  const std::uint64_t bit = std::uint64_t{1} << target;
  for (std::uint64_t i0 = 0; i0 < amps.size(); ++i0) {
    if ((i0 & bit) != 0 || (i0 & control_mask) != control_mask) continue;
    const std::uint64_t i1 = i0 | bit;
    const Amp a0 = amps[i0];
    const Amp a1 = amps[i1];
    amps[i0] = u.u00 * a0 + u.u01 * a1;
    amps[i1] = u.u10 * a0 + u.u11 * a1;
  }
}

void project(std::span<Amp> amps, std::uint64_t mask, std::uint64_t value) {
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & mask) != value) amps[i] = 0.0;
  }
}

void scale(std::span<Amp> amps, double factor) {
  for (Amp& a : amps) a *= factor;
}

double norm2(std::span<const Amp> amps) {
  double s = 0.0;
  for (const Amp& a : amps) s += std::norm(a);
  return s;
}

double density_trace(std::span<const Amp> amps, unsigned k) {
  double s = 0.0;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << k); ++r) s += amps[r | (r << k)].real();
  return s;
}

std::vector<double> outcome_weights(std::span<const Amp> amps, unsigned k, bool density,
                                    std::span<const unsigned> qubits) {
  std::vector<double> w(std::size_t{1} << qubits.size(), 0.0);
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << k); ++r) {
    std::size_t key = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) key |= ((r >> qubits[j]) & 1u) << j;
    w[key] += density ? amps[r | (r << k)].real() : std::norm(amps[r]);
  }
  return w;
}

}  // namespace bqt::kernels::serial
