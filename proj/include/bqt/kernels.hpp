#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

// Amplitude-array kernels shared by the state-vector and density-matrix paths.
// A density matrix over k qubits is stored as a 2k-qubit array with the row
// index in the low k bits and the column index in the high k bits.
namespace bqt::kernels {

using Amp = std::complex<double>;

struct Matrix2 {
  Amp u00, u01, u10, u11;

  Matrix2 conjugate() const {
    return {std::conj(u00), std::conj(u01), std::conj(u10), std::conj(u11)};
  }
};

enum class Backend { Serial, OpenMP };

// The reference implementations, written for clarity.
namespace serial {
void apply_controlled(std::span<Amp> amps, std::uint64_t control_mask, unsigned target,
                      const Matrix2& u);
void project(std::span<Amp> amps, std::uint64_t mask, std::uint64_t value);
void scale(std::span<Amp> amps, double factor);
double norm2(std::span<const Amp> amps);
double density_trace(std::span<const Amp> amps, unsigned k);
std::vector<double> outcome_weights(std::span<const Amp> amps, unsigned k, bool density,
                                    std::span<const unsigned> qubits);
}  // namespace serial

// OpenMP versions. Reductions use a fixed chunking so results do not depend on
// the thread count.
namespace omp {
void apply_controlled(std::span<Amp> amps, std::uint64_t control_mask, unsigned target,
                      const Matrix2& u);
void project(std::span<Amp> amps, std::uint64_t mask, std::uint64_t value);
void scale(std::span<Amp> amps, double factor);
double norm2(std::span<const Amp> amps);
double density_trace(std::span<const Amp> amps, unsigned k);
std::vector<double> outcome_weights(std::span<const Amp> amps, unsigned k, bool density,
                                    std::span<const unsigned> qubits);
}  // namespace omp

inline void apply_controlled(Backend b, std::span<Amp> amps, std::uint64_t control_mask,
                             unsigned target, const Matrix2& u) {
  b == Backend::Serial ? serial::apply_controlled(amps, control_mask, target, u)
                       : omp::apply_controlled(amps, control_mask, target, u);
}

inline void project(Backend b, std::span<Amp> amps, std::uint64_t mask, std::uint64_t value) {
  b == Backend::Serial ? serial::project(amps, mask, value) : omp::project(amps, mask, value);
}

inline void scale(Backend b, std::span<Amp> amps, double factor) {
  b == Backend::Serial ? serial::scale(amps, factor) : omp::scale(amps, factor);
}

inline double norm2(Backend b, std::span<const Amp> amps) {
  return b == Backend::Serial ? serial::norm2(amps) : omp::norm2(amps);
}

inline double density_trace(Backend b, std::span<const Amp> amps, unsigned k) {
  return b == Backend::Serial ? serial::density_trace(amps, k) : omp::density_trace(amps, k);
}

// Probability of each joint outcome of `qubits`; outcome bit j comes from
// qubits[j].
inline std::vector<double> outcome_weights(Backend b, std::span<const Amp> amps, unsigned k,
                                           bool density, std::span<const unsigned> qubits) {
  return b == Backend::Serial ? serial::outcome_weights(amps, k, density, qubits)
                              : omp::outcome_weights(amps, k, density, qubits);
}

}  // namespace bqt::kernels
