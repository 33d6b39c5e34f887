#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bqt/circuit.hpp"
#include "bqt/kernels.hpp"
#include "bqt/types.hpp"

namespace bqt::circuit {

using kernels::Backend;

inline constexpr unsigned kMaxQubits = 12;
inline constexpr unsigned kMaxExactQubits = 10;

// Register state: a state vector while the evolution is known to be pure, a
// density matrix otherwise.
class SimState {
 public:
  // All qubits in |0>, all classical bits 0.
  SimState(unsigned qubits, unsigned classical_bits, Backend backend = Backend::OpenMP);

  // Product state of one- and two-qubit factors; unlisted qubits are |0>. For
  // a pair factor the first listed qubit is the more significant basis bit.
  // Uses the state-vector path when every factor is pure within 1e-12.
  struct Factor {
    std::vector<unsigned> qubits;  // one or two qubits
    MatX rho;
  };
  static SimState product(unsigned qubits, unsigned classical_bits,
                          const std::vector<Factor>& factors, Backend backend = Backend::OpenMP);

  unsigned qubits() const noexcept { return qubits_; }
  bool is_pure() const noexcept { return pure_; }
  Backend backend() const noexcept { return backend_; }
  const std::vector<int>& classical() const noexcept { return cbits_; }
  std::string classical_string() const;

  double trace() const;
  Mat2 reduced_qubit(unsigned q) const;
  MatX density_matrix() const;  // full matrix; intended for small registers

  void apply_unitary(const std::vector<unsigned>& controls, unsigned target,
                     const kernels::Matrix2& u);
  // Outcome probabilities of measuring `qs`; bit j of the index is qs[j].
  std::vector<double> outcome_weights(const std::vector<unsigned>& qs) const;
  // Projects onto an outcome and renormalizes; returns its probability.
  double collapse(const std::vector<unsigned>& qs, std::size_t outcome);
  void set_classical(unsigned bit, int value) { cbits_.at(bit) = value; }
  // Converts to the density-matrix representation.
  void to_density();

 private:
  unsigned qubits_ = 0;
  bool pure_ = true;
  Backend backend_ = Backend::OpenMP;
  std::vector<kernels::Amp> amps_;
  std::vector<int> cbits_;
};

// Unitary and conditional kinds. MEASURE needs a sampler; exact runs split on
// measurements via measure_branches instead.
SimState apply_gate(SimState state, const Gate& gate, std::mt19937_64* rng = nullptr);

struct Branch {
  SimState state;
  double probability = 1.0;
};

std::vector<Branch> measure_branches(const Branch& branch, const Gate& gate,
                                     double prune_below = 1e-15);

// Every measurement branch of the circuit with its probability.
std::vector<Branch> run_branches(const Circuit& circuit, const SimState& init);

struct Histogram {
  std::map<std::string, double> probabilities;  // exact distribution
  std::map<std::string, std::uint64_t> counts;  // sampled counts
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  bool sampled = false;

  double total_probability() const;
};

// Initial register for the teleportation circuit: channel pair on the psi
// qubits, party inputs on Even and Odd, everything else |0>.
struct SimInit {
  PairDensity channel;
  QubitDensity even_input = QubitDensity::pure(1.0, 0.0);
  QubitDensity odd_input = QubitDensity::pure(0.0, 1.0);
};

PairDensity channel_init(const ChannelParams& params);
SimInit default_init(const ChannelParams& params);
SimState prepare(const SimInit& init, Backend backend = Backend::OpenMP);

Histogram run_exact(const Circuit& circuit, const SimState& init);

// Samples from the exact distribution with mt19937_64(seed).
Histogram run_shots(const Circuit& circuit, const SimState& init, std::uint64_t shots,
                    std::uint64_t seed);
Histogram sample(const Histogram& exact, std::uint64_t shots, std::uint64_t seed);

double total_variation(const Histogram& sampled, const Histogram& exact);

struct BranchReport {
  std::string outcome;
  double probability = 0.0;
  Mat2 even_before;  // qubit Even after measurement, before corrections
  Mat2 even_after;
  Mat2 odd_before;
  Mat2 odd_after;
  double fidelity_even = 0.0;  // even_after vs protocol rho_out^(e)
  double fidelity_odd = 0.0;   // odd_after vs protocol rho_out^(o)
  double deviation = 0.0;      // max entrywise distance to the predictions
};

struct RoundtripReport {
  ChannelParams channel;
  protocol::TriggerPhase triggers;
  Mat2 predicted_e;
  Mat2 predicted_o;
  std::vector<BranchReport> branches;
  double max_deviation = 0.0;
  double min_fidelity = 1.0;
};

// Runs the default circuit and compares the corrected Even/Odd qubits with
// the protocol predictions under trace-definition weights.
RoundtripReport teleport_roundtrip_check(const ChannelParams& params,
                                         const protocol::TriggerPhase& triggers,
                                         Backend backend = Backend::OpenMP);

}  // namespace bqt::circuit
