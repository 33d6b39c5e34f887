#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "bqt/protocol.hpp"
#include "bqt/types.hpp"

// Declarative gate lists over a small named register.
namespace bqt::circuit {

enum class GateKind { X, H, RY, CNOT, CCNOT, CZ, CP, MEASURE, COND_X, COND_Z };

std::string_view to_string(GateKind kind) noexcept;
GateKind gate_kind_from_string(std::string_view name);

// Operand conventions: controls first, target last. RY and CP carry `phase`.
// MEASURE maps operands[i] to classical_bits[i]; COND_X/COND_Z apply to
// operands[0] iff classical_bits[0] is set.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<unsigned> operands;
  double phase = 0.0;
  std::vector<unsigned> classical_bits;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
  unsigned qubits = 0;
  unsigned classical_bits = 0;
  std::vector<std::string> roles;
  std::vector<Gate> gates;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// Register layout of the teleportation circuit.
namespace qubit {
inline constexpr unsigned kTriggerEven = 0;
inline constexpr unsigned kStoreEven2 = 1;
inline constexpr unsigned kStoreEven1 = 2;
inline constexpr unsigned kEven = 3;
inline constexpr unsigned kChannelA = 4;
inline constexpr unsigned kChannelB = 5;
inline constexpr unsigned kOdd = 6;
inline constexpr unsigned kStoreOdd1 = 7;
inline constexpr unsigned kStoreOdd2 = 8;
inline constexpr unsigned kTriggerOdd = 9;
}  // namespace qubit

const std::array<std::string, 10>& bqt_roles();

// Throws MalformedGate on arity, range, duplicate-operand, or phase errors.
void validate_gate(const Gate& gate, unsigned qubits, unsigned classical_bits);
void validate(const Circuit& circuit);

// The default ten-qubit teleportation circuit. Only the trigger rotations and
// the controlled-phase angle depend on the inputs.
Circuit build_bqt_circuit(const ChannelParams& params, const protocol::TriggerPhase& triggers);

std::string to_json(const Circuit& circuit);
Circuit from_json(std::string_view text);
Circuit load_circuit(const std::string& path);
void save_circuit(const Circuit& circuit, const std::string& path);

}  // namespace bqt::circuit
