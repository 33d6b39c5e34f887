#include "bqt/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"

namespace bqt::circuit {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  unsigned arity;  // 0 means variable (MEASURE)
};

constexpr std::array<KindInfo, 10> kKinds{{
    {GateKind::X, "X", 1},
    {GateKind::H, "H", 1},
    {GateKind::RY, "RY", 1},
    {GateKind::CNOT, "CNOT", 2},
    {GateKind::CCNOT, "CCNOT", 3},
    {GateKind::CZ, "CZ", 2},
    {GateKind::CP, "CP", 2},
    {GateKind::MEASURE, "MEASURE", 0},
    {GateKind::COND_X, "COND_X", 1},
    {GateKind::COND_Z, "COND_Z", 1},
}};

const KindInfo& info(GateKind kind) {
  for (const KindInfo& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw Error(ErrorCode::MalformedGate, "unknown gate kind");
}

// Small builder keeping the gate list readable.
class Emitter {
 public:
  explicit Emitter(std::vector<Gate>& out) : out_(out) {}

  void x(unsigned q) { out_.push_back({GateKind::X, {q}, 0.0, {}}); }
  void h(unsigned q) { out_.push_back({GateKind::H, {q}, 0.0, {}}); }
  void ry(unsigned q, double angle) { out_.push_back({GateKind::RY, {q}, angle, {}}); }
  void cnot(unsigned c, unsigned t) { out_.push_back({GateKind::CNOT, {c, t}, 0.0, {}}); }
  void ccnot(unsigned c1, unsigned c2, unsigned t) {
    out_.push_back({GateKind::CCNOT, {c1, c2, t}, 0.0, {}});
  }
  void cz(unsigned a, unsigned b) { out_.push_back({GateKind::CZ, {a, b}, 0.0, {}}); }
  void cp(unsigned a, unsigned b, double phi) { out_.push_back({GateKind::CP, {a, b}, phi, {}}); }
  void measure(std::vector<unsigned> qs, std::vector<unsigned> bits) {
    out_.push_back({GateKind::MEASURE, std::move(qs), 0.0, std::move(bits)});
  }
  void cond_x(unsigned bit, unsigned q) { out_.push_back({GateKind::COND_X, {q}, 0.0, {bit}}); }
  void cond_z(unsigned bit, unsigned q) { out_.push_back({GateKind::COND_Z, {q}, 0.0, {bit}}); }

  void swap(unsigned a, unsigned b) {
    cnot(a, b);
    cnot(b, a);
    cnot(a, b);
  }
  // Exchange a and b when control is set.
  void fredkin(unsigned control, unsigned a, unsigned b) {
    cnot(b, a);
    ccnot(control, a, b);
    cnot(b, a);
  }

 private:
  std::vector<Gate>& out_;
};

}  // namespace

std::string_view to_string(GateKind kind) noexcept {
  for (const KindInfo& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  for (const KindInfo& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  throw Error(ErrorCode::MalformedGate, "unknown gate kind '" + std::string(name) + "'");
}

const std::array<std::string, 10>& bqt_roles() {
  static const std::array<std::string, 10> roles{"T_e",  "S_e2", "S_e1", "Even", "psi_1",
                                                 "psi_2", "Odd", "S_o1", "S_o2", "T_o"};
  return roles;
}

void validate_gate(const Gate& gate, unsigned qubits, unsigned classical_bits) {
  const KindInfo& k = info(gate.kind);
  const std::string label(k.name);
  if (k.arity != 0 && gate.operands.size() != k.arity) {
    throw Error(ErrorCode::MalformedGate, label + " expects " + std::to_string(k.arity) +
                                              " operand(s), got " +
                                              std::to_string(gate.operands.size()));
  }
  if (gate.operands.empty()) {
    throw Error(ErrorCode::MalformedGate, label + " needs at least one operand");
  }
  for (std::size_t i = 0; i < gate.operands.size(); ++i) {
    if (gate.operands[i] >= qubits) {
      throw Error(ErrorCode::MalformedGate, label + " operand " +
                                                std::to_string(gate.operands[i]) +
                                                " outside the register");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (gate.operands[i] == gate.operands[j]) {
        throw Error(ErrorCode::MalformedGate, label + " has repeated operands");
      }
    }
  }
  if (!std::isfinite(gate.phase)) {
    throw Error(ErrorCode::MalformedGate, label + " phase must be finite");
  }
  const bool conditional = gate.kind == GateKind::COND_X || gate.kind == GateKind::COND_Z;
  if (gate.kind == GateKind::MEASURE) {
    if (gate.classical_bits.size() != gate.operands.size()) {
      throw Error(ErrorCode::MalformedGate, "MEASURE needs one classical bit per qubit");
    }
  } else if (conditional) {
    if (gate.classical_bits.size() != 1) {
      throw Error(ErrorCode::MalformedGate, label + " needs exactly one classical bit");
    }
  } else if (!gate.classical_bits.empty()) {
    throw Error(ErrorCode::MalformedGate, label + " takes no classical bits");
  }
  for (unsigned b : gate.classical_bits) {
    if (b >= classical_bits) {
      throw Error(ErrorCode::MalformedGate, label + " classical bit " + std::to_string(b) +
                                                " outside the classical register");
    }
  }
}

void validate(const Circuit& circuit) {
  if (!circuit.roles.empty() && circuit.roles.size() != circuit.qubits) {
    throw Error(ErrorCode::MalformedGate, "role list must name every qubit");
  }
  for (std::size_t i = 0; i < circuit.roles.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (circuit.roles[i] == circuit.roles[j]) {
        throw Error(ErrorCode::MalformedGate, "duplicate role '" + circuit.roles[i] + "'");
      }
    }
  }
  for (const Gate& g : circuit.gates) validate_gate(g, circuit.qubits, circuit.classical_bits);
}

Circuit build_bqt_circuit(const ChannelParams& params, const protocol::TriggerPhase& triggers) {
  coherent::validate(params);
  protocol::validate(triggers);
  using namespace qubit;

  Circuit c;
  c.qubits = 10;
  c.classical_bits = 4;
  const auto& roles = bqt_roles();
  c.roles.assign(roles.begin(), roles.end());
  Emitter e(c.gates);

  // Step 2: triggers to cos(t/2)|0> + sin(t/2)|1>.
  e.x(kTriggerEven);
  e.x(kTriggerOdd);
  e.ry(kTriggerEven, triggers.theta_e - kPi);
  e.ry(kTriggerOdd, triggers.theta_o - kPi);

  // Step 3: bring each party's input next to its channel half.
  e.swap(kEven, kChannelA);
  e.swap(kOdd, kChannelB);

  // Step 4: the triggers decide which side's input enters the exchange. The
  // AND of both triggers (and of both negations) is staged on a storage qubit,
  // used to control a swap, then uncomputed.
  e.ccnot(kTriggerEven, kTriggerOdd, kStoreEven2);
  e.x(kTriggerEven);
  e.x(kTriggerOdd);
  e.ccnot(kTriggerEven, kTriggerOdd, kStoreOdd1);
  e.x(kTriggerEven);
  e.x(kTriggerOdd);
  e.fredkin(kStoreEven2, kEven, kChannelB);
  e.fredkin(kStoreOdd1, kOdd, kChannelA);
  e.ccnot(kTriggerEven, kTriggerOdd, kStoreEven2);
  e.x(kTriggerEven);
  e.x(kTriggerOdd);
  e.ccnot(kTriggerEven, kTriggerOdd, kStoreOdd1);
  e.x(kTriggerEven);
  e.x(kTriggerOdd);

  // Step 5: entangle storage with the channel and apply the parity phase.
  e.h(kStoreEven1);
  e.h(kStoreOdd2);
  e.cz(kStoreEven1, kEven);
  e.cz(kStoreOdd2, kOdd);
  e.cp(kChannelA, kChannelB, (params.m % 2 == 0 ? 0.0 : 1.0) * kPi);
  e.cnot(kStoreOdd2, kEven);
  e.cnot(kStoreEven1, kOdd);

  e.measure({kStoreEven1, kStoreEven2, kStoreOdd1, kStoreOdd2}, {0, 1, 2, 3});

  // Step 6: classically controlled Pauli corrections.
  e.cond_x(3, kEven);
  e.cond_z(0, kEven);
  e.cond_x(0, kOdd);
  e.cond_z(3, kOdd);
  return c;
}

}  // namespace bqt::circuit
