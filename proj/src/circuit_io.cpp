#include <algorithm>
#include <fstream>
#include <sstream>

#include "bqt/circuit.hpp"
#include "bqt/error.hpp"
#include "json.hpp"

namespace bqt::circuit {

using nlohmann::json;

std::string to_json(const Circuit& circuit) {
  json doc;
  doc["qubits"] = circuit.qubits;
  doc["classical_bits"] = circuit.classical_bits;
  doc["roles"] = circuit.roles;
  json gates = json::array();
  for (const Gate& g : circuit.gates) {
    json jg;
    jg["kind"] = std::string(to_string(g.kind));
    jg["operands"] = g.operands;
    if (g.kind == GateKind::RY || g.kind == GateKind::CP) jg["phase"] = g.phase;
    if (!g.classical_bits.empty()) jg["classical_bits"] = g.classical_bits;
    gates.push_back(std::move(jg));
  }
  doc["gates"] = std::move(gates);
  return doc.dump(2) + "\n";
}

Circuit from_json(std::string_view text) {
  Circuit c;
  try {
    const json doc = json::parse(text);
    c.qubits = doc.at("qubits").get<unsigned>();
    c.classical_bits = doc.value("classical_bits", 0u);
    if (doc.contains("roles")) {
      const json& roles = doc.at("roles");
      if (roles.is_object()) {
        // Role map keyed by qubit index.
        c.roles.resize(c.qubits);
        for (auto it = roles.begin(); it != roles.end(); ++it) {
          const unsigned idx = static_cast<unsigned>(std::stoul(it.key()));
          if (idx >= c.qubits) throw Error(ErrorCode::MalformedGate, "role index out of range");
          c.roles[idx] = it.value().get<std::string>();
        }
      } else {
        c.roles = roles.get<std::vector<std::string>>();
      }
    }
    for (const json& jg : doc.at("gates")) {
      Gate g;
      g.kind = gate_kind_from_string(jg.at("kind").get<std::string>());
      g.operands = jg.at("operands").get<std::vector<unsigned>>();
      g.phase = jg.value("phase", 0.0);
      if (jg.contains("classical_bits")) {
        g.classical_bits = jg.at("classical_bits").get<std::vector<unsigned>>();
      } else if (jg.contains("classical_bit")) {
        g.classical_bits = {jg.at("classical_bit").get<unsigned>()};
      }
      c.gates.push_back(std::move(g));
    }
    if (!doc.contains("classical_bits")) {
      for (const Gate& g : c.gates) {
        for (unsigned b : g.classical_bits) c.classical_bits = std::max(c.classical_bits, b + 1);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("circuit description: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::ParseError, std::string("circuit description: ") + e.what());
  }
  validate(c);
  return c;
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open circuit file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void save_circuit(const Circuit& circuit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write circuit file " + path);
  out << to_json(circuit);
}

}  // namespace bqt::circuit
