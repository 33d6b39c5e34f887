#include <algorithm>

#include "bqt/error.hpp"
#include "bqt/metrics.hpp"
#include "bqt/protocol.hpp"
#include "bqt/simulator.hpp"

namespace bqt::circuit {

RoundtripReport teleport_roundtrip_check(const ChannelParams& params,
                                         const protocol::TriggerPhase& triggers,
                                         Backend backend) {
  const Circuit full = build_bqt_circuit(params, triggers);
  auto last_measure = std::find_if(full.gates.rbegin(), full.gates.rend(),
                                   [](const Gate& g) { return g.kind == GateKind::MEASURE; });
  if (last_measure == full.gates.rend()) {
    throw Error(ErrorCode::MalformedGate, "teleportation circuit has no measurement");
  }
  const auto split = last_measure.base();
  Circuit prefix = full;
  prefix.gates.assign(full.gates.begin(), split);
  const std::vector<Gate> corrections(split, full.gates.end());

  protocol::ProtocolConfig config;
  config.channel = params;
  config.triggers = triggers;
  config.weight_mode = protocol::WeightMode::TraceDefinition;
  const protocol::TeleportOutcome predicted = protocol::teleported_states(config);

  RoundtripReport report;
  report.channel = params;
  report.triggers = triggers;
  report.predicted_e = predicted.rho_out_e.rho;
  report.predicted_o = predicted.rho_out_o.rho;

  const SimInit init = default_init(params);
  for (Branch& b : run_branches(prefix, prepare(init, backend))) {
    BranchReport br;
    br.outcome = b.state.classical_string();
    br.probability = b.probability;
    br.even_before = b.state.reduced_qubit(qubit::kEven);
    br.odd_before = b.state.reduced_qubit(qubit::kOdd);
    SimState s = std::move(b.state);
    for (const Gate& g : corrections) s = apply_gate(std::move(s), g);
    br.even_after = s.reduced_qubit(qubit::kEven);
    br.odd_after = s.reduced_qubit(qubit::kOdd);
    br.fidelity_even = metrics::uhlmann_fidelity(MatX(br.even_after), MatX(report.predicted_e));
    br.fidelity_odd = metrics::uhlmann_fidelity(MatX(br.odd_after), MatX(report.predicted_o));
    br.deviation = std::max((br.even_after - report.predicted_e).cwiseAbs().maxCoeff(),
                            (br.odd_after - report.predicted_o).cwiseAbs().maxCoeff());
    report.max_deviation = std::max(report.max_deviation, br.deviation);
    report.min_fidelity = std::min({report.min_fidelity, br.fidelity_even, br.fidelity_odd});
    report.branches.push_back(std::move(br));
  }
  return report;
}

}  // namespace bqt::circuit
