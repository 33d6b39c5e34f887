#pragma once

#include <string_view>

#include "bqt/types.hpp"

// Bidirectional teleportation of even/odd coherent-state qubits over the
// multipartite channel. Alice holds the even-state input and trigger T_e,
// Bob holds the odd-state input and trigger T_o.
namespace bqt::protocol {

struct TriggerPhase {
  double theta_e = 0.0;
  double theta_o = 0.0;
};

enum class Direction { AtoB, BtoA };

// Channel residue mixed into the outputs.
enum class Rho1Mode { PartialTrace, PaperPrinted };

// How the success weights P_e, P_o are obtained.
//   Printed:          (1/2)(1-p)(1 - 2 cos t sin t)
//   HalfAngle:        (1/2)(1-p)(1 - 2 cos(t/2) sin(t/2))
//   TraceDefinition:  Tr(rho_T rho_input) with the configured inputs
enum class WeightMode { Printed, HalfAngle, TraceDefinition };

// Grouping of the channel denominator inside the printed Bloch components:
// 4(1 + p^n cos m pi) or 4(1 + p^n) cos m pi.
enum class BlochGrouping { ParityInside, ParityOutside };

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(WeightMode w) noexcept;

struct ProtocolConfig {
  ChannelParams channel;
  TriggerPhase triggers;
  Rho1Mode rho1_mode = Rho1Mode::PartialTrace;
  WeightMode weight_mode = WeightMode::Printed;
  QubitDensity input_even = QubitDensity::pure(1.0, 0.0);
  QubitDensity input_odd = QubitDensity::pure(0.0, 1.0);
};

struct Weights {
  double p_e = 0.0;  // clamped to [0, 1]
  double p_o = 0.0;
  double raw_p_e = 0.0;  // before clamping
  double raw_p_o = 0.0;
};

struct TeleportOutcome {
  QubitDensity rho_out_e;  // P_o(1-P_e) rho_Odd + (1 - P_o(1-P_e)) rho_1
  QubitDensity rho_out_o;  // P_e(1-P_o) rho_Even + (1 - P_e(1-P_o)) rho_1
  Weights weights;
  double weight_e = 0.0;  // P_o(1-P_e)
  double weight_o = 0.0;  // P_e(1-P_o)
};

// Throws OutOfRange unless both angles lie in [0, pi].
void validate(const TriggerPhase& t);

QubitDensity trigger_state(double theta);

Weights success_weights(const ProtocolConfig& config);

// The source state carried in a direction, the output it is compared with, and
// the trigger phase treated as the estimated parameter.
const QubitDensity& source_state(Direction d, const ProtocolConfig& config);
const QubitDensity& output_state(Direction d, const TeleportOutcome& outcome);
double estimated_phase(Direction d, const TriggerPhase& t);
TriggerPhase with_estimated_phase(Direction d, TriggerPhase t, double value);

TeleportOutcome teleported_states(const ProtocolConfig& config);

// The printed closed-form fidelities, unclamped.
double fidelity_closed_form(Direction d, const ChannelParams& channel, const TriggerPhase& t);

// Uhlmann fidelity between the source state and its teleported output.
double fidelity_oracle(Direction d, const ProtocolConfig& config);

struct BlochOptions {
  WeightMode weights = WeightMode::Printed;
  BlochGrouping grouping = BlochGrouping::ParityInside;
  double step = 1e-6;
  bool richardson = false;
};

struct BlochPoint {
  Bloch r = Bloch::Zero();
  Bloch dr = Bloch::Zero();  // derivative in the estimated trigger phase
  double norm = 0.0;
  bool inside_ball = true;  // |r| <= 1 + 1e-9
};

// Printed Bloch components of the teleported state. TraceDefinition weights
// use the default logical inputs here.
Bloch teleported_bloch_vector(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                              const BlochOptions& options = {});

BlochPoint teleported_bloch(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                            const BlochOptions& options = {});

// Strict: InvalidBloch when the components leave the Bloch ball.
double qfi_trigger(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                   const BlochOptions& options = {});

struct QfiReport {
  double value = 0.0;  // the single-qubit formula, evaluated even outside the ball
  double bloch_norm = 0.0;
  bool inside_ball = true;
};

QfiReport qfi_trigger_report(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                             const BlochOptions& options = {});

struct HssReport {
  double direct = 0.0;          // hss of the family derivative, |dr|/2
  double paper_relation = 0.0;  // (1/2) sqrt(QFI), NaN when QFI < 0
  double deviation = 0.0;       // |direct - paper_relation|
  double radial = 0.0;          // r . dr
};

HssReport hss_trigger(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                      const BlochOptions& options = {});

}  // namespace bqt::protocol
