#include "bqt/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"
#include "bqt/linalg.hpp"
#include "bqt/metrics.hpp"

namespace bqt::protocol {

namespace {

constexpr double kAngleSlack = 1e-12;

double printed_weight(double p, double theta) {
  return 0.5 * (1.0 - p) * (1.0 - 2.0 * std::cos(theta) * std::sin(theta));
}

double half_angle_weight(double p, double theta) {
  return 0.5 * (1.0 - p) * (1.0 - 2.0 * std::cos(theta / 2.0) * std::sin(theta / 2.0));
}

// Trigger states outside [0, pi] are still evaluated when differencing at the
// interval ends.
QubitDensity unchecked_trigger(double theta) {
  return QubitDensity::pure(std::cos(theta / 2.0), std::sin(theta / 2.0));
}

Weights raw_weights(WeightMode mode, double p, const TriggerPhase& t,
                    const QubitDensity& even, const QubitDensity& odd) {
  Weights w;
  switch (mode) {
    case WeightMode::Printed:
      w.raw_p_e = printed_weight(p, t.theta_e);
      w.raw_p_o = printed_weight(p, t.theta_o);
      break;
    case WeightMode::HalfAngle:
      w.raw_p_e = half_angle_weight(p, t.theta_e);
      w.raw_p_o = half_angle_weight(p, t.theta_o);
      break;
    case WeightMode::TraceDefinition:
      w.raw_p_e = (unchecked_trigger(t.theta_e).rho * even.rho).trace().real();
      w.raw_p_o = (unchecked_trigger(t.theta_o).rho * odd.rho).trace().real();
      break;
  }
  w.p_e = std::clamp(w.raw_p_e, 0.0, 1.0);
  w.p_o = std::clamp(w.raw_p_o, 0.0, 1.0);
  return w;
}

Bloch bloch_components(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                       const BlochOptions& options) {
  const ProtocolConfig defaults;
  const Weights w = raw_weights(options.weights, channel.p, t, defaults.input_even,
                                defaults.input_odd);
  const double c = channel.parity_sign();
  const double pn = std::pow(channel.p, channel.n);
  const double denom = options.grouping == BlochGrouping::ParityInside ? 4.0 * (1.0 + pn * c)
                                                                       : 4.0 * (1.0 + pn) * c;
  const double residue = coherent::lambda(channel) / denom;
  const double z = -w.p_o * (1.0 - w.p_e);
  const double weight = d == Direction::AtoB ? w.p_e * (1.0 - w.p_o) : w.p_o * (1.0 - w.p_e);
  return Bloch(2.0 * weight + (1.0 - weight) * residue, -2.0 * (1.0 - weight) * residue, z);
}

}  // namespace

std::string_view to_string(Direction d) noexcept { return d == Direction::AtoB ? "ab" : "ba"; }

std::string_view to_string(WeightMode w) noexcept {
  switch (w) {
    case WeightMode::Printed: return "printed";
    case WeightMode::HalfAngle: return "half-angle";
    case WeightMode::TraceDefinition: return "trace";
  }
  return "printed";
}

void validate(const TriggerPhase& t) {
  for (double theta : {t.theta_e, t.theta_o}) {
    if (!(theta >= -kAngleSlack && theta <= kPi + kAngleSlack)) {
      throw Error(ErrorCode::OutOfRange,
                  "trigger phase must lie in [0, pi], got " + std::to_string(theta));
    }
  }
}

QubitDensity trigger_state(double theta) {
  if (!(theta >= -kAngleSlack && theta <= kPi + kAngleSlack)) {
    throw Error(ErrorCode::OutOfRange, "trigger phase must lie in [0, pi]");
  }
  return unchecked_trigger(theta);
}

Weights success_weights(const ProtocolConfig& config) {
  coherent::validate(config.channel);
  validate(config.triggers);
  return raw_weights(config.weight_mode, config.channel.p, config.triggers, config.input_even,
                     config.input_odd);
}

const QubitDensity& source_state(Direction d, const ProtocolConfig& config) {
  return d == Direction::AtoB ? config.input_even : config.input_odd;
}

const QubitDensity& output_state(Direction d, const TeleportOutcome& outcome) {
  return d == Direction::AtoB ? outcome.rho_out_o : outcome.rho_out_e;
}

double estimated_phase(Direction d, const TriggerPhase& t) {
  return d == Direction::AtoB ? t.theta_e : t.theta_o;
}

TriggerPhase with_estimated_phase(Direction d, TriggerPhase t, double value) {
  (d == Direction::AtoB ? t.theta_e : t.theta_o) = value;
  return t;
}

TeleportOutcome teleported_states(const ProtocolConfig& config) {
  TeleportOutcome out;
  out.weights = success_weights(config);
  QubitDensity rho1;
  if (config.rho1_mode == Rho1Mode::PartialTrace) {
    rho1 = coherent::reduced_single_state(config.channel);
  } else {
    rho1.rho = coherent::printed_single_coefficient(config.channel) * Mat2::Identity();
  }
  const Weights& w = out.weights;
  out.weight_e = w.p_o * (1.0 - w.p_e);
  out.weight_o = w.p_e * (1.0 - w.p_o);
  out.rho_out_e.rho = out.weight_e * config.input_odd.rho + (1.0 - out.weight_e) * rho1.rho;
  out.rho_out_o.rho = out.weight_o * config.input_even.rho + (1.0 - out.weight_o) * rho1.rho;
  return out;
}

double fidelity_closed_form(Direction d, const ChannelParams& channel, const TriggerPhase& t) {
  coherent::validate(channel);
  validate(t);
  const double p = channel.p;
  const double c = channel.parity_sign();
  const double pn = std::pow(p, channel.n);
  const double se = std::sin(t.theta_e);
  const double so = std::sin(t.theta_o);
  if (d == Direction::AtoB) {
    const double lam = coherent::lambda(channel);
    const double first = 0.125 * (1.0 + p) * (1.0 + p) * (1.0 + se) * (1.0 + p + (1.0 - p) * so);
    const double bracket = (1.0 + p) * so - p - 3.0 +
                           (1.0 + p) * (1.0 + p) * se * ((p - 1.0) * so - 1.0 - p);
    return first + lam * (p * p - 1.0) / (32.0 * (1.0 + pn * c)) * bracket;
  }
  if (p == 0.0) {
    throw Error(ErrorCode::OutOfDomain, "the Bob-to-Alice closed form divides by p^2");
  }
  const double p2 = p * p;
  const double lead = p2 * (3.0 + p2) + pn * c * (1.0 + 3.0 * p2);
  const double tail = p2 + 2.0 * p - 3.0 + (1.0 + p) * (1.0 + p) * se -
                      (p2 - 1.0) * (1.0 + se) * so;
  return (p - 1.0) / (32.0 * p2 * (1.0 + pn * c)) * lead * tail;
}

double fidelity_oracle(Direction d, const ProtocolConfig& config) {
  if (config.rho1_mode != Rho1Mode::PartialTrace) {
    throw Error(ErrorCode::OutOfDomain, "the fidelity oracle needs the partial-trace residue");
  }
  const TeleportOutcome outcome = teleported_states(config);
  return metrics::uhlmann_fidelity(source_state(d, config), output_state(d, outcome));
}

Bloch teleported_bloch_vector(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                              const BlochOptions& options) {
  coherent::validate(channel);
  return bloch_components(d, channel, t, options);
}

BlochPoint teleported_bloch(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                            const BlochOptions& options) {
  coherent::validate(channel);
  validate(t);
  if (!(options.step > 0.0)) {
    throw Error(ErrorCode::OutOfRange, "differentiation step must be positive");
  }
  const double x = estimated_phase(d, t);
  auto diff = [&](double h) {
    Bloch hi = bloch_components(d, channel, with_estimated_phase(d, t, x + h), options);
    Bloch lo = bloch_components(d, channel, with_estimated_phase(d, t, x - h), options);
    return Bloch((hi - lo) / (2.0 * h));
  };
  BlochPoint bp;
  bp.r = bloch_components(d, channel, t, options);
  bp.dr = diff(options.step);
  if (options.richardson) bp.dr = (4.0 * diff(options.step / 2.0) - bp.dr) / 3.0;
  bp.norm = bp.r.norm();
  bp.inside_ball = bp.norm <= 1.0 + 1e-9;
  return bp;
}

double qfi_trigger(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                   const BlochOptions& options) {
  const BlochPoint bp = teleported_bloch(d, channel, t, options);
  return metrics::qfi_bloch(bp.r, bp.dr);
}

QfiReport qfi_trigger_report(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                             const BlochOptions& options) {
  const BlochPoint bp = teleported_bloch(d, channel, t, options);
  QfiReport rep;
  rep.bloch_norm = bp.norm;
  rep.inside_ball = bp.inside_ball;
  const bool on_sphere = bp.inside_ball && bp.norm >= 1.0 - 1e-9;
  if (on_sphere && std::abs(bp.r.dot(bp.dr)) <= 1e-6) {
    rep.value = bp.dr.squaredNorm();
  } else {
    rep.value = metrics::qfi_bloch_unchecked(bp.r, bp.dr);
  }
  return rep;
}

HssReport hss_trigger(Direction d, const ChannelParams& channel, const TriggerPhase& t,
                      const BlochOptions& options) {
  const BlochPoint bp = teleported_bloch(d, channel, t, options);
  Mat2 drho = 0.5 * (bp.dr.x() * linalg::pauli_x() + bp.dr.y() * linalg::pauli_y() +
                     bp.dr.z() * linalg::pauli_z());
  HssReport rep;
  rep.direct = metrics::hss(drho);
  rep.radial = bp.r.dot(bp.dr);
  const double qfi = qfi_trigger_report(d, channel, t, options).value;
  rep.paper_relation = qfi >= 0.0 ? 0.5 * std::sqrt(qfi) : std::numeric_limits<double>::quiet_NaN();
  rep.deviation = std::abs(rep.direct - rep.paper_relation);
  return rep;
}

}  // namespace bqt::protocol
