#include <cmath>
#include <vector>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"
#include "bqt/linalg.hpp"
#include "bqt/metrics.hpp"
#include "bqt/protocol.hpp"
#include "bqt/sweep.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bqt;
using namespace bqt::protocol;

namespace {

std::vector<double> angles(int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(kPi * i / (count - 1));
  return out;
}

// Pure-state inputs whose teleported weight hits an endpoint exactly.
ProtocolConfig endpoint_config(double p, double theta_e, double theta_o) {
  ProtocolConfig c;
  c.channel = {p, 3, 0};
  c.triggers = {theta_e, theta_o};
  c.weight_mode = WeightMode::TraceDefinition;
  return c;
}

}  // namespace

TEST_CASE("trigger states") {
  CHECK((trigger_state(0.0).bloch() - Bloch(0, 0, 1)).norm() < 1e-15);
  CHECK((trigger_state(kPi / 2).bloch() - Bloch(1, 0, 0)).norm() < 1e-15);
  CHECK((trigger_state(kPi).bloch() - Bloch(0, 0, -1)).norm() < 1e-15);
  CHECK_THROWS_AS(trigger_state(4.0), Error);
  CHECK_THROWS_AS(trigger_state(-0.1), Error);
}

TEST_CASE("success weights") {
  ProtocolConfig c;
  c.channel = {0.0, 3, 0};
  c.triggers = {0.0, kPi / 4};
  Weights w = success_weights(c);
  CHECK(w.p_e == doctest::Approx(0.5));
  CHECK(std::abs(w.p_o) < 1e-15);
  c.channel.p = 1.0;
  w = success_weights(c);
  CHECK(w.p_e == 0.0);
  CHECK(w.p_o == 0.0);

  c.channel.p = 0.0;
  c.weight_mode = WeightMode::HalfAngle;
  c.triggers = {kPi / 2, 0.0};
  w = success_weights(c);
  CHECK(std::abs(w.p_e) < 1e-15);
  CHECK(w.p_o == doctest::Approx(0.5));

  c.weight_mode = WeightMode::TraceDefinition;
  c.triggers = {kPi / 3, kPi / 3};
  w = success_weights(c);
  CHECK(w.p_e == doctest::Approx(std::pow(std::cos(kPi / 6), 2)));
  CHECK(w.p_o == doctest::Approx(std::pow(std::sin(kPi / 6), 2)));

  // The printed form never leaves [0, 1 - p].
  for (double p : {0.0, 0.3, 0.9}) {
    for (double t : angles(101)) {
      c.weight_mode = WeightMode::Printed;
      c.channel.p = p;
      c.triggers = {t, t};
      w = success_weights(c);
      REQUIRE(w.raw_p_e >= -1e-15);
      REQUIRE(w.raw_p_e <= 1.0 - p + 1e-15);
    }
  }
}

TEST_CASE("teleported states at the balanced point") {
  ProtocolConfig c;
  c.channel = {0.0, 3, 0};
  c.triggers = {0.0, 0.0};
  const TeleportOutcome out = teleported_states(c);
  CHECK(out.weights.p_e == doctest::Approx(0.5));
  CHECK(out.weights.p_o == doctest::Approx(0.5));
  const Mat2 expect_o = 0.25 * c.input_even.rho + 0.75 * Mat2::Identity() / 2.0;
  const Mat2 expect_e = 0.25 * c.input_odd.rho + 0.75 * Mat2::Identity() / 2.0;
  CHECK(testutil::max_abs(out.rho_out_o.rho, expect_o) < 1e-15);
  CHECK(testutil::max_abs(out.rho_out_e.rho, expect_e) < 1e-15);
  CHECK(fidelity_oracle(Direction::AtoB, c) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(fidelity_oracle(Direction::BtoA, c) == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("endpoint exactness") {
  // theta_e = 0, theta_o = 0 gives P_e = 1, P_o = 0: the A->B weight is one
  // and the B->A weight is zero.
  ProtocolConfig c = endpoint_config(0.3, 0.0, 0.0);
  TeleportOutcome out = teleported_states(c);
  CHECK(out.weight_o == 1.0);
  CHECK(out.weight_e == 0.0);
  const Mat2 rho1 = coherent::reduced_single_state(c.channel).rho;
  CHECK(testutil::max_abs(out.rho_out_o.rho, c.input_even.rho) < 1e-12);
  CHECK(testutil::max_abs(out.rho_out_e.rho, rho1) < 1e-12);
  CHECK(std::abs(fidelity_oracle(Direction::AtoB, c) - 1.0) < 1e-12);
  // Weight zero against a pure |1> input: fidelity is the o-diagonal of rho_1.
  CHECK(std::abs(fidelity_oracle(Direction::BtoA, c) - rho1(1, 1).real()) < 1e-12);

  c = endpoint_config(0.3, kPi, kPi);
  out = teleported_states(c);
  CHECK(out.weight_e == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(testutil::max_abs(out.rho_out_e.rho, c.input_odd.rho) < 1e-12);
  CHECK(testutil::max_abs(out.rho_out_o.rho, rho1) < 1e-12);
  CHECK(std::abs(fidelity_oracle(Direction::BtoA, c) - 1.0) < 1e-12);
  // Against |0>: fidelity equals the e-diagonal lambda_e.
  CHECK(std::abs(fidelity_oracle(Direction::AtoB, c) - rho1(0, 0).real()) < 1e-12);

  c.rho1_mode = Rho1Mode::PaperPrinted;
  CHECK_THROWS_AS(fidelity_oracle(Direction::AtoB, c), Error);
}

TEST_CASE("outputs are states across the grid") {
  std::vector<double> ps;
  for (int i = 0; i <= 9; ++i) ps.push_back(0.1 * i);
  ps.push_back(1.0 - 1e-6);
  std::vector<double> thetas;
  for (double t = 0.0; t <= kPi; t += 0.1) thetas.push_back(t);
  for (WeightMode mode : {WeightMode::Printed, WeightMode::HalfAngle, WeightMode::TraceDefinition}) {
    for (double p : ps) {
      for (int n : {2, 3, 7, 25}) {
        for (int m = 0; m <= 1; ++m) {
          for (double te : thetas) {
            for (double to : {0.0, 0.7, kPi / 2, 2.9}) {
              ProtocolConfig c;
              c.channel = {p, n, m};
              c.triggers = {te, to};
              c.weight_mode = mode;
              const TeleportOutcome out = teleported_states(c);
              for (const Mat2* r : {&out.rho_out_e.rho, &out.rho_out_o.rho}) {
                REQUIRE(std::abs(r->trace() - Complex(1.0)) < 1e-12);
                REQUIRE(linalg::eigh(*r).values(0) >= -1e-10);
              }
              const double f = fidelity_oracle(Direction::AtoB, c);
              REQUIRE(f >= 0.0);
              REQUIRE(f <= 1.0 + 1e-9);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("closed-form fidelities") {
  CHECK(std::abs(fidelity_closed_form(Direction::AtoB, {1.0, 3, 0}, {0.0, 0.0}) - 1.0) < 1e-12);
  CHECK(fidelity_closed_form(Direction::AtoB, {0.0, 3, 0}, {0.0, 0.0}) ==
        doctest::Approx(13.0 / 32.0).epsilon(1e-14));
  CHECK(fidelity_closed_form(Direction::AtoB, {1.0, 3, 0}, {kPi / 2, 0.0}) ==
        doctest::Approx(2.0).epsilon(1e-14));
  try {
    fidelity_closed_form(Direction::BtoA, {0.0, 3, 0}, {0.0, 0.0});
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  // B->A at p = 1 is identically zero through the (p - 1) prefactor.
  CHECK(fidelity_closed_form(Direction::BtoA, {1.0, 3, 0}, {0.3, 0.4}) == 0.0);
  // Independent transcription at an interior point.
  const double p = 0.5, se = std::sin(0.4), so = std::sin(1.1);
  const double lam = 3 + p * p + (3 * p * p + 1) * p;
  const double ab = 0.125 * 2.25 * (1 + se) * (1.5 + 0.5 * so) +
                    lam * (p * p - 1) / (32 * (1 + 0.125)) *
                        (1.5 * so - 3.5 + 2.25 * se * (-0.5 * so - 1.5));
  CHECK(fidelity_closed_form(Direction::AtoB, {0.5, 3, 0}, {0.4, 1.1}) ==
        doctest::Approx(ab).epsilon(1e-14));
}

TEST_CASE("teleported Bloch components") {
  const ChannelParams ch{0.4, 3, 0};
  for (double te : {0.0, 0.9, 2.0}) {
    for (double to : {0.3, 1.7}) {
      const BlochPoint bp = teleported_bloch(Direction::AtoB, ch, {te, to});
      ProtocolConfig c;
      c.channel = ch;
      c.triggers = {te, to};
      const Weights w = success_weights(c);
      CHECK(bp.r.z() == doctest::Approx(-w.p_o * (1 - w.p_e)).epsilon(1e-15));
      const double residue = coherent::lambda(ch) / (4.0 * (1.0 + std::pow(0.4, 3)));
      const double weight = w.p_e * (1 - w.p_o);
      CHECK(bp.r.x() == doctest::Approx(2 * weight + (1 - weight) * residue).epsilon(1e-14));
      CHECK(bp.r.y() == doctest::Approx(-2 * (1 - weight) * residue).epsilon(1e-14));
      CHECK(bp.norm == doctest::Approx(bp.r.norm()));
    }
  }
  // p = 1 switches the weights off.
  const BlochPoint flat = teleported_bloch(Direction::BtoA, {1.0, 3, 0}, {0.4, 0.8});
  CHECK(flat.r.z() == 0.0);
  CHECK(flat.dr.norm() < 1e-9);
  CHECK(flat.r.x() == doctest::Approx(1.0));
  CHECK(flat.r.y() == doctest::Approx(-2.0));
  CHECK_FALSE(flat.inside_ball);

  // Alternative grouping flips the residue sign for odd m.
  BlochOptions alt;
  alt.grouping = BlochGrouping::ParityOutside;
  const Bloch r0 = teleported_bloch_vector(Direction::AtoB, {1.0 - 1e-6, 25, 1}, {0.0, 0.0});
  const Bloch r1 = teleported_bloch_vector(Direction::AtoB, {1.0 - 1e-6, 25, 1}, {0.0, 0.0}, alt);
  CHECK(r0.y() * r1.y() < 0.0);

  // Derivative against an independent finite difference at a coarser step.
  const TriggerPhase t{1.2, 0.5};
  const BlochPoint bp = teleported_bloch(Direction::AtoB, ch, t);
  const Bloch hi = teleported_bloch_vector(Direction::AtoB, ch, {1.2 + 1e-4, 0.5});
  const Bloch lo = teleported_bloch_vector(Direction::AtoB, ch, {1.2 - 1e-4, 0.5});
  CHECK(((hi - lo) / 2e-4 - bp.dr).norm() < 1e-7);
  BlochOptions rich;
  rich.richardson = true;
  CHECK((teleported_bloch(Direction::AtoB, ch, t, rich).dr - bp.dr).norm() < 1e-7);
}

TEST_CASE("trigger QFI and HSS") {
  // Printed components leave the Bloch ball here; the strict form refuses.
  try {
    qfi_trigger(Direction::AtoB, {0.0, 3, 0}, {0.5, 0.0});
    FAIL("expected InvalidBloch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidBloch);
  }
  const QfiReport rep = qfi_trigger_report(Direction::AtoB, {0.0, 3, 0}, {0.5, 0.0});
  CHECK_FALSE(rep.inside_ball);
  CHECK(std::isfinite(rep.value));

  // theta-independent family at p = 1.
  CHECK(qfi_trigger_report(Direction::AtoB, {1.0, 3, 0}, {0.5, 0.2}).value < 1e-12);
  CHECK(hss_trigger(Direction::AtoB, {1.0, 3, 0}, {0.5, 0.2}).direct < 1e-9);

  // HSS equals |dr|/2 everywhere and equals sqrt(QFI)/2 where r.dr = 0.
  for (double te : angles(40)) {
    const BlochPoint bp = teleported_bloch(Direction::AtoB, {0.2, 3, 0}, {te, 0.0});
    const HssReport h = hss_trigger(Direction::AtoB, {0.2, 3, 0}, {te, 0.0});
    REQUIRE(std::abs(h.direct - bp.dr.norm() / 2.0) < 1e-10);
    if (std::abs(h.radial) < 1e-14) REQUIRE(h.deviation < 1e-8);
  }
}

TEST_CASE("pipeline QFI matches spectral QFI inside the Bloch ball") {
  int checked = 0;
  for (BlochGrouping g : {BlochGrouping::ParityInside, BlochGrouping::ParityOutside}) {
    for (WeightMode mode : {WeightMode::Printed, WeightMode::HalfAngle, WeightMode::TraceDefinition}) {
      BlochOptions opt;
      opt.grouping = g;
      opt.weights = mode;
      for (Direction d : {Direction::AtoB, Direction::BtoA}) {
        for (double p : {0.0, 0.2, 0.5, 0.9}) {
          for (int n : {3, 25}) {
            for (int m : {0, 1}) {
              for (double x : angles(23)) {
                const TriggerPhase t = with_estimated_phase(d, {kPi / 6, kPi / 6}, x);
                const BlochPoint bp = teleported_bloch(d, {p, n, m}, t, opt);
                if (!(bp.norm < 1.0 - 1e-6)) continue;
                // Stay away from the interval ends so the family is evaluable.
                if (x < 1e-3 || x > kPi - 1e-3) continue;
                metrics::ParamFamily fam{[&](double xi) {
                                           const Bloch r = teleported_bloch_vector(
                                               d, {p, n, m}, with_estimated_phase(d, t, xi), opt);
                                           return MatX(QubitDensity::from_bloch(r).rho);
                                         },
                                         1e-5, false};
                const double pipeline = qfi_trigger(d, {p, n, m}, t, opt);
                double spectral = 0.0;
                try {
                  spectral = metrics::qfi_spectral(fam, x);
                } catch (const Error&) {
                  continue;  // maximally mixed points have no eigenbasis
                }
                REQUIRE(std::abs(pipeline - spectral) <= 1e-6);
                ++checked;
              }
            }
          }
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("sweep") {
  ChannelGrid ch{{0.0, 0.5}, {3}, {0, 1}};
  TriggerGrid tr{angles(5), {0.0}};
  const SweepTable t = sweep(Direction::BtoA, ch, tr, Quantity::FidelityClosed);
  REQUIRE(t.cells.size() == 20);
  // p = 0 cells fail for B->A but the sweep continues.
  CHECK_FALSE(t.cells[0].value.has_value());
  CHECK(t.cells[0].error.find("OutOfDomain") != std::string::npos);
  CHECK(t.cells[10].value.has_value());
  CHECK(t.cells[10].channel.p == 0.5);
  CHECK(t.cells[1].triggers.theta_e == doctest::Approx(kPi / 4));

  const SweepTable one = sweep(Direction::AtoB, {{0.3}, {3}, {0}}, {{0.4}, {0.2}}, Quantity::FidelityOracle);
  REQUIRE(one.cells.size() == 1);
  ProtocolConfig c;
  c.channel = {0.3, 3, 0};
  c.triggers = {0.4, 0.2};
  CHECK(*one.cells[0].value == fidelity_oracle(Direction::AtoB, c));

  const SweepTable q1 = sweep(Direction::AtoB, ch, tr, Quantity::Qfi);
  const SweepTable q2 = sweep(Direction::AtoB, ch, tr, Quantity::Qfi);
  for (std::size_t i = 0; i < q1.cells.size(); ++i) {
    CHECK(q1.cells[i].value == q2.cells[i].value);
    CHECK(q1.cells[i].flagged);
  }
  const SweepTable flagged = sweep(Direction::AtoB, {{1.0}, {3}, {0}}, {{kPi / 2}, {0.0}},
                                   Quantity::FidelityClosed);
  CHECK(flagged.cells[0].flagged);
}
