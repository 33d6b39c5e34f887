#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"
#include "bqt/linalg.hpp"
#include "bqt/metrics.hpp"
#include "bqt/simulator.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bqt;
using namespace bqt::circuit;

namespace {

Gate g1(GateKind k, unsigned q, double phase = 0.0) { return {k, {q}, phase, {}}; }
Gate g2(GateKind k, unsigned a, unsigned b, double phase = 0.0) { return {k, {a, b}, phase, {}}; }

Gate inverse(const Gate& g) {
  Gate inv = g;
  if (g.kind == GateKind::RY || g.kind == GateKind::CP) inv.phase = -g.phase;
  return inv;
}

SimState mixed_register(unsigned qubits, Backend b = Backend::OpenMP) {
  std::vector<SimState::Factor> f;
  for (unsigned q = 0; q < qubits; ++q) {
    const double t = 0.3 + 0.2 * q;
    f.push_back({{q}, MatX(QubitDensity::from_bloch(Bloch(0.5 * std::sin(t), 0.1, 0.6 * std::cos(t))).rho)});
  }
  return SimState::product(qubits, 1, f, b);
}

}  // namespace

TEST_CASE("basic gates") {
  SimState s(1, 0);
  s = apply_gate(s, g1(GateKind::X, 0));
  CHECK(std::abs(s.reduced_qubit(0)(1, 1) - 1.0) < 1e-15);

  SimState h(1, 0);
  h = apply_gate(apply_gate(h, g1(GateKind::H, 0)), g1(GateKind::H, 0));
  CHECK(std::abs(h.reduced_qubit(0)(0, 0) - 1.0) < 1e-12);

  // CNOT on (|0>+|1>)|0>/sqrt2; qubit 0 is the less significant bit, so the
  // two-qubit matrix is reordered to put qubit 0 first before the concurrence.
  SimState b(2, 0);
  b = apply_gate(b, g1(GateKind::H, 0));
  b = apply_gate(b, g2(GateKind::CNOT, 0, 1));
  MatX rho = b.density_matrix();
  Mat4 ordered;
  auto idx = [](int i) { return ((i >> 1) & 1) | ((i & 1) << 1); };
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) ordered(i, j) = rho(idx(i), idx(j));
  }
  CHECK(metrics::concurrence({ordered}) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(apply_gate(SimState(1, 1), {GateKind::MEASURE, {0}, 0.0, {0}}), Error);
  std::mt19937_64 rng(1);
  SimState m = apply_gate(SimState(1, 1), {GateKind::MEASURE, {0}, 0.0, {0}}, &rng);
  CHECK(m.classical_string() == "0");
}

TEST_CASE("gates and inverses restore the state, trace is preserved") {
  const std::vector<Gate> gates{
      g1(GateKind::X, 0),       g1(GateKind::H, 1),          g1(GateKind::RY, 2, 0.7),
      g2(GateKind::CNOT, 0, 3), {GateKind::CCNOT, {1, 2, 0}, 0.0, {}},
      g2(GateKind::CZ, 3, 1),   g2(GateKind::CP, 2, 0, 1.1)};
  for (Backend backend : {Backend::Serial, Backend::OpenMP}) {
    for (bool mixed : {false, true}) {
      SimState s = mixed ? mixed_register(4, backend) : SimState(4, 0, backend);
      if (!mixed) s = apply_gate(apply_gate(s, g1(GateKind::H, 0)), g1(GateKind::RY, 3, 0.4));
      const MatX start = s.density_matrix();
      for (const Gate& g : gates) {
        SimState t = apply_gate(s, g);
        REQUIRE(std::abs(t.trace() - 1.0) < 1e-10);
        REQUIRE(linalg::hermiticity_defect(t.density_matrix()) < 1e-12);
        REQUIRE(linalg::eigh(t.density_matrix()).values(0) > -1e-9);
        REQUIRE(testutil::max_abs(apply_gate(t, inverse(g)).density_matrix(), s.density_matrix()) <
                1e-10);
        s = std::move(t);
      }
      for (auto it = gates.rbegin(); it != gates.rend(); ++it) s = apply_gate(s, inverse(*it));
      CHECK(testutil::max_abs(s.density_matrix(), start) < 1e-10);
    }
  }
}

TEST_CASE("pure and density paths agree") {
  SimState pure(3, 0);
  pure = apply_gate(pure, g1(GateKind::H, 0));
  pure = apply_gate(pure, g2(GateKind::CNOT, 0, 2));
  SimState dense = pure;
  dense.to_density();
  CHECK(pure.is_pure());
  CHECK_FALSE(dense.is_pure());
  for (const Gate& g : {g1(GateKind::RY, 1, 0.3), g2(GateKind::CP, 1, 2, 0.9), g1(GateKind::H, 2)}) {
    pure = apply_gate(pure, g);
    dense = apply_gate(dense, g);
  }
  CHECK(testutil::max_abs(pure.density_matrix(), dense.density_matrix()) < 1e-14);
  const auto wp = pure.outcome_weights({0, 2});
  const auto wd = dense.outcome_weights({0, 2});
  for (std::size_t k = 0; k < 4; ++k) CHECK(wp[k] == doctest::Approx(wd[k]).epsilon(1e-13));
}

TEST_CASE("channel initialization") {
  const PairDensity bell = channel_init({0.0, 2, 0});
  CHECK(std::abs(bell.rho(0, 3) - 0.5) < 1e-12);
  CHECK(testutil::max_abs(channel_init({0.0, 3, 1}).rho, coherent::reduced_pair_state({0.0, 3, 1}).rho) == 0.0);
  // Near the ground-state limit the pair is almost a product.
  const PairDensity ground = channel_init({1.0 - 1e-9, 3, 0});
  CHECK(metrics::concurrence(ground) < 1e-6);

  const SimState s = prepare(default_init({0.3, 3, 0}));
  CHECK_FALSE(s.is_pure());
  CHECK(std::abs(s.trace() - 1.0) < 1e-12);
  const Mat2 even = s.reduced_qubit(qubit::kEven);
  CHECK(std::abs(even(0, 0) - 1.0) < 1e-12);
  const Mat2 odd = s.reduced_qubit(qubit::kOdd);
  CHECK(std::abs(odd(1, 1) - 1.0) < 1e-12);
  const Mat2 psi = s.reduced_qubit(qubit::kChannelA);
  CHECK(testutil::max_abs(psi, coherent::reduced_single_state({0.3, 3, 0}).rho) < 1e-12);
  // The Bell channel is pure, so the whole register takes the vector path.
  CHECK(prepare(default_init({0.0, 2, 0})).is_pure());
}

TEST_CASE("empty circuit") {
  Circuit c;
  c.qubits = 10;
  c.classical_bits = 4;
  const SimState init(10, 4);
  const Histogram h = run_exact(c, init);
  REQUIRE(h.probabilities.size() == 1);
  CHECK(h.probabilities.at("0000") == 1.0);

  // Without the teleport block, the Even qubit keeps its initial state.
  const SimInit si = default_init({0.2, 3, 0});
  const auto branches = run_branches(c, prepare(si));
  REQUIRE(branches.size() == 1);
  const double f = metrics::uhlmann_fidelity(MatX(branches[0].state.reduced_qubit(qubit::kEven)),
                                             MatX(si.even_input.rho));
  CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resource guard") {
  CHECK_THROWS_AS(SimState(13, 0), Error);
  Circuit c;
  c.qubits = 11;
  try {
    run_exact(c, SimState(11, 0));
    FAIL("expected ResourceLimit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResourceLimit);
  }
}

TEST_CASE("Table 3 outcomes") {
  const std::set<std::string> support{"0000", "0001", "1000", "1001"};
  for (auto [p, m, tol] : {std::tuple{0.0, 1, 1e-9}, std::tuple{1.0 - 1e-9, 0, 1e-3}}) {
    const ChannelParams ch{p, 3, m};
    const Circuit c = build_bqt_circuit(ch, {kPi, kPi});
    const Histogram h = run_exact(c, prepare(default_init(ch)));
    CHECK(std::abs(h.total_probability() - 1.0) < 1e-9);
    REQUIRE(h.probabilities.size() == 4);
    for (const auto& [k, prob] : h.probabilities) {
      CHECK(support.count(k) == 1);
      CHECK(std::abs(prob - 0.25) < tol);
    }
  }
}

TEST_CASE("sampling") {
  const ChannelParams ch{0.0, 3, 1};
  const Circuit c = build_bqt_circuit(ch, {kPi, kPi});
  const SimState init = prepare(default_init(ch));
  const Histogram exact = run_exact(c, init);
  const Histogram a = sample(exact, 8192, 7);
  const Histogram b = run_shots(c, init, 8192, 7);
  CHECK(a.counts == b.counts);
  CHECK(a.seed == 7);
  CHECK(a.sampled);
  std::uint64_t total = 0;
  for (const auto& [k, n] : a.counts) total += n;
  CHECK(total == 8192);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Histogram s = sample(exact, 8192, seed);
    REQUIRE(total_variation(s, exact) < 0.03);
  }
  const Histogram one = sample(exact, 1, 3);
  int nonzero = 0;
  for (const auto& [k, n] : one.counts) nonzero += n > 0;
  CHECK(nonzero == 1);
  CHECK_THROWS_AS(sample(exact, 0, 1), Error);
}

TEST_CASE("serial backend reproduces the OpenMP run") {
  const ChannelParams ch{0.4, 3, 1};
  const Circuit c = build_bqt_circuit(ch, {0.8, 2.0});
  const Histogram hs = run_exact(c, prepare(default_init(ch), Backend::Serial));
  const Histogram ho = run_exact(c, prepare(default_init(ch), Backend::OpenMP));
  REQUIRE(hs.probabilities.size() == ho.probabilities.size());
  for (const auto& [k, prob] : hs.probabilities) CHECK(std::abs(prob - ho.probabilities.at(k)) < 1e-12);
}

TEST_CASE("round trip against the protocol") {
  for (auto [p, m, te, to] : {std::tuple{0.0, 1, 0.0, 0.0}, std::tuple{0.0, 1, kPi, kPi},
                              std::tuple{0.6, 0, kPi, 0.0}, std::tuple{0.35, 1, 1.1, 2.4}}) {
    const RoundtripReport r = teleport_roundtrip_check({p, 3, m}, {te, to});
    CHECK(r.branches.size() == 4);
    CHECK(r.max_deviation < 1e-6);
    for (const BranchReport& b : r.branches) {
      CHECK(b.fidelity_even == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(b.fidelity_odd == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}
