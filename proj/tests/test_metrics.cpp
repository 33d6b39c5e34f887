#include <cmath>
#include <random>
#include <vector>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"
#include "bqt/linalg.hpp"
#include "bqt/metrics.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bqt;
using namespace bqt::metrics;

namespace {

Mat4 bell_projector() {
  Mat4 b = Mat4::Zero();
  b(0, 0) = b(0, 3) = b(3, 0) = b(3, 3) = 0.5;
  return b;
}

Mat2 sigma_dot(const Bloch& v) {
  return v.x() * linalg::pauli_x() + v.y() * linalg::pauli_y() + v.z() * linalg::pauli_z();
}

MatX random_density(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  MatX a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  MatX rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

using testutil::RandomFamily;

TEST_CASE("partial trace") {
  PairDensity bell{bell_projector()};
  for (Keep k : {Keep::First, Keep::Second}) {
    const Mat2 half = partial_trace(bell, k).rho;
    CHECK(testutil::max_abs(half, Mat2::Identity() / 2.0) < 1e-15);
  }
  Mat2 a = QubitDensity::from_bloch(Bloch(0.1, 0.2, 0.3)).rho;
  Mat2 b = QubitDensity::from_bloch(Bloch(-0.4, 0.0, 0.5)).rho;
  Mat4 prod;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) prod(i, j) = a(i / 2, j / 2) * b(i % 2, j % 2);
  }
  CHECK(testutil::max_abs(partial_trace({prod}, Keep::First).rho, a) < 1e-15);
  CHECK(testutil::max_abs(partial_trace({prod}, Keep::Second).rho, b) < 1e-15);

  ChannelParams c{0.5, 3, 0};
  const Mat2 viaTrace = partial_trace(coherent::reduced_pair_state(c), Keep::Second).rho;
  CHECK(testutil::max_abs(viaTrace, coherent::reduced_single_state(c).rho) < 1e-12);

  Mat4 bad = Mat4::Identity();
  CHECK_THROWS_AS(partial_trace({bad}, Keep::First), Error);
}

TEST_CASE("Wootters concurrence") {
  CHECK(concurrence({bell_projector()}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence({Mat4::Identity() / 4.0}) == doctest::Approx(0.0));
  CHECK(concurrence(coherent::reduced_pair_state({0.5, 3, 0})) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  // Werner states: C = max(0, 2F - 1) for singlet fraction F.
  for (double f : {0.2, 0.5, 0.7, 0.9}) {
    Mat4 w = (1.0 - f) / 3.0 * Mat4::Identity();
    w += (f - (1.0 - f) / 3.0) * bell_projector();
    CHECK(concurrence({w}) == doctest::Approx(std::max(0.0, 2.0 * f - 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("concurrence closed form") {
  CHECK(concurrence_closed_form({0.0, 3, 1}) == 0.0);
  CHECK(concurrence_closed_form({0.5, 3, 0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(concurrence_closed_form({1.0 - 1e-6, 4, 1}) - 0.5) < 1e-3);
  for (const auto& c : testutil::channel_grid()) {
    REQUIRE(std::abs(concurrence_closed_form(c) - concurrence(coherent::reduced_pair_state(c))) <
            1e-10);
  }
}

TEST_CASE("Uhlmann fidelity") {
  const MatX zero = QubitDensity::pure(1.0, 0.0).rho;
  const MatX one = QubitDensity::pure(0.0, 1.0).rho;
  const MatX plus = QubitDensity::pure(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)).rho;
  CHECK(uhlmann_fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(uhlmann_fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(uhlmann_fidelity(plus, zero) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(uhlmann_fidelity(zero, MatX(2.0 * one)), Error);

  // Qubit closed form: F = Tr(rho sigma) + 2 sqrt(det rho det sigma).
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const MatX a = random_density(rng, 2);
    const MatX b = random_density(rng, 2);
    const double expected = (a * b).trace().real() +
                            2.0 * std::sqrt(std::max(0.0, a.determinant().real() *
                                                              b.determinant().real()));
    REQUIRE(uhlmann_fidelity(a, b) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("fidelity equals one only for equal states") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const int dim = i % 2 == 0 ? 2 : 4;
    const MatX a = random_density(rng, dim);
    const MatX b = random_density(rng, dim);
    const double same = uhlmann_fidelity(a, a);
    const double other = uhlmann_fidelity(a, b);
    REQUIRE(std::abs(same - 1.0) < 1e-9);
    REQUIRE(other <= 1.0 + 1e-9);
    REQUIRE((a - b).norm() > 1e-9);
    REQUIRE(other < 1.0 - 1e-9);
  }
}

TEST_CASE("Bloch QFI") {
  for (double xi : {0.0, 0.4, 1.3, 2.9}) {
    const Bloch r(std::sin(xi), 0.0, std::cos(xi));
    const Bloch dr(std::cos(xi), 0.0, -std::sin(xi));
    CHECK(qfi_bloch(r, dr) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(qfi_bloch(Bloch(0, 0, 0.6), Bloch(0, 0, 1)) == doctest::Approx(1.5625).epsilon(1e-14));
  CHECK(qfi_bloch(Bloch::Zero(), Bloch::Zero()) == 0.0);
  CHECK_THROWS_AS(qfi_bloch(Bloch(0, 0, 1.2), Bloch(1, 0, 0)), Error);
  try {
    qfi_bloch(Bloch(0, 0, 1), Bloch(0, 0, 0.1));
    FAIL("expected InconsistentFamily");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentFamily);
  }
}

TEST_CASE("spectral QFI examples") {
  ParamFamily rotation{[](double x) {
                         return MatX(QubitDensity::pure(std::cos(x / 2), std::sin(x / 2)).rho);
                       },
                       1e-5, false};
  CHECK(std::abs(qfi_spectral(rotation, 0.7) - 1.0) < 1e-6);

  ParamFamily dephased{[](double x) {
                         return MatX((Mat2::Identity() + x * linalg::pauli_z()) / 2.0);
                       },
                       1e-5, false};
  CHECK(std::abs(qfi_spectral(dephased, 0.6) - 1.5625) < 1e-6);
  dephased.richardson = true;
  CHECK(std::abs(qfi_spectral(dephased, 0.6) - 1.5625) < 1e-6);

  ParamFamily constant{[](double) { return MatX(Mat2::Identity() / 2.0); }, 1e-5, false};
  // The maximally mixed state has a degenerate spectrum.
  CHECK_THROWS_AS(qfi_spectral(constant, 0.1), Error);
  ParamFamily fixed{[](double) { return MatX(QubitDensity::from_bloch(Bloch(0.2, 0, 0.3)).rho); },
                    1e-5, false};
  CHECK(std::abs(qfi_spectral(fixed, 0.1)) < 1e-9);

  // A pure two-qubit family: the three zero eigenvalues are dropped.
  ParamFamily two{[](double x) {
                    Eigen::Vector4cd v(std::cos(x), 0.0, 0.0, std::sin(x));
                    return MatX(v * v.adjoint());
                  },
                  1e-5, false};
  CHECK(std::abs(qfi_spectral(two, 0.3) - 4.0) < 1e-6);
}

TEST_CASE("spectral and Bloch QFI agree on random families") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> at(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const RandomFamily f = RandomFamily::draw(rng);
    const double x = at(rng);
    const double bloch = qfi_bloch(f.r(x), f.dr(x));
    const double spectral = qfi_spectral(f.family(), x);
    REQUIRE(std::abs(bloch - spectral) <= 1e-6);
  }
}

TEST_CASE("statistical speeds") {
  const std::vector<double> a{1.0, -1.0}, z{0.0, 0.0, 0.0}, h{0.5, -0.5};
  CHECK(classical_speed_alpha(a, 2.0) == doctest::Approx(1.0));
  CHECK(classical_speed_alpha(z, 3.0) == 0.0);
  CHECK(classical_speed_alpha(h, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(classical_speed_alpha(a, 0.5), Error);
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(classical_speed_alpha(bad, 2.0), Error);

  const MatX half_z = linalg::pauli_z() / 2.0;
  CHECK(quantum_speed_alpha(half_z, 2.0) == doctest::Approx(0.5));
  CHECK(quantum_speed_alpha(MatX::Zero(2, 2), 1.5) == 0.0);
  CHECK(quantum_speed_alpha(half_z, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(quantum_speed_alpha(half_z, 0.9), Error);
  CHECK_THROWS_AS(hss(MatX::Identity(2, 2)), Error);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    MatX d = random_density(rng, 4) - random_density(rng, 4);
    CHECK(quantum_speed_alpha(d, 2.0) == hss(d));
  }
}

TEST_CASE("HSS identities on single-qubit families") {
  CHECK(hss(linalg::pauli_z() / 2.0) == doctest::Approx(0.5));
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> at(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const RandomFamily f = RandomFamily::draw(rng);
    const double x = at(rng);
    const Bloch dr = f.dr(x);
    REQUIRE(std::abs(hss(sigma_dot(dr) / 2.0) - dr.norm() / 2.0) < 1e-10);
  }
  // Fixed-radius rotations have r . dr = 0, where HSS = sqrt(QFI) / 2.
  for (double s : {0.2, 0.6, 0.95, 1.0}) {
    for (double x : {0.1, 1.0, 2.5}) {
      const Bloch r = s * Bloch(std::sin(x), 0, std::cos(x));
      const Bloch dr = s * Bloch(std::cos(x), 0, -std::sin(x));
      REQUIRE(std::abs(r.dot(dr)) < 1e-15);
      REQUIRE(std::abs(hss(sigma_dot(dr) / 2.0) - 0.5 * std::sqrt(qfi_bloch(r, dr))) < 1e-8);
    }
  }
}
