#include <cmath>
#include <random>
#include <vector>

#include "bqt/kernels.hpp"
#include "doctest.h"

using namespace bqt::kernels;

namespace {

std::vector<Amp> random_amps(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Amp> v(n);
  for (Amp& a : v) a = Amp(g(rng), g(rng));
  return v;
}

double max_diff(const std::vector<Amp>& a, const std::vector<Amp>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("controlled kernel agrees with the serial reference") {
  const Matrix2 u{Amp(0.6, 0.1), Amp(0.2, -0.7), Amp(-0.3, 0.4), Amp(0.5, 0.5)};
  for (unsigned bits : {1u, 3u, 8u, 14u}) {
    for (unsigned target = 0; target < bits; ++target) {
      const std::uint64_t ctrl = bits > 1 ? (std::uint64_t{1} << ((target + 1) % bits)) : 0;
      auto a = random_amps(std::size_t{1} << bits, bits * 31 + target);
      auto b = a;
      serial::apply_controlled(a, ctrl, target, u);
      omp::apply_controlled(b, ctrl, target, u);
      REQUIRE(max_diff(a, b) == 0.0);
    }
  }
}

TEST_CASE("projection, scaling, and reductions") {
  auto a = random_amps(1 << 12, 9);
  auto b = a;
  serial::project(a, 0b1010, 0b0010);
  omp::project(b, 0b1010, 0b0010);
  CHECK(max_diff(a, b) == 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((i & 0b1010) != 0b0010) REQUIRE(a[i] == Amp(0.0));
  }
  serial::scale(a, 0.5);
  omp::scale(b, 0.5);
  CHECK(max_diff(a, b) == 0.0);
  CHECK(serial::norm2(a) == doctest::Approx(omp::norm2(b)).epsilon(1e-14));
  CHECK(serial::density_trace(a, 6) == doctest::Approx(omp::density_trace(b, 6)).epsilon(1e-13));

  const std::vector<unsigned> qs{1, 4};
  const auto ws = serial::outcome_weights(a, 12, false, qs);
  const auto wo = omp::outcome_weights(b, 12, false, qs);
  REQUIRE(ws.size() == 4);
  double total = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(ws[k] == doctest::Approx(wo[k]).epsilon(1e-13));
    total += ws[k];
  }
  CHECK(total == doctest::Approx(serial::norm2(a)).epsilon(1e-13));
  // qubit 1 is fixed to 1 by the projection above.
  CHECK(ws[0] == 0.0);
  CHECK(ws[2] == 0.0);
}

TEST_CASE("OpenMP reductions are deterministic") {
  auto a = random_amps(1 << 16, 4);
  const double first = omp::norm2(a);
  for (int i = 0; i < 5; ++i) CHECK(omp::norm2(a) == first);
}

TEST_CASE("single-qubit unitaries") {
  const double r = 1.0 / std::sqrt(2.0);
  const Matrix2 h{r, r, r, -r};
  std::vector<Amp> v{1.0, 0.0};
  serial::apply_controlled(v, 0, 0, h);
  serial::apply_controlled(v, 0, 0, h);
  CHECK(std::abs(v[0] - 1.0) < 1e-15);
  CHECK(std::abs(v[1]) < 1e-15);
  const Matrix2 x{0.0, 1.0, 1.0, 0.0};
  apply_controlled(Backend::OpenMP, v, 0, 0, x);
  CHECK(std::abs(v[1] - 1.0) < 1e-15);
}
