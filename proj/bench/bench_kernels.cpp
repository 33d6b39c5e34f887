// Times the serial reference kernels against the OpenMP ones.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "bqt/circuit.hpp"
#include "bqt/kernels.hpp"
#include "bqt/simulator.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using bqt::kernels::Amp;
using bqt::kernels::Backend;

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());

  constexpr unsigned kQubits = 20;
  std::vector<Amp> amps(std::size_t{1} << kQubits);
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = Amp(std::cos(0.1 * i), std::sin(0.3 * i));
  const double h = 1.0 / std::sqrt(2.0);
  const bqt::kernels::Matrix2 had{h, h, h, -h};

  for (Backend b : {Backend::Serial, Backend::OpenMP}) {
    bqt::kernels::apply_controlled(b, amps, 0, 0, had);  // warm up
  }
  auto gate = [&](Backend b, std::uint64_t mask) {
    return best_of(5, [&] {
      for (unsigned t = 0; t < kQubits; t += 3) bqt::kernels::apply_controlled(b, amps, mask, t, had);
    });
  };
  report("H sweep, 2^20 amplitudes", gate(Backend::Serial, 0), gate(Backend::OpenMP, 0));
  const std::uint64_t ctrl = (std::uint64_t{1} << 19) | (std::uint64_t{1} << 10);
  report("controlled H, 2 controls", gate(Backend::Serial, ctrl), gate(Backend::OpenMP, ctrl));
  auto norm = [&](Backend b) {
    return best_of(5, [&] { volatile double s = bqt::kernels::norm2(b, amps); (void)s; });
  };
  report("norm2", norm(Backend::Serial), norm(Backend::OpenMP));

  // Full ten-qubit density-matrix run of the protocol circuit.
  const bqt::ChannelParams ch{0.5, 3, 1};
  const bqt::circuit::Circuit circ = bqt::circuit::build_bqt_circuit(ch, {0.3 * M_PI, 0.7 * M_PI});
  const bqt::circuit::SimInit init = bqt::circuit::default_init(ch);
  auto full = [&](Backend b) {
    const bqt::circuit::SimState s = bqt::circuit::prepare(init, b);
    return best_of(3, [&] { (void)bqt::circuit::run_exact(circ, s); });
  };
  report("circuit, 10-qubit density", full(Backend::Serial), full(Backend::OpenMP));
  return 0;
}
