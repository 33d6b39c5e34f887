#include <algorithm>
#include <array>
#include <cstddef>

#include "bqt/kernels.hpp"

namespace bqt::kernels::omp {

namespace {

constexpr std::ptrdiff_t kChunks = 64;

// Sums f(i) for i in [0, n) over a fixed set of chunks, combined in order.
template <typename F>
double chunked_sum(std::uint64_t n, F f) {
  std::array<double, kChunks> partial{};
  const std::uint64_t width = (n + kChunks - 1) / kChunks;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < kChunks; ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * width;
    const std::uint64_t hi = std::min(n, lo + width);
    double s = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace

void apply_controlled(std::span<Amp> amps, std::uint64_t control_mask, unsigned target,
                      const Matrix2& u) {
  const std::uint64_t bit = std::uint64_t{1} << target;
  const std::uint64_t low = bit - 1;
  const std::ptrdiff_t pairs = static_cast<std::ptrdiff_t>(amps.size() / 2);
  Amp* data = amps.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < pairs; ++j) {
    const std::uint64_t jj = static_cast<std::uint64_t>(j);
    const std::uint64_t i0 = ((jj & ~low) << 1) | (jj & low);
    if ((i0 & control_mask) != control_mask) continue;
    const std::uint64_t i1 = i0 | bit;
    const Amp a0 = data[i0];
    const Amp a1 = data[i1];
    data[i0] = u.u00 * a0 + u.u01 * a1;
    data[i1] = u.u10 * a0 + u.u11 * a1;
  }
}

void project(std::span<Amp> amps, std::uint64_t mask, std::uint64_t value) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(amps.size());
  Amp* data = amps.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if ((static_cast<std::uint64_t>(i) & mask) != value) data[i] = 0.0;
  }
}

void scale(std::span<Amp> amps, double factor) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(amps.size());
  Amp* data = amps.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) data[i] *= factor;
}

double norm2(std::span<const Amp> amps) {
  const Amp* data = amps.data();
  return chunked_sum(amps.size(), [data](std::uint64_t i) { return std::norm(data[i]); });
}

double density_trace(std::span<const Amp> amps, unsigned k) {
  const Amp* data = amps.data();
  return chunked_sum(std::uint64_t{1} << k,
                     [data, k](std::uint64_t r) { return data[r | (r << k)].real(); });
}

std::vector<double> outcome_weights(std::span<const Amp> amps, unsigned k, bool density,
                                    std::span<const unsigned> qubits) {
  const std::size_t outcomes = std::size_t{1} << qubits.size();
  std::vector<double> w(outcomes, 0.0);
  const Amp* data = amps.data();
  for (std::size_t key = 0; key < outcomes; ++key) {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      mask |= std::uint64_t{1} << qubits[j];
      if ((key >> j) & 1u) value |= std::uint64_t{1} << qubits[j];
    }
    w[key] = chunked_sum(std::uint64_t{1} << k, [=](std::uint64_t r) {
      if ((r & mask) != value) return 0.0;
      return density ? data[r | (r << k)].real() : std::norm(data[r]);
    });
  }
  return w;
}

}  // namespace bqt::kernels::omp
