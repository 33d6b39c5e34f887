#include "bqt/sweep.hpp"

#include <algorithm>
#include <cstddef>
#include <exception>
#include <cmath>
#include <limits>

#include "bqt/error.hpp"

namespace bqt::protocol {

namespace {

void evaluate(SweepCell& cell, Direction direction, Quantity quantity,
              const SweepOptions& options) {
  try {
    switch (quantity) {
      case Quantity::FidelityClosed: {
        const double v = fidelity_closed_form(direction, cell.channel, cell.triggers);
        cell.value = v;
        cell.flagged = v < 0.0 || v > 1.0;
        break;
      }
      case Quantity::FidelityOracle: {
        ProtocolConfig config = options.base;
        config.channel = cell.channel;
        config.triggers = cell.triggers;
        cell.value = fidelity_oracle(direction, config);
        break;
      }
      case Quantity::Qfi: {
        const QfiReport rep = qfi_trigger_report(direction, cell.channel, cell.triggers,
                                                 options.bloch);
        cell.value = rep.value;
        cell.flagged = !rep.inside_ball;
        break;
      }
      case Quantity::Hss:
        cell.value = hss_trigger(direction, cell.channel, cell.triggers, options.bloch).direct;
        break;
    }
  } catch (const std::exception& e) {
    cell.value.reset();
    cell.error = e.what();
  }
}

}  // namespace

SweepTable sweep(Direction direction, const ChannelGrid& channels, const TriggerGrid& triggers,
                 Quantity quantity, const SweepOptions& options) {
  SweepTable table;
  table.direction = direction;
  table.quantity = quantity;
  for (double p : channels.p) {
    for (int n : channels.n) {
      for (int m : channels.m) {
        for (double te : triggers.theta_e) {
          for (double to : triggers.theta_o) {
            SweepCell cell;
            cell.channel = {p, n, m};
            cell.triggers = {te, to};
            table.cells.push_back(cell);
          }
        }
      }
    }
  }
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(table.cells.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    evaluate(table.cells[static_cast<std::size_t>(i)], direction, quantity, options);
  }
  return table;
}

namespace {

std::vector<std::size_t> near_extremum(std::span<const double> v, bool maximum, double rel_tol) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double slack = rel_tol * (*hi - *lo);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool hit = maximum ? v[i] >= *hi - slack : v[i] <= *lo + slack;
    if (hit) out.push_back(i);
  }
  return out;
}

std::size_t distance_to(const std::vector<std::size_t>& set, std::size_t i) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t j : set) best = std::min(best, i > j ? i - j : j - i);
  return best;
}

std::size_t hausdorff(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t d = 0;
  for (std::size_t i : a) d = std::max(d, distance_to(b, i));
  for (std::size_t j : b) d = std::max(d, distance_to(a, j));
  return d;
}

}  // namespace

ExtremumComparison compare_extrema(std::span<const double> a, std::span<const double> b,
                                   double rel_tol) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorCode::OutOfRange, "extremum comparison needs two non-empty series of equal length");
  }
  for (std::span<const double> s : {a, b}) {
    for (double x : s) {
      if (!std::isfinite(x)) throw Error(ErrorCode::OutOfRange, "series contains non-finite values");
    }
  }
  ExtremumComparison c;
  c.argmax_a = near_extremum(a, true, rel_tol);
  c.argmax_b = near_extremum(b, true, rel_tol);
  c.argmin_a = near_extremum(a, false, rel_tol);
  c.argmin_b = near_extremum(b, false, rel_tol);
  c.argmax_distance = hausdorff(c.argmax_a, c.argmax_b);
  c.argmin_distance = hausdorff(c.argmin_a, c.argmin_b);
  return c;
}

}  // namespace bqt::protocol
