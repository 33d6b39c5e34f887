#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bqt/protocol.hpp"

namespace bqt::protocol {

enum class Quantity { FidelityClosed, FidelityOracle, Qfi, Hss };

struct ChannelGrid {
  std::vector<double> p;
  std::vector<int> n;
  std::vector<int> m;
};

struct TriggerGrid {
  std::vector<double> theta_e;
  std::vector<double> theta_o;
};

struct SweepCell {
  ChannelParams channel;
  TriggerPhase triggers;
  std::optional<double> value;
  std::string error;  // empty when value is set
  // FidelityClosed: value outside [0, 1]. Qfi: Bloch vector outside the ball.
  bool flagged = false;
};

struct SweepOptions {
  ProtocolConfig base;  // inputs and modes; channel and triggers are overwritten
  BlochOptions bloch;
};

struct SweepTable {
  Direction direction = Direction::AtoB;
  Quantity quantity = Quantity::FidelityClosed;
  // Ordered p, n, m, theta_e, theta_o with theta_o varying fastest.
  std::vector<SweepCell> cells;
};

// Cells are evaluated in parallel; failures are recorded per cell.
SweepTable sweep(Direction direction, const ChannelGrid& channels, const TriggerGrid& triggers,
                 Quantity quantity, const SweepOptions& options = {});

// Where two series along the same grid reach their extrema. Each extremum is
// the set of indices within rel_tol * (max - min) of it; distances are the
// Hausdorff distance between the two sets, in grid steps.
struct ExtremumComparison {
  std::vector<std::size_t> argmax_a, argmax_b, argmin_a, argmin_b;
  std::size_t argmax_distance = 0;
  std::size_t argmin_distance = 0;
};

ExtremumComparison compare_extrema(std::span<const double> a, std::span<const double> b,
                                   double rel_tol = 1e-6);

}  // namespace bqt::protocol
