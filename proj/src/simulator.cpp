#include "bqt/simulator.hpp"

#include <cmath>
#include <sstream>

#include "bqt/channel.hpp"
#include "bqt/error.hpp"
#include "bqt/linalg.hpp"

namespace bqt::circuit {

namespace {

constexpr double kPurityTolerance = 1e-12;

kernels::Matrix2 gate_matrix(GateKind kind, double phase) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::CCNOT:
    case GateKind::COND_X:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::H:
      return {r, r, r, -r};
    case GateKind::RY:
      return {std::cos(phase / 2), -std::sin(phase / 2), std::sin(phase / 2), std::cos(phase / 2)};
    case GateKind::CZ:
    case GateKind::COND_Z:
      return {1.0, 0.0, 0.0, -1.0};
    case GateKind::CP:
      return {1.0, 0.0, 0.0, std::polar(1.0, phase)};
    case GateKind::MEASURE:
      break;
  }
  throw Error(ErrorCode::MalformedGate, "MEASURE has no unitary");
}

std::uint64_t mask_of(const std::vector<unsigned>& qs) {
  std::uint64_t m = 0;
  for (unsigned q : qs) m |= std::uint64_t{1} << q;
  return m;
}

std::uint64_t value_of(const std::vector<unsigned>& qs, std::size_t outcome) {
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < qs.size(); ++j) {
    if ((outcome >> j) & 1u) v |= std::uint64_t{1} << qs[j];
  }
  return v;
}

std::size_t local_index(const std::vector<unsigned>& qs, std::uint64_t global) {
  std::size_t idx = 0;
  for (unsigned q : qs) idx = (idx << 1) | ((global >> q) & 1u);
  return idx;
}

Eigen::VectorXcd top_eigenvector(const MatX& rho) {
  linalg::HermitianEigen e = linalg::eigh(rho);
  return e.vectors.col(e.vectors.cols() - 1);
}

double purity(const MatX& rho) { return (rho * rho).trace().real(); }

}  // namespace

SimState::SimState(unsigned qubits, unsigned classical_bits, Backend backend)
    : qubits_(qubits), pure_(true), backend_(backend), cbits_(classical_bits, 0) {
  if (qubits == 0 || qubits > kMaxQubits) {
    throw Error(ErrorCode::ResourceLimit,
                "register size must be between 1 and " + std::to_string(kMaxQubits));
  }
  amps_.assign(std::size_t{1} << qubits, 0.0);
  amps_[0] = 1.0;
}

SimState SimState::product(unsigned qubits, unsigned classical_bits,
                           const std::vector<Factor>& factors, Backend backend) {
  SimState s(qubits, classical_bits, backend);
  std::uint64_t listed = 0;
  bool all_pure = true;
  for (const Factor& f : factors) {
    if (f.qubits.empty() || f.qubits.size() > 2 ||
        f.rho.rows() != (Eigen::Index{1} << f.qubits.size())) {
      throw Error(ErrorCode::MalformedState, "factor must cover one or two qubits");
    }
    for (unsigned q : f.qubits) {
      if (q >= qubits || (listed >> q) & 1u) {
        throw Error(ErrorCode::MalformedState, "factor qubits must be distinct and in range");
      }
      listed |= std::uint64_t{1} << q;
    }
    linalg::require_density(f.rho, 1e-9, "initial factor");
    if (purity(f.rho) < 1.0 - kPurityTolerance) all_pure = false;
  }

  const std::uint64_t dim = std::uint64_t{1} << qubits;
  if (all_pure) {
    std::vector<Eigen::VectorXcd> vecs;
    for (const Factor& f : factors) vecs.push_back(top_eigenvector(f.rho));
    for (std::uint64_t i = 0; i < dim; ++i) {
      if ((i & ~listed) != 0) {
        s.amps_[i] = 0.0;
        continue;
      }
      kernels::Amp a = 1.0;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        a *= vecs[k](static_cast<Eigen::Index>(local_index(factors[k].qubits, i)));
      }
      s.amps_[i] = a;
    }
    return s;
  }

  s.pure_ = false;
  s.amps_.assign(dim * dim, 0.0);
  for (std::uint64_t c = 0; c < dim; ++c) {
    if ((c & ~listed) != 0) continue;
    for (std::uint64_t r = 0; r < dim; ++r) {
      if ((r & ~listed) != 0) continue;
      kernels::Amp a = 1.0;
      for (const Factor& f : factors) {
        a *= f.rho(static_cast<Eigen::Index>(local_index(f.qubits, r)),
                   static_cast<Eigen::Index>(local_index(f.qubits, c)));
      }
      s.amps_[r | (c << qubits)] = a;
    }
  }
  return s;
}

std::string SimState::classical_string() const {
  std::string out;
  for (int b : cbits_) out.push_back(b ? '1' : '0');
  return out;
}

double SimState::trace() const {
  return pure_ ? kernels::norm2(backend_, amps_) : kernels::density_trace(backend_, amps_, qubits_);
}

Mat2 SimState::reduced_qubit(unsigned q) const {
  if (q >= qubits_) throw Error(ErrorCode::OutOfRange, "qubit index outside the register");
  const std::uint64_t bit = std::uint64_t{1} << q;
  const std::uint64_t dim = std::uint64_t{1} << qubits_;
  Mat2 out = Mat2::Zero();
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const std::uint64_t ra = r | (a ? bit : 0);
        const std::uint64_t rb = r | (b ? bit : 0);
        out(a, b) += pure_ ? amps_[ra] * std::conj(amps_[rb]) : amps_[ra | (rb << qubits_)];
      }
    }
  }
  return out;
}

MatX SimState::density_matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << qubits_;
  MatX out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      out(r, c) = pure_ ? amps_[r] * std::conj(amps_[c])
                        : amps_[static_cast<std::size_t>(r) | (static_cast<std::size_t>(c) << qubits_)];
    }
  }
  return out;
}

void SimState::apply_unitary(const std::vector<unsigned>& controls, unsigned target,
                             const kernels::Matrix2& u) {
  const std::uint64_t cmask = mask_of(controls);
  kernels::apply_controlled(backend_, amps_, cmask, target, u);
  if (!pure_) {
    kernels::apply_controlled(backend_, amps_, cmask << qubits_, target + qubits_, u.conjugate());
  }
}

std::vector<double> SimState::outcome_weights(const std::vector<unsigned>& qs) const {
  return kernels::outcome_weights(backend_, amps_, qubits_, !pure_, qs);
}

double SimState::collapse(const std::vector<unsigned>& qs, std::size_t outcome) {
  std::uint64_t mask = mask_of(qs);
  std::uint64_t value = value_of(qs, outcome);
  if (!pure_) {
    mask |= mask << qubits_;
    value |= value << qubits_;
  }
  kernels::project(backend_, amps_, mask, value);
  const double w = trace();
  if (w > 0.0) kernels::scale(backend_, amps_, pure_ ? 1.0 / std::sqrt(w) : 1.0 / w);
  return w;
}

void SimState::to_density() {
  if (!pure_) return;
  const std::uint64_t dim = std::uint64_t{1} << qubits_;
  std::vector<kernels::Amp> rho(dim * dim);
  for (std::uint64_t c = 0; c < dim; ++c) {
    for (std::uint64_t r = 0; r < dim; ++r) rho[r | (c << qubits_)] = amps_[r] * std::conj(amps_[c]);
  }
  amps_ = std::move(rho);
  pure_ = false;
}

SimState apply_gate(SimState state, const Gate& gate, std::mt19937_64* rng) {
  validate_gate(gate, state.qubits(), static_cast<unsigned>(state.classical().size()));
  switch (gate.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::RY:
      state.apply_unitary({}, gate.operands[0], gate_matrix(gate.kind, gate.phase));
      break;
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CP:
      state.apply_unitary({gate.operands[0]}, gate.operands[1],
                          gate_matrix(gate.kind, gate.phase));
      break;
    case GateKind::CCNOT:
      state.apply_unitary({gate.operands[0], gate.operands[1]}, gate.operands[2],
                          gate_matrix(gate.kind, gate.phase));
      break;
    case GateKind::COND_X:
    case GateKind::COND_Z:
      if (state.classical()[gate.classical_bits[0]] == 1) {
        state.apply_unitary({}, gate.operands[0], gate_matrix(gate.kind, gate.phase));
      }
      break;
    case GateKind::MEASURE: {
      if (rng == nullptr) {
        throw Error(ErrorCode::MalformedGate,
                    "MEASURE needs a sampler; use measure_branches for exact runs");
      }
      const std::vector<double> w = state.outcome_weights(gate.operands);
      double total = 0.0;
      for (double v : w) total += v;
      const double u = static_cast<double>((*rng)() >> 11) * 0x1.0p-53 * total;
      std::size_t pick = w.size() - 1;
      double acc = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        acc += w[k];
        if (u < acc) {
          pick = k;
          break;
        }
      }
      state.collapse(gate.operands, pick);
      for (std::size_t j = 0; j < gate.operands.size(); ++j) {
        state.set_classical(gate.classical_bits[j], static_cast<int>((pick >> j) & 1u));
      }
      break;
    }
  }
  return state;
}

std::vector<Branch> measure_branches(const Branch& branch, const Gate& gate, double prune_below) {
  if (gate.kind != GateKind::MEASURE) {
    throw Error(ErrorCode::MalformedGate, "measure_branches expects a MEASURE gate");
  }
  validate_gate(gate, branch.state.qubits(),
                static_cast<unsigned>(branch.state.classical().size()));
  const std::vector<double> w = branch.state.outcome_weights(gate.operands);
  std::vector<Branch> out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double prob = branch.probability * w[k];
    if (prob < prune_below) continue;
    Branch b{branch.state, prob};
    b.state.collapse(gate.operands, k);
    for (std::size_t j = 0; j < gate.operands.size(); ++j) {
      b.state.set_classical(gate.classical_bits[j], static_cast<int>((k >> j) & 1u));
    }
    out.push_back(std::move(b));
  }
  return out;
}

namespace {

void check_runnable(const Circuit& circuit, const SimState& init) {
  validate(circuit);
  if (circuit.qubits > kMaxExactQubits) {
    throw Error(ErrorCode::ResourceLimit, "exact simulation is limited to " +
                                              std::to_string(kMaxExactQubits) + " qubits");
  }
  if (init.qubits() != circuit.qubits) {
    throw Error(ErrorCode::MalformedGate, "initial state and circuit register sizes differ");
  }
  if (init.classical().size() < circuit.classical_bits) {
    throw Error(ErrorCode::MalformedGate, "initial state has too few classical bits");
  }
}

std::vector<Branch> evolve(std::vector<Branch> branches, const std::vector<Gate>& gates,
                           std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    const Gate& g = gates[i];
    if (g.kind == GateKind::MEASURE) {
      std::vector<Branch> next;
      for (const Branch& b : branches) {
        for (Branch& nb : measure_branches(b, g)) next.push_back(std::move(nb));
      }
      branches = std::move(next);
    } else {
      for (Branch& b : branches) b.state = apply_gate(std::move(b.state), g);
    }
  }
  return branches;
}

}  // namespace

std::vector<Branch> run_branches(const Circuit& circuit, const SimState& init) {
  check_runnable(circuit, init);
  return evolve({Branch{init, 1.0}}, circuit.gates, 0, circuit.gates.size());
}

double Histogram::total_probability() const {
  double s = 0.0;
  for (const auto& [key, p] : probabilities) s += p;
  return s;
}

PairDensity channel_init(const ChannelParams& params) { return coherent::reduced_pair_state(params); }

SimInit default_init(const ChannelParams& params) {
  SimInit init;
  init.channel = channel_init(params);
  return init;
}

SimState prepare(const SimInit& init, Backend backend) {
  std::vector<SimState::Factor> factors{
      {{qubit::kChannelA, qubit::kChannelB}, init.channel.rho},
      {{qubit::kEven}, init.even_input.rho},
      {{qubit::kOdd}, init.odd_input.rho},
  };
  return SimState::product(10, 4, factors, backend);
}

Histogram run_exact(const Circuit& circuit, const SimState& init) {
  Histogram h;
  for (const Branch& b : run_branches(circuit, init)) {
    h.probabilities[b.state.classical_string()] += b.probability;
  }
  return h;
}

Histogram sample(const Histogram& exact, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::OutOfRange, "shots must be at least 1");
  Histogram h = exact;
  h.sampled = true;
  h.shots = shots;
  h.seed = seed;
  h.counts.clear();
  std::vector<std::pair<std::string, double>> cumulative;
  double acc = 0.0;
  for (const auto& [key, p] : exact.probabilities) {
    acc += p;
    cumulative.emplace_back(key, acc);
    h.counts[key] = 0;
  }
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = cumulative.begin();
    while (it + 1 != cumulative.end() && !(u < it->second)) ++it;
    ++h.counts[it->first];
  }
  return h;
}

Histogram run_shots(const Circuit& circuit, const SimState& init, std::uint64_t shots,
                    std::uint64_t seed) {
  return sample(run_exact(circuit, init), shots, seed);
}

double total_variation(const Histogram& sampled, const Histogram& exact) {
  std::map<std::string, double> diff;
  for (const auto& [k, p] : exact.probabilities) diff[k] -= p;
  for (const auto& [k, c] : sampled.counts) {
    diff[k] += static_cast<double>(c) / static_cast<double>(sampled.shots);
  }
  double tv = 0.0;
  for (const auto& [k, d] : diff) tv += std::abs(d);
  return 0.5 * tv;
}

}  // namespace bqt::circuit
