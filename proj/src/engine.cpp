#include "paulisim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "paulisim/errors.hpp"

namespace paulisim {

namespace {

PauliState apply_gate(PauliState state, const Instruction& ins, const NoiseModel& noise, PtmCache& cache) {
  static const Ptm kHadamard = hadamard_ptm();
  switch (ins.kind) {
    case OpKind::h:
      return apply_ptm(std::move(state), ins.targets, kHadamard);
    case OpKind::rx:
    case OpKind::ry:
    case OpKind::rz:
      return apply_ptm(std::move(state), ins.targets,
                       cache.rotation(rotation_axis(ins.kind), ins.angle, noise.alpha_bar, noise.r));
    case OpKind::cx:
      return apply_ptm(std::move(state), ins.targets, cache.cnot(noise.alpha_bar_cx, noise.r_cx));
    default:
      throw InvalidArgument("instruction is not a gate");
  }
}

std::size_t pick(std::span<const double> probabilities, std::mt19937_64& rng) {
  const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * total;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    if (u < probabilities[i]) return i;
    u -= probabilities[i];
  }
  // Rounding left u past the last bucket: take the last nonzero outcome.
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0.0) return i;
  }
  return 0;
}

// Nonselective when rng is null, otherwise samples and collapses.
PauliState apply_measurement(PauliState state, const Instruction& ins, const NoiseModel& noise,
                             std::mt19937_64* rng, std::vector<double>& probabilities, std::size_t& outcome) {
  if (ins.kind == OpKind::measure) {
    const Vec3 axis = axis_vector(ins.axis);
    auto nonselective = measure_qubit(state, ins.targets[0], axis, noise.d1);
    probabilities.assign(nonselective.probabilities.begin(), nonselective.probabilities.end());
    if (!rng) return std::move(nonselective.state);
    outcome = pick(probabilities, *rng);
    return measure_qubit(state, ins.targets[0], axis, noise.d1, outcome == 0 ? 1 : -1).state;
  }
  auto nonselective = measure_bell(state, ins.targets[0], ins.targets[1], noise.d2);
  probabilities.assign(nonselective.probabilities.begin(), nonselective.probabilities.end());
  if (!rng) return std::move(nonselective.state);
  outcome = pick(probabilities, *rng);
  return measure_bell(state, ins.targets[0], ins.targets[1], noise.d2, static_cast<BellOutcome>(outcome)).state;
}

// One pass over the schedule. Records hold per-measurement probabilities
// (exact mode) or get their counts incremented (sampling mode).
PauliState run_pass(const Schedule& schedule, const NoiseModel& noise, PauliState state, PtmCache& cache,
                    std::mt19937_64* rng, std::vector<MeasurementRecord>* records,
                    const std::map<std::size_t, std::size_t>* record_slot, const PartitionObserver& observer) {
  std::vector<double> probabilities;
  for (std::size_t p = 0; p < schedule.partitions.size(); ++p) {
    const Partition& part = schedule.partitions[p];
    for (std::size_t op : part.ops) {
      const Instruction& ins = schedule.circuit.instructions[op];
      if (ins.kind == OpKind::barrier) continue;
      if (!is_measurement(ins.kind)) {
        state = apply_gate(std::move(state), ins, noise, cache);
        continue;
      }
      std::size_t outcome = 0;
      state = apply_measurement(std::move(state), ins, noise, rng, probabilities, outcome);
      if (records && record_slot) {
        auto& rec = (*records)[record_slot->at(op)];
        if (rng) {
          ++rec.counts[outcome];
        } else {
          rec.probabilities = probabilities;
        }
      }
    }
    state = memory_step(std::move(state), noise);
    if (observer) observer(p, state);
  }
  return state;
}

}  // namespace

void RunConfig::validate() const {
  noise.validate();
  if (shots > 0 && !seed) throw InvalidArgument("a seed is required when shots > 0");
  if (shots == 0 && seed) throw InvalidArgument("a seed is only meaningful when shots > 0");
  for (const auto& label : observables) pauli_index(label);
}

PauliState initial_state(int n, const RunConfig& config) {
  return config.initial == InitialState::thermal ? init_thermal(n, config.noise.p) : init_pure_zero(n);
}

RunResult run(const Circuit& circuit, const RunConfig& config) {
  config.validate();
  const Circuit merged = merge_rotations(circuit);
  const Schedule schedule = partition(merged);
  RunResult result = execute(schedule, config, initial_state(circuit.num_qubits, config));
  result.merged_instructions = circuit.instructions.size() - merged.instructions.size();
  return result;
}

RunResult execute(const Schedule& schedule, const RunConfig& config, PauliState initial,
                  const PartitionObserver& observer) {
  config.validate();
  const int n = schedule.circuit.num_qubits;
  if (initial.num_qubits() != n) throw InvalidArgument("initial state qubit count does not match the circuit");
  for (const auto& label : config.observables) {
    if (static_cast<int>(label.size()) != n) {
      throw InvalidArgument("observable '" + label + "' does not have " + std::to_string(n) + " letters");
    }
  }

  std::vector<MeasurementRecord> records;
  std::map<std::size_t, std::size_t> record_slot;
  const auto& instructions = schedule.circuit.instructions;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    const Instruction& ins = instructions[i];
    if (!is_measurement(ins.kind)) continue;
    record_slot[i] = records.size();
    MeasurementRecord rec;
    rec.instruction = i;
    rec.line = ins.line;
    rec.kind = ins.kind;
    rec.qubits = ins.targets;
    rec.axis = ins.axis;
    const std::size_t outcomes = ins.kind == OpKind::measure ? 2 : 4;
    rec.probabilities.assign(outcomes, 0.0);
    if (config.shots > 0) rec.counts.assign(outcomes, 0);
    records.push_back(std::move(rec));
  }

  PtmCache cache;
  std::optional<PauliState> final_state;
  if (config.shots == 0 || records.empty()) {
    final_state = run_pass(schedule, config.noise, std::move(initial), cache, nullptr, &records, &record_slot,
                           observer);
  } else {
    std::mt19937_64 rng(*config.seed);
    std::vector<double> sum(pauli_dim(n), 0.0);
    for (std::size_t shot = 0; shot < config.shots; ++shot) {
      const PauliState end =
          run_pass(schedule, config.noise, initial, cache, &rng, &records, &record_slot, observer);
      const auto c = end.coeffs();
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c[i];
    }
    const double inv = 1.0 / static_cast<double>(config.shots);
    for (auto& v : sum) v *= inv;
    sum[0] = std::ldexp(1.0, -n);
    final_state = PauliState(n, std::move(sum));
    for (auto& rec : records) {
      for (std::size_t o = 0; o < rec.counts.size(); ++o) rec.probabilities[o] = rec.counts[o] * inv;
    }
  }

  RunResult result{std::move(*final_state), std::move(records), {}, schedule.partitions.size(), 0};
  for (const auto& label : config.observables) {
    result.expectations.emplace_back(label, expectation(result.final_state, PauliObservable::from_string(label)));
  }
  return result;
}

PauliState evolve(const Schedule& schedule, const NoiseModel& noise, PauliState state, PtmCache& cache) {
  if (state.num_qubits() != schedule.circuit.num_qubits) {
    throw InvalidArgument("state qubit count does not match the circuit");
  }
  return run_pass(schedule, noise, std::move(state), cache, nullptr, nullptr, nullptr, {});
}

std::vector<std::size_t> sample_shots(std::span<const double> distribution, std::size_t count, std::uint64_t seed) {
  if (distribution.empty()) throw InvalidArgument("empty distribution");
  double total = 0.0;
  for (double p : distribution) {
    if (!(p >= 0.0)) throw InvalidArgument("distribution has a negative or NaN entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("distribution does not sum to 1");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> counts(distribution.size(), 0);
  for (std::size_t i = 0; i < count; ++i) ++counts[pick(distribution, rng)];
  return counts;
}

}  // namespace paulisim
