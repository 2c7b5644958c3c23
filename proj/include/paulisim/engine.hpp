#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "paulisim/channels.hpp"
#include "paulisim/circuit.hpp"
#include "paulisim/pauli_state.hpp"

namespace paulisim {

enum class InitialState { pure_zero, thermal };

struct RunConfig {
  NoiseModel noise;
  InitialState initial = InitialState::pure_zero;
  // 0: exact outcome distributions from one nonselective run. Otherwise the
  // number of sampled trajectories, each collapsing on its sampled outcomes.
  std::size_t shots = 0;
  std::optional<std::uint64_t> seed;  // present iff shots > 0
  std::vector<std::string> observables;  // Pauli strings, qubit 0 first

  // Throws InvalidArgument.
  void validate() const;
};

struct MeasurementRecord {
  std::size_t instruction = 0;  // index into the scheduled (merged) circuit
  std::size_t line = 0;         // source line, 0 if built in code
  OpKind kind = OpKind::measure;
  std::vector<int> qubits;
  Axis axis = Axis::z;
  // Exact probabilities (shots = 0) or empirical frequencies (shots > 0).
  // Qubit outcomes are ordered (+1, -1); Bell outcomes (phi+, phi-, psi+, psi-).
  std::vector<double> probabilities;
  std::vector<std::size_t> counts;  // shots > 0 only
};

struct RunResult {
  PauliState final_state;  // for shots > 0, the trajectory average
  std::vector<MeasurementRecord> records;
  std::vector<std::pair<std::string, double>> expectations;  // in request order
  std::size_t partitions = 0;
  std::size_t merged_instructions = 0;
};

// Called after each partition (gates/measurements plus memory noise).
using PartitionObserver = std::function<void(std::size_t partition, const PauliState& state)>;

// Merges rotations, partitions into clock steps and executes.
RunResult run(const Circuit& circuit, const RunConfig& config);

// Executes a prepared schedule starting from `initial`.
RunResult execute(const Schedule& schedule, const RunConfig& config, PauliState initial,
                  const PartitionObserver& observer = {});

// Executes the schedule once, nonselectively, returning only the final state.
// Reuses `cache` for transfer matrices across calls.
PauliState evolve(const Schedule& schedule, const NoiseModel& noise, PauliState state, PtmCache& cache);

// Multinomial sample of `count` outcomes; deterministic given the seed.
std::vector<std::size_t> sample_shots(std::span<const double> distribution, std::size_t count, std::uint64_t seed);

PauliState initial_state(int n, const RunConfig& config);

}  // namespace paulisim
