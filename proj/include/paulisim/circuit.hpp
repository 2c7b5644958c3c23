#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "paulisim/kraus.hpp"

namespace paulisim {

enum class OpKind { h, rx, ry, rz, cx, measure, bell_measure, barrier };

std::string_view mnemonic(OpKind kind);
bool is_rotation(OpKind kind);
bool is_measurement(OpKind kind);
Axis rotation_axis(OpKind kind);

struct Instruction {
  OpKind kind = OpKind::h;
  std::vector<int> targets;  // empty for barrier (touches every qubit)
  double angle = 0.0;        // rotations only
  Axis axis = Axis::z;       // measurement axis
  std::size_t line = 0;      // source line, 0 when built in code

  static Instruction h(int q);
  static Instruction rx(int q, double angle);
  static Instruction ry(int q, double angle);
  static Instruction rz(int q, double angle);
  static Instruction rotation(Axis axis, int q, double angle);
  static Instruction cx(int control, int target);
  static Instruction measure(int q, Axis axis = Axis::z);
  static Instruction bell_measure(int q1, int q2);
  static Instruction barrier();

  // Same operation (kind, targets, angle, axis); ignores the source line.
  bool same_op(const Instruction& other) const;
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Instruction> instructions;

  // Throws InvalidArgument on arity or range violations.
  void validate() const;
  bool same_ops(const Circuit& other) const;
};

// Line-based text format:
//   qubits N
//   h Q | rx Q THETA | ry Q THETA | rz Q THETA | cx QC QT
//   measure Q [x|y|z] | bellmeasure Q1 Q2 | barrier
// '#' starts a comment; mnemonics are case-insensitive.
// Throws ParseError with the 1-based line and column of the offending token.
Circuit parse_circuit(std::string_view text);
// Canonical text; parse_circuit(format_circuit(c)) reproduces c exactly.
std::string format_circuit(const Circuit& circuit);

// Merges runs of same-axis rotations on a qubit that no other instruction on
// that qubit interrupts. Merged angles are reduced to (-pi, pi]; merged
// rotations with |angle| < 1e-12 are removed.
Circuit merge_rotations(const Circuit& circuit);

enum class PartitionKind { gates, measurements, barrier };

struct Partition {
  PartitionKind kind = PartitionKind::gates;
  std::vector<std::size_t> ops;  // indices into Schedule::circuit.instructions
};

struct Schedule {
  Circuit circuit;
  std::vector<Partition> partitions;

  std::size_t gate_partitions() const;
  std::size_t measurement_partitions() const;
  std::size_t max_width() const;
};

// Greedy earliest-slot scheduling into clock steps: qubit-disjoint partitions,
// gates and measurements never share a partition, a barrier occupies a
// partition of its own.
Schedule partition(const Circuit& circuit);
// One instruction per partition in source order, no merging.
Schedule sequential_schedule(const Circuit& circuit);

}  // namespace paulisim
