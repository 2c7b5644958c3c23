#include "paulisim/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "paulisim/errors.hpp"

namespace paulisim {

namespace {

constexpr double kDropAngle = 1e-12;

int arity(OpKind kind) {
  switch (kind) {
    case OpKind::cx:
    case OpKind::bell_measure: return 2;
    case OpKind::barrier: return 0;
    default: return 1;
  }
}

// Maps into (-pi, pi].
double reduce_angle(double angle) {
  double a = std::remainder(angle, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

int parse_index(const Token& tok, std::size_t line) {
  int value = 0;
  const auto* end = tok.text.data() + tok.text.size();
  const auto [ptr, ec] = std::from_chars(tok.text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0) {
    throw ParseError(line, tok.column, "malformed qubit index '" + std::string(tok.text) + "'");
  }
  return value;
}

double parse_angle(const Token& tok, std::size_t line) {
  double value = 0.0;
  const char* begin = tok.text.data();
  const char* end = begin + tok.text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError(line, tok.column, "malformed number '" + std::string(tok.text) + "'");
  }
  return value;
}

std::optional<OpKind> kind_from_mnemonic(std::string_view m) {
  if (m == "h") return OpKind::h;
  if (m == "rx") return OpKind::rx;
  if (m == "ry") return OpKind::ry;
  if (m == "rz") return OpKind::rz;
  if (m == "cx" || m == "cnot") return OpKind::cx;
  if (m == "measure") return OpKind::measure;
  if (m == "bellmeasure") return OpKind::bell_measure;
  if (m == "barrier") return OpKind::barrier;
  return std::nullopt;
}

std::vector<int> touched_qubits(const Instruction& ins, int n) {
  if (ins.kind != OpKind::barrier) return ins.targets;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[q] = q;
  return all;
}

PartitionKind partition_kind(OpKind kind) {
  if (kind == OpKind::barrier) return PartitionKind::barrier;
  return is_measurement(kind) ? PartitionKind::measurements : PartitionKind::gates;
}

}  // namespace

std::string_view mnemonic(OpKind kind) {
  switch (kind) {
    case OpKind::h: return "h";
    case OpKind::rx: return "rx";
    case OpKind::ry: return "ry";
    case OpKind::rz: return "rz";
    case OpKind::cx: return "cx";
    case OpKind::measure: return "measure";
    case OpKind::bell_measure: return "bellmeasure";
    case OpKind::barrier: return "barrier";
  }
  return "?";
}

bool is_rotation(OpKind kind) { return kind == OpKind::rx || kind == OpKind::ry || kind == OpKind::rz; }
bool is_measurement(OpKind kind) { return kind == OpKind::measure || kind == OpKind::bell_measure; }

Axis rotation_axis(OpKind kind) {
  switch (kind) {
    case OpKind::rx: return Axis::x;
    case OpKind::ry: return Axis::y;
    case OpKind::rz: return Axis::z;
    default: throw InvalidArgument("not a rotation");
  }
}

Instruction Instruction::h(int q) { return {OpKind::h, {q}}; }
Instruction Instruction::rx(int q, double angle) { return {OpKind::rx, {q}, angle}; }
Instruction Instruction::ry(int q, double angle) { return {OpKind::ry, {q}, angle}; }
Instruction Instruction::rz(int q, double angle) { return {OpKind::rz, {q}, angle}; }
Instruction Instruction::rotation(Axis axis, int q, double angle) {
  const OpKind kind = axis == Axis::x ? OpKind::rx : (axis == Axis::y ? OpKind::ry : OpKind::rz);
  return {kind, {q}, angle};
}
Instruction Instruction::cx(int control, int target) { return {OpKind::cx, {control, target}}; }
Instruction Instruction::measure(int q, Axis axis) { return {OpKind::measure, {q}, 0.0, axis}; }
Instruction Instruction::bell_measure(int q1, int q2) { return {OpKind::bell_measure, {q1, q2}}; }
Instruction Instruction::barrier() { return {OpKind::barrier, {}}; }

bool Instruction::same_op(const Instruction& other) const {
  if (kind != other.kind || targets != other.targets) return false;
  if (is_rotation(kind) && angle != other.angle) return false;
  if (kind == OpKind::measure && axis != other.axis) return false;
  return true;
}

void Circuit::validate() const {
  if (num_qubits < 1) throw InvalidArgument("circuit needs at least one qubit");
  for (const auto& ins : instructions) {
    if (static_cast<int>(ins.targets.size()) != arity(ins.kind)) {
      throw InvalidArgument(std::string(mnemonic(ins.kind)) + " has the wrong number of targets");
    }
    for (int t : ins.targets) {
      if (t < 0 || t >= num_qubits) throw InvalidArgument("qubit " + std::to_string(t) + " out of range");
    }
    if (ins.targets.size() == 2 && ins.targets[0] == ins.targets[1]) {
      throw InvalidArgument(std::string(mnemonic(ins.kind)) + " needs two distinct qubits");
    }
    if (!std::isfinite(ins.angle)) throw InvalidArgument("rotation angle must be finite");
  }
}

bool Circuit::same_ops(const Circuit& other) const {
  if (num_qubits != other.num_qubits || instructions.size() != other.instructions.size()) return false;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (!instructions[i].same_op(other.instructions[i])) return false;
  }
  return true;
}

Circuit parse_circuit(std::string_view text) {
  Circuit circuit;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = tokenize(line);
    if (tokens.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    const std::string head = lowercase(tokens[0].text);
    if (!have_header) {
      if (head != "qubits") throw ParseError(line_no, tokens[0].column, "expected 'qubits N' header");
      if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, "'qubits' expects exactly one count");
      const int n = parse_index(tokens[1], line_no);
      if (n < 1) throw ParseError(line_no, tokens[1].column, "qubit count must be at least 1");
      circuit.num_qubits = n;
      have_header = true;
      continue;
    }
    if (head == "qubits") throw ParseError(line_no, tokens[0].column, "duplicate 'qubits' header");

    const auto kind = kind_from_mnemonic(head);
    if (!kind) throw ParseError(line_no, tokens[0].column, "unknown mnemonic '" + std::string(tokens[0].text) + "'");

    const int qubit_args = arity(*kind);
    std::size_t min_args = static_cast<std::size_t>(qubit_args) + (is_rotation(*kind) ? 1 : 0);
    std::size_t max_args = min_args + (*kind == OpKind::measure ? 1 : 0);
    const std::size_t got = tokens.size() - 1;
    if (got < min_args || got > max_args) {
      const std::size_t column = got > max_args ? tokens[max_args + 1].column : tokens[0].column;
      throw ParseError(line_no, column,
                       std::string(mnemonic(*kind)) + " expects " + std::to_string(min_args) +
                           (max_args != min_args ? "-" + std::to_string(max_args) : std::string()) +
                           " operand(s), got " + std::to_string(got));
    }

    Instruction ins{*kind, {}};
    ins.line = line_no;
    for (int a = 0; a < qubit_args; ++a) {
      const Token& tok = tokens[1 + a];
      const int q = parse_index(tok, line_no);
      if (q >= circuit.num_qubits) throw ParseError(line_no, tok.column, "qubit " + std::to_string(q) + " out of range");
      ins.targets.push_back(q);
    }
    if (qubit_args == 2 && ins.targets[0] == ins.targets[1]) {
      throw ParseError(line_no, tokens[2].column, std::string(mnemonic(*kind)) + " needs two distinct qubits");
    }
    if (is_rotation(*kind)) ins.angle = parse_angle(tokens[2], line_no);
    if (*kind == OpKind::measure && got == 2) {
      const std::string axis = lowercase(tokens[2].text);
      if (axis == "x") ins.axis = Axis::x;
      else if (axis == "y") ins.axis = Axis::y;
      else if (axis == "z") ins.axis = Axis::z;
      else throw ParseError(line_no, tokens[2].column, "measurement axis must be x, y or z");
    }
    circuit.instructions.push_back(std::move(ins));
  }
  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, 1, "missing 'qubits N' header");
  return circuit;
}

std::string format_circuit(const Circuit& circuit) {
  std::string out = "qubits " + std::to_string(circuit.num_qubits) + "\n";
  char buf[64];
  for (const auto& ins : circuit.instructions) {
    out += mnemonic(ins.kind);
    for (int t : ins.targets) out += " " + std::to_string(t);
    if (is_rotation(ins.kind)) {
      std::snprintf(buf, sizeof buf, " %.17g", ins.angle);
      out += buf;
    }
    if (ins.kind == OpKind::measure) out += ins.axis == Axis::x ? " x" : (ins.axis == Axis::y ? " y" : " z");
    out += "\n";
  }
  return out;
}

Circuit merge_rotations(const Circuit& circuit) {
  circuit.validate();
  std::vector<Instruction> out;
  std::vector<bool> alive;
  // Per-qubit stack of output positions of the instructions touching it.
  std::vector<std::vector<std::size_t>> stacks(static_cast<std::size_t>(circuit.num_qubits));

  for (const auto& ins : circuit.instructions) {
    if (is_rotation(ins.kind)) {
      auto& stack = stacks[ins.targets[0]];
      if (!stack.empty() && out[stack.back()].kind == ins.kind) {
        Instruction& top = out[stack.back()];
        top.angle = reduce_angle(top.angle + ins.angle);
        if (std::abs(top.angle) < kDropAngle) {
          alive[stack.back()] = false;
          stack.pop_back();
        }
        continue;
      }
    }
    const std::size_t pos = out.size();
    out.push_back(ins);
    alive.push_back(true);
    for (int q : touched_qubits(ins, circuit.num_qubits)) stacks[q].push_back(pos);
  }

  Circuit merged{circuit.num_qubits, {}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (alive[i]) merged.instructions.push_back(std::move(out[i]));
  }
  return merged;
}

std::size_t Schedule::gate_partitions() const {
  return static_cast<std::size_t>(std::count_if(partitions.begin(), partitions.end(),
                                                [](const Partition& p) { return p.kind == PartitionKind::gates; }));
}

std::size_t Schedule::measurement_partitions() const {
  return static_cast<std::size_t>(std::count_if(partitions.begin(), partitions.end(), [](const Partition& p) {
    return p.kind == PartitionKind::measurements;
  }));
}

std::size_t Schedule::max_width() const {
  std::size_t width = 0;
  for (const auto& p : partitions) width = std::max(width, p.ops.size());
  return width;
}

Schedule partition(const Circuit& circuit) {
  circuit.validate();
  Schedule schedule{circuit, {}};
  auto& parts = schedule.partitions;
  std::vector<std::ptrdiff_t> last(static_cast<std::size_t>(circuit.num_qubits), -1);
  std::size_t floor = 0;

  for (std::size_t i = 0; i < circuit.instructions.size(); ++i) {
    const Instruction& ins = circuit.instructions[i];
    if (ins.kind == OpKind::barrier) {
      parts.push_back({PartitionKind::barrier, {i}});
      floor = parts.size();
      std::fill(last.begin(), last.end(), static_cast<std::ptrdiff_t>(parts.size() - 1));
      continue;
    }
    const PartitionKind kind = partition_kind(ins.kind);
    std::size_t slot = floor;
    for (int q : ins.targets) slot = std::max(slot, static_cast<std::size_t>(last[q] + 1));
    while (slot < parts.size() && parts[slot].kind != kind) ++slot;
    if (slot == parts.size()) parts.push_back({kind, {}});
    parts[slot].ops.push_back(i);
    for (int q : ins.targets) last[q] = static_cast<std::ptrdiff_t>(slot);
  }
  return schedule;
}

Schedule sequential_schedule(const Circuit& circuit) {
  circuit.validate();
  Schedule schedule{circuit, {}};
  for (std::size_t i = 0; i < circuit.instructions.size(); ++i) {
    schedule.partitions.push_back({partition_kind(circuit.instructions[i].kind), {i}});
  }
  return schedule;
}

}  // namespace paulisim
