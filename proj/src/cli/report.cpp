#include "paulisim/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace paulisim::cli {

namespace {

using nlohmann::json;

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "z";
}

std::vector<std::string> outcome_labels(OpKind kind) {
  if (kind == OpKind::measure) return {"+1", "-1"};
  return {"phi+", "phi-", "psi+", "psi-"};
}

json rounded(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(round12(v));
  return out;
}

std::string join_qubits(const std::vector<int>& qubits, char sep) {
  std::string out;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(qubits[i]);
  }
  return out;
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  return buf;
}

json run_report(const RunReportInputs& in) {
  const RunConfig& cfg = *in.config;
  const RunResult& res = *in.result;
  const Schedule& sched = *in.schedule;
  const PauliState& state = res.final_state;
  const int n = state.num_qubits();

  json report;
  const NoiseModel& nm = cfg.noise;
  report["meta"] = {
      {"tool", "paulisim"},
      {"command", "run"},
      {"circuit", in.circuit_name},
      {"num_qubits", n},
      {"initial", cfg.initial == InitialState::thermal ? "thermal" : "zero"},
      {"mode", cfg.shots > 0 ? "sampled" : "exact"},
      {"shots", cfg.shots},
      {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
      {"noise",
       {{"p", round12(nm.p)},
        {"alpha_bar", round12(nm.alpha_bar)},
        {"r", round12(nm.r)},
        {"alpha_bar_cx", round12(nm.alpha_bar_cx)},
        {"r_cx", round12(nm.r_cx)},
        {"d1", round12(nm.d1)},
        {"d2", round12(nm.d2)},
        {"f", round12(nm.f)},
        {"g", round12(nm.g)}}},
  };

  std::size_t barriers = 0;
  for (const auto& p : sched.partitions) barriers += p.kind == PartitionKind::barrier;
  json stats = {
      {"instructions", in.circuit->instructions.size()},
      {"merged_instructions", res.merged_instructions},
      {"scheduled_instructions", sched.circuit.instructions.size()},
      {"partitions", sched.partitions.size()},
      {"gate_partitions", sched.gate_partitions()},
      {"measurement_partitions", sched.measurement_partitions()},
      {"barrier_partitions", barriers},
      {"max_width", sched.max_width()},
  };
  if (in.wall_seconds) stats["wall_seconds"] = round12(*in.wall_seconds);
  report["schedule_stats"] = std::move(stats);

  json dists = json::array();
  for (const auto& rec : res.records) {
    json d = {
        {"instruction", rec.instruction},
        {"line", rec.line},
        {"kind", std::string(mnemonic(rec.kind))},
        {"qubits", rec.qubits},
        {"outcomes", outcome_labels(rec.kind)},
        {"probabilities", rounded(rec.probabilities)},
    };
    if (rec.kind == OpKind::measure) d["axis"] = axis_name(rec.axis);
    if (!rec.counts.empty()) d["counts"] = rec.counts;
    dists.push_back(std::move(d));
  }
  report["distributions"] = std::move(dists);

  json expectations = json::object();
  for (const auto& [label, value] : res.expectations) expectations[label] = round12(value);
  report["expectations"] = std::move(expectations);

  // Pauli expectations <sigma_i> = 2^n a_i, identity excluded.
  const auto coeffs = state.coeffs();
  const double scale = std::ldexp(1.0, n);
  std::vector<std::size_t> order;
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) * scale > 1e-12) order.push_back(i);
  }
  const std::size_t k = std::min(in.top_k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ra = round12(std::abs(coeffs[a]) * scale);
                      const double rb = round12(std::abs(coeffs[b]) * scale);
                      return ra != rb ? ra > rb : a < b;
                    });
  json top = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    top.push_back({{"label", pauli_label(order[i], n)}, {"value", round12(coeffs[order[i]] * scale)}});
  }
  json bloch = json::array();
  for (int q = 0; q < n; ++q) {
    const Vec3 b = state.bloch_vector(q);
    bloch.push_back(rounded(b));
  }
  report["state_summary"] = {
      {"num_qubits", n},
      {"purity", round12(state.purity())},
      {"top_pauli_expectations", std::move(top)},
      {"bloch_vectors", std::move(bloch)},
  };
  return report;
}

std::string run_csv(const RunResult& result) {
  std::ostringstream out;
  out << "instruction,line,kind,qubits,outcome,probability,count\n";
  for (const auto& rec : result.records) {
    const auto labels = outcome_labels(rec.kind);
    for (std::size_t o = 0; o < rec.probabilities.size(); ++o) {
      out << rec.instruction << ',' << rec.line << ',' << mnemonic(rec.kind) << ',' << join_qubits(rec.qubits, ';')
          << ',' << labels[o] << ',' << format12(rec.probabilities[o]) << ',';
      if (!rec.counts.empty()) out << rec.counts[o];
      out << '\n';
    }
  }
  return out.str();
}

std::string wigner_csv(const WignerTable& table) {
  std::ostringstream out;
  for (std::size_t r = 0; r < table.dim; ++r) {
    for (std::size_t c = 0; c < table.dim; ++c) {
      if (c) out << ',';
      out << format12(table(r, c));
    }
    out << '\n';
  }
  out << "# total=" << format12(table.total()) << " sum_squares=" << format12(table.sum_of_squares())
      << " negativity=" << format12(negativity(table)) << '\n';
  return out.str();
}

json wigner_json(const WignerTable& table, SigmaYSign sign) {
  json rows = json::array();
  for (std::size_t r = 0; r < table.dim; ++r) {
    rows.push_back(rounded(std::span<const double>(table.weights).subspan(r * table.dim, table.dim)));
  }
  return {
      {"num_qubits", table.num_qubits},
      {"sign", sign == SigmaYSign::plus ? "+" : "-"},
      {"weights", std::move(rows)},
      {"total", round12(table.total())},
      {"sum_of_squares", round12(table.sum_of_squares())},
      {"negativity", round12(negativity(table))},
  };
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace paulisim::cli
