#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "paulisim/circuit.hpp"
#include "paulisim/engine.hpp"
#include "paulisim/wigner.hpp"

namespace paulisim::cli {

// x rounded to 12 significant digits; -0 becomes 0.
double round12(double x);
// Same rounding for CSV cells.
std::string format12(double x);

struct RunReportInputs {
  std::string circuit_name;
  const Circuit* circuit = nullptr;    // as parsed, before merging
  const Schedule* schedule = nullptr;  // merged and partitioned
  const RunConfig* config = nullptr;
  const RunResult* result = nullptr;
  std::size_t top_k = 8;
  std::optional<double> wall_seconds;  // only with --timing
};

// {meta, schedule_stats, distributions, expectations, state_summary}.
nlohmann::json run_report(const RunReportInputs& in);
// One row per measurement outcome.
std::string run_csv(const RunResult& result);

// Grid rows, then a '#' summary line with total, sum of squares, negativity.
std::string wigner_csv(const WignerTable& table);
nlohmann::json wigner_json(const WignerTable& table, SigmaYSign sign);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace paulisim::cli
