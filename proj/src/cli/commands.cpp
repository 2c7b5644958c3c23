#include "paulisim/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "paulisim/circuit.hpp"
#include "paulisim/cli/noise_config.hpp"
#include "paulisim/cli/report.hpp"
#include "paulisim/engine.hpp"
#include "paulisim/errors.hpp"
#include "paulisim/kickedtop.hpp"
#include "paulisim/wigner.hpp"

namespace paulisim::cli {

namespace {

using nlohmann::json;

constexpr int kMaxRunQubits = 12;
constexpr int kMaxWignerQubits = 10;
constexpr std::size_t kMaxStateExport = 5'000'000;  // coefficients in a dataset state dump

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wraps a ParseError with the file it came from.
class FileParseError : public std::runtime_error {
 public:
  FileParseError(const std::string& file, const ParseError& e) : std::runtime_error(file + ":" + e.what()) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << text;
}

void configure_threads() {
  const char* env = std::getenv("PAULISIM_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw ConfigError("PAULISIM_THREADS must be a positive integer");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#endif
}

Circuit load_circuit(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_circuit(text);
  } catch (const ParseError& e) {
    throw FileParseError(path, e);
  }
}

NoiseModel load_noise(const std::string& path) {
  if (path.empty()) return {};
  const std::string text = read_file(path);
  try {
    return load_noise_config(text).noise;
  } catch (const ParseError& e) {
    throw FileParseError(path, e);
  }
}

struct RunOptions {
  std::string circuit;
  std::string noise;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> observables;
  std::string initial = "zero";
  std::string format = "json";
  std::string output;
  std::size_t top_k = 8;
  bool timing = false;
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  const Circuit circuit = load_circuit(o.circuit);
  if (circuit.num_qubits > kMaxRunQubits) {
    throw SizeError("run supports at most " + std::to_string(kMaxRunQubits) + " qubits");
  }
  RunConfig cfg;
  cfg.noise = load_noise(o.noise);
  cfg.initial = o.initial == "thermal" ? InitialState::thermal : InitialState::pure_zero;
  cfg.shots = o.shots;
  if (o.shots > 0) cfg.seed = o.seed;
  cfg.observables = o.observables;
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  const Circuit merged = merge_rotations(circuit);
  const Schedule schedule = partition(merged);
  RunResult result = execute(schedule, cfg, initial_state(circuit.num_qubits, cfg));
  result.merged_instructions = circuit.instructions.size() - merged.instructions.size();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (o.format == "csv") {
    emit(run_csv(result), o.output, out);
    return kExitOk;
  }
  RunReportInputs in;
  in.circuit_name = o.circuit;
  in.circuit = &circuit;
  in.schedule = &schedule;
  in.config = &cfg;
  in.result = &result;
  in.top_k = o.top_k;
  if (o.timing) in.wall_seconds = seconds;
  emit(dump(run_report(in)), o.output, out);
  return kExitOk;
}

struct WignerOptions {
  std::string source;
  std::vector<std::string> args;
  std::string sign = "+";
  std::string format = "csv";
  std::string output;
};

double parse_angle(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("malformed angle '" + s + "'");
  return v;
}

PauliState wigner_source(const WignerOptions& o) {
  const std::size_t want = o.source == "bloch" ? 2 : (o.source == "circuit" ? 1 : 0);
  if (o.args.size() != want) {
    throw ConfigError("source '" + o.source + "' takes " + std::to_string(want) + " argument(s)");
  }
  const double s = 1.0 / std::sqrt(2.0);
  if (o.source == "zero") return init_pure_zero(1);
  if (o.source == "one") return from_bloch({0, 0, -1});
  if (o.source == "plus") return from_bloch({1, 0, 0});
  if (o.source == "mixed") return from_bloch({0, 0, 0});
  if (o.source == "singlet") {
    const std::vector<std::complex<double>> psi{0, s, -s, 0};
    return from_statevector(psi);
  }
  if (o.source == "bloch") {
    const double theta = parse_angle(o.args[0]), phi = parse_angle(o.args[1]);
    return from_bloch({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  }
  const Circuit c = load_circuit(o.args[0]);
  if (c.num_qubits > kMaxWignerQubits) {
    throw SizeError("Wigner tables support at most " + std::to_string(kMaxWignerQubits) + " qubits");
  }
  return run(c, RunConfig{}).final_state;
}

int cmd_wigner(const WignerOptions& o, std::ostream& out) {
  const PauliState state = wigner_source(o);
  const SigmaYSign sign = o.sign == "-" ? SigmaYSign::minus : SigmaYSign::plus;
  const WignerTable table = wigner_multiqubit(state, sign);
  if (o.format == "json") {
    emit(dump(wigner_json(table, sign)), o.output, out);
  } else {
    emit(wigner_csv(table), o.output, out);
  }
  return kExitOk;
}

struct TopOptions {
  int two_j = 2;
  double kappa = 0.0;
  double p = std::numbers::pi / 2;
  std::size_t steps = 100;
  double theta = std::numbers::pi / 4;
  double phi = 0.0;
  std::size_t renorm = 1;
  std::size_t starts = 1;
  std::uint64_t seed = 1;
  int grid_theta = 32;
  int grid_phi = 32;
  double train_fraction = 0.3;
  std::string states;
  int layers = 2;
  int restarts = 6;
  std::size_t budget = 3000;
  std::uint64_t train_seed = 1;
  std::string output;
};

kickedtop::TopParams top_params(const TopOptions& o) {
  kickedtop::TopParams p{o.two_j, o.kappa, o.p};
  p.validate();
  return p;
}

json top_meta(const TopOptions& o) {
  return {{"two_j", o.two_j}, {"kappa", round12(o.kappa)}, {"p", round12(o.p)}};
}

int cmd_evolve(const TopOptions& o, std::ostream& out) {
  const kickedtop::FloquetMap map(top_params(o));
  if (!(o.theta >= 0.0 && o.theta <= std::numbers::pi)) throw ConfigError("theta must lie in [0, pi]");
  Eigen::VectorXcd state = kickedtop::coherent_state(o.two_j, o.theta, o.phi);
  std::ostringstream csv;
  csv << "step,jx,jy,jz\n";
  for (std::size_t s = 0;; ++s) {
    const Vec3 d = kickedtop::spin_direction(state);
    csv << s << ',' << format12(d[0]) << ',' << format12(d[1]) << ',' << format12(d[2]) << '\n';
    if (s == o.steps) break;
    state = map.step(state);
  }
  emit(csv.str(), o.output, out);
  return kExitOk;
}

int cmd_lyapunov(const TopOptions& o, std::ostream& out) {
  const auto params = top_params(o);
  if (o.starts < 1) throw ConfigError("starts must be positive");
  std::vector<Vec3> points;
  if (o.starts == 1) {
    points.push_back({std::sin(o.theta) * std::cos(o.phi), std::sin(o.theta) * std::sin(o.phi), std::cos(o.theta)});
  } else {
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < o.starts; ++i) {
      Vec3 v{normal(rng), normal(rng), normal(rng)};
      const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (double& c : v) c /= len;
      points.push_back(v);
    }
  }
  json estimates = json::array();
  double sum = 0.0;
  for (const Vec3& v : points) {
    const auto est = kickedtop::lyapunov_estimate(params, v, o.steps, o.renorm);
    estimates.push_back(round12(est.exponent));
    sum += est.exponent;
  }
  json report = {
      {"meta", top_meta(o)},
      {"exponent", round12(sum / static_cast<double>(points.size()))},
      {"estimates", std::move(estimates)},
      {"steps", o.steps},
      {"renorm_interval", o.renorm},
      {"starts", o.starts},
      {"seed", o.starts > 1 ? json(o.seed) : json(nullptr)},
  };
  emit(dump(report), o.output, out);
  return kExitOk;
}

kickedtop::Dataset build_dataset(const TopOptions& o) {
  return kickedtop::generate_dataset(top_params(o), o.steps, o.grid_theta, o.grid_phi, o.train_fraction, o.seed);
}

int cmd_dataset(const TopOptions& o, std::ostream& out) {
  if (!o.states.empty()) {
    const std::size_t coeffs = static_cast<std::size_t>(o.grid_theta) * static_cast<std::size_t>(o.grid_phi) *
                               (std::size_t{1} << (2 * std::min(o.two_j, 30)));
    if (o.two_j > 15 || coeffs > kMaxStateExport) throw SizeError("state export exceeds the size guard");
  }
  const kickedtop::Dataset data = build_dataset(o);
  std::ostringstream csv;
  csv << "theta,phi,label,split,equator\n";
  for (const auto& p : data.points) {
    csv << format12(p.theta) << ',' << format12(p.phi) << ',' << p.label << ',' << (p.train ? "train" : "validation")
        << ',' << (p.equator ? 1 : 0) << '\n';
  }
  emit(csv.str(), o.output, out);
  if (!o.states.empty()) {
    json states = json::array();
    for (const auto& p : data.points) {
      json c = json::array();
      for (double v : p.state.coeffs()) c.push_back(round12(v));
      states.push_back(std::move(c));
    }
    json doc = {{"meta", top_meta(o)}, {"steps", o.steps}, {"num_qubits", o.two_j}, {"coefficients", std::move(states)}};
    std::ofstream file(o.states, std::ios::binary);
    if (!file) throw IoError("cannot write '" + o.states + "'");
    file << doc.dump() << '\n';
  }
  return kExitOk;
}

int cmd_train(const TopOptions& o, std::ostream& out) {
  if (o.layers < 0) throw ConfigError("layers must be non-negative");
  const kickedtop::Dataset data = build_dataset(o);
  const kickedtop::ClassifierSpec spec{o.two_j, o.layers};
  kickedtop::TrainConfig tc;
  tc.seed = o.train_seed;
  tc.restarts = o.restarts;
  tc.max_evaluations = o.budget;
  const auto result = kickedtop::train(spec, data, tc);
  const auto validation = data.validation_indices();
  const auto baseline = kickedtop::random_parameters(spec, o.train_seed);
  json history = json::array();
  for (double h : result.history) history.push_back(round12(h));
  json params = json::array();
  for (double v : result.parameters) params.push_back(round12(v));
  json report = {
      {"meta", top_meta(o)},
      {"dataset",
       {{"steps", o.steps},
        {"grid_theta", o.grid_theta},
        {"grid_phi", o.grid_phi},
        {"train_fraction", round12(o.train_fraction)},
        {"seed", o.seed},
        {"train_points", data.train_indices().size()},
        {"validation_points", validation.size()}}},
      {"layers", o.layers},
      {"train_seed", o.train_seed},
      {"restarts", o.restarts},
      {"budget", o.budget},
      {"evaluations", result.evaluations},
      {"parameters", std::move(params)},
      {"train_accuracy", round12(result.train_accuracy)},
      {"validation_accuracy", round12(kickedtop::accuracy(spec, data, validation, result.parameters))},
      {"untrained_validation_accuracy", round12(kickedtop::accuracy(spec, data, validation, baseline))},
      {"history", std::move(history)},
  };
  emit(dump(report), o.output, out);
  return kExitOk;
}

void add_top_flags(CLI::App* app, TopOptions& o) {
  app->add_option("--two-j", o.two_j, "2J, the number of qubits")->capture_default_str();
  app->add_option("--kappa", o.kappa, "chaoticity")->capture_default_str();
  app->add_option("--p", o.p, "kick angle (radians)")->capture_default_str();
  app->add_option("--output,-o", o.output, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"paulisim: noisy density-matrix circuits in the Pauli basis"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "simulate a circuit file under a noise model");
  run_cmd->add_option("circuit", ro.circuit, "circuit file")->required();
  run_cmd->add_option("--noise", ro.noise, "noise file (JSON or key = value)");
  run_cmd->add_option("--shots", ro.shots, "sampled trajectories; 0 gives exact distributions")->capture_default_str();
  run_cmd->add_option("--seed", ro.seed, "RNG seed for --shots")->capture_default_str();
  run_cmd->add_option("--observable", ro.observables, "Pauli string such as ZZI (repeatable)");
  run_cmd->add_option("--initial", ro.initial, "initial state")
      ->check(CLI::IsMember({"zero", "thermal"}))
      ->capture_default_str();
  run_cmd->add_option("--out", ro.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  run_cmd->add_option("--output,-o", ro.output, "write the report here instead of stdout");
  run_cmd->add_option("--top", ro.top_k, "Pauli expectations listed in the state summary")->capture_default_str();
  run_cmd->add_flag("--timing", ro.timing, "include wall-clock seconds in schedule_stats");

  WignerOptions wo;
  auto* wigner_cmd = app.add_subcommand("wigner", "discrete Wigner table of a state");
  wigner_cmd->add_option("source", wo.source, "zero | one | plus | mixed | singlet | bloch THETA PHI | circuit FILE")
      ->required()
      ->check(CLI::IsMember({"zero", "one", "plus", "mixed", "singlet", "bloch", "circuit"}));
  wigner_cmd->add_option("args", wo.args, "source arguments");
  wigner_cmd->add_option("--sign", wo.sign, "sigma_y sign branch")->check(CLI::IsMember({"+", "-"}))->capture_default_str();
  wigner_cmd->add_option("--out", wo.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  wigner_cmd->add_option("--output,-o", wo.output, "write the table here instead of stdout");

  TopOptions to;
  auto* top_cmd = app.add_subcommand("kickedtop", "kicked-top dynamics and classification");
  top_cmd->require_subcommand(1);
  auto* evolve_cmd = top_cmd->add_subcommand("evolve", "trajectory of <J>/J from a coherent state");
  add_top_flags(evolve_cmd, to);
  evolve_cmd->add_option("--steps", to.steps, "kicks")->capture_default_str();
  evolve_cmd->add_option("--theta", to.theta, "initial polar angle")->capture_default_str();
  evolve_cmd->add_option("--phi", to.phi, "initial azimuth")->capture_default_str();

  auto* lyap_cmd = top_cmd->add_subcommand("lyapunov", "classical Lyapunov exponent estimate");
  add_top_flags(lyap_cmd, to);
  lyap_cmd->add_option("--steps", to.steps, "map iterations (>= 100)")->capture_default_str();
  lyap_cmd->add_option("--renorm", to.renorm, "tangent renormalization interval")->capture_default_str();
  lyap_cmd->add_option("--theta", to.theta, "start polar angle (single start)")->capture_default_str();
  lyap_cmd->add_option("--phi", to.phi, "start azimuth (single start)")->capture_default_str();
  lyap_cmd->add_option("--starts", to.starts, "random starts to average")->capture_default_str();
  lyap_cmd->add_option("--seed", to.seed, "seed for random starts")->capture_default_str();

  auto* dataset_cmd = top_cmd->add_subcommand("dataset", "hemisphere-labelled evolved coherent states");
  auto* train_cmd = top_cmd->add_subcommand("train", "train the variational classifier");
  for (auto* cmd : {dataset_cmd, train_cmd}) {
    add_top_flags(cmd, to);
    cmd->add_option("--steps", to.steps, "kicks applied to each datapoint")->capture_default_str();
    cmd->add_option("--grid-theta", to.grid_theta, "polar grid size")->capture_default_str();
    cmd->add_option("--grid-phi", to.grid_phi, "azimuthal grid size")->capture_default_str();
    cmd->add_option("--train-fraction", to.train_fraction, "training share")->capture_default_str();
    cmd->add_option("--seed", to.seed, "split seed")->capture_default_str();
  }
  dataset_cmd->add_option("--states", to.states, "also write evolved Pauli coefficients as JSON");
  train_cmd->add_option("--layers", to.layers, "classifier layers")->capture_default_str();
  train_cmd->add_option("--restarts", to.restarts, "random restarts")->capture_default_str();
  train_cmd->add_option("--budget", to.budget, "maximum objective evaluations")->capture_default_str();
  train_cmd->add_option("--train-seed", to.train_seed, "optimizer seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    configure_threads();
    if (*run_cmd) return cmd_run(ro, out);
    if (*wigner_cmd) return cmd_wigner(wo, out);
    if (*evolve_cmd) return cmd_evolve(to, out);
    if (*lyap_cmd) return cmd_lyapunov(to, out);
    if (*dataset_cmd) return cmd_dataset(to, out);
    if (*train_cmd) return cmd_train(to, out);
  } catch (const FileParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSize;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitUsage;
}

}  // namespace paulisim::cli
