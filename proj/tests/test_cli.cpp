#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "paulisim/cli/commands.hpp"
#include "paulisim/cli/noise_config.hpp"
#include "paulisim/cli/report.hpp"
#include "paulisim/errors.hpp"

using namespace paulisim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "paulisim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("paulisim_cli_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const char* kBell = "qubits 2\nh 0\ncx 0 1\nmeasure 0\nmeasure 1\n";

}  // namespace

TEST_CASE("noise config: key = value and JSON agree") {
  const auto a = cli::load_noise_config("# device\np = 0.9\nr = 0.95\nt1 = 50\nt2 = 70\ndt = 0.1\n");
  const auto b = cli::load_noise_config(R"({"p": 0.9, "r": 0.95, "t1": 50, "t2": 70, "dt": 0.1})");
  CHECK(a.noise.p == 0.9);
  CHECK(a.noise.g == doctest::Approx(std::exp(-0.1 / 50)));
  CHECK(a.noise.f == doctest::Approx(std::exp(-0.1 / 70)));
  CHECK(a.noise.f == b.noise.f);
  CHECK(a.noise.g == b.noise.g);
  CHECK(a.noise.r == b.noise.r);
  const auto empty = cli::load_noise_config("");
  CHECK(empty.noise.memory_is_identity());
}

TEST_CASE("noise config errors") {
  try {
    cli::load_noise_config("p = 0.9\nr 0.9\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(cli::load_noise_config("p = 0.9\np = 0.8\n"), ParseError);
  CHECK_THROWS_AS(cli::load_noise_config("p = abc\n"), ParseError);
  CHECK_THROWS_AS(cli::load_noise_config("{\"p\": 0.9,"), ParseError);
  CHECK_THROWS_AS(cli::load_noise_config("q = 0.9\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_noise_config("p = 1.5\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_noise_config("t1 = 10\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_noise_config("t1 = 10\nt2 = 25\ndt = 1\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_noise_config("t1 = 10\ndt = 0\n"), cli::ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(cli::round12(-0.0) == 0.0);
  CHECK_FALSE(std::signbit(cli::round12(-1e-20 * 0.0)));
  CHECK(cli::round12(0.1 + 0.2) == 0.3);
  CHECK(cli::format12(0.5) == "0.5");
}

TEST_CASE("run: Bell report") {
  TempDir dir;
  const auto circuit = dir.write("bell.txt", kBell);
  const auto r = invoke({"run", circuit, "--observable", "ZZ", "--observable", "XX"});
  REQUIRE(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["expectations"]["ZZ"].get<double>() == 1.0);
  CHECK(j["expectations"]["XX"].get<double>() == 0.0);
  CHECK(j["meta"]["mode"] == "exact");
  CHECK(j["schedule_stats"]["partitions"] == 3);
  CHECK_FALSE(j["schedule_stats"].contains("wall_seconds"));
  REQUIRE(j["distributions"].size() == 2);
  CHECK(j["distributions"][0]["probabilities"][0].get<double>() == 0.5);

  const auto again = invoke({"run", circuit, "--observable", "ZZ", "--observable", "XX"});
  CHECK(again.out == r.out);

  const auto timed = invoke({"run", circuit, "--timing"});
  CHECK(json::parse(timed.out)["schedule_stats"].contains("wall_seconds"));

  const auto csv = invoke({"run", circuit, "--out", "csv"});
  CHECK(csv.code == 0);
  CHECK(count_lines(csv.out) == 5);
}

TEST_CASE("run: sampled reports are reproducible") {
  TempDir dir;
  const auto circuit = dir.write("bell.txt", kBell);
  const auto noise = dir.write("noise.txt", "d1 = 0.9\n");
  const auto a = invoke({"run", circuit, "--noise", noise, "--shots", "500", "--seed", "4"});
  const auto b = invoke({"run", circuit, "--noise", noise, "--shots", "500", "--seed", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["meta"]["mode"] == "sampled");
  const auto counts = j["distributions"][1]["counts"];
  CHECK(counts[0].get<int>() + counts[1].get<int>() == 500);
}

TEST_CASE("run: thermal start") {
  TempDir dir;
  const auto circuit = dir.write("empty.txt", "qubits 1\n");
  const auto noise = dir.write("noise.json", R"({"p": 0.8})");
  const auto r = invoke({"run", circuit, "--noise", noise, "--initial", "thermal", "--observable", "Z"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["expectations"]["Z"].get<double>() == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("run: exit codes") {
  TempDir dir;
  const auto good = dir.write("bell.txt", kBell);
  CHECK(invoke({"run", dir.path("missing.txt")}).code == cli::kExitUsage);
  CHECK(invoke({"run"}).code == cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
  CHECK(invoke({"--help"}).code == cli::kExitOk);

  const auto broken = invoke({"run", dir.write("bad.txt", "qubits 2\nh 5\n")});
  CHECK(broken.code == cli::kExitParse);
  CHECK(broken.err.find("2") != std::string::npos);

  CHECK(invoke({"run", good, "--noise", dir.write("n.txt", "p = \n")}).code == cli::kExitParse);
  CHECK(invoke({"run", good, "--noise", dir.write("n2.txt", "r = 2\n")}).code == cli::kExitConfig);
  const auto seeded = invoke({"run", good, "--shots", "10"});
  REQUIRE(seeded.code == cli::kExitOk);
  CHECK(json::parse(seeded.out)["meta"]["seed"] == 0);
  CHECK(invoke({"run", good, "--observable", "ZZZ"}).code == cli::kExitConfig);

  std::string large = "qubits 13\n";
  CHECK(invoke({"run", dir.write("big.txt", large + "h 0\n")}).code == cli::kExitSize);
}

TEST_CASE("run: output file") {
  TempDir dir;
  const auto circuit = dir.write("bell.txt", kBell);
  const auto target = dir.path("report.json");
  const auto r = invoke({"run", circuit, "-o", target});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(target);
  const json j = json::parse(in);
  CHECK(j["meta"]["num_qubits"] == 2);
}

TEST_CASE("wigner command") {
  const auto zero = invoke({"wigner", "zero", "--out", "json"});
  REQUIRE(zero.code == 0);
  const json z = json::parse(zero.out);
  CHECK(z["weights"][0][0].get<double>() == 0.5);
  CHECK(z["weights"][0][1].get<double>() == 0.5);
  CHECK(z["weights"][1][0].get<double>() == 0.0);
  CHECK(z["total"].get<double>() == 1.0);
  CHECK(z["negativity"].get<double>() == 0.0);

  const auto singlet = invoke({"wigner", "singlet", "--out", "json", "--sign", "-"});
  REQUIRE(singlet.code == 0);
  const json s = json::parse(singlet.out);
  CHECK(s["weights"].size() == 4);
  CHECK(s["total"].get<double>() == 1.0);

  const auto mixed = invoke({"wigner", "mixed"});
  REQUIRE(mixed.code == 0);
  CHECK(mixed.out.rfind("0.25,0.25\n0.25,0.25\n", 0) == 0);

  const auto bloch = invoke({"wigner", "bloch", "0.9553166181245093", "0.7853981633974483", "--sign", "-", "--out", "json"});
  REQUIRE(bloch.code == 0);
  CHECK(json::parse(bloch.out)["negativity"].get<double>() > 0.1);

  TempDir dir;
  const auto circuit = dir.write("plus.txt", "qubits 1\nh 0\n");
  const auto fromc = invoke({"wigner", "circuit", circuit, "--out", "json"});
  REQUIRE(fromc.code == 0);
  CHECK(json::parse(fromc.out)["weights"] == json::parse(invoke({"wigner", "plus", "--out", "json"}).out)["weights"]);

  CHECK(invoke({"wigner", "bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"wigner", "bloch", "1.0"}).code != cli::kExitOk);
  CHECK(invoke({"wigner", "circuit", dir.write("big.txt", "qubits 11\n")}).code == cli::kExitSize);
}

TEST_CASE("kickedtop commands") {
  const auto evolve = invoke({"kickedtop", "evolve", "--two-j", "3", "--kappa", "3", "--steps", "20"});
  REQUIRE(evolve.code == 0);
  CHECK(count_lines(evolve.out) == 22);
  CHECK(evolve.out.rfind("step,jx,jy,jz\n", 0) == 0);

  const auto data = invoke({"kickedtop", "dataset", "--steps", "1", "--grid-theta", "4", "--grid-phi", "5"});
  REQUIRE(data.code == 0);
  CHECK(count_lines(data.out) == 21);

  const auto lyap = invoke({"kickedtop", "lyapunov", "--kappa", "0", "--steps", "500"});
  REQUIRE(lyap.code == 0);
  CHECK(std::abs(json::parse(lyap.out)["exponent"].get<double>()) < 1e-2);

  CHECK(invoke({"kickedtop", "lyapunov", "--steps", "10"}).code == cli::kExitConfig);
  CHECK(invoke({"kickedtop", "evolve", "--kappa", "-1"}).code == cli::kExitConfig);

  const auto trained = invoke({"kickedtop", "train", "--kappa", "0", "--steps", "1", "--grid-theta", "8", "--grid-phi", "8",
                               "--budget", "300", "--restarts", "2"});
  REQUIRE(trained.code == 0);
  const json t = json::parse(trained.out);
  CHECK(t.contains("validation_accuracy"));
  CHECK(t.contains("untrained_validation_accuracy"));
  CHECK(t["train_accuracy"].get<double>() >= 0.0);
}
