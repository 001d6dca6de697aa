#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "nonmarkov/experiment.hpp"
#include "nonmarkov/info_measures.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nonmarkov_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(NONMARKOV_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') out.back() += line[++i];
      else if (c == '"') quoted = false;
      else out.back() += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream in(read(p));
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(split_csv(line));
  return rows;
}

const char* kPhaseConfig = R"({"mode": "phase_factors",
  "dephasing": {"alpha1": 1, "alpha2": 1, "omega_c": 0.01, "r": 3, "t1s": 0, "t1f": 2.5, "t2s": 2.5, "t2f": 5,
                "env_kind": ["Entangled", "Classical"]},
  "grid": {"dt": 0.5}, "output_path": "pf.csv"})";

const char* kCmiConfig = R"({"mode": "cmi",
  "dephasing": {"r": 0, "omega_c": 0.02, "env_kind": "Entangled"},
  "discrete": {"n_modes": 2}, "grid": {"dt": 0.25}, "output_path": "cmi.csv"})";

const char* kMeasuresConfig = R"({"mode": "measures",
  "dephasing": {"r": 1.0, "omega_c": 0.02, "alpha2": 0.7, "env_kind": "Entangled"},
  "discrete": {"n_modes": 1}, "grid": {"dt": 0.25},
  "candidates": ["ops_state", "tsio:psi+,psi-", "random:3"], "output_path": "out/measures.csv"})";

}  // namespace

TEST_CASE("phase factor CSV") {
  TempDir dir;
  write(dir.path / "pf.json", kPhaseConfig);
  REQUIRE(run("run " + (dir.path / "pf.json").string()) == kExitOk);
  const auto rows = read_csv(dir.path / "pf.csv");
  REQUIRE(rows.size() == 1 + 2 * 11);
  CHECK(rows[0] == std::vector<std::string>{"t", "|k1|", "|k2|", "|k1t|", "|k2t|", "|k12|", "|lam12|", "env_kind"});
  CHECK(rows[1][0] == "0");
  for (int c = 1; c <= 6; ++c) CHECK(std::stod(rows[1][c]) == 1.0);
  CHECK(rows[1][7] == "Entangled");
  CHECK(rows[12][7] == "Classical");
  for (std::size_t r = 1; r < rows.size(); ++r)
    for (int c = 1; c <= 6; ++c) CHECK(std::stod(rows[r][c]) <= 1.0 + 1e-9);
}

TEST_CASE("CMI CSV with uncorrelated environments") {
  TempDir dir;
  write(dir.path / "cmi.json", kCmiConfig);
  REQUIRE(run("run " + (dir.path / "cmi.json").string()) == kExitOk);
  const auto rows = read_csv(dir.path / "cmi.csv");
  CHECK(rows[0] == std::vector<std::string>{"t", "I_A_E1_S", "I_A_E2_S", "I_A_E1E2_S", "env_kind"});
  REQUIRE(rows.size() == 22);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (std::stod(rows[r][0]) <= 2.5) CHECK(rows[r][2] == "0");
  }
  CHECK(std::stod(rows[10][1]) > 0.0);
}

TEST_CASE("measures CSV") {
  TempDir dir;
  fs::create_directories(dir.path / "out");
  write(dir.path / "m.json", kMeasuresConfig);
  // relative output paths resolve against the config directory, not the cwd
  REQUIRE(run("run " + (dir.path / "m.json").string(), "cd / &&") == kExitOk);
  const auto rows = read_csv(dir.path / "out" / "measures.csv");
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"measure", "value", "best_candidate", "increment_count"});
  const std::vector<std::string> names{"BLP", "tBLP", "LFS", "N1", "N2"};
  for (int i = 0; i < 5; ++i) {
    REQUIRE(rows[i + 1].size() == 4);
    CHECK(rows[i + 1][0] == names[i]);
    CHECK(std::stod(rows[i + 1][1]) >= 0.0);
  }
  CHECK(rows[1][2] == "tsio:psi+,psi-");
  const double lfs = std::stod(rows[3][1]), n1 = std::stod(rows[4][1]), n2 = std::stod(rows[5][1]);
  CHECK(n1 > 1e-4);
  CHECK(std::abs(lfs - n1) < 1e-7);
  CHECK(std::abs(n2 - n1) < 1e-9);
}

TEST_CASE("check subcommand") {
  TempDir dir;
  const auto out = dir.path / "check.json";
  REQUIRE(run("check --seed 1 --samples 20 --output " + out.string()) == kExitOk);
  const auto j = nlohmann::json::parse(read(out));
  CHECK(j.at("all_pass").get<bool>());
  CHECK(j.at("seed").get<int>() == 1);
  for (const char* suite : {"identity", "special_functions", "dense_entangled", "dense_classical"})
    CHECK(j.at("suites").at(suite).at("all_pass").get<bool>());

  write(dir.path / "c.json", R"({"mode": "check", "seed": 1, "samples": 20, "output_path": "c2.json"})");
  REQUIRE(run("run " + (dir.path / "c.json").string()) == kExitOk);
  CHECK(read(dir.path / "c2.json") == read(out));
}

TEST_CASE("exit codes") {
  TempDir dir;
  auto code = [&](const std::string& config) {
    write(dir.path / "x.json", config);
    return run("run " + (dir.path / "x.json").string());
  };
  CHECK(run("run " + (dir.path / "missing.json").string()) == kExitConfig);
  CHECK(code("{not json") == kExitConfig);
  CHECK(code(R"({"mode": "x", "output_path": "o.csv"})") == kExitConfig);
  CHECK(code(R"({"mode": "phase_factors"})") == kExitConfig);
  CHECK(code(R"({"mode": "phase_factors", "output_path": "o.csv", "colour": 1})") == kExitConfig);
  CHECK(code(R"({"mode": "cmi", "output_path": "o.csv"})") == kExitConfig);
  CHECK(code(R"({"mode": "phase_factors", "output_path": "o.csv", "dephasing": {"omega_c": -1}})") == kExitConfig);
  CHECK(code(R"({"mode": "cmi", "output_path": "o.csv", "dephasing": {"r": 1}, "discrete": {"n_modes": 1, "n_max": 2}})") ==
        kExitConfig);
  CHECK(code(R"({"mode": "phase_factors", "output_path": "o.csv",
                 "dephasing": {"quadrature": {"rel_tol": 1e-16, "max_depth": 1}}, "grid": {"dt": 1}})") ==
        kExitNumerical);
  CHECK_FALSE(fs::exists(dir.path / "o.csv"));
  CHECK(run("--bogus") == kExitConfig);
}

TEST_CASE("identical configs give byte-identical outputs") {
  TempDir dir;
  write(dir.path / "m.json", kMeasuresConfig);
  fs::create_directories(dir.path / "out");
  REQUIRE(run("run " + (dir.path / "m.json").string()) == kExitOk);
  const auto first = read(dir.path / "out" / "measures.csv");
  REQUIRE(run("run " + (dir.path / "m.json").string(), "NONMARKOV_THREADS=1") == kExitOk);
  CHECK(read(dir.path / "out" / "measures.csv") == first);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(kPhaseConfig, "/base");
  CHECK(cfg.mode == ExperimentMode::PhaseFactors);
  CHECK(cfg.env_kinds.size() == 2);
  CHECK(cfg.output_path == fs::path("/base/pf.csv"));
  CHECK(cfg.grid.t_end == 5.0);
  CHECK(cfg.dephasing.r == 3.0);
  const auto m = parse_config(kMeasuresConfig);
  REQUIRE(m.discrete);
  CHECK(m.discrete->n_modes == 1);
  CHECK_FALSE(m.discrete->n_max);
  CHECK(m.candidates.size() == 3);
  CHECK_THROWS_AS(parse_config(R"({"mode": "measures", "output_path": "o", "discrete": {},
                                   "dephasing": {"env_kind": ["E", "C"]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"mode": "cmi", "output_path": "o", "discrete": {"n_mode": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"mode": "phase_factors", "output_path": "o", "grid": {"dt": "x"}})"), ConfigError);
}

TEST_CASE("candidates") {
  const auto ops = make_candidate("ops_state");
  CHECK(max_abs(ops.state.matrix() - default_flagged_state().matrix()) == 0.0);
  CHECK_FALSE(ops.pair);
  const auto tsio = make_candidate("tsio:01,10");
  REQUIRE(tsio.pair);
  CHECK(tsio.pair->first.partition().total_dim() == 4);
  CHECK(std::abs(mutual_information(reorder(tsio.state, {"S1", "S2", "A"}), {"S1", "S2"}, {"A"}) - std::log(2.0)) <
        1e-12);
  const auto bell = make_candidate("tsio:phi+,psi-");
  CHECK(std::abs(trace_distance(bell.pair->first, bell.pair->second) - 1.0) < 1e-12);
  const auto random = make_candidate("random:7");
  CHECK(std::abs(random.state.purity() - 1.0) < 1e-12);
  CHECK(random.state.matrix() == make_candidate("random:7").state.matrix());
  CHECK_THROWS_AS(make_candidate("tsio:0,1"), ConfigError);
  CHECK_THROWS_AS(make_candidate("random:x"), ConfigError);
  CHECK_THROWS_AS(make_candidate("bogus"), ConfigError);
}

TEST_CASE("number formatting and atomic writes") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-17) == "-2.5e-17");
  CHECK(std::stod(format_double(0.9899650339338769)) == 0.9899650339338769);
  TempDir dir;
  const auto p = dir.path / "a.txt";
  write_atomically(p, "first");
  write_atomically(p, "second");
  CHECK(read(p) == "second");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) files += e.is_regular_file();
  CHECK(files == 1);
  write_atomically(dir.path / "nested" / "b.txt", "x");
  CHECK(read(dir.path / "nested" / "b.txt") == "x");
}
