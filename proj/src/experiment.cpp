#include "nonmarkov/experiment.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "nonmarkov/info_measures.hpp"
#include "nonmarkov/nm_measures.hpp"
#include "nonmarkov/parallel.hpp"

namespace nonmarkov {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

ExperimentMode mode_from_string(const std::string& s) {
  if (s == "phase_factors") return ExperimentMode::PhaseFactors;
  if (s == "cmi") return ExperimentMode::Cmi;
  if (s == "measures") return ExperimentMode::Measures;
  if (s == "check") return ExperimentMode::Check;
  throw ConfigError("unknown mode '" + s + "'");
}

void parse_dephasing(const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ConfigError("'dephasing' must be an object");
  reject_unknown(j, {"eps1", "eps2", "alpha1", "alpha2", "omega_c", "r", "u", "t1s", "t1f", "t2s",
                     "t2f", "env_kind", "quadrature"},
                 "dephasing");
  auto& p = cfg.dephasing;
  p.eps1 = get_or(j, "eps1", p.eps1);
  p.eps2 = get_or(j, "eps2", p.eps2);
  p.alpha1 = get_or(j, "alpha1", p.alpha1);
  p.alpha2 = get_or(j, "alpha2", p.alpha2);
  p.omega_c = get_or(j, "omega_c", p.omega_c);
  p.r = get_or(j, "r", p.r);
  if (j.contains("u") && !j.at("u").is_null()) p.u = get_or(j, "u", 0.0);
  p.window1.start = get_or(j, "t1s", p.window1.start);
  p.window1.finish = get_or(j, "t1f", p.window1.finish);
  p.window2.start = get_or(j, "t2s", p.window2.start);
  p.window2.finish = get_or(j, "t2f", p.window2.finish);
  if (j.contains("env_kind")) {
    const auto& kind = j.at("env_kind");
    std::vector<std::string> names;
    if (kind.is_string()) names.push_back(kind.get<std::string>());
    else if (kind.is_array()) {
      for (const auto& k : kind) {
        if (!k.is_string()) throw ConfigError("env_kind entries must be strings");
        names.push_back(k.get<std::string>());
      }
    } else {
      throw ConfigError("env_kind must be a string or a list of strings");
    }
    if (names.empty()) throw ConfigError("env_kind list is empty");
    cfg.env_kinds.clear();
    for (const auto& n : names) {
      try {
        cfg.env_kinds.push_back(env_kind_from_string(n));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  p.env_kind = cfg.env_kinds.front();
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    reject_unknown(q, {"abscissae", "cutoff_multiplier", "rel_tol", "max_depth"}, "quadrature");
    p.quad.abscissae = get_or(q, "abscissae", p.quad.abscissae);
    p.quad.cutoff_multiplier = get_or(q, "cutoff_multiplier", p.quad.cutoff_multiplier);
    p.quad.rel_tol = get_or(q, "rel_tol", p.quad.rel_tol);
    p.quad.max_depth = get_or(q, "max_depth", p.quad.max_depth);
  }
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Vector qubit_pair(const std::string& name) {
  Vector v = Vector::Zero(4);
  const double h = 1.0 / std::sqrt(2.0);
  if (name == "psi+" || name == "psi-") {
    v(1) = h;
    v(2) = name == "psi+" ? h : -h;
    return v;
  }
  if (name == "phi+" || name == "phi-") {
    v(0) = h;
    v(3) = name == "phi+" ? h : -h;
    return v;
  }
  if (name.size() != 2) throw ConfigError("unknown two-qubit state '" + name + "'");
  auto single = [&](char c) {
    Vector s(2);
    switch (c) {
      case '0': s << 1.0, 0.0; break;
      case '1': s << 0.0, 1.0; break;
      case '+': s << h, h; break;
      case '-': s << h, -h; break;
      default: throw ConfigError("unknown one-qubit state '" + std::string(1, c) + "'");
    }
    return s;
  };
  return kron(single(name[0]), single(name[1])).col(0);
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError("bad seed '" + text + "'");
  return value;
}

const SystemPartition& system_partition() {
  static const SystemPartition p({{"S1", 2}, {"S2", 2}});
  return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, {"mode", "dephasing", "discrete", "grid", "candidates", "output_path", "seed", "samples"},
                 "config");
  ExperimentConfig cfg;
  if (!j.contains("mode")) throw ConfigError("missing 'mode'");
  cfg.mode = mode_from_string(get_or<std::string>(j, "mode", ""));
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.samples = get_or(j, "samples", cfg.samples);
  if (cfg.samples < 1) throw ConfigError("'samples' must be positive");

  if (j.contains("dephasing")) parse_dephasing(j.at("dephasing"), cfg);
  else if (cfg.mode != ExperimentMode::Check) throw ConfigError("mode needs a 'dephasing' section");

  if (j.contains("discrete")) {
    const auto& d = j.at("discrete");
    reject_unknown(d, {"n_modes", "n_max"}, "discrete");
    DiscreteConfig dc;
    dc.n_modes = get_or(d, "n_modes", dc.n_modes);
    if (d.contains("n_max") && !d.at("n_max").is_null()) dc.n_max = get_or(d, "n_max", 0);
    if (dc.n_modes < 1 || (dc.n_max && *dc.n_max < 1)) throw ConfigError("invalid discrete settings");
    cfg.discrete = dc;
  }
  if (cfg.mode == ExperimentMode::Cmi && !cfg.discrete) throw ConfigError("mode 'cmi' needs a 'discrete' section");
  if (cfg.mode == ExperimentMode::Measures && !cfg.discrete)
    throw ConfigError("mode 'measures' needs a 'discrete' section");
  if (cfg.mode == ExperimentMode::Measures && cfg.env_kinds.size() != 1)
    throw ConfigError("mode 'measures' takes a single env_kind");

  cfg.grid.t_end = cfg.dephasing.window2.finish;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"t_start", "t_end", "dt"}, "grid");
    cfg.grid.t_start = get_or(g, "t_start", cfg.grid.t_start);
    cfg.grid.t_end = get_or(g, "t_end", cfg.grid.t_end);
    cfg.grid.dt = get_or(g, "dt", cfg.grid.dt);
  }
  if (!(cfg.grid.dt > 0.0) || cfg.grid.t_end < cfg.grid.t_start || cfg.grid.t_start < 0.0)
    throw ConfigError("invalid time grid");

  if (j.contains("candidates")) {
    cfg.candidates = get_or<std::vector<std::string>>(j, "candidates", {});
    if (cfg.candidates.empty()) throw ConfigError("candidate list is empty");
    for (const auto& c : cfg.candidates) make_candidate(c);
  }
  if (!j.contains("output_path")) throw ConfigError("missing 'output_path'");
  std::filesystem::path out = get_or<std::string>(j, "output_path", "");
  if (out.empty()) throw ConfigError("'output_path' is empty");
  cfg.output_path = out.is_relative() ? base_dir / out : out;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

Candidate make_candidate(const std::string& spec) {
  if (spec == "ops_state") return {spec, default_flagged_state(), std::nullopt};
  if (spec.rfind("tsio:", 0) == 0) {
    const std::string body = spec.substr(5);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw ConfigError("tsio candidate needs two states: " + spec);
    const auto rho1 = DensityMatrix::pure(qubit_pair(body.substr(0, comma)), system_partition());
    const auto rho2 = DensityMatrix::pure(qubit_pair(body.substr(comma + 1)), system_partition());
    return {spec, optimal_pair_state(rho1, rho2, "A"), std::make_pair(rho1, rho2)};
  }
  if (spec.rfind("random:", 0) == 0) {
    const SystemPartition p({{"A", 2}, {"S1", 2}, {"S2", 2}});
    return {spec, DensityMatrix::pure(random_pure_vector(8, parse_seed(spec.substr(7))), p), std::nullopt};
  }
  throw ConfigError("unknown candidate '" + spec + "'");
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buffer, ptr);
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::vector<double> config_times(const ExperimentConfig& cfg) {
  return uniform_grid(cfg.grid.t_start, cfg.grid.t_end, cfg.grid.dt);
}

DephasingParams params_for(const ExperimentConfig& cfg, EnvKind kind) {
  DephasingParams p = cfg.dephasing;
  p.env_kind = kind;
  return p;
}

DiscreteDephasingModel model_for(const ExperimentConfig& cfg, EnvKind kind) {
  const auto p = params_for(cfg, kind);
  const int n_modes = cfg.discrete->n_modes;
  const int n_max = cfg.discrete->n_max ? *cfg.discrete->n_max : minimal_n_max(p, n_modes);
  return build_discrete_model(p, n_modes, n_max);
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    if (fields[i].find_first_of(",\"\n") == std::string::npos) {
      line += fields[i];
      continue;
    }
    line += '"';
    for (char ch : fields[i]) {
      if (ch == '"') line += '"';
      line += ch;
    }
    line += '"';
  }
  return line + '\n';
}

}  // namespace

std::string phase_factor_csv(const ExperimentConfig& cfg) {
  const auto times = config_times(cfg);
  std::string out = "t,|k1|,|k2|,|k1t|,|k2t|,|k12|,|lam12|,env_kind\n";
  for (EnvKind kind : cfg.env_kinds) {
    const auto p = params_for(cfg, kind);
    const auto factors = parallel_map(times.size(), [&](std::size_t i) { return phase_factors(p, times[i]); });
    for (std::size_t i = 0; i < times.size(); ++i) {
      std::vector<std::string> row{format_double(times[i])};
      for (double m : factors[i].magnitudes()) row.push_back(format_double(m));
      row.push_back(to_string(kind));
      out += join_row(row);
    }
  }
  return out;
}

std::string cmi_csv(const ExperimentConfig& cfg) {
  const auto times = config_times(cfg);
  const auto candidate = make_candidate(cfg.candidates.front());
  std::string out = "t,I_A_E1_S,I_A_E2_S,I_A_E1E2_S,env_kind\n";
  for (EnvKind kind : cfg.env_kinds) {
    const auto model = model_for(cfg, kind);
    const auto series = leaked_information_trajectory(model, candidate.state, times);
    for (std::size_t i = 0; i < times.size(); ++i)
      out += join_row({format_double(times[i]), format_double(series.a_e1_s.values()[i]),
                       format_double(series.a_e2_s.values()[i]), format_double(series.a_e1e2_s.values()[i]),
                       to_string(kind)});
  }
  return out;
}

std::string measures_csv(const ExperimentConfig& cfg) {
  const auto times = config_times(cfg);
  const EnvKind kind = cfg.env_kinds.front();
  const auto model = model_for(cfg, kind);
  std::vector<Candidate> candidates;
  for (const auto& spec : cfg.candidates) candidates.push_back(make_candidate(spec));

  // System-level dynamics of the same finite-mode model that drives N1, N2.
  const auto factors = parallel_map(times.size(), [&](std::size_t i) { return discrete_phase_factors(model, times[i]); });
  auto evolve = [&](const DensityMatrix& rho) {
    std::vector<DensityMatrix> states;
    for (const auto& f : factors) states.push_back(evolve_system(f, rho));
    return StateTrajectory(times, std::move(states));
  };

  std::vector<TrajectoryPair> pairs;
  std::vector<std::string> pair_specs;
  for (const auto& c : candidates)
    if (c.pair) {
      pairs.emplace_back(evolve(c.pair->first), evolve(c.pair->second));
      pair_specs.push_back(c.spec);
    }
  if (pairs.empty()) {
    const auto fallback = make_candidate("tsio:psi+,psi-");
    pairs.emplace_back(evolve(fallback.pair->first), evolve(fallback.pair->second));
    pair_specs.push_back(fallback.spec);
  }

  std::vector<StateTrajectory> system_ancilla;
  for (const auto& c : candidates) system_ancilla.push_back(evolve(c.state));

  const SystemPartition extension({{kExtensionLabel, 5}});
  const auto leaked = parallel_map(candidates.size() * times.size(), [&](std::size_t k) {
    const auto& c = candidates[k / times.size()];
    const BranchState plain(model, c.state, times[k % times.size()]);
    const BranchState extended(model, tensor(c.state, DensityMatrix::basis_state(extension, 0)),
                               times[k % times.size()]);
    return std::make_pair(plain.cmi({"A"}, {"E1", "E2"}, {"S"}),
                          extended.cmi({"A"}, {"E1", "E2"}, {"S", kExtensionLabel}));
  });
  std::vector<ScalarSeries> n1_series, n2_series;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::vector<double> v1, v2;
    for (std::size_t i = 0; i < times.size(); ++i) {
      v1.push_back(leaked[c * times.size() + i].first);
      v2.push_back(leaked[c * times.size() + i].second);
    }
    n1_series.emplace_back(times, std::move(v1));
    n2_series.emplace_back(times, std::move(v2));
  }

  auto row = [](const MeasureResult& r, const std::vector<std::string>& specs) {
    int count = 0;
    for (double v : r.increments.values()) count += v > 0.0;
    return join_row({to_string(r.measure_name), format_double(r.value), specs.at(r.best_candidate_index),
                     std::to_string(count)});
  };
  std::string out = "measure,value,best_candidate,increment_count\n";
  out += row(measure_distance_blp(pairs, DistanceKind::Trace), pair_specs);
  out += row(measure_distance_blp(pairs, DistanceKind::Telescopic), pair_specs);
  out += row(measure_lfs(system_ancilla, {"S1", "S2"}, {"A"}), cfg.candidates);
  out += row(measure_from_series(MeasureName::N1, n1_series, true), cfg.candidates);
  out += row(measure_from_series(MeasureName::N2, n2_series, true), cfg.candidates);
  return out;
}

namespace {

json report_json(const SuiteReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json jc{{"name", c.name}, {"samples", c.samples}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    jc["max_violation"] = std::isfinite(c.max_violation) ? json(c.max_violation) : json("inf");
    checks.push_back(jc);
  }
  return json{{"seed", report.seed}, {"all_pass", report.all_pass()}, {"checks", checks}};
}

// Small instances for the dense cross-check: one mode pair, a mixed initial
// state with populated coherences.
SuiteReport dense_suite(std::uint64_t seed, EnvKind kind) {
  DephasingParams p;
  p.r = 0.5;
  p.omega_c = 0.02;
  p.alpha2 = 0.7;
  p.env_kind = kind;
  const auto model = build_discrete_model(p, 1, 5);
  const SystemPartition partition({{"A", 2}, {"S1", 2}, {"S2", 2}});
  const auto initial = random_density_matrix(partition, 2, mix_seed(seed, kind == EnvKind::Entangled ? 11 : 12));
  DenseCheckOptions options;
  options.fock_padding = 6;  // displacements stay below 0.2 at this cutoff
  auto report = dense_dephasing_check(model, initial, uniform_grid(0.0, 5.0, 0.5), options);
  report.seed = seed;
  return report;
}

}  // namespace

std::string check_json(std::uint64_t seed, int samples) {
  json suites;
  const auto identity = identity_suite(seed, samples);
  const auto special = special_function_suite(seed);
  const auto dense_e = dense_suite(seed, EnvKind::Entangled);
  const auto dense_c = dense_suite(seed, EnvKind::Classical);
  suites["identity"] = report_json(identity);
  suites["special_functions"] = report_json(special);
  suites["dense_entangled"] = report_json(dense_e);
  suites["dense_classical"] = report_json(dense_c);
  const bool pass = identity.all_pass() && special.all_pass() && dense_e.all_pass() && dense_c.all_pass();
  json out{{"seed", seed}, {"samples", samples}, {"all_pass", pass}, {"suites", suites}};
  return out.dump(2) + "\n";
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& err) {
  try {
    std::string content;
    switch (cfg.mode) {
      case ExperimentMode::PhaseFactors: content = phase_factor_csv(cfg); break;
      case ExperimentMode::Cmi: content = cmi_csv(cfg); break;
      case ExperimentMode::Measures: content = measures_csv(cfg); break;
      case ExperimentMode::Check: {
        content = check_json(cfg.seed, cfg.samples);
        write_atomically(cfg.output_path, content);
        return json::parse(content).at("all_pass").get<bool>() ? kExitOk : kExitCheckFailed;
      }
    }
    write_atomically(cfg.output_path, content);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int run_config_file(const std::filesystem::path& path, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run_experiment(cfg, err);
}

int run_check(std::uint64_t seed, int samples, const std::optional<std::filesystem::path>& output,
              std::ostream& out, std::ostream& err) {
  if (samples < 1) {
    err << "config error: samples must be positive\n";
    return kExitConfig;
  }
  try {
    const std::string content = check_json(seed, samples);
    if (output) write_atomically(*output, content);
    else out << content;
    return json::parse(content).at("all_pass").get<bool>() ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace nonmarkov
