#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qubus/errors.hpp"
#include "qubus/photonics.hpp"
#include "qubus/repeater_config.hpp"
#include "qubus/repeater_sim.hpp"
#include "qubus/report_json.hpp"
#include "qubus/tuning.hpp"

namespace qubus::cli {

namespace {

using nlohmann::json;

constexpr const char* kTable1Schema = "qubus.table1/1";
constexpr const char* kTuneSchema = "qubus.tune/1";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad flag values are usage errors, not config errors, but both exit 2.
template <class F>
auto as_usage(F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    parts.push_back(item);
  }
  if (!s.empty() && s.back() == sep) {
    parts.emplace_back();
  }
  return parts;
}

double to_double(const std::string& what, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw UsageError(what + ": not a number: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& what, const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) {
    out.push_back(to_double(what, p));
  }
  if (out.empty()) {
    throw UsageError(what + ": empty list");
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& p : split(s, ',')) {
    if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--seeds: expected comma-separated non-negative integers, got '" + s + "'");
    }
    try {
      out.push_back(std::stoull(p));
    } catch (const std::out_of_range&) {
      throw UsageError("--seeds: seed out of range: '" + p + "'");
    }
  }
  if (out.empty()) {
    throw UsageError("--seeds: empty list");
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot write " + path);
  }
  os << content;
  if (!os) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Reads a manifest either standalone (sidecar) or embedded under "manifest".
RunManifest load_manifest(const std::string& path, const std::string& subcommand) {
  json j = read_json_file(path);
  if (j.is_object() && j.contains("manifest")) {
    j = j["manifest"];
  }
  RunManifest m;
  try {
    m = manifest_from_json(j);
  } catch (const ConfigError& e) {
    throw UsageError(path + ": not a run manifest (" + e.what() + ")");
  }
  if (m.subcommand != subcommand) {
    throw UsageError(path + ": manifest is for '" + m.subcommand + "', not '" + subcommand + "'");
  }
  return m;
}

// Text artifacts get a sidecar manifest next to them.
void emit_text(const std::string& content, const std::string& out_path, RunManifest manifest,
               std::ostream& out) {
  if (out_path.empty()) {
    out << content;
    return;
  }
  manifest.outputs = {out_path};
  write_file(out_path, content);
  write_file(out_path + ".manifest.json", dump(manifest_to_json(manifest)));
}

// ---- link-curve -----------------------------------------------------------

struct LinkCurveArgs {
  double ratio = 0.8;
  double eta2 = 0.9;
  std::string grid;
  std::string out;
  std::string from_manifest;
};

std::string link_curve_text(const json& params) {
  const double ratio = params.at("ratio").get<double>();
  const double eta2 = params.at("eta2").get<double>();
  if (!(ratio > 0.0)) {
    throw UsageError("--ratio must be > 0 (l/l0 = 0 is a degenerate channel)");
  }
  if (!(eta2 > 0.0 && eta2 <= 1.0)) {
    throw UsageError("--eta2 must lie in (0, 1]");
  }
  const auto grid = params.contains("grid") ? params["grid"].get<std::vector<double>>()
                                            : default_fidelity_grid();
  const auto rows = as_usage([&] { return link_curve(Attenuation(ratio), eta2, grid); });
  std::ostringstream os;
  write_link_curve_csv(os, rows);
  return os.str();
}

int cmd_link_curve(const LinkCurveArgs& a, std::ostream& out) {
  RunManifest m;
  m.schema = kLinkCurveSchema;
  m.subcommand = "link-curve";
  if (!a.from_manifest.empty()) {
    m.parameters = load_manifest(a.from_manifest, m.subcommand).parameters;
  } else {
    m.parameters = {{"ratio", a.ratio}, {"eta2", a.eta2}};
    if (!a.grid.empty()) {
      m.parameters["grid"] = parse_list("--grid", a.grid);
    }
  }
  emit_text(link_curve_text(m.parameters), a.out, m, out);
  return ok;
}

// ---- table1 ---------------------------------------------------------------

struct Table1Args {
  double eta2 = 0.9;
  std::string out;
  std::string from_manifest;
};

std::string table1_text(const json& params) {
  const double eta2 = params.at("eta2").get<double>();
  if (!(eta2 > 0.0 && eta2 <= 1.0)) {
    throw UsageError("--eta2 must lie in (0, 1]");
  }
  const double fidelities[] = {0.98, 0.9, 0.75};
  const double ratios[] = {0.4, 0.8, 1.6};
  std::ostringstream os;
  os << "F\\l/l0";
  for (double r : ratios) {
    os << "  " << fmt("%7.1f", r);
  }
  os << "\n";
  for (double f : fidelities) {
    os << fmt("%-6.2f", f);
    for (double r : ratios) {
      os << "  " << fmt("%7.5f", p_spd(f, Attenuation(r), eta2));
    }
    os << "\n";
  }
  return os.str();
}

int cmd_table1(const Table1Args& a, std::ostream& out) {
  RunManifest m;
  m.schema = kTable1Schema;
  m.subcommand = "table1";
  m.parameters = !a.from_manifest.empty() ? load_manifest(a.from_manifest, m.subcommand).parameters
                                          : json{{"eta2", a.eta2}};
  emit_text(table1_text(m.parameters), a.out, m, out);
  return ok;
}

// ---- config flags shared by tune --simulate and simulate -----------------

struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app, const std::string& skip = {}) {
    app->add_option("--config", config_file, "YAML file of flat config keys")
        ->check(CLI::ExistingFile);
    for (const auto& k : config_keys()) {
      const std::string name(k.name);
      if (name == skip) continue;
      std::string dashed = name;
      for (char& c : dashed) {
        if (c == '_') c = '-';
      }
      std::string names = "--" + name;
      if (dashed != name) {
        names += ",--" + dashed;
      }
      app->add_option_function<std::string>(
             names, [this, name](const std::string& v) { overrides[name] = v; },
             std::string(k.help))
          ->type_name("VALUE");
    }
  }

  RepeaterConfig resolve() const {
    RepeaterConfig cfg;
    if (!config_file.empty()) {
      cfg = load_config_file(config_file);
    }
    for (const auto& k : config_keys()) {
      auto it = overrides.find(std::string(k.name));
      if (it != overrides.end()) {
        set_config_value(cfg, it->first, it->second);
      }
    }
    return cfg;
  }
};

unsigned thread_count(int parallel) {
  if (parallel < 0) {
    throw UsageError("--parallel must be >= 0");
  }
  if (parallel == 0) {
    return std::max(1u, std::thread::hardware_concurrency());
  }
  return static_cast<unsigned>(parallel);
}

// ---- tune -----------------------------------------------------------------

struct TuneArgs {
  double ratio = 0.8;
  double eta2 = 0.9;
  double target = 0.98;
  double epsilon = 0.0;
  std::string strategy = "spd";
  bool strategy_given = false;
  std::vector<std::string> candidates;
  bool simulate = false;
  std::string grid;
  std::string seeds;
  int parallel = 1;
  ConfigFlags config;
  std::string out;
  std::string from_manifest;
};

json candidate_json(const TuneCandidate& c) {
  json j{{"label", c.label},
         {"base_fidelity", c.base_fidelity},
         {"kind", std::string(to_string(c.policy.kind))}};
  if (c.policy.rounds) {
    j["rounds"] = *c.policy.rounds;
  }
  return j;
}

TuneCandidate candidate_from_json(const json& j, double target) {
  TuneCandidate c;
  c.label = j.at("label").get<std::string>();
  c.base_fidelity = j.at("base_fidelity").get<double>();
  const auto kind = parse_purification_kind(j.at("kind").get<std::string>());
  if (!kind) {
    throw UsageError("candidate " + c.label + ": unknown purification kind");
  }
  c.policy.kind = *kind;
  if (j.contains("rounds")) {
    c.policy.rounds = j["rounds"].get<int>();
  }
  c.policy.target_fidelity = target;
  return c;
}

// label:F:kind[:rounds]
json parse_candidate(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4 || parts[0].empty()) {
    throw UsageError("--candidate: expected label:F:kind[:rounds], got '" + text + "'");
  }
  json j{{"label", parts[0]},
         {"base_fidelity", to_double("--candidate", parts[1])},
         {"kind", parts[2]}};
  if (!parse_purification_kind(parts[2])) {
    throw UsageError("--candidate: unknown purification kind '" + parts[2] + "'");
  }
  if (parts.size() == 4) {
    const double r = to_double("--candidate", parts[3]);
    if (r < 0 || r != static_cast<int>(r)) {
      throw UsageError("--candidate: rounds must be a non-negative integer");
    }
    j["rounds"] = static_cast<int>(r);
  }
  return j;
}

std::pair<std::string, int> tune_analytic_text(const json& p) {
  const double ratio = p.at("ratio").get<double>();
  const double eta2 = p.at("eta2").get<double>();
  const double target = p.at("target").get<double>();
  const double epsilon = p.at("epsilon").get<double>();
  const auto strategy = parse_strategy(p.at("strategy").get<std::string>());
  if (!strategy) {
    throw UsageError("--strategy: expected spd or csp");
  }
  if (!(ratio > 0.0)) {
    throw UsageError("--ratio must be > 0 (l/l0 = 0 is a degenerate channel)");
  }
  if (!(target > 0.5 && target <= 1.0)) {
    throw UsageError("--target must lie in (0.5, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw UsageError("--epsilon must lie in [0, 1]");
  }
  std::vector<TuneCandidate> cands;
  for (const auto& c : p.at("candidates")) {
    cands.push_back(candidate_from_json(c, target));
  }

  std::ostringstream os;
  os << "ratio " << fmt("%g", ratio) << "  eta2 " << fmt("%g", eta2) << "  target "
     << fmt("%g", target) << "  epsilon " << fmt("%g", epsilon) << "  strategy "
     << to_string(*strategy) << "\n";
  os << "candidate             F_base  rounds    P_eff\n";

  const auto result = as_usage([&] {
    return tune_base_fidelity(cands, Attenuation(ratio), eta2, *strategy, GateErrorModel{epsilon});
  });
  for (const auto& row : result.rows) {
    const auto& c = row.candidate;
    char line[160];
    if (row.rate) {
      std::snprintf(line, sizeof line, "%-20s %7.5f  %6d  %7.5f\n", c.label.c_str(),
                    c.base_fidelity, row.rate->rounds, row.rate->p_eff);
      os << line;
    } else {
      std::snprintf(line, sizeof line, "%-20s %7.5f  %6s  unreachable: ", c.label.c_str(),
                    c.base_fidelity, "-");
      os << line << row.note << "\n";
    }
  }
  if (!result.best) {
    os << "winner: none\n";
    return {os.str(), runtime_failure};
  }
  os << "winner: " << result.rows[*result.best].candidate.label << "\n";
  return {os.str(), ok};
}
std::pair<std::string, int> tune_simulated_text(const json& p, const std::vector<std::uint64_t>& seeds,
                                                unsigned threads) {
  const RepeaterConfig cfg = config_from_json(p.at("config"));
  cfg.validate();
  const auto grid = p.at("grid").get<std::vector<double>>();
  std::ostringstream os;
  os << "F_base  rounds  mean_rate\n";
  {
    const auto r = tune_by_simulation(cfg, grid, seeds, threads);
    for (const auto& row : r.rows) {
      char line[96];
      if (row.mean_rate) {
        std::snprintf(line, sizeof line, "%6.4f  %6d  %9.3g\n", row.base_fidelity,
                      row.total_rounds, *row.mean_rate);
      } else {
        std::snprintf(line, sizeof line, "%6.4f  %6s  unreachable\n", row.base_fidelity, "-");
      }
      os << line;
    }
    if (!r.best) {
      os << "winner: none\n";
      return {os.str(), runtime_failure};
    }
    os << "winner: " << fmt("%.4f", r.rows[*r.best].base_fidelity) << "\n";
    return {os.str(), ok};
  }
}

int cmd_tune(const TuneArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest m;
  m.schema = kTuneSchema;
  m.subcommand = "tune";
  if (!a.from_manifest.empty()) {
    m = load_manifest(a.from_manifest, m.subcommand);
  } else if (a.simulate) {
    ConfigFlags flags = a.config;
    if (a.strategy_given) {
      flags.overrides["strategy"] = a.strategy;
    }
    RepeaterConfig cfg = flags.resolve();
    m.parameters = {{"mode", "simulated"},
                    {"config", config_to_json(cfg)},
                    {"grid", parse_list("--grid", a.grid.empty() ? "0.9,0.95" : a.grid)}};
    m.seeds = a.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : parse_seeds(a.seeds);
  } else {
    json cands = json::array();
    if (a.candidates.empty()) {
      for (const auto& c : default_candidates(a.target)) {
        cands.push_back(candidate_json(c));
      }
    } else {
      for (const auto& s : a.candidates) {
        cands.push_back(parse_candidate(s));
      }
    }
    m.parameters = {{"mode", "analytic"},    {"ratio", a.ratio},
                    {"eta2", a.eta2},        {"target", a.target},
                    {"epsilon", a.epsilon},  {"strategy", a.strategy},
                    {"candidates", cands}};
  }
  m.schema = kTuneSchema;
  m.version = tool_version();

  const bool simulated = m.parameters.value("mode", "analytic") == "simulated";
  const auto [text, code] = simulated
                                ? tune_simulated_text(m.parameters, m.seeds, thread_count(a.parallel))
                                : tune_analytic_text(m.parameters);
  emit_text(text, a.out, m, out);
  if (code != ok) {
    err << "tune: no candidate reaches the target fidelity\n";
  }
  return code;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  ConfigFlags config;
  std::string seeds;
  int repeat = 1;
  int parallel = 1;
  std::string trace;
  std::string out;
  std::string from_manifest;
};

std::string trace_path(const std::string& base, std::uint64_t seed, std::size_t n) {
  if (n == 1) {
    return base;
  }
  const auto dot = base.rfind('.');
  const auto slash = base.rfind('/');
  const std::string tag = ".seed" + std::to_string(seed);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return base + tag;
  }
  return base.substr(0, dot) + tag + base.substr(dot);
}

struct SimulateOutput {
  std::string json_text;
  std::vector<SimReport> reports;
  AggregateRate aggregate;
};

SimulateOutput simulate_once(const RunManifest& m, unsigned threads) {
  const RepeaterConfig cfg = config_from_json(m.parameters);
  SimulateOutput o;
  o.reports = run_seeds(cfg, m.seeds, threads);
  o.aggregate = aggregate_rates(o.reports);
  json reports = json::array();
  for (const auto& r : o.reports) {
    reports.push_back(report_to_json(r));
  }
  const json doc{{"manifest", manifest_to_json(m)},
                 {"reports", reports},
                 {"aggregate", aggregate_to_json(o.aggregate)}};
  o.json_text = dump(doc);
  return o;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.repeat < 1) {
    throw UsageError("--repeat must be >= 1");
  }
  RunManifest m;
  m.schema = kReportSchema;
  m.subcommand = "simulate";
  RepeaterConfig cfg;
  if (!a.from_manifest.empty()) {
    const RunManifest loaded = load_manifest(a.from_manifest, m.subcommand);
    cfg = config_from_json(loaded.parameters);
    m.seeds = loaded.seeds;
  } else {
    cfg = a.config.resolve();
    m.seeds = a.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : parse_seeds(a.seeds);
  }
  if (m.seeds.empty()) {
    throw UsageError("no seeds given");
  }
  // Validate up front so config problems exit 2 before any simulation.
  for (auto s : m.seeds) {
    RepeaterConfig c = cfg;
    c.seed = s;
    Simulator probe(c);
  }
  m.parameters = config_to_json(cfg);
  if (!a.out.empty()) {
    m.outputs.push_back(a.out);
  }
  if (!a.trace.empty()) {
    for (auto s : m.seeds) {
      m.outputs.push_back(trace_path(a.trace, s, m.seeds.size()));
    }
  }

  const unsigned threads = thread_count(a.parallel);
  SimulateOutput first = simulate_once(m, threads);
  for (int k = 1; k < a.repeat; ++k) {
    if (simulate_once(m, threads).json_text != first.json_text) {
      err << "simulate: repeat " << (k + 1) << " produced a different report\n";
      return runtime_failure;
    }
  }

  if (!a.trace.empty()) {
    for (auto s : m.seeds) {
      RepeaterConfig c = cfg;
      c.seed = s;
      Simulator sim(c, true);
      sim.run();
      std::ostringstream os;
      write_trace_csv(os, sim.trace());
      write_file(trace_path(a.trace, s, m.seeds.size()), os.str());
    }
  }

  if (a.out.empty()) {
    out << first.json_text;
    return ok;
  }
  write_file(a.out, first.json_text);
  for (const auto& r : first.reports) {
    out << "seed " << r.seed << "  rate " << fmt("%.3g", r.rate_pairs_per_s) << " pairs/s  delivered "
        << r.pairs_delivered << "  F_min " << fmt("%.5f", r.fidelity_min) << "  stop "
        << r.stop_reason << "\n";
  }
  out << "mean rate " << fmt("%.3g", first.aggregate.mean) << " +/- "
      << fmt("%.2g", first.aggregate.stderr_of_mean) << " pairs/s over "
      << first.aggregate.trials << " seed(s)\n";
  return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qubus repeater link model and nested-protocol simulator", "qubus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  LinkCurveArgs lc;
  auto* link = app.add_subcommand("link-curve", "heralding probability vs fidelity as CSV");
  link->add_option("--ratio", lc.ratio, "segment length l/l0")->capture_default_str();
  link->add_option("--eta2", lc.eta2, "detector efficiency eta^2")->capture_default_str();
  link->add_option("--grid", lc.grid, "comma-separated fidelities (default: 101 points on [0.5, 1])");
  link->add_option("--out", lc.out, "output CSV (a .manifest.json sidecar is written next to it)");
  link->add_option("--from-manifest", lc.from_manifest, "re-run from a manifest");

  Table1Args t1;
  auto* table = app.add_subcommand("table1", "photon-detection success probabilities, 3x3 grid");
  table->add_option("--eta2", t1.eta2, "detector efficiency eta^2")->capture_default_str();
  table->add_option("--out", t1.out, "output file");
  table->add_option("--from-manifest", t1.from_manifest, "re-run from a manifest");

  TuneArgs tu;
  auto* tune = app.add_subcommand("tune", "compare base fidelity / purification candidates");
  tune->add_option("--ratio", tu.ratio, "segment length l/l0")->capture_default_str();
  tune->add_option("--eta2", tu.eta2, "detector efficiency eta^2")->capture_default_str();
  tune->add_option("--target", tu.target, "target fidelity")->capture_default_str();
  tune->add_option("--epsilon", tu.epsilon, "gate error per C-Z")->capture_default_str();
  auto* strategy_opt =
      tune->add_option("--strategy", tu.strategy, "spd or csp")->capture_default_str();
  tune->add_option("--candidate", tu.candidates, "label:F:kind[:rounds], repeatable");
  tune->add_flag("--simulate", tu.simulate, "sweep F_base by Monte Carlo instead");
  tune->add_option("--grid", tu.grid, "F_base values for --simulate");
  tune->add_option("--seeds", tu.seeds, "seeds for --simulate, a,b,c");
  tune->add_option("--parallel", tu.parallel, "worker threads (0: all cores)")->capture_default_str();
  tu.config.attach(tune, "strategy");
  tune->add_option("--out", tu.out, "output file");
  tune->add_option("--from-manifest", tu.from_manifest, "re-run from a manifest");

  SimulateArgs si;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo of the nested protocol, JSON report");
  si.config.attach(sim);
  sim->add_option("--seeds", si.seeds, "trial seeds, a,b,c (default: config seed)");
  sim->add_option("--repeat", si.repeat, "run N times and require identical output")
      ->capture_default_str();
  sim->add_option("--parallel", si.parallel, "worker threads (0: all cores)")->capture_default_str();
  sim->add_option("--trace", si.trace, "event trace CSV (per seed when several)");
  sim->add_option("--out", si.out, "report JSON (default: stdout)");
  sim->add_option("--from-manifest", si.from_manifest, "re-run from a report or manifest");

  std::vector<std::string> argv_store{"qubus"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) {
    argv.push_back(s.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n" << "run 'qubus --help' for usage\n";
    return usage_error;
  }

  tu.strategy_given = strategy_opt->count() > 0;

  try {
    if (*link) return cmd_link_curve(lc, out);
    if (*table) return cmd_table1(t1, out);
    if (*tune) return cmd_tune(tu, out, err);
    if (*sim) return cmd_simulate(si, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return usage_error;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return usage_error;
  } catch (const DomainError& e) {
    err << "usage: " << e.what() << "\n";
    return usage_error;
  } catch (const std::invalid_argument& e) {
    err << "usage: " << e.what() << "\n";
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return runtime_failure;
  }
  return usage_error;
}

}  // namespace qubus::cli
