// Copyright 2026 The shadowtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "acceptance.hpp"
#include "shadowtomo/compression.hpp"
#include "shadowtomo/graph.hpp"
#include "shadowtomo/greens.hpp"
#include "shadowtomo/io.hpp"
#include "shadowtomo/mmw.hpp"
#include "shadowtomo/protocols.hpp"

namespace {

using json = nlohmann::json;
using namespace shadowtomo;

constexpr int kExitAudit = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& field, const std::string& what) : std::runtime_error(field + ": " + what) {}
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

json stamp(const json& config) {
  json out;
  out["version"] = version_string();
  out["config"] = config;
  out["config_hash"] = fnv1a_hex(config.dump());
  return out;
}

// Expands "--config file.json" into flags placed right after the subcommand, so flags
// given on the command line (parsed later, last one wins) override file values.
std::vector<std::string> expand_config(const CLI::App& app, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  json cfg;
  try {
    cfg = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw UsageError("config", e.what());
  }
  if (!cfg.is_object()) throw UsageError("config", "top level must be an object");
  auto sub_pos = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.empty() && a[0] != '-'; });
  if (sub_pos == args.end() || !app.get_subcommand_no_throw(*sub_pos)) {
    if (!cfg.contains("command") || !cfg["command"].is_string()) throw UsageError("config.command", "missing subcommand");
    args.insert(args.begin(), cfg["command"].get<std::string>());
    sub_pos = args.begin();
  }
  const CLI::App* sub = app.get_subcommand(*sub_pos);
  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") {
      if (value != *sub_pos) throw UsageError("config.command", "does not match subcommand " + *sub_pos);
      continue;
    }
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (!sub->get_option_no_throw(flag)) throw UsageError("config." + key, "unknown field for " + *sub_pos);
    const auto emit = [&](const json& v) {
      if (v.is_string()) injected.push_back(flag + "=" + v.get<std::string>());
      else if (v.is_boolean()) injected.push_back(flag + "=" + (v.get<bool>() ? "true" : "false"));
      else if (v.is_number()) injected.push_back(flag + "=" + v.dump());
      else throw UsageError("config." + key, "expected a string, number or boolean");
    };
    if (value.is_array())
      for (const auto& v : value) emit(v);
    else
      emit(value);
  }
  args.insert(sub_pos + 1, injected.begin(), injected.end());
  return args;
}

// "-XIZ" would otherwise parse as a short flag.
bool is_signed_pauli(const std::string& s) {
  static const std::regex pattern("-i?[IXYZ]+");
  return std::regex_match(s, pattern);
}

// "4..8" or "5".
std::vector<int> parse_range(const std::string& field, const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoi(text)};
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw UsageError(field, "empty range " + text);
    std::vector<int> out;
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  } catch (const std::logic_error&) {
    throw UsageError(field, "expected N or A..B, got \"" + text + "\"");
  }
}

// Options shared by learn, compress and bench.
struct TaskOptions {
  std::string task = "all-pauli";
  int n = 3;
  int k = 2;
  double epsilon = 0.4;
  std::uint64_t seed = 1;
  std::string state;
  std::string mapping = "ternary";
  std::string engine = "gyarfas";
  bool exact_probes = false;

  void add_to(CLI::App* sub, bool with_n) {
    sub->add_option("--task", task, "local-pauli, fermionic or all-pauli")
        ->check(CLI::IsMember({"local-pauli", "fermionic", "all-pauli"}))
        ->capture_default_str();
    if (with_n) sub->add_option("--n,--n-modes", n, "qubits, or modes for fermionic")->capture_default_str();
    sub->add_option("--k", k, "locality, or body order for fermionic")->capture_default_str();
    sub->add_option("--epsilon", epsilon, "target precision")->capture_default_str();
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--state", state, "state generator or ket file");
    sub->add_option("--mapping", mapping, "ternary or jw")->check(CLI::IsMember({"ternary", "jw"}))->capture_default_str();
    sub->add_option("--engine", engine, "local-pauli coloring: gyarfas or greedy")
        ->check(CLI::IsMember({"gyarfas", "greedy"}))
        ->capture_default_str();
    sub->add_flag("--exact-probes", exact_probes, "all-pauli: exact MMW sign probes");
  }

  void validate(const std::string& cmd) const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError(cmd + ".epsilon", "must lie in (0, 1)");
    if (n < 1) throw UsageError(cmd + ".n", "must be positive");
    if (task == "all-pauli" && n > 6) throw UsageError(cmd + ".n", "all-pauli supports n <= 6");
    if (task == "local-pauli" && (k < 1 || k > n)) throw UsageError(cmd + ".k", "must lie in [1, n]");
    if (task == "fermionic" && k != 1 && k != 2) throw UsageError(cmd + ".k", "fermionic supports k in {1, 2}");
    if (task == "local-pauli" && n > kDenseStateCap) throw UsageError(cmd + ".n", "exceeds the dense state cap");
  }

  json to_json() const {
    return json{{"task", task},   {"n", n},         {"k", k},           {"epsilon", epsilon},
                {"seed", seed},   {"state", state}, {"mapping", mapping}, {"engine", engine},
                {"exact_probes", exact_probes}};
  }

  MappingKind mapping_kind() const { return parse_mapping_kind(mapping); }
};

QuantumState make_state(const TaskOptions& o, int n, std::uint64_t seed) {
  if (!o.state.empty()) return parse_state_spec(o.state);
  if (o.task == "fermionic")
    return parse_state_spec("gaussian n_modes=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                            " mapping=" + o.mapping);
  return parse_state_spec("haar_random n=" + std::to_string(n) + " seed=" + std::to_string(seed));
}

struct Audit {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double bound = 0.0;
  std::string note;
};

json audit_json(const std::vector<Audit>& audits) {
  json out = json::array();
  for (const auto& a : audits) {
    json j{{"name", a.name}, {"passed", a.passed}, {"value", a.value}, {"bound", a.bound}};
    if (!a.note.empty()) j["note"] = a.note;
    out.push_back(j);
  }
  return out;
}

bool all_passed(const std::vector<Audit>& audits) {
  return std::all_of(audits.begin(), audits.end(), [](const Audit& a) { return a.passed; });
}

struct TaskRun {
  EstimationReport report;
  TwoCopyRecord record;
  bool has_record = false;
  MmwResult mmw;
  std::vector<Audit> audits;
};

double diag(const EstimationReport& r, const std::string& key, double fallback = 0.0) {
  const auto it = r.diagnostics.find(key);
  return it == r.diagnostics.end() ? fallback : it->second;
}

std::vector<Audit> run_audits(const TaskOptions& o, const TaskRun& run) {
  std::vector<Audit> audits;
  const EstimationReport& r = run.report;
  std::vector<PauliOp> s_eps;
  for (std::size_t i = 0; i < r.operators.size(); ++i)
    if (r.in_s_eps[i] && !r.operators[i].is_identity()) s_eps.push_back(r.operators[i]);
  Audit clique{"clique_bound"};
  clique.bound = 4.0 / (o.epsilon * o.epsilon);
  if (!s_eps.empty()) {
    const CliqueResult c = max_clique(build_graph(s_eps).graph);
    clique.value = c.upper;
    clique.passed = c.upper <= clique.bound;
    if (!c.exact) {
      clique.note = "clique number bracketed in [" + std::to_string(c.lower) + ", " + std::to_string(c.upper) + "]";
      clique.passed = c.lower <= clique.bound;
    }
  }
  audits.push_back(clique);
  if (r.diagnostics.contains("size_chi")) {
    Audit col{"coloring_bound", true, diag(r, "size_chi"), diag(r, "size_bound")};
    col.passed = col.value <= col.bound + 1e-9;
    audits.push_back(col);
  }
  if (o.task == "all-pauli") {
    const MmwConfig cfg = MmwConfig::make(o.n, o.epsilon);
    Audit regret{"regret_bound", true, diag(r, "mmw_regret"), 2.0 * std::sqrt(o.n * static_cast<double>(cfg.T))};
    regret.passed = regret.value <= regret.bound + 1e-9;
    audits.push_back(regret);
    const bool violated = std::find(r.flags.begin(), r.flags.end(), "mimicking_condition_violated") != r.flags.end();
    audits.push_back({"mimicking_condition", !violated, violated ? 1.0 : 0.0, 0.0});
  }
  return audits;
}

std::vector<PauliOp> all_non_identity(int n) {
  std::vector<PauliOp> out;
  for (const auto& p : enumerate_all(n))
    if (!p.is_identity()) out.push_back(p);
  return out;
}

// Runs the task; `for_compression` turns all-pauli into the two-copy template over
// every non-identity Pauli so the raw data can be stored.
TaskRun run_task(const TaskOptions& o, const QuantumState& rho, int n, std::uint64_t seed, bool for_compression) {
  TaskRun run;
  if (o.task == "all-pauli" && !for_compression) {
    AllPauliOptions opts;
    opts.exact_probes = o.exact_probes;
    run.report = learn_all_paulis(rho, o.epsilon, seed, opts, &run.mmw);
  } else if (o.task == "fermionic") {
    run.report = learn_fermionic(rho, n, o.k, o.mapping_kind(), o.epsilon, seed, {}, &run.record);
    run.has_record = true;
  } else {
    const std::vector<PauliOp> targets = o.task == "all-pauli" ? all_non_identity(n) : enumerate_local(n, o.k);
    const ColoringEngine engine =
        o.task == "local-pauli" && o.engine == "gyarfas" ? gyarfas_engine(longest_induced_path_bound(n)) : greedy_engine();
    run.report = learn_two_copy_template(rho, targets, engine, o.epsilon, seed, {}, &run.record);
    run.has_record = true;
  }
  TaskOptions sized = o;
  sized.n = n;
  run.audits = run_audits(sized, run);
  return run;
}

void check_state(const TaskOptions& o, const QuantumState& rho, int n, const std::string& cmd) {
  const int want = o.task == "fermionic" ? make_mapping(o.mapping_kind(), n).num_qubits() : n;
  if (rho.num_qubits() != want)
    throw UsageError(cmd + ".state", "state has " + std::to_string(rho.num_qubits()) + " qubits, task needs " +
                                         std::to_string(want));
}

json report_json(const TaskOptions& o, const TaskRun& run, const QuantumState* oracle_state) {
  const EstimationReport& r = run.report;
  json out;
  out["task"] = o.task;
  out["epsilon"] = r.epsilon;
  out["seed"] = r.seed;
  json ledger = json::array();
  for (const auto& s : r.ledger) ledger.push_back({{"stage", s.stage}, {"copies", s.copies}});
  out["ledger"] = ledger;
  out["total_copies"] = r.total_copies();
  out["diagnostics"] = r.diagnostics;
  out["flags"] = r.flags;
  out["audits"] = audit_json(run.audits);
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < r.operators.size(); ++i) {
    json row{{"operator", r.operators[i].to_string()},
             {"label", r.labels[i]},
             {"estimate", r.estimates[i]},
             {"count", r.counts[i]},
             {"in_s_eps", static_cast<bool>(r.in_s_eps[i])}};
    if (oracle_state) {
      const double exact = expectation(*oracle_state, r.operators[i]);
      row["exact"] = exact;
      row["error"] = std::abs(r.estimates[i] - exact);
      worst = std::max(worst, std::abs(r.estimates[i] - exact));
    }
    rows.push_back(row);
  }
  out["num_rows"] = rows.size();
  if (oracle_state) {
    out["max_error"] = worst;
    out["within_epsilon"] = worst <= r.epsilon;
  }
  out["rows"] = rows;
  return out;
}

std::string report_csv(const EstimationReport& r, const QuantumState* oracle_state) {
  std::ostringstream s;
  s << "operator,estimate" << (oracle_state ? ",exact_value,error" : "") << "\n";
  for (std::size_t i = 0; i < r.operators.size(); ++i) {
    s << r.labels[i] << "," << fmt(r.estimates[i]);
    if (oracle_state) {
      const double exact = expectation(*oracle_state, r.operators[i]);
      s << "," << fmt(exact) << "," << fmt(std::abs(r.estimates[i] - exact));
    }
    s << "\n";
  }
  return s.str();
}

struct LearnCmd {
  TaskOptions task;
  std::string json_path = "-";
  std::string csv_path;
  std::string compress_path;
  std::string trace_path;
  bool no_oracle = false;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("learn", "Run a shadow tomography pipeline");
    task.add_to(sub, true);
    sub->add_option("--json", json_path, "report path, - for stdout")->capture_default_str();
    sub->add_option("--csv", csv_path, "table of operator, estimate, exact value, error");
    sub->add_option("--compress", compress_path, "also write the raw record (two-copy tasks)");
    sub->add_option("--trace", trace_path, "all-pauli: MMW trace as JSON lines");
    sub->add_flag("--no-oracle", no_oracle, "skip dense exact values");
    sub->callback([this] { code = run(); });
  }

  int code = 0;

  int run() const {
    task.validate("learn");
    if (!compress_path.empty() && task.task == "all-pauli")
      throw UsageError("learn.compress", "all-pauli learning has no two-copy record; use the compress subcommand");
    const QuantumState rho = make_state(task, task.n, task.seed);
    check_state(task, rho, task.n, "learn");
    const TaskRun run = run_task(task, rho, task.n, task.seed, false);
    json cfg = task.to_json();
    cfg["oracle"] = !no_oracle;
    json out = stamp(cfg);
    out.update(report_json(task, run, no_oracle ? nullptr : &rho));
    write_text(json_path, out.dump(2) + "\n");
    if (!csv_path.empty()) write_text(csv_path, report_csv(run.report, no_oracle ? nullptr : &rho));
    if (!compress_path.empty()) write_compressed(compress_path, run.record);
    if (!trace_path.empty()) write_text(trace_path, trace_json_lines(run.mmw));
    return all_passed(run.audits) ? 0 : kExitAudit;
  }
};

struct ColorCmd {
  std::string input;
  std::string engine = "greedy";
  std::uint64_t seed = 1;
  int samples = 10000;
  int path_bound = 0;
  std::string json_path = "-";
  int code = 0;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("color", "Color the commutation graph of an operator list");
    sub->add_option("input,--input", input, "one Pauli or G[...] monomial per line")->required();
    sub->add_option("--engine", engine, "greedy, gyarfas, misra-gries or kbody")
        ->check(CLI::IsMember({"greedy", "gyarfas", "misra-gries", "kbody"}))
        ->capture_default_str();
    sub->add_option("--seed", seed, "kbody sampling seed")->capture_default_str();
    sub->add_option("--samples", samples, "kbody samples for coverage statistics")->capture_default_str();
    sub->add_option("--path-bound", path_bound, "gyarfas induced path bound (default 2n+1)");
    sub->add_option("--json", json_path, "output path, - for stdout")->capture_default_str();
    sub->callback([this] { code = run(); });
  }

  int run() const {
    const auto lines = read_lines(input);
    if (lines.empty()) throw UsageError("color.input", "no operators in " + input);
    const bool fermionic = lines.front().rfind("G[", 0) == 0;
    json cfg{{"input", input}, {"engine", engine}, {"seed", seed}, {"samples", samples}, {"path_bound", path_bound}};
    json out = stamp(cfg);
    out["engine"] = engine;
    out["num_vertices"] = lines.size();
    out["properness_checked"] = true;
    if (samples < 1) throw UsageError("color.samples", "must be positive");
    std::vector<MajoranaSupport> supports;
    Graph graph(0);
    int ell = path_bound;
    if (fermionic) {
      for (const auto& m : parse_monomial_list(lines)) supports.push_back(m.support);
      graph = majorana_graph(supports);
      if (ell == 0) ell = longest_induced_path_bound(parse_monomial_list(lines).front().n_modes);
    } else {
      if (engine == "misra-gries" || engine == "kbody")
        throw UsageError("color.engine", engine + " needs G[...] monomials");
      const auto ops = parse_pauli_list(lines);
      graph = build_graph(ops).graph;
      if (ell == 0) ell = longest_induced_path_bound(ops.front().num_qubits());
    }
    const CliqueResult omega = max_clique(graph);
    out["omega"] = omega.upper;
    out["omega_exact"] = omega.exact;
    bool ok = true;
    if (engine == "kbody") {
      const FractionalColoring fc = kbody_fractional_coloring(supports);
      CounterRng rng(seed);
      std::vector<std::uint64_t> hits(supports.size(), 0);
      bool independent = true;
      std::size_t max_set = 0, total = 0;
      for (int i = 0; i < samples; ++i) {
        const VertexSet set = fc.sample(rng);
        max_set = std::max(max_set, set.size());
        total += set.size();
        for (std::size_t a = 0; a < set.size(); ++a) {
          ++hits[set[a]];
          for (std::size_t b = a + 1; b < set.size(); ++b)
            independent = independent && !graph.has_edge(set[a], set[b]);
        }
      }
      const double min_cov =
          static_cast<double>(*std::min_element(hits.begin(), hits.end())) / static_cast<double>(samples);
      out["size_chi"] = fc.size_chi;
      out["size_bound"] = fc.size_bound;
      out["omega_used"] = fc.omega_used;
      out["sample_stats"] = {{"samples", samples},
                             {"all_independent", independent},
                             {"min_empirical_coverage", min_cov},
                             {"min_exact_coverage", *std::min_element(fc.coverage.begin(), fc.coverage.end())},
                             {"mean_set_size", static_cast<double>(total) / samples},
                             {"max_set_size", max_set}};
      ok = independent && fc.size_chi <= fc.size_bound + 1e-9;
    } else {
      Coloring col;
      double bound = 0.0;
      if (engine == "greedy") {
        col = greedy_color(graph);
        bound = omega.upper > 0 ? graph.size() : 0;
      } else if (engine == "gyarfas") {
        col = gyarfas_color(graph, ell);
        bound = std::pow(ell, std::max(omega.upper - 1, 0));
        out["path_bound"] = ell;
      } else {
        col = misra_gries_1body(supports);
        bound = omega.upper + 1;
      }
      check_proper(graph, col);
      out["num_colors"] = col.num_colors;
      out["colors"] = col.color_of;
      out["color_bound"] = bound;
      ok = col.num_colors <= bound;
    }
    out["within_bound"] = ok;
    write_text(json_path, out.dump(2) + "\n");
    return ok ? 0 : kExitAudit;
  }
};

struct CompressCmd {
  TaskOptions task;
  std::string output;
  std::string json_path = "-";
  int code = 0;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("compress", "Run a two-copy pipeline and store its raw record");
    task.add_to(sub, true);
    sub->add_option("--output,-o", output, "STDR1 file to write")->required();
    sub->add_option("--json", json_path, "summary path, - for stdout")->capture_default_str();
    sub->callback([this] { code = run(); });
  }

  int run() const {
    task.validate("compress");
    const QuantumState rho = make_state(task, task.n, task.seed);
    check_state(task, rho, task.n, "compress");
    const TaskRun run = run_task(task, rho, task.n, task.seed, true);
    write_compressed(output, run.record);
    const auto bytes = serialize(run.record);
    const bool round_trip = deserialize(bytes) == run.record;
    json cfg = task.to_json();
    cfg["output"] = output;
    json out = stamp(cfg);
    out["file"] = output;
    out["bytes"] = bytes.size();
    out["bits"] = 8 * bytes.size();
    out["reference_bits"] = reference_bits(run.record);
    out["size_ratio"] = 8.0 * static_cast<double>(bytes.size()) / reference_bits(run.record);
    out["bell_shots"] = run.record.bell.shots;
    out["basis_shots"] = run.record.single.total_shots();
    out["distinct_bases"] = run.record.single.bases.size();
    out["targets"] = run.record.targets.size();
    out["round_trip"] = round_trip;
    out["audits"] = audit_json(run.audits);
    write_text(json_path, out.dump(2) + "\n");
    return round_trip && all_passed(run.audits) ? 0 : kExitAudit;
  }
};

struct QueryCmd {
  std::string input;
  std::vector<std::string> paulis;
  int code = 0;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("query", "Estimate Tr(P rho) from a stored record");
    sub->add_option("input,--input", input, "STDR1 file")->required();
    sub->add_option("pauli,--pauli", paulis, "Pauli strings such as -XIZ")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->callback([this] { code = run(); });
  }

  int run() const {
    const CompressedRep rep = read_compressed(input);
    for (const auto& text : paulis) {
      PauliOp p;
      try {
        p = PauliOp::parse(text);
      } catch (const Error& e) {
        throw UsageError("query.pauli", e.what());
      }
      if (p.num_qubits() != rep.num_qubits)
        throw UsageError("query.pauli", text + " acts on " + std::to_string(p.num_qubits()) + " qubits, record has " +
                                            std::to_string(rep.num_qubits));
      const QueryAnswer a = query(rep, p);
      json out{{"pauli", p.to_string()}, {"estimate", a.estimate}, {"in_s_eps", a.in_s_eps}, {"extrapolated", a.extrapolated}};
      std::cout << out.dump() << "\n";
    }
    return 0;
  }
};

struct GreensCmd {
  std::string input;
  int q = 1;
  double epsilon = 0.3;
  bool exact_only = false;
  std::uint64_t seed = 1;
  std::string state;
  std::string mapping = "jw";
  int n_modes = 0;
  std::string json_path = "-";
  std::string csv_path;
  int code = 0;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("greens", "Green's function derivatives at t = 0");
    sub->add_option("input,--input", input, "Hamiltonian file, one G[a,b,...]*coeff per line")->required();
    sub->add_option("--q", q, "derivative order")->capture_default_str();
    sub->add_option("--epsilon", epsilon, "target precision")->capture_default_str();
    sub->add_flag("--exact-only", exact_only, "skip learning, report the exact matrix");
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--state", state, "state generator or ket file (default gaussian)");
    sub->add_option("--mapping", mapping, "ternary or jw")->check(CLI::IsMember({"ternary", "jw"}))->capture_default_str();
    sub->add_option("--n-modes", n_modes, "mode count (default from the file)");
    sub->add_option("--json", json_path, "audit record path, - for stdout")->capture_default_str();
    sub->add_option("--csv", csv_path, "matrix as a,b,estimate_re,estimate_im,exact_re,exact_im");
    sub->callback([this] { code = run(); });
  }

  int run() const {
    if (q < 0) throw UsageError("greens.q", "must be nonnegative");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("greens.epsilon", "must lie in (0, 1)");
    const SparseHamiltonian h = SparseHamiltonian::parse(read_text_file(input), n_modes);
    const FermionMapping map = make_mapping(parse_mapping_kind(mapping), h.n_modes);
    const QuantumState rho =
        state.empty() ? parse_state_spec("gaussian n_modes=" + std::to_string(h.n_modes) + " seed=" +
                                         std::to_string(seed) + " mapping=" + mapping)
                      : parse_state_spec(state);
    if (rho.num_qubits() != map.num_qubits()) throw UsageError("greens.state", "qubit count does not match the mapping");
    json cfg{{"input", input},     {"q", q},       {"epsilon", epsilon}, {"exact_only", exact_only},
             {"seed", seed},       {"state", state}, {"mapping", mapping}, {"n_modes", h.n_modes}};
    json out = stamp(cfg);
    const CMatrix exact = greens_derivative_exact(rho, h, q, map);
    const int m = 2 * h.n_modes;
    std::vector<Audit> audits;
    std::size_t max_terms = 0;
    int max_degree = 0;
    for (int a = 0; a < m; ++a) {
      const GreensExpansion e = lie_expand(h, a, q);
      max_terms = std::max(max_terms, e.terms.size());
      for (const auto& [x, c] : e.terms) max_degree = std::max(max_degree, std::popcount(x));
    }
    const int k = std::max(h.body_order(), 1);
    const int s = std::max(h.sparsity(), 1);
    audits.push_back({"num_terms", static_cast<double>(max_terms) <= num_terms_bound(k, s, q) + 1e-9,
                      static_cast<double>(max_terms), num_terms_bound(k, s, q)});
    audits.push_back({"support_degree", max_degree <= (2 * k - 2) * q + 1, static_cast<double>(max_degree),
                      static_cast<double>((2 * k - 2) * q + 1)});
    out["n_modes"] = h.n_modes;
    out["body_order"] = h.body_order();
    out["sparsity"] = h.sparsity();
    out["diagonal"] = "entries a = b follow the definition: i Tr(c_a c_a rho) = i at q = 0";
    CMatrix estimate = exact;
    if (!exact_only) {
      const GreensLearning gl = learn_greens_derivative(rho, h, q, epsilon, seed, map);
      estimate = gl.estimate;
      const double err = (gl.estimate - exact).cwiseAbs().maxCoeff();
      out["learning"] = {{"targets", gl.targets.size()},
                         {"term_precision", gl.term_precision},
                         {"max_weight", gl.max_weight},
                         {"copies", gl.copies},
                         {"colors", gl.colors},
                         {"omega", gl.omega},
                         {"max_error", err},
                         {"within_epsilon", err <= epsilon}};
      json ledger = json::array();
      for (const auto& st : gl.report.ledger) ledger.push_back({{"stage", st.stage}, {"copies", st.copies}});
      out["ledger"] = ledger;
      const double scale = std::pow(2.0 * s * k * q, 5.0 * q) / std::pow(epsilon, 4);
      out["budget_interpretations"] = {
          {"log_m", {{"m", gl.targets.size()}, {"copies", scale * std::log(std::max<double>(2, gl.targets.size()))}}},
          {"log_n", {{"n", h.n_modes}, {"copies", scale * std::log(std::max(2, h.n_modes))}}}};
      if (gl.colors > 0)
        audits.push_back({"coloring_bound", gl.colors <= gl.coloring_bound, static_cast<double>(gl.colors),
                          gl.coloring_bound});
    }
    out["audits"] = audit_json(audits);
    json matrix = json::array();
    std::ostringstream csv;
    csv << "a,b,estimate_re,estimate_im,exact_re,exact_im\n";
    for (int a = 0; a < m; ++a) {
      json row = json::array();
      for (int b = 0; b < m; ++b) {
        row.push_back({estimate(a, b).real(), estimate(a, b).imag()});
        csv << a + 1 << "," << b + 1 << "," << fmt(estimate(a, b).real()) << "," << fmt(estimate(a, b).imag()) << ","
            << fmt(exact(a, b).real()) << "," << fmt(exact(a, b).imag()) << "\n";
      }
      matrix.push_back(row);
    }
    out["matrix"] = matrix;
    write_text(json_path, out.dump(2) + "\n");
    if (!csv_path.empty()) write_text(csv_path, csv.str());
    return all_passed(audits) ? 0 : kExitAudit;
  }
};

struct BenchCmd {
  TaskOptions task;
  std::string sizes = "2..4";
  int trials = 5;
  int threads = 1;
  std::string csv_path = "-";
  std::string json_path;
  int code = 0;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("bench", "Sample-ledger sweep across sizes");
    task.add_to(sub, false);
    sub->add_option("--n,--n-modes", sizes, "size or range A..B")->capture_default_str();
    sub->add_option("--trials", trials, "trials per size")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads")->capture_default_str();
    sub->add_option("--csv", csv_path, "table path, - for stdout")->capture_default_str();
    sub->add_option("--json", json_path, "per-size summary");
    sub->callback([this] { code = run(); });
  }

  struct Row {
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    EstimationReport report;
    double max_error = 0.0;
    bool audits_ok = true;
    std::string error;
  };

  int run() const {
    const std::vector<int> ns = parse_range("bench.n", sizes);
    if (trials < 1) throw UsageError("bench.trials", "must be positive");
    if (threads < 1) throw UsageError("bench.threads", "must be positive");
    for (int n : ns) {
      TaskOptions t = task;
      t.n = n;
      t.validate("bench");
    }
    if (!task.state.empty()) throw UsageError("bench.state", "bench draws a fresh state per trial");
    std::vector<Row> rows;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        Row r;
        r.n = n;
        r.trial = t;
        r.seed = CounterRng(task.seed).stream(static_cast<std::uint64_t>(n)).stream(static_cast<std::uint64_t>(t))();
        rows.push_back(std::move(r));
      }
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) {
        Row& r = rows[i];
        try {
          const QuantumState rho = make_state(task, r.n, r.seed);
          const TaskRun run = run_task(task, rho, r.n, r.seed, false);
          r.report = run.report;
          r.audits_ok = all_passed(run.audits);
          for (std::size_t j = 0; j < r.report.operators.size(); ++j)
            r.max_error = std::max(r.max_error, std::abs(r.report.estimates[j] - expectation(rho, r.report.operators[j])));
        } catch (const std::exception& e) {
          r.error = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<std::string> stages;
    for (const Row& r : rows)
      for (const auto& s : r.report.ledger)
        if (std::find(stages.begin(), stages.end(), s.stage) == stages.end()) stages.push_back(s.stage);
    std::ostringstream csv;
    csv << "task,n,trial,seed,total_copies";
    for (const auto& s : stages) csv << "," << s;
    csv << ",max_error,within_epsilon,audits_passed\n";
    json summary = json::array();
    bool ok = true;
    for (int n : ns) {
      double copies = 0.0;
      int good = 0;
      for (const Row& r : rows) {
        if (r.n != n) continue;
        if (!r.error.empty()) throw Error("bench n=" + std::to_string(n) + " trial " + std::to_string(r.trial) + ": " + r.error);
        csv << task.task << "," << r.n << "," << r.trial << "," << r.seed << "," << r.report.total_copies();
        for (const auto& s : stages) csv << "," << r.report.stage_copies(s);
        csv << "," << fmt(r.max_error) << "," << (r.max_error <= task.epsilon) << "," << r.audits_ok << "\n";
        copies += static_cast<double>(r.report.total_copies());
        good += r.max_error <= task.epsilon;
        ok = ok && r.audits_ok;
      }
      summary.push_back({{"n", n}, {"trials", trials}, {"mean_copies", copies / trials}, {"within_epsilon", good}});
    }
    write_text(csv_path, csv.str());
    if (!json_path.empty()) {
      json cfg = task.to_json();
      cfg.erase("n");
      cfg.erase("state");
      cfg["sizes"] = sizes;
      cfg["trials"] = trials;
      json out = stamp(cfg);
      out["sizes"] = summary;
      write_text(json_path, out.dump(2) + "\n");
    }
    return ok ? 0 : kExitAudit;
  }
};

struct SelftestCmd {
  std::vector<int> only;
  int code = 0;

  void add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("selftest", "Run the acceptance suite");
    sub->add_option("--only", only, "criterion ids")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->callback([this] { code = run(); });
  }

  int run() const {
    for (int id : only)
      if (id < 1 || id > acceptance::kNumCriteria) throw UsageError("selftest.only", "no criterion " + std::to_string(id));
    int failed = 0;
    acceptance::run_acceptance(only, [&](const acceptance::CriterionResult& r) {
      std::cout << acceptance::format_result(r) << std::endl;
      failed += !r.passed;
    });
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : "all criteria passed") << std::endl;
    return failed ? kExitAudit : 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadow tomography of Pauli and fermionic observables"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  LearnCmd learn;
  ColorCmd color;
  CompressCmd compress;
  QueryCmd query_cmd;
  GreensCmd greens;
  BenchCmd bench;
  SelftestCmd selftest;
  learn.add(app);
  color.add(app);
  compress.add(app);
  query_cmd.add(app);
  greens.add(app);
  bench.add(app);
  selftest.add(app);
  for (CLI::App* sub : app.get_subcommands({})) sub->add_option("--config", "JSON file of option values; flags override");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(app, std::move(args));
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.empty() && a[0] != '-'; });
    if (sub != args.end() && *sub == "query")
      for (auto it = sub + 1; it != args.end(); ++it)
        if (is_signed_pauli(*it)) *it = "--pauli=" + *it;
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAudit;
  }
  for (int code : {learn.code, color.code, compress.code, query_cmd.code, greens.code, bench.code, selftest.code})
    if (code != 0) return code;
  return 0;
}
