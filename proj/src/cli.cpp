/*
 * Copyright 2026 The neurosim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "neurosim/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "neurosim/errors.hpp"

namespace neurosim::cli {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    config_error(fmt::format("{}: expected an integer, got '{}'", what, text));
  }
  return value;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used == t.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  config_error(fmt::format("{}: expected a number, got '{}'", what, text));
}

/// One config section; tracks which keys were read so leftovers can be
/// reported as unknown.
class Section {
 public:
  Section(const pt::ptree* node, std::string name) : node_(node), name_(std::move(name)) {}

  std::optional<std::string> text(const std::string& key) {
    known_.insert(key);
    if (!node_) return std::nullopt;
    auto child = node_->get_child_optional(key);
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t min) {
    auto t = text(key);
    if (!t) return fallback;
    const auto v = parse_int(*t, qualified(key));
    if (v < min) config_error(fmt::format("{} must be >= {}, got {}", qualified(key), min, v));
    return v;
  }

  std::optional<std::int64_t> optional_integer(const std::string& key, std::int64_t min) {
    if (!text(key)) return std::nullopt;
    return integer(key, 0, min);
  }

  double number(const std::string& key, double fallback) {
    auto t = text(key);
    return t ? parse_double(*t, qualified(key)) : fallback;
  }

  bool flag(const std::string& key, bool fallback) {
    auto t = text(key);
    if (!t) return fallback;
    if (*t == "true" || *t == "yes" || *t == "1") return true;
    if (*t == "false" || *t == "no" || *t == "0") return false;
    config_error(fmt::format("{}: expected true or false, got '{}'", qualified(key), *t));
  }

  std::string qualified(const std::string& key) const { return name_ + "." + key; }

  void reject_unknown() const {
    if (!node_) return;
    for (const auto& [key, child] : *node_) {
      if (!known_.contains(key)) config_error(fmt::format("unknown key '{}'", qualified(key)));
    }
  }

 private:
  const pt::ptree* node_;
  std::string name_;
  std::set<std::string> known_;
};

std::vector<int> parse_layers(std::string_view text) {
  std::vector<int> sizes;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_int(item, "workload.layers");
    if (v < 1 || v > 1'000'000) config_error(fmt::format("workload.layers: bad layer size {}", v));
    sizes.push_back(static_cast<int>(v));
  }
  if (sizes.size() < 2) config_error("workload.layers needs at least two layers");
  return sizes;
}

DatasetFormat parse_format(std::string_view name) {
  if (name == "tabular") return DatasetFormat::kTabular;
  if (name == "structured-records" || name == "records") return DatasetFormat::kRecords;
  config_error(fmt::format("unknown format '{}' (tabular | structured-records)", name));
}

void parse_topology(Section& sec, TopologyConfig& topo) {
  const auto kind = sec.text("kind");
  if (!kind) config_error("topology.kind is required");
  if (*kind == "direct") topo.kind = TopologyKind::kDirect;
  else if (*kind == "shared_bus") topo.kind = TopologyKind::kSharedBus;
  else if (*kind == "empa") topo.kind = TopologyKind::kEmpa;
  else config_error(fmt::format("topology.kind: unknown kind '{}' (direct | shared_bus | empa)", *kind));

  topo.nodes = static_cast<int>(sec.integer("nodes", 0, 0));
  topo.t_link = sec.integer("t_link", 1, 1);
  topo.t_bus = sec.integer("t_bus", 1, 1);
  topo.broadcast = sec.flag("broadcast", true);
  auto& g = topo.geometry;
  g.clusters = static_cast<int>(sec.integer("clusters", 1, 1));
  g.rows = static_cast<int>(sec.integer("rows", 2, 1));
  g.cols = static_cast<int>(sec.integer("cols", 2, 1));
  g.clusters_per_row = static_cast<int>(sec.integer("clusters_per_row", 0, 0));
  g.clusters_per_chip = static_cast<int>(sec.integer("clusters_per_chip", 0, 0));
  if (topo.kind == TopologyKind::kEmpa && g.rows * g.cols < 2) {
    config_error("topology: a cluster needs room for a head plus one member");
  }
  auto& l = topo.latencies;
  l.hop = sec.integer("t_hop", 1, 1);
  l.head = sec.integer("t_head", 1, 0);
  l.bus_l1 = topo.t_bus;
  l.bus_l2 = sec.integer("t_bus_l2", topo.t_bus, 1);
  l.memory = sec.integer("t_mem", 1, 0);
  topo.virtual_cores = static_cast<int>(sec.integer("virtual_cores", 0, 0));
  if (auto remap = sec.text("remap")) {
    std::stringstream ss{*remap};
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) config_error(fmt::format("topology.remap: expected virtual:physical, got '{}'", item));
      const auto v = parse_int(item.substr(0, colon), "topology.remap");
      const auto p = parse_int(item.substr(colon + 1), "topology.remap");
      topo.remaps.push_back({NodeId{static_cast<std::int32_t>(v)}, static_cast<int>(p)});
    }
  }
  sec.reject_unknown();
}

void parse_workload(Section& sec, LayeredSpec& w) {
  const auto layers = sec.text("layers");
  if (!layers) config_error("workload.layers is required");
  w.layer_sizes = parse_layers(*layers);
  w.compute = sec.integer("t_comp", 1, 0);
  w.input_compute = sec.integer("input_compute", 0, 0);
  w.hidden_work = sec.optional_integer("hidden_work", 0);
  if (auto stim = sec.text("stimuli")) {
    w.stimulus_times = parse_value_list(*stim);
    for (auto t : w.stimulus_times) {
      if (t < 0) config_error("workload.stimuli: times must be >= 0");
    }
  }
  const auto model = sec.text("time_model").value_or("event");
  const auto period = sec.integer("period", 1, 1);
  if (model == "event") w.time_model = EventDriven{};
  else if (model == "grid") w.time_model = TimeGrid{period};
  else config_error(fmt::format("workload.time_model: unknown model '{}' (event | grid)", model));
  const auto offload = sec.text("offload").value_or("none");
  const auto analog = sec.integer("t_analog", 0, 0);
  const auto ctx = sec.integer("t_ctx", kDefaultContextSwitch, 0);
  if (offload == "analog") w.offload = AnalogOffload{analog, ctx};
  else if (offload != "none") config_error(fmt::format("workload.offload: unknown mode '{}' (none | analog)", offload));
  sec.reject_unknown();
}

}  // namespace

std::vector<std::int64_t> parse_value_list(std::string_view text) {
  const std::string t = trim(text);
  std::vector<std::int64_t> values;
  if (t.empty()) return values;
  if (const auto dots = t.find(".."); dots != std::string::npos) {
    const auto colon = t.find(':', dots);
    const auto lo = parse_int(t.substr(0, dots), "range start");
    const auto hi = parse_int(t.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2), "range end");
    const auto step = colon == std::string::npos ? 1 : parse_int(t.substr(colon + 1), "range step");
    if (step < 1) config_error("range step must be >= 1");
    if (hi < lo) config_error(fmt::format("empty range {}", t));
    for (auto v = lo; v <= hi; v += step) values.push_back(v);
    return values;
  }
  std::stringstream ss{t};
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_int(item, "value list"));
  return values;
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(fmt::format("line {}: {}", e.line(), e.message()));
  }
  static const std::set<std::string> sections = {"topology", "workload", "sweep", "model", "output"};
  for (const auto& [name, child] : tree) {
    if (!sections.contains(name) || child.empty()) {
      config_error(fmt::format("unknown section or top-level key '{}'", name));
    }
  }
  auto section = [&](const std::string& name) {
    return Section(tree.get_child_optional(name).get_ptr(), name);
  };

  ExperimentConfig cfg;
  if (!tree.get_child_optional("topology")) config_error("missing [topology] section");
  if (!tree.get_child_optional("workload")) config_error("missing [workload] section");
  auto topo = section("topology");
  parse_topology(topo, cfg.experiment.topology);
  auto work = section("workload");
  parse_workload(work, cfg.experiment.workload);

  auto sweep = section("sweep");
  if (auto name = sweep.text("parameter")) {
    cfg.sweep_parameter = parse_sweep_parameter(*name);
    if (!cfg.sweep_parameter) config_error(fmt::format("sweep.parameter: unknown parameter '{}'", *name));
    const auto values = sweep.text("values");
    if (!values) config_error("sweep.values is required");
    cfg.sweep_values = parse_value_list(*values);
    if (cfg.sweep_values.empty()) config_error("sweep.values is empty");
    try {
      for (auto v : cfg.sweep_values) (void)with_parameter(cfg.experiment, *cfg.sweep_parameter, v);
    } catch (const Error& e) {
      config_error(e.what());
    }
  } else if (sweep.text("values")) {
    config_error("sweep.values given without sweep.parameter");
  }
  sweep.reject_unknown();

  auto model = section("model");
  cfg.model.nonpayload_fraction = model.number("s", 0.0);
  cfg.model.overhead_coeff = model.number("c", 0.0);
  cfg.model.per_core_perf = model.number("p", 1.0);
  model.reject_unknown();
  try {
    cfg.model.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }

  auto output = section("output");
  cfg.dataset_path = output.text("dataset").value_or("");
  cfg.trace_path = output.text("trace").value_or("");
  cfg.format = parse_format(output.text("format").value_or("tabular"));
  output.reject_unknown();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error(fmt::format("cannot open config '{}'", path));
  return parse_config(in);
}

namespace {

/// A failure while simulating, as opposed to a bad invocation or config.
class RuntimeFailure : public Error {
 public:
  explicit RuntimeFailure(const Error& e) : Error(e.code(), e.what()) {}
};

struct GlobalOptions {
  std::string config;
  std::string out;
  std::string trace;
  std::string format;
  int jobs = 1;
  std::uint64_t seed = 0;  // accepted for compatibility; runs are deterministic
};

/// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kConfig, fmt::format("cannot write '{}'", path));
  fn(file);
}

ExperimentConfig resolve(const GlobalOptions& g) {
  if (g.config.empty()) throw Error(ErrorCode::kUsage, "--config is required");
  auto cfg = load_config(g.config);
  if (!g.out.empty()) cfg.dataset_path = g.out;
  if (!g.trace.empty()) cfg.trace_path = g.trace;
  if (!g.format.empty()) cfg.format = parse_format(g.format);
  return cfg;
}

int cmd_run(const GlobalOptions& g, std::ostream& out) {
  const auto cfg = resolve(g);
  RunResult result;
  try {
    result = run_experiment(cfg.experiment);
  } catch (const Error& e) {
    throw RuntimeFailure(e);
  }
  const std::vector<std::pair<std::string, Metrics>> rows = {{"run", result.metrics}};
  with_output(cfg.dataset_path, out, [&](std::ostream& os) { write_dataset(os, rows, cfg.format); });
  if (!cfg.trace_path.empty()) {
    with_output(cfg.trace_path, out, [&](std::ostream& os) { write_trace_records(os, result.trace); });
  }
  return kExitOk;
}

int cmd_sweep(const GlobalOptions& g, std::ostream& out) {
  const auto cfg = resolve(g);
  if (!cfg.sweep_parameter) throw Error(ErrorCode::kConfig, "config has no [sweep] parameter");
  std::vector<SimTrace> traces;
  SweepResult result;
  try {
    result = sweep(cfg.experiment, *cfg.sweep_parameter, cfg.sweep_values, g.jobs,
                   cfg.trace_path.empty() ? nullptr : &traces);
  } catch (const Error& e) {
    throw RuntimeFailure(e);
  }
  with_output(cfg.dataset_path, out, [&](std::ostream& os) { write_dataset(os, result, cfg.format); });
  if (!cfg.trace_path.empty()) {
    with_output(cfg.trace_path, out, [&](std::ostream& os) {
      for (std::size_t i = 0; i < traces.size(); ++i) {
        os << fmt::format(R"({{"sweep":"{}","value":{}}})", to_string(result.parameter),
                          result.points[i].value)
           << '\n';
        write_trace_records(os, traces[i]);
      }
    });
  }
  return kExitOk;
}

struct ModelOptions {
  std::optional<double> s, c, p;
  std::string preset;
  double n_min = 1;
  double n_max = 1000;
  int points = 0;
  std::string surface;
};

std::vector<double> core_counts(const ModelOptions& m) {
  if (!(m.n_min >= 1) || !(m.n_max >= m.n_min)) {
    throw Error(ErrorCode::kUsage, "need 1 <= n-min <= n-max");
  }
  std::vector<double> ns;
  if (m.points <= 0) {
    if (m.n_max - m.n_min > 1e6) throw Error(ErrorCode::kUsage, "range too long for every-integer output; use --points");
    for (double n = std::ceil(m.n_min); n <= m.n_max; n += 1) ns.push_back(n);
    return ns;
  }
  for (int i = 0; i < m.points; ++i) {
    const double frac = m.points == 1 ? 0.0 : static_cast<double>(i) / (m.points - 1);
    const double n = std::round(m.n_min * std::pow(m.n_max / m.n_min, frac));
    if (ns.empty() || n > ns.back()) ns.push_back(n);
  }
  return ns;
}

int cmd_model(const GlobalOptions& g, const ModelOptions& m, std::ostream& out) {
  model::ScalingParams base;
  if (!g.config.empty()) base = load_config(g.config).model;
  if (m.s) base.nonpayload_fraction = *m.s;
  if (m.c) base.overhead_coeff = *m.c;
  if (m.p) base.per_core_perf = *m.p;
  base.validate();
  const auto format = g.format.empty() ? DatasetFormat::kTabular : parse_format(g.format);
  const auto ns = core_counts(m);

  if (!m.surface.empty()) {
    std::vector<double> ss;
    std::stringstream in{m.surface};
    std::string item;
    while (std::getline(in, item, ',')) ss.push_back(parse_double(item, "--surface"));
    const auto grid = model::efficiency_surface(ss, ns, base.overhead_coeff);
    with_output(g.out, out, [&](std::ostream& os) {
      if (format == DatasetFormat::kTabular) os << "s,n,efficiency\n";
      for (std::size_t i = 0; i < ss.size(); ++i) {
        for (std::size_t j = 0; j < ns.size(); ++j) {
          os << (format == DatasetFormat::kTabular
                     ? fmt::format("{},{},{}\n", ss[i], ns[j], grid[i][j])
                     : fmt::format(R"({{"s":{},"n":{},"efficiency":{}}})"
                                   "\n",
                                   ss[i], ns[j], grid[i][j]));
        }
      }
    });
    return kExitOk;
  }

  std::vector<model::WorkloadProfile> profiles;
  if (m.preset == "all") {
    profiles = model::preset_profiles();
  } else if (!m.preset.empty()) {
    auto p = model::find_preset(m.preset);
    if (!p) throw Error(ErrorCode::kUsage, fmt::format("unknown preset '{}' (hpl | hpcg | ai | brain | all)", m.preset));
    profiles.push_back(*p);
  }
  const bool labelled = !profiles.empty();
  if (!labelled) profiles.push_back({"custom", base});

  with_output(g.out, out, [&](std::ostream& os) {
    if (format == DatasetFormat::kTabular) {
      os << (labelled ? "profile," : "") << "n,speedup1,speedup2,efficiency,payload_perf\n";
    }
    for (const auto& profile : profiles) {
      for (double n : ns) {
        const auto& p = profile.params;
        const double s1 = model::speedup_first_order(p, n);
        const double s2 = model::speedup_second_order(p, n);
        const double eff = model::efficiency(p, n);
        const double perf = model::payload_performance(p, n);
        if (format == DatasetFormat::kTabular) {
          if (labelled) os << profile.name << ',';
          os << fmt::format("{},{},{},{},{}\n", n, s1, s2, eff, perf);
        } else {
          os << '{';
          if (labelled) os << fmt::format(R"("profile":"{}",)", profile.name);
          os << fmt::format(R"("n":{},"speedup1":{},"speedup2":{},"efficiency":{},"payload_perf":{}}})"
                            "\n",
                            n, s1, s2, eff, perf);
        }
      }
    }
  });
  return kExitOk;
}

struct ExtrapolateOptions {
  double perf_a = 0, width_a = 0, perf_b = 0, width_b = 0;
};

int cmd_extrapolate(const GlobalOptions& g, const ExtrapolateOptions& x, std::ostream& out) {
  const auto est = model::mixed_precision_extrapolate(x.perf_a, x.width_a, x.perf_b, x.width_b);
  with_output(g.out, out, [&](std::ostream& os) {
    os << fmt::format("housekeeping_share={}\nfp0_performance={}\n", est.housekeeping_share(),
                      est.fp0_performance());
  });
  return kExitOk;
}

void report(std::ostream& err, ErrorCode code, std::string_view msg) {
  std::string line(msg);
  for (auto& ch : line) {
    if (ch == '\n') ch = ' ';
  }
  err << "error[" << to_string(code) << "]: " << line << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neuromorphic interconnect simulator and scaling models", "neurosim"};
  app.require_subcommand(1);
  GlobalOptions g;
  const auto add_globals = [&](CLI::App* cmd) {
    cmd->add_option("--config", g.config, "Experiment config file");
    cmd->add_option("--out", g.out, "Dataset output path (default: stdout)");
    cmd->add_option("--format", g.format, "tabular | structured-records");
    cmd->add_option("--trace", g.trace, "Trace output path");
    cmd->add_option("--jobs", g.jobs, "Concurrent runs in a sweep")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", g.seed, "Reserved; the simulator is deterministic");
  };
  auto* run = app.add_subcommand("run", "Simulate one configured experiment");
  auto* sweep_cmd = app.add_subcommand("sweep", "Simulate every value of the configured sweep");
  auto* model_cmd = app.add_subcommand("model", "Write analytic scaling curves");
  auto* extrap = app.add_subcommand("extrapolate", "Extrapolate mixed-precision results to FP0");
  for (auto* cmd : {run, sweep_cmd, model_cmd, extrap}) add_globals(cmd);

  ModelOptions m;
  double s = 0, c = 0, p = 0;
  auto* opt_s = model_cmd->add_option("--s", s, "Non-payload fraction");
  auto* opt_c = model_cmd->add_option("--c", c, "Per-core overhead coefficient");
  auto* opt_p = model_cmd->add_option("--p", p, "Per-core performance");
  model_cmd->add_option("--preset", m.preset, "hpl | hpcg | ai | brain | all");
  model_cmd->add_option("--n-min", m.n_min, "Smallest core count");
  model_cmd->add_option("--n-max", m.n_max, "Largest core count");
  model_cmd->add_option("--points", m.points, "Log-spaced points (0: every integer)");
  model_cmd->add_option("--surface", m.surface, "Comma-separated s values: write an efficiency surface");

  ExtrapolateOptions x;
  extrap->add_option("--perf-a", x.perf_a, "Performance at the wider width")->required();
  extrap->add_option("--width-a", x.width_a, "Wider operand width (bits)")->required();
  extrap->add_option("--perf-b", x.perf_b, "Performance at the narrower width")->required();
  extrap->add_option("--width-b", x.width_b, "Narrower operand width (bits)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, ErrorCode::kUsage, e.what());
    return kExitUsage;
  }
  if (opt_s->count()) m.s = s;
  if (opt_c->count()) m.c = c;
  if (opt_p->count()) m.p = p;

  try {
    if (*run) return cmd_run(g, out);
    if (*sweep_cmd) return cmd_sweep(g, out);
    if (*model_cmd) return cmd_model(g, m, out);
    return cmd_extrapolate(g, x, out);
  } catch (const RuntimeFailure& e) {
    report(err, e.code(), e.what());
    return kExitRuntime;
  } catch (const Error& e) {
    report(err, e.code(), e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report(err, ErrorCode::kUsage, e.what());
    return kExitRuntime;
  }
}

}  // namespace neurosim::cli
