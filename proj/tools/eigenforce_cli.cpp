// eigenforce: run, validate, sweep, and oracle-check scenario files.
//
// Exit codes: 0 success, 2 validation failure, 3 runtime error,
// 4 oracle tolerance violation.

#include "eigenforce/engine.hpp"
#include "eigenforce/error.hpp"
#include "eigenforce/export.hpp"
#include "eigenforce/oracle.hpp"
#include "eigenforce/scenario.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace eigenforce;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitOracle = 4;

struct Options {
  std::string scenario;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::optional<double> tolerance;
  std::string sweep;
  int verbosity = 0;
};

// Validation failures carry the message already formatted with its location.
struct Invalid {
  std::string message;
};

std::string locate(const ScenarioDocument& doc, const ConfigError& e) {
  const std::size_t line = e.key_path().empty() ? 0 : locate_key(doc.text, e.key_path());
  return doc.source + (line ? ":" + std::to_string(line) : std::string()) + ": " + e.what();
}

ScenarioDocument load_document(const Options& opt) {
  try {
    ScenarioDocument doc = load_scenario_document(opt.scenario);
    for (const std::string& s : opt.sets) apply_override(doc, s);
    if (opt.seed) doc.json["seed"] = *opt.seed;
    return doc;
  } catch (const ConfigError& e) {
    throw Invalid{opt.scenario + ": " + e.what()};
  } catch (const Error& e) {
    throw Invalid{e.what()};
  }
}

ScenarioConfig configure(const ScenarioDocument& doc, int verbosity) {
  try {
    ScenarioConfig cfg = build_config(doc);
    for (const std::string& w : cfg.warnings) std::cerr << doc.source << ": warning: " << w << '\n';
    if (verbosity > 0) {
      std::cerr << doc.source << ": " << to_string(cfg.model.kind) << " model, n = " << cfg.dim() << ", "
                << cfg.time.steps << " steps\n";
    }
    return cfg;
  } catch (const ConfigError& e) {
    throw Invalid{locate(doc, e)};
  } catch (const Error& e) {
    throw Invalid{doc.source + ": " + e.what()};
  }
}

std::vector<std::string> formats_for(const Options& opt, const ScenarioConfig& cfg) {
  if (opt.format.empty()) return cfg.output.formats;
  try {
    (void)parse_format(opt.format);
  } catch (const Error& e) {
    throw Invalid{e.what()};
  }
  return {opt.format};
}

void write_outputs(const RunRecord& record, const fs::path& dir, const std::vector<std::string>& formats) {
  fs::create_directories(dir);
  for (const std::string& f : formats) export_record(record, parse_format(f), dir / ("run." + f));
}

int cmd_validate(const Options& opt) {
  const ScenarioConfig cfg = configure(load_document(opt), opt.verbosity);
  std::cout << "OK: " << cfg.name << " (" << to_string(cfg.model.kind) << ", n = " << cfg.dim() << ", "
            << cfg.time.steps << " steps, tracked " << cfg.tracked_indices().size() << ")\n";
  return kExitOk;
}

int cmd_run(const Options& opt) {
  const ScenarioConfig cfg = configure(load_document(opt), opt.verbosity);
  const auto formats = formats_for(opt, cfg);
  const fs::path dir = opt.out.empty() ? cfg.output.dir : fs::path(opt.out);
  const RunRecord record = run_scenario(cfg);
  write_outputs(record, dir, formats);
  std::cout << "wrote " << record.steps.size() << " steps, " << record.events.size() << " collision events to "
            << dir.string() << '\n';
  if (opt.verbosity > 0) {
    for (const CollisionEvent& e : record.events) {
      std::cerr << "collision: pair (" << e.first << ", " << e.second << ") in [" << e.t_lo << ", " << e.t_hi
                << "], min |Im| = " << e.min_imag << '\n';
    }
  }
  return kExitOk;
}

struct SweepAxis {
  std::string key;
  std::string label;
  std::vector<double> values;
};

SweepAxis parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw Invalid{"sweep: expected key=start:step:stop, got \"" + spec + "\""};
  SweepAxis axis;
  axis.label = spec.substr(0, eq);
  axis.key = axis.label.find('.') == std::string::npos ? "model." + axis.label : axis.label;
  for (char& c : axis.label) {
    if (c == '.') c = '_';
  }
  double start = 0, step = 0, stop = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str() + eq + 1, "%lf:%lf:%lf%c", &start, &step, &stop, &tail) != 3) {
    throw Invalid{"sweep: range must be start:step:stop, got \"" + spec.substr(eq + 1) + "\""};
  }
  if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw Invalid{"sweep: need step > 0 and stop >= start"};
  }
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) axis.values.push_back(start + static_cast<double>(i) * step);
  return axis;
}

int cmd_sweep(const Options& opt) {
  const SweepAxis axis = parse_sweep(opt.sweep);
  const ScenarioDocument base = load_document(opt);
  const auto n = static_cast<long>(axis.values.size());

  std::vector<ScenarioConfig> configs;
  std::vector<std::string> names;
  for (long i = 0; i < n; ++i) {
    ScenarioDocument doc = base;
    char value[40];
    std::snprintf(value, sizeof value, "%.17g", axis.values[static_cast<std::size_t>(i)]);
    try {
      apply_override(doc, axis.key + "=" + value);
    } catch (const ConfigError& e) {
      throw Invalid{std::string("sweep: ") + e.what()};
    }
    configs.push_back(configure(doc, opt.verbosity));
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03ld", axis.label.c_str(), i);
    names.emplace_back(name);
  }
  const fs::path root = opt.out.empty() ? configs.front().output.dir : fs::path(opt.out);
  const auto formats = formats_for(opt, configs.front());

  std::vector<std::string> failures(static_cast<std::size_t>(n));
  std::vector<std::size_t> event_counts(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      const RunRecord record = run_scenario(configs[u]);
      write_outputs(record, root / names[u], formats);
      event_counts[u] = record.events.size();
    } catch (const std::exception& e) {
      failures[u] = e.what();
    }
  }

  std::ofstream index(root / "sweep.csv");
  index << "index," << axis.key << ",dir,events,status\n";
  int status = kExitOk;
  for (long i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    char value[40];
    std::snprintf(value, sizeof value, "%.17g", axis.values[u]);
    index << i << ',' << value << ',' << names[u] << ',' << event_counts[u] << ','
          << (failures[u].empty() ? "ok" : "error") << '\n';
    if (!failures[u].empty()) {
      std::cerr << names[u] << ": " << failures[u] << '\n';
      status = kExitRuntime;
    }
  }
  std::cout << "swept " << axis.key << " over " << n << " values into " << root.string() << '\n';
  return status;
}

int cmd_oracle(const Options& opt) {
  const ScenarioConfig cfg = configure(load_document(opt), opt.verbosity);
  const OracleReport report = run_oracles(cfg, {}, opt.tolerance);
  print_report(report, std::cout);
  return report.pass() ? kExitOk : kExitOracle;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--scenario", opt.scenario, "scenario file (JSON)")->required();
  sub->add_option("--set", opt.sets, "override a dotted key, key=value (repeatable)");
  sub->add_option("--seed", opt.seed, "seed override");
  sub->add_flag("-v,--verbose", opt.verbosity, "more diagnostics on standard error");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenforce: eigenvalue velocities, accelerations, and conjugate attraction forces"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "run a scenario and write exports");
  add_common(run, opt);
  run->add_option("--out", opt.out, "output directory (default: output.dir)");
  run->add_option("--format", opt.format, "csv or json (default: output.formats)");

  auto* validate = app.add_subcommand("validate", "check a scenario file without running it");
  add_common(validate, opt);

  auto* sweep = app.add_subcommand("sweep", "run a scenario over a parameter range");
  add_common(sweep, opt);
  sweep->add_option("range", opt.sweep, "key=start:step:stop; a bare key means model.<key>")->required();
  sweep->add_option("--out", opt.out, "output root (default: output.dir)");
  sweep->add_option("--format", opt.format, "csv or json (default: output.formats)");

  auto* oracle = app.add_subcommand("oracle", "compare analytic values against independent oracles");
  add_common(oracle, opt);
  oracle->add_option("--tolerance", opt.tolerance, "replace every oracle tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (validate->parsed()) return cmd_validate(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
  } catch (const Invalid& e) {
    std::cerr << "error: " << e.message << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInvalid;
}
