#include "ipl/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <set>

#include "ipl/eigensolver.hpp"
#include "ipl/io.hpp"

namespace ipl {

namespace {

const std::vector<std::string> kParamFlags = {
    "d1", "d2", "eps", "sites", "cells", "profile", "phi-start", "phi-end",
    "center", "lf", "revolutions", "seed", "tau", "delta-rel", "gamma", "nb"};
const std::set<std::string> kAngleFlags = {"phi-start", "phi-end", "center"};
const std::set<std::string> kRealFlags = {"d1", "d2", "eps", "lf", "tau", "delta-rel", "gamma"};
const std::set<std::string> kIntFlags = {"sites", "cells", "revolutions", "nb", "instances",
                                         "max-sites"};
const std::set<std::string> kUnsignedFlags = {"seed"};

constexpr int kDefaultOracleInstances = 50;
constexpr int kDefaultOracleMaxSites = 64;
constexpr double kOracleTolerance = 1e-10;

struct Storage {
  std::map<std::string, std::string> values;
  std::string name;
  std::vector<std::string> emit;
};

void add_flag(CLI::App* app, Storage& s, const std::string& flag, const std::string& help) {
  app->add_option("--" + flag, s.values[flag], help);
}

void add_param_flags(CLI::App* app, Storage& s) {
  add_flag(app, s, "d1", "lower cell eigenvalue (default 1)");
  add_flag(app, s, "d2", "upper cell eigenvalue (default 2)");
  add_flag(app, s, "eps", "intercell coupling (default 0.2)");
  add_flag(app, s, "sites", "lattice sites N_s, even and >= 4");
  add_flag(app, s, "cells", "number of cells N = N_s / 2");
  add_flag(app, s, "profile", "linear | revolutions | random-phase | random-onsite | constant");
  add_flag(app, s, "phi-start", "first phase (radians or pi expression)");
  add_flag(app, s, "phi-end", "last phase (radians or pi expression)");
  add_flag(app, s, "center", "grid center phase (default pi/4)");
  add_flag(app, s, "lf", "phase scaling factor L_f (interval length (pi/4)/L_f)");
  add_flag(app, s, "revolutions", "phase revolutions of the triangle-wave profile");
  add_flag(app, s, "seed", "seed for random profiles");
  add_flag(app, s, "tau", "edge-weight threshold for localization (default 1e-6)");
  add_flag(app, s, "delta-rel", "relative multiplet spacing threshold (default 0.05)");
  add_flag(app, s, "gamma", "gap factor over the median spacing (default 20)");
  add_flag(app, s, "nb", "edge window in sites (default 2)");
}

void add_output_flags(CLI::App* app, Storage& s) {
  add_flag(app, s, "out", "output directory");
  app->add_option("--emit", s.emit, "artifact kind: csv, pgm or json (repeatable; default all)");
}

long long parse_int(const std::string& flag, const std::string& text) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError("--" + flag + " expects an integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& flag, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw UsageError("--" + flag + " expects a number, got '" + text + "'");
  }
  return value;
}

std::string normalize_flag(const std::string& flag, const std::string& text) {
  if (kAngleFlags.contains(flag)) {
    try {
      return format_number(parse_angle(text));
    } catch (const InvalidArgument& e) {
      throw UsageError("--" + flag + ": " + e.what());
    }
  }
  if (kRealFlags.contains(flag)) {
    const double v = parse_real(flag, text);
    if (flag == "lf" && !(v > 0.0)) throw UsageError("lf must be positive");
    if (flag == "tau" && !(v > 0.0 && v < 1.0)) throw UsageError("tau must lie in (0, 1)");
    if ((flag == "delta-rel" || flag == "gamma") && !(v > 0.0)) {
      throw UsageError(flag + " must be positive");
    }
    return format_number(v);
  }
  if (kIntFlags.contains(flag)) {
    const long long v = parse_int(flag, text);
    if (flag == "sites") {
      if (v % 2 != 0) throw UsageError("sites must be even");
      if (v < 4) throw UsageError("sites must be at least 4");
    }
    if (flag == "cells" && v < 2) throw UsageError("cells must be at least 2");
    if ((flag == "revolutions" || flag == "nb" || flag == "instances") && v < 1) {
      throw UsageError(flag + " must be at least 1");
    }
    if (flag == "max-sites" &&
        (v < 4 || v > static_cast<long long>(kDenseOracleMaxSize))) {
      throw UsageError("max-sites must lie in [4, " + std::to_string(kDenseOracleMaxSize) + "]");
    }
    return std::to_string(v);
  }
  if (kUnsignedFlags.contains(flag)) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw UsageError("--" + flag + " expects a nonnegative integer, got '" + text + "'");
    }
    return std::to_string(v);
  }
  if (flag == "profile") {
    try {
      return std::string(to_string(profile_kind_from_string(text)));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  if (flag == "lf-grid") {
    std::string out;
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = std::min(text.find(',', start), text.size());
      const double v = parse_real(flag, text.substr(start, comma - start));
      if (!(v > 0.0)) throw UsageError("lf-grid values must be positive");
      if (!out.empty()) out += ',';
      out += format_number(v);
      start = comma + 1;
    }
    return out;
  }
  if (flag == "out" || flag == "manifest" || flag == "preset") {
    if (text.empty()) throw UsageError("--" + flag + " must not be empty");
  }
  return text;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    grid.push_back(parse_real("lf-grid", text.substr(start, comma - start)));
    start = comma + 1;
  }
  return grid;
}

std::set<Artifact> emit_set(const CliCommand& command) {
  if (command.emit.empty()) return all_artifacts();
  std::set<Artifact> out;
  for (const auto& e : command.emit) out.insert(artifact_from_string(e));
  return out;
}

void print_manifest(const RunManifest& m, const std::filesystem::path& dir, std::ostream& out) {
  out << "wrote " << m.artifacts.size() << " artifacts and manifest.json to " << dir.string()
      << "\n";
  for (const auto& a : m.artifacts) out << "  " << a.file << "  " << a.sha256 << "\n";
}

}  // namespace

CliCommand parse_args(std::span<const std::string> args) {
  CLI::App app{"Isospectrally patterned lattice simulator", "ipl"};
  app.require_subcommand(1);

  std::map<std::string, Storage> storage;
  CLI::App* run = app.add_subcommand("run", "run one lattice with explicit parameters");
  add_param_flags(run, storage["run"]);
  add_output_flags(run, storage["run"]);
  add_flag(run, storage["run"], "manifest", "replay a saved manifest.json instead");

  CLI::App* preset = app.add_subcommand("preset", "run a named figure preset");
  preset->add_option("name", storage["preset"].name, "preset name (see list-presets)")->required();
  add_param_flags(preset, storage["preset"]);
  add_output_flags(preset, storage["preset"]);

  CLI::App* sweep = app.add_subcommand("sweep", "delocalized fraction across L_f values");
  add_param_flags(sweep, storage["sweep"]);
  add_output_flags(sweep, storage["sweep"]);
  add_flag(sweep, storage["sweep"], "preset", "base preset (default fig4_inset_sweep)");
  add_flag(sweep, storage["sweep"], "lf-grid", "comma-separated L_f values");

  CLI::App* oracle = app.add_subcommand("oracle-check", "compare QL against the dense Jacobi oracle");
  add_flag(oracle, storage["oracle-check"], "instances", "number of random lattices (default 50)");
  add_flag(oracle, storage["oracle-check"], "seed", "base seed (default 0)");
  add_flag(oracle, storage["oracle-check"], "max-sites", "largest lattice (default 64)");

  app.add_subcommand("list-presets", "list the named presets");

  std::vector<std::string> owned{"ipl"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : owned) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      const auto subs = app.get_subcommands();
      throw HelpRequested(subs.empty() ? app.help() : subs.front()->help());
    }
    throw UsageError(e.what());
  }

  CliCommand command;
  CLI::App* chosen = app.get_subcommands().front();
  command.subcommand = chosen->get_name();
  Storage& s = storage[command.subcommand];
  command.name = s.name;
  for (const auto& [flag, value] : s.values) {
    if (chosen->count("--" + flag) > 0) command.flags[flag] = normalize_flag(flag, value);
  }
  for (const auto& e : s.emit) {
    try {
      artifact_from_string(e);
    } catch (const InvalidArgument& err) {
      throw UsageError(err.what());
    }
    command.emit.push_back(e);
  }

  const auto has = [&](const char* f) { return command.flags.contains(f); };
  if (has("sites") && has("cells")) throw UsageError("--sites and --cells are mutually exclusive");
  if ((has("phi-start") || has("phi-end")) && (has("center") || has("lf"))) {
    throw UsageError("--phi-start/--phi-end conflict with --center/--lf");
  }
  const std::string& sub = command.subcommand;
  if ((sub == "run" || sub == "preset" || sub == "sweep") && !has("out")) {
    throw UsageError("missing --out");
  }
  if (sub == "run" && has("manifest")) {
    for (const auto& f : kParamFlags) {
      if (has(f.c_str())) throw UsageError("--manifest conflicts with --" + f);
    }
    if (!command.emit.empty()) throw UsageError("--manifest conflicts with --emit");
  }
  try {
    if (sub == "preset") find_preset(command.name);
    if (sub == "sweep" && has("preset")) find_preset(command.flags.at("preset"));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return command;
}

std::vector<std::string> serialize(const CliCommand& command) {
  std::vector<std::string> out{command.subcommand};
  if (!command.name.empty()) out.push_back(command.name);
  for (const auto& [flag, value] : command.flags) {
    out.push_back("--" + flag);
    out.push_back(value);
  }
  for (const auto& e : command.emit) {
    out.push_back("--emit");
    out.push_back(e);
  }
  return out;
}

Overrides to_overrides(const CliCommand& command) {
  Overrides out;
  for (const auto& flag : kParamFlags) {
    const auto it = command.flags.find(flag);
    if (it == command.flags.end()) continue;
    std::string key = flag;
    for (char& c : key) c = c == '-' ? '_' : c;
    out[key] = it->second;
  }
  return out;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const SolverFailure*>(&error)) return kExitSolver;
  if (dynamic_cast<const IoError*>(&error)) return kExitIo;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&error)) return kExitIo;
  if (dynamic_cast<const std::invalid_argument*>(&error)) return kExitUsage;
  return 1;
}

int execute(const CliCommand& command, std::ostream& out) {
  const std::string& sub = command.subcommand;
  if (sub == "list-presets") {
    for (const Preset& p : presets()) out << p.name << "\t" << p.description << "\n";
    return kExitOk;
  }
  if (sub == "oracle-check") {
    const auto flag = [&](const char* f, long long fallback) {
      const auto it = command.flags.find(f);
      return it == command.flags.end() ? fallback : std::stoll(it->second);
    };
    const long long instances = flag("instances", kDefaultOracleInstances);
    const int max_sites = static_cast<int>(flag("max-sites", kDefaultOracleMaxSites));
    const auto seed_it = command.flags.find("seed");
    const std::uint64_t seed = seed_it == command.flags.end() ? 0 : std::stoull(seed_it->second);
    int failures = 0;
    out << "instance,sites,max_value_diff,residual_bound,ortho_bound,status\n";
    for (long long i = 0; i < instances; ++i) {
      const auto h = random_instance(seed + static_cast<std::uint64_t>(i), max_sites);
      const OracleComparison c = compare_with_oracle(h);
      const bool ok = c.pass(kOracleTolerance);
      failures += ok ? 0 : 1;
      out << i << ',' << c.sites << ',' << format_number(c.max_value_diff) << ','
          << format_number(c.residual_bound) << ',' << format_number(c.ortho_bound) << ','
          << (ok ? "ok" : "MISMATCH") << "\n";
    }
    out << (instances - failures) << "/" << instances << " instances agree within "
        << format_number(kOracleTolerance) << "\n";
    return failures == 0 ? kExitOk : kExitSolver;
  }

  const std::filesystem::path dir = command.flags.at("out");
  if (sub == "run") {
    if (command.flags.contains("manifest")) {
      print_manifest(replay_manifest(command.flags.at("manifest"), dir), dir, out);
      return kExitOk;
    }
    const RunConfig config = apply_overrides(default_run_config(), to_overrides(command));
    print_manifest(ipl::execute(config, dir, emit_set(command)), dir, out);
    return kExitOk;
  }
  if (sub == "preset") {
    print_manifest(run_preset(command.name, to_overrides(command), dir, emit_set(command)), dir,
                   out);
    return kExitOk;
  }
  if (sub == "sweep") {
    const auto it = command.flags.find("preset");
    const RunConfig base = find_preset(it == command.flags.end() ? "fig4_inset_sweep" : it->second).config;
    RunConfig config = apply_overrides(base, to_overrides(command));
    if (command.flags.contains("lf-grid")) {
      config.sweep_lf = parse_grid(command.flags.at("lf-grid"));
    } else if (config.sweep_lf.empty()) {
      config.sweep_lf = default_lf_grid();
    }
    const RunManifest m = ipl::execute(config, dir, emit_set(command));
    print_manifest(m, dir, out);
    return kExitOk;
  }
  throw UsageError("unknown subcommand '" + sub + "'");
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  try {
    return execute(parse_args(args), out);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace ipl
