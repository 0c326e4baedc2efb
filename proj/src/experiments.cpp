#include "ipl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <thread>

#include "ipl/errors.hpp"
#include "ipl/io.hpp"
#include "ipl/measures.hpp"
#include "ipl/rng.hpp"

namespace ipl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kFig5Seed = 5;
constexpr std::uint64_t kFig6Seed = 6;
constexpr std::size_t kFig13MapStates = 150;

ProfileSpec interval_spec(ProfileKind kind, double phi_start, double phi_end, int cells) {
  ProfileSpec spec;
  spec.kind = kind;
  spec.cells = cells;
  spec.phi_start = phi_start;
  spec.phi_end = phi_end;
  spec.lf = phi_end > phi_start ? (kPi / 4.0) / (phi_end - phi_start) : 0.0;
  return spec;
}

ProfileSpec revolution_spec(int revolutions, int cells) {
  ProfileSpec spec = interval_spec(ProfileKind::revolutions, kPi / 8.0, 3.0 * kPi / 8.0, cells);
  spec.revolutions = revolutions;
  return spec;
}

RunConfig make_config(ProfileSpec profile, double eps, MapSpec map = {}) {
  RunConfig config;
  config.profile = profile;
  config.params = CellParams{1.0, 2.0, eps, false};
  config.map = map;
  return config;
}

Preset make_preset(std::string name, std::string description, RunConfig config) {
  config.preset = name;
  return Preset{std::move(name), std::move(description), std::move(config)};
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  out.push_back(make_preset("fig1", "symmetric grid, L_f=1, eps=0.2, N_s=1002",
                            make_config(linear_spec(kPi / 4.0, 1.0, 501), 0.2)));
  out.push_back(make_preset("fig2_3", "symmetric grid, L_f=1, eps=0.2, N_s=402, lower-band map",
                            make_config(linear_spec(kPi / 4.0, 1.0, 201), 0.2,
                                        {MapSelection::lower_band, 0})));
  out.push_back(make_preset("fig4", "symmetric grid, L_f=0.5, eps=0.3, N_s=302",
                            make_config(linear_spec(kPi / 4.0, 0.5, 151), 0.3)));
  {
    RunConfig sweep = make_config(linear_spec(kPi / 4.0, 1.0, 501), 0.2);
    sweep.sweep_lf = default_lf_grid();
    out.push_back(make_preset("fig4_inset_sweep",
                              "delocalized fraction vs L_f, eps=0.2, N_s=1002, 25 log-spaced L_f",
                              std::move(sweep)));
  }
  {
    ProfileSpec onsite;
    onsite.kind = ProfileKind::random_onsite;
    onsite.cells = 151;
    onsite.seed = kFig5Seed;
    out.push_back(make_preset("fig5", "random on-site energies d1/d2, eps=0.2, N_s=302",
                              make_config(onsite, 0.2)));
  }
  {
    ProfileSpec phases =
        interval_spec(ProfileKind::random_phase, kPi / 8.0, 3.0 * kPi / 8.0, 151);
    phases.seed = kFig6Seed;
    out.push_back(make_preset("fig6", "random phases in [pi/8, 3pi/8], eps=0.2, N_s=302",
                              make_config(phases, 0.2)));
  }
  out.push_back(make_preset("fig7_8", "asymmetric grid [pi/8, pi/4], L_f=2, eps=0.3, N_s=302",
                            make_config(interval_spec(ProfileKind::linear, kPi / 8.0, kPi / 4.0, 151),
                                        0.3)));
  out.push_back(make_preset("fig9_10", "one revolution over [pi/8, 3pi/8], eps=0.3, N_s=402",
                            make_config(revolution_spec(1, 201), 0.3)));
  out.push_back(make_preset("fig10", "one revolution over [pi/8, 3pi/8], eps=0.3, N_s=602",
                            make_config(revolution_spec(1, 301), 0.3)));
  out.push_back(make_preset("fig11_13", "three revolutions over [pi/8, 3pi/8], eps=0.3, N_s=362",
                            make_config(revolution_spec(3, 181), 0.3)));
  out.push_back(make_preset("fig13",
                            "three revolutions over [pi/8, 3pi/8], eps=0.3, N_s=1802, lower-edge map",
                            make_config(revolution_spec(3, 901), 0.3,
                                        {MapSelection::lowest_states, kFig13MapStates})));
  return out;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument(key + " expects an integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw InvalidArgument(key + " expects a number, got '" + text + "'");
  }
  return value;
}

double parse_angle_value(const std::string& key, const std::string& text) {
  try {
    const double value = parse_angle(text);
    if (!std::isfinite(value)) throw InvalidArgument("non-finite");
    return value;
  } catch (const InvalidArgument&) {
    throw InvalidArgument(key + " expects an angle, got '" + text + "'");
  }
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IPL_THREADS")) {
    unsigned cap = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc{} && ptr == s.data() + s.size() && cap > 0) n = std::min(n, cap);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string() + " for reading");
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace

std::string_view to_string(MapSelection selection) {
  switch (selection) {
    case MapSelection::all: return "all";
    case MapSelection::lower_band: return "lower-band";
    case MapSelection::lowest_states: return "lowest-states";
  }
  return "all";
}

MapSelection map_selection_from_string(std::string_view name) {
  if (name == "all") return MapSelection::all;
  if (name == "lower-band") return MapSelection::lower_band;
  if (name == "lowest-states") return MapSelection::lowest_states;
  throw InvalidArgument("unknown map selection '" + std::string(name) + "'");
}

std::string_view to_string(Artifact artifact) {
  switch (artifact) {
    case Artifact::csv: return "csv";
    case Artifact::pgm: return "pgm";
    case Artifact::json: return "json";
  }
  return "csv";
}

Artifact artifact_from_string(std::string_view name) {
  if (name == "csv") return Artifact::csv;
  if (name == "pgm") return Artifact::pgm;
  if (name == "json") return Artifact::json;
  throw InvalidArgument("unknown artifact '" + std::string(name) + "' (expected csv, pgm or json)");
}

std::set<Artifact> all_artifacts() { return {Artifact::csv, Artifact::pgm, Artifact::json}; }

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = build_presets();
  return table;
}

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return p;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

ProfileSpec linear_spec(double center, double lf, int cells) {
  if (!(lf > 0.0) || !std::isfinite(lf)) throw InvalidSpec("lf must be positive");
  const double length = interval_from_lf(lf);
  ProfileSpec spec = interval_spec(ProfileKind::linear, center - length / 2.0,
                                   center + length / 2.0, cells);
  spec.lf = lf;
  return spec;
}

std::vector<double> default_lf_grid() {
  constexpr int kPoints = 25;
  const double lo = std::log(0.5);
  const double hi = std::log(100.0);
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
  }
  grid.front() = 0.5;
  grid.back() = 100.0;
  return grid;
}

RunConfig default_run_config() {
  return make_config(linear_spec(kPi / 4.0, 1.0, 201), 0.2);
}

RunConfig apply_overrides(RunConfig config, const Overrides& overrides) {
  static const std::set<std::string> known = {
      "profile", "d1",          "d2",  "eps",  "sites", "cells",     "phi_start", "phi_end",
      "center",  "lf",          "revolutions", "seed", "tau", "delta_rel", "gamma", "nb"};
  for (const auto& [key, value] : overrides) {
    if (!known.contains(key)) throw InvalidArgument("unknown parameter '" + key + "'");
  }
  const auto has = [&](const char* key) { return overrides.contains(key); };
  const auto get = [&](const char* key) -> const std::string& { return overrides.at(key); };

  ProfileSpec& p = config.profile;
  if (has("profile")) {
    const ProfileKind kind = profile_kind_from_string(get("profile"));
    if (kind != p.kind) {
      const int cells = p.cells;
      const std::uint64_t seed = p.seed;
      if (kind == ProfileKind::linear) {
        p = linear_spec(kPi / 4.0, 1.0, cells);
      } else if (kind == ProfileKind::revolutions) {
        p = revolution_spec(1, cells);
      } else if (kind == ProfileKind::constant) {
        p = interval_spec(kind, kPi / 4.0, kPi / 4.0, cells);
      } else {
        p = interval_spec(kind, kPi / 8.0, 3.0 * kPi / 8.0, cells);
      }
      p.seed = seed;
    }
  }

  if (has("sites") && has("cells")) throw InvalidArgument("--sites and --cells are mutually exclusive");
  if (has("sites")) {
    const int sites = parse_integer<int>("sites", get("sites"));
    if (sites % 2 != 0) throw InvalidSpec("sites must be even");
    if (sites < 4) throw InvalidSpec("sites must be at least 4");
    p.cells = sites / 2;
  }
  if (has("cells")) {
    const int cells = parse_integer<int>("cells", get("cells"));
    if (cells < 2) throw InvalidSpec("cells must be at least 2");
    p.cells = cells;
  }

  const bool endpoints = has("phi_start") || has("phi_end");
  const bool centered = has("center") || has("lf");
  if (endpoints && centered) {
    throw InvalidArgument("--phi-start/--phi-end conflict with --center/--lf");
  }
  if (endpoints) {
    if (has("phi_start")) p.phi_start = parse_angle_value("phi_start", get("phi_start"));
    if (has("phi_end")) p.phi_end = parse_angle_value("phi_end", get("phi_end"));
    p.lf = p.phi_end > p.phi_start ? (kPi / 4.0) / (p.phi_end - p.phi_start) : 0.0;
  }
  if (centered) {
    const double center = has("center") ? parse_angle_value("center", get("center"))
                                        : 0.5 * (p.phi_start + p.phi_end);
    const double lf = has("lf") ? parse_real("lf", get("lf")) : p.lf;
    if (!(lf > 0.0)) throw InvalidSpec("lf must be positive");
    const ProfileSpec grid = linear_spec(center, lf, p.cells);
    p.phi_start = grid.phi_start;
    p.phi_end = grid.phi_end;
    p.lf = grid.lf;
  }
  if (has("revolutions")) {
    const int k = parse_integer<int>("revolutions", get("revolutions"));
    if (k < 1) throw InvalidSpec("revolutions must be at least 1");
    p.revolutions = k;
  }
  if (has("seed")) p.seed = parse_integer<std::uint64_t>("seed", get("seed"));

  if (has("d1")) config.params.d1 = parse_real("d1", get("d1"));
  if (has("d2")) config.params.d2 = parse_real("d2", get("d2"));
  if (has("eps")) config.params.eps = parse_real("eps", get("eps"));

  AnalysisOptions& o = config.options;
  if (has("tau")) o.tau = parse_real("tau", get("tau"));
  if (has("delta_rel")) o.delta_rel = parse_real("delta_rel", get("delta_rel"));
  if (has("gamma")) o.gamma = parse_real("gamma", get("gamma"));
  if (has("nb")) o.nb = parse_integer<int>("nb", get("nb"));
  if (!(o.tau > 0.0 && o.tau < 1.0)) throw InvalidArgument("tau must lie in (0, 1)");
  if (!(o.delta_rel > 0.0)) throw InvalidArgument("delta_rel must be positive");
  if (!(o.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (o.nb < 1) throw InvalidArgument("nb must be at least 1");
  if (2 * o.nb > config.sites()) throw InvalidArgument("nb exceeds half the lattice");
  return config;
}

TridiagonalHamiltonian build_hamiltonian(const RunConfig& config) {
  if (config.profile.kind == ProfileKind::random_onsite) {
    const CellParams params = normalized(config.params);
    const OnsiteSequence seq = random_onsite_sequence(params.d1, params.d2, config.sites(),
                                                      config.profile.seed);
    TridiagonalHamiltonian h = assemble_onsite(seq, params.eps);
    h.cells = config.profile.cells;
    h.params = params;
    h.provenance = config.profile;
    return h;
  }
  return assemble(make_profile(config.profile), config.params);
}

RunResult run_pipeline(const RunConfig& config) {
  RunResult result;
  result.hamiltonian = build_hamiltonian(config);
  result.eig = eigh_tridiagonal(result.hamiltonian);
  result.report = analyze(result.hamiltonian, result.eig, config.options);
  return result;
}

IndexRange map_range(const RunConfig& config, const SpectralReport& report) {
  const std::size_t n = report.values.size();
  switch (config.map.selection) {
    case MapSelection::all: return {0, n};
    case MapSelection::lower_band: return report.bands.bands.front();
    case MapSelection::lowest_states: return {0, std::min(config.map.count, n)};
  }
  return {0, n};
}

std::vector<SweepRow> sweep_lf(std::span<const double> lf_values, const RunConfig& base,
                               unsigned threads) {
  if (base.profile.kind != ProfileKind::linear) {
    throw InvalidSpec("an L_f sweep needs a linear base profile");
  }
  for (double lf : lf_values) {
    if (!(lf > 0.0) || !std::isfinite(lf)) throw InvalidArgument("sweep L_f values must be positive");
  }
  const double center = 0.5 * (base.profile.phi_start + base.profile.phi_end);
  std::vector<SweepRow> rows(lf_values.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i].lf = lf_values[i];
      try {
        RunConfig cfg = base;
        cfg.sweep_lf.clear();
        cfg.profile = linear_spec(center, lf_values[i], base.profile.cells);
        cfg.profile.seed = base.profile.seed;
        rows[i].fraction = run_pipeline(cfg).report.delocalized_fraction;
      } catch (const std::exception& e) {
        rows[i].fraction = std::nan("");
        rows[i].error = e.what();
      }
    }
  };
  const unsigned workers = worker_count(threads, rows.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "lf,delocalized_fraction,error\n";
  for (const SweepRow& r : rows) {
    out += format_number(r.lf) + ',';
    if (r.error.empty()) out += format_number(r.fraction);
    out += ',';
    for (char c : r.error) out += (c == ',' || c == '\n') ? ';' : c;
    out += '\n';
  }
  return out;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["preset"] = c.preset;
  j["profile"] = {{"kind", std::string(to_string(c.profile.kind))},
                  {"cells", c.profile.cells},
                  {"sites", c.sites()},
                  {"phi_start", c.profile.phi_start},
                  {"phi_end", c.profile.phi_end},
                  {"lf", c.profile.lf},
                  {"revolutions", c.profile.revolutions},
                  {"seed", c.profile.seed}};
  j["params"] = {{"d1", c.params.d1}, {"d2", c.params.d2}, {"eps", c.params.eps}};
  j["analysis"] = {{"tau", c.options.tau},
                   {"delta_rel", c.options.delta_rel},
                   {"gamma", c.options.gamma},
                   {"nb", c.options.nb},
                   {"node_floor", c.options.node_floor}};
  j["map"] = {{"selection", std::string(to_string(c.map.selection))}, {"count", c.map.count}};
  j["sweep_lf"] = c.sweep_lf;
  return j;
}

RunConfig config_from_json(const json& j) {
  try {
    RunConfig c;
    c.preset = j.at("preset").get<std::string>();
    const json& p = j.at("profile");
    c.profile.kind = profile_kind_from_string(p.at("kind").get<std::string>());
    c.profile.cells = p.at("cells").get<int>();
    c.profile.phi_start = p.at("phi_start").get<double>();
    c.profile.phi_end = p.at("phi_end").get<double>();
    c.profile.lf = p.at("lf").get<double>();
    c.profile.revolutions = p.at("revolutions").get<int>();
    c.profile.seed = p.at("seed").get<std::uint64_t>();
    const json& params = j.at("params");
    c.params.d1 = params.at("d1").get<double>();
    c.params.d2 = params.at("d2").get<double>();
    c.params.eps = params.at("eps").get<double>();
    const json& a = j.at("analysis");
    c.options.tau = a.at("tau").get<double>();
    c.options.delta_rel = a.at("delta_rel").get<double>();
    c.options.gamma = a.at("gamma").get<double>();
    c.options.nb = a.at("nb").get<int>();
    c.options.node_floor = a.at("node_floor").get<double>();
    const json& m = j.at("map");
    c.map.selection = map_selection_from_string(m.at("selection").get<std::string>());
    c.map.count = m.at("count").get<std::size_t>();
    c.sweep_lf = j.at("sweep_lf").get<std::vector<double>>();
    return c;
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("malformed run configuration: ") + e.what());
  }
}

json manifest_to_json(const RunManifest& m) {
  json j;
  j["tool"] = "ipl";
  j["version"] = m.tool_version;
  j["config"] = config_to_json(m.config);
  json emit = json::array();
  for (Artifact a : m.emit) emit.push_back(std::string(to_string(a)));
  j["emit"] = emit;
  json artifacts = json::array();
  for (const ArtifactRecord& r : m.artifacts) {
    artifacts.push_back({{"file", r.file}, {"sha256", r.sha256}, {"bytes", r.bytes}});
  }
  j["artifacts"] = artifacts;
  return j;
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.tool_version = j.at("version").get<std::string>();
    m.config = config_from_json(j.at("config"));
    for (const auto& a : j.at("emit")) m.emit.insert(artifact_from_string(a.get<std::string>()));
    for (const auto& r : j.at("artifacts")) {
      m.artifacts.push_back({r.at("file").get<std::string>(), r.at("sha256").get<std::string>(),
                             r.at("bytes").get<std::uintmax_t>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("malformed manifest: ") + e.what());
  }
}

RunManifest load_manifest(const fs::path& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidSpec("cannot parse manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

json summary_json(const RunConfig& config, const RunResult& result) {
  const SpectralReport& r = result.report;
  json j;
  j["preset"] = config.preset;
  j["sites"] = r.values.size();
  j["trace"] = [&] {
    double s = 0.0;
    for (double v : result.hamiltonian.diag) s += v;
    return s;
  }();
  json bands = json::array();
  for (std::size_t b = 0; b < r.bands.bands.size(); ++b) {
    const IndexRange& band = r.bands.bands[b];
    const BandCrossovers& cross = r.labels.crossovers[b];
    json entry = {{"first_index", band.begin + 1},
                  {"last_index", band.end},
                  {"states", band.size()},
                  {"min", r.values[band.begin]},
                  {"max", r.values[band.end - 1]},
                  {"A", r.labels.count(Subdomain::A, band)},
                  {"B", r.labels.count(Subdomain::B, band)},
                  {"C", r.labels.count(Subdomain::C, band)},
                  {"localized_inside_B", cross.localized_inside_b}};
    entry["first_delocalized"] =
        cross.first_delocalized ? json(*cross.first_delocalized + 1) : json(nullptr);
    entry["last_delocalized"] =
        cross.last_delocalized ? json(*cross.last_delocalized + 1) : json(nullptr);
    bands.push_back(entry);
  }
  j["bands"] = bands;
  json gaps = json::array();
  for (const BandGap& g : r.bands.gaps) gaps.push_back({{"width", g.width}, {"after_index", g.boundary}});
  j["gaps"] = gaps;
  j["low_confidence"] = r.bands.low_confidence;
  j["warnings"] = r.bands.warnings;
  j["delocalized_fraction"] = r.delocalized_fraction;

  constexpr std::size_t kLeadingGroups = 20;
  json leading = json::array();
  std::size_t largest = 0;
  for (std::size_t g = 0; g < r.multiplets.groups.size(); ++g) {
    largest = std::max(largest, r.multiplets.groups[g].size);
    if (g < kLeadingGroups) leading.push_back(r.multiplets.groups[g].size);
  }
  j["multiplets"] = {{"count", r.multiplets.groups.size()},
                     {"largest", largest},
                     {"leading_sizes", leading}};
  const StateMeasures& ground = r.states.front();
  j["ground_state"] = {{"eigenvalue", r.values.front()},
                       {"ipr", ground.ipr},
                       {"cfs", ground.cfs},
                       {"com", ground.com},
                       {"w_left", ground.w_left},
                       {"w_right", ground.w_right}};
  j["solver"] = {{"residual_bound", result.eig.residual_bound},
                 {"ortho_bound", result.eig.ortho_bound},
                 {"refined_vectors", result.eig.refined}};
  j["thresholds"] = config_to_json(config)["analysis"];
  return j;
}

RunManifest execute(const RunConfig& config, const fs::path& out, const std::set<Artifact>& emit) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());

  RunManifest manifest;
  manifest.config = config;
  manifest.emit = emit;
  const auto emit_file = [&](const std::string& name, const std::string& bytes) {
    write_file(out / name, bytes);
    manifest.artifacts.push_back({name, sha256_hex(bytes), bytes.size()});
  };

  if (!config.sweep_lf.empty()) {
    const auto rows = sweep_lf(config.sweep_lf, config);
    if (emit.contains(Artifact::csv)) emit_file("sweep.csv", sweep_csv(rows));
    if (emit.contains(Artifact::json)) {
      json s;
      s["preset"] = config.preset;
      s["sites"] = config.sites();
      json table = json::array();
      for (const SweepRow& r : rows) {
        json row = {{"lf", r.lf}};
        row["delocalized_fraction"] = r.error.empty() ? json(r.fraction) : json(nullptr);
        row["error"] = r.error.empty() ? json(nullptr) : json(r.error);
        table.push_back(row);
      }
      s["rows"] = table;
      emit_file("summary.json", s.dump(2) + "\n");
    }
  } else {
    const RunResult result = run_pipeline(config);
    if (emit.contains(Artifact::csv)) {
      emit_file("spectrum.csv", spectrum_csv(result.report));
      emit_file("states.csv", state_csv(result.report));
      emit_file("hamiltonian.csv", hamiltonian_csv(result.hamiltonian));
    }
    if (emit.contains(Artifact::pgm)) {
      emit_file("map.pgm", pgm_bytes(eigenstate_map(result.eig, map_range(config, result.report))));
    }
    if (emit.contains(Artifact::json)) {
      emit_file("summary.json", summary_json(config, result).dump(2) + "\n");
    }
  }
  write_file(out / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
  return manifest;
}

RunManifest run_preset(std::string_view name, const Overrides& overrides, const fs::path& out,
                       const std::set<Artifact>& emit) {
  RunConfig config = apply_overrides(find_preset(name).config, overrides);
  config.preset = std::string(name);
  return execute(config, out, emit);
}

RunManifest replay_manifest(const fs::path& manifest_path, const fs::path& out) {
  const RunManifest saved = load_manifest(manifest_path);
  return execute(saved.config, out, saved.emit);
}

TridiagonalHamiltonian random_instance(std::uint64_t seed, int max_sites) {
  if (max_sites < 4) throw InvalidArgument("max_sites must be at least 4");
  SplitMix64 rng(seed);
  const int max_cells = max_sites / 2;
  const int cells = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_cells - 1));
  RunConfig config;
  config.params.d1 = rng.uniform(-1.0, 1.0);
  config.params.d2 = config.params.d1 + rng.uniform(0.1, 2.0);
  config.params.eps = rng.uniform(0.05, 1.0);
  const double a = rng.uniform(0.0, 2.0 * kPi);
  const double b = a + rng.uniform(0.05, kPi);
  switch (rng() % 4) {
    case 0: config.profile = interval_spec(ProfileKind::linear, a, b, cells); break;
    case 1:
      config.profile = interval_spec(ProfileKind::revolutions, a, b, cells);
      config.profile.revolutions = 1 + static_cast<int>(rng() % 3);
      break;
    case 2: config.profile = interval_spec(ProfileKind::random_phase, a, b, cells); break;
    default:
      config.profile.kind = ProfileKind::random_onsite;
      config.profile.cells = cells;
      break;
  }
  config.profile.seed = rng();
  return build_hamiltonian(config);
}

OracleComparison compare_with_oracle(const TridiagonalHamiltonian& h) {
  const EigenSystem fast = eigh_tridiagonal(h);
  const EigenSystem dense = dense_oracle(h);
  OracleComparison out;
  out.sites = h.size();
  for (std::size_t k = 0; k < fast.size(); ++k) {
    out.max_value_diff = std::max(out.max_value_diff, std::fabs(fast.values[k] - dense.values[k]));
  }
  out.residual_bound = fast.residual_bound;
  out.ortho_bound = fast.ortho_bound;
  return out;
}

}  // namespace ipl
