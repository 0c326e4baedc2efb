#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "ipl/errors.hpp"
#include "ipl/experiments.hpp"
#include "ipl/io.hpp"

using namespace ipl;
namespace fs = std::filesystem;
namespace {
constexpr double kPi = std::numbers::pi;

struct Expected {
  const char* name;
  ProfileKind kind;
  int sites;
  double eps;
  double phi_start;
  double phi_end;
  int revolutions;
};

fs::path scratch_dir(const char* name) {
  const fs::path p = fs::temp_directory_path() / "ipl_unit" / name;
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST_CASE("preset table matches the published parameters") {
  const Expected table[] = {
      {"fig1", ProfileKind::linear, 1002, 0.2, kPi / 8, 3 * kPi / 8, 0},
      {"fig2_3", ProfileKind::linear, 402, 0.2, kPi / 8, 3 * kPi / 8, 0},
      {"fig4", ProfileKind::linear, 302, 0.3, 0.0, kPi / 2, 0},
      {"fig4_inset_sweep", ProfileKind::linear, 1002, 0.2, kPi / 8, 3 * kPi / 8, 0},
      {"fig5", ProfileKind::random_onsite, 302, 0.2, 0.0, 0.0, 0},
      {"fig6", ProfileKind::random_phase, 302, 0.2, kPi / 8, 3 * kPi / 8, 0},
      {"fig7_8", ProfileKind::linear, 302, 0.3, kPi / 8, kPi / 4, 0},
      {"fig9_10", ProfileKind::revolutions, 402, 0.3, kPi / 8, 3 * kPi / 8, 1},
      {"fig10", ProfileKind::revolutions, 602, 0.3, kPi / 8, 3 * kPi / 8, 1},
      {"fig11_13", ProfileKind::revolutions, 362, 0.3, kPi / 8, 3 * kPi / 8, 3},
      {"fig13", ProfileKind::revolutions, 1802, 0.3, kPi / 8, 3 * kPi / 8, 3},
  };
  CHECK(presets().size() == std::size(table));
  for (const Expected& e : table) {
    CAPTURE(e.name);
    const RunConfig& c = find_preset(e.name).config;
    CHECK(c.preset == e.name);
    CHECK(c.profile.kind == e.kind);
    CHECK(c.sites() == e.sites);
    CHECK(c.params.d1 == 1.0);
    CHECK(c.params.d2 == 2.0);
    CHECK(c.params.eps == e.eps);
    CHECK(c.profile.revolutions == e.revolutions);
    if (e.kind != ProfileKind::random_onsite) {
      CHECK(std::fabs(c.profile.phi_start - e.phi_start) < 1e-15);
      CHECK(std::fabs(c.profile.phi_end - e.phi_end) < 1e-15);
    }
  }
  CHECK(find_preset("fig1").config.profile.lf == 1.0);
  CHECK(find_preset("fig4").config.profile.lf == 0.5);
  CHECK(find_preset("fig7_8").config.profile.lf == doctest::Approx(2.0));
  CHECK(find_preset("fig2_3").config.map.selection == MapSelection::lower_band);
  CHECK(find_preset("fig4_inset_sweep").config.sweep_lf == default_lf_grid());
  CHECK_THROWS_AS(find_preset("fig99"), InvalidArgument);
}

TEST_CASE("default L_f grid has 25 log-spaced points in [0.5, 100]") {
  const auto grid = default_lf_grid();
  REQUIRE(grid.size() == 25);
  CHECK(grid.front() == 0.5);
  CHECK(grid.back() == 100.0);
  const double ratio = grid[1] / grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] / grid[i - 1] == doctest::Approx(ratio));
}

TEST_CASE("fig1 pipeline gives two bands of 501") {
  const RunResult r = run_pipeline(find_preset("fig1").config);
  CHECK(r.report.values.size() == 1002);
  REQUIRE(r.report.bands.bands.size() == 2);
  CHECK(r.report.bands.bands[0].size() == 501);
  CHECK(r.report.bands.bands[1].size() == 501);
}

TEST_CASE("fig1 with eps = 0 is the decoupled spectrum") {
  const RunConfig c = apply_overrides(find_preset("fig1").config, {{"eps", "0"}});
  const RunResult r = run_pipeline(c);
  for (std::size_t k = 0; k < 501; ++k) CHECK(std::fabs(r.report.values[k] - 1.0) < 1e-12);
  for (std::size_t k = 501; k < 1002; ++k) CHECK(std::fabs(r.report.values[k] - 2.0) < 1e-12);
}

TEST_CASE("fig9_10 preset: non-degenerate ground state, paired excitations") {
  const RunResult r = run_pipeline(find_preset("fig9_10").config);
  CHECK(r.report.multiplets.groups[0].size == 1);
  CHECK(r.report.multiplets.groups[1].size == 2);
}

TEST_CASE("overrides") {
  const RunConfig base = default_run_config();
  CHECK(base.sites() == 402);

  const RunConfig sized = apply_overrides(base, {{"sites", "100"}, {"lf", "2"}});
  CHECK(sized.profile.cells == 50);
  CHECK(sized.profile.lf == 2.0);
  CHECK(sized.profile.phi_end - sized.profile.phi_start == doctest::Approx(kPi / 8.0));

  const RunConfig rev = apply_overrides(base, {{"profile", "revolutions"}, {"revolutions", "3"}});
  CHECK(rev.profile.kind == ProfileKind::revolutions);
  CHECK(rev.profile.revolutions == 3);
  CHECK(rev.profile.phi_start == kPi / 8.0);

  const RunConfig ends = apply_overrides(base, {{"phi_start", "pi/8"}, {"phi_end", "pi/4"}});
  CHECK(ends.profile.lf == doctest::Approx(2.0));

  CHECK_THROWS_AS(apply_overrides(base, {{"sites", "7"}}), InvalidSpec);
  CHECK_THROWS_WITH(apply_overrides(base, {{"sites", "7"}}), "sites must be even");
  CHECK_THROWS_AS(apply_overrides(base, {{"sites", "2"}}), InvalidSpec);
  CHECK_THROWS_AS(apply_overrides(base, {{"phi_start", "0"}, {"lf", "1"}}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {{"colour", "red"}}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {{"eps", "abc"}}), InvalidArgument);
  CHECK_THROWS_AS(apply_overrides(base, {{"tau", "2"}}), InvalidArgument);
}

TEST_CASE("sweep rows are deterministic and in input order") {
  RunConfig base = find_preset("fig4").config;
  const std::vector<double> lfs{2.0, 0.5, 2.0};
  const auto rows = sweep_lf(lfs, base, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].lf == 2.0);
  CHECK(rows[1].lf == 0.5);
  CHECK(rows[0].fraction == rows[2].fraction);
  CHECK(rows[0].error.empty());
  CHECK(rows[1].fraction < rows[0].fraction);

  CHECK_THROWS_AS(sweep_lf(std::vector<double>{0.0}, base), InvalidArgument);
  CHECK_THROWS_AS(sweep_lf(lfs, find_preset("fig9_10").config), InvalidSpec);

  base.options.nb = 10000;
  const auto failed = sweep_lf(std::vector<double>{1.0, 2.0}, base);
  CHECK_FALSE(failed[0].error.empty());
  CHECK_FALSE(failed[1].error.empty());
}

TEST_CASE("large L_f is almost fully delocalized") {
  const RunConfig base = find_preset("fig4_inset_sweep").config;
  const auto rows = sweep_lf(std::vector<double>{100.0}, base);
  CHECK(rows[0].fraction >= 0.9);
}

TEST_CASE("config and manifest JSON round-trip") {
  for (const Preset& p : presets()) {
    CHECK(config_from_json(config_to_json(p.config)) == p.config);
  }
  RunManifest m;
  m.config = find_preset("fig6").config;
  m.emit = {Artifact::csv, Artifact::json};
  m.artifacts = {{"states.csv", "ab", 12}};
  const RunManifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.config == m.config);
  CHECK(back.emit == m.emit);
  CHECK(back.artifacts == m.artifacts);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::object()), InvalidSpec);
}

TEST_CASE("execute writes artifacts whose checksums match the manifest") {
  const fs::path dir = scratch_dir("execute");
  const RunManifest m = run_preset("fig7_8", {}, dir);
  for (const char* f : {"spectrum.csv", "states.csv", "hamiltonian.csv", "map.pgm", "summary.json",
                        "manifest.json"}) {
    CHECK(fs::exists(dir / f));
  }
  for (const ArtifactRecord& a : m.artifacts) {
    CHECK(sha256_file(dir / a.file) == a.sha256);
    CHECK(fs::file_size(dir / a.file) == a.bytes);
  }
  const RunManifest loaded = load_manifest(dir / "manifest.json");
  CHECK(loaded.artifacts == m.artifacts);

  const fs::path replay = scratch_dir("execute_replay");
  CHECK(replay_manifest(dir / "manifest.json", replay).artifacts == m.artifacts);
}

TEST_CASE("emit selection limits the artifacts") {
  const fs::path dir = scratch_dir("emit");
  const RunManifest m = run_preset("fig4", {}, dir, {Artifact::pgm});
  REQUIRE(m.artifacts.size() == 1);
  CHECK(m.artifacts[0].file == "map.pgm");
  CHECK_FALSE(fs::exists(dir / "states.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("random instances are reproducible and within bounds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = random_instance(seed, 64);
    const auto b = random_instance(seed, 64);
    CHECK(a.diag == b.diag);
    CHECK(a.offdiag == b.offdiag);
    CHECK(a.size() >= 4);
    CHECK(a.size() <= 64);
    CHECK(a.size() % 2 == 0);
  }
  CHECK_THROWS_AS(random_instance(0, 3), InvalidArgument);
}
