#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ipl/analysis.hpp"
#include "ipl/errors.hpp"
#include "ipl/experiments.hpp"

using namespace ipl;
namespace {
constexpr double kPi = std::numbers::pi;

EigenSystem basis_system(std::size_t n) {
  EigenSystem eig;
  eig.values.resize(n);
  eig.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    eig.values[k] = static_cast<double>(k);
    eig.vectors[k * n + k] = 1.0;
  }
  return eig;
}
}  // namespace

TEST_CASE("decoupled lattice splits into the exact d1 and d2 bands") {
  RunConfig config = find_preset("fig2_3").config;
  config.params.eps = 0.0;
  const RunResult r = run_pipeline(config);
  const auto& bands = r.report.bands;
  REQUIRE(bands.bands.size() == 2);
  CHECK(bands.bands[0] == IndexRange{0, 201});
  CHECK(bands.bands[1] == IndexRange{201, 402});
  CHECK_FALSE(bands.low_confidence);
  CHECK(bands.warnings.empty());
}

TEST_CASE("uniform spacings form one low-confidence band") {
  std::vector<double> values;
  for (int k = 0; k < 50; ++k) values.push_back(0.1 * k);
  const auto bands = detect_bands(values);
  CHECK(bands.bands.size() == 1);
  CHECK(bands.low_confidence);
  CHECK_FALSE(bands.warnings.empty());
}

TEST_CASE("one clearly largest spacing splits even below the gap threshold") {
  const std::vector<double> values{0.0, 1.0, 2.0, 3.0, 5.0, 6.0, 7.0};
  const auto bands = detect_bands(values);
  CHECK(bands.low_confidence);
  REQUIRE(bands.bands.size() == 2);
  CHECK(bands.bands[0] == IndexRange{0, 4});
  CHECK(bands.gaps[0].boundary == 4);
}

TEST_CASE("classification of synthetic edge weights") {
  BandPartition one;
  one.bands = {{0, 6}};
  const std::vector<double> left{1e-9, 1e-3, 1e-3, 1e-9, 1e-3, 1e-12};
  const std::vector<double> right{1e-3, 1e-3, 1e-3, 1e-3, 1e-3, 1e-3};
  const auto labels = classify_states(left, right, one, 1e-6);
  using S = Subdomain;
  CHECK(labels.labels == std::vector<S>{S::A, S::B, S::B, S::B, S::B, S::C});
  CHECK(labels.crossovers[0].localized_inside_b == 1);
  CHECK(*labels.crossovers[0].first_delocalized == 1);
  CHECK(*labels.crossovers[0].last_delocalized == 4);
  CHECK(delocalized_fraction(labels) == doctest::Approx(3.0 / 6.0));

  const std::vector<double> tiny(6, 1e-9);
  const auto localized = classify_states(tiny, tiny, one, 1e-6);
  CHECK(delocalized_fraction(localized) == 0.0);
  CHECK(localized.count(S::A, one.bands[0]) == 6);

  const std::vector<double> big(6, 0.1);
  const auto extended = classify_states(big, big, one, 1e-6);
  CHECK(delocalized_fraction(extended) == 1.0);
  CHECK(extended.count(S::B, one.bands[0]) == 6);

  CHECK_THROWS_AS(classify_states(big, big, one, 0.0), InvalidArgument);
  CHECK_THROWS_AS(classify_states(big, big, one, 1.0), InvalidArgument);
}

TEST_CASE("raising tau never delocalizes a state") {
  const RunResult r = run_pipeline(find_preset("fig2_3").config);
  std::vector<double> left, right;
  for (const auto& s : r.report.states) {
    left.push_back(s.w_left);
    right.push_back(s.w_right);
  }
  double previous = 1.0;
  for (double tau : {1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2}) {
    const auto labels = classify_states(left, right, r.report.bands, tau);
    const double f = delocalized_fraction(labels);
    CHECK(f <= previous);
    previous = f;
  }
}

TEST_CASE("uniform chain is delocalized with empty A and C") {
  RunConfig config = default_run_config();
  config.profile.kind = ProfileKind::constant;
  config.profile.phi_start = kPi / 4.0;
  config.profile.phi_end = kPi / 4.0;
  config.profile.cells = 20;
  config.params.eps = 1.0;
  const RunResult r = run_pipeline(config);
  CHECK(r.report.delocalized_fraction == 1.0);
  for (const auto& band : r.report.bands.bands) {
    CHECK(r.report.labels.count(Subdomain::A, band) == 0);
    CHECK(r.report.labels.count(Subdomain::C, band) == 0);
  }
}

TEST_CASE("fig2 lower band has all three subdomains") {
  const RunResult r = run_pipeline(find_preset("fig2_3").config);
  const IndexRange band = r.report.bands.bands.front();
  CHECK(band.size() == 201);
  CHECK(r.report.labels.count(Subdomain::A, band) > 0);
  CHECK(r.report.labels.count(Subdomain::B, band) > 0);
  CHECK(r.report.labels.count(Subdomain::C, band) > 0);
}

TEST_CASE("uniform spacings give only singletons") {
  SpacingSpectrum s;
  s.spacings.assign(9, 0.5);
  BandPartition bands;
  bands.bands = {{0, 10}};
  const auto report = detect_multiplets(s, bands, 0.05);
  CHECK(report.groups.size() == 10);
  for (const auto& g : report.groups) CHECK(g.size == 1);
  CHECK_THROWS_AS(detect_multiplets(s, bands, 0.0), InvalidArgument);
}

TEST_CASE("multiplets group runs of small spacings within a band") {
  SpacingSpectrum s;
  s.spacings = {1.0, 1e-6, 1.0, 1e-7, 1e-7, 1.0, 1.0};
  BandPartition bands;
  bands.bands = {{0, 8}};
  const auto report = detect_multiplets(s, bands, 0.05);
  REQUIRE(report.groups.size() == 5);
  CHECK(report.groups[1].first == 1);
  CHECK(report.groups[1].size == 2);
  CHECK(report.groups[2].first == 3);
  CHECK(report.groups[2].size == 3);
  CHECK(report.group_of(4) == 2);
  CHECK(report.group_of(7) == 4);
}

TEST_CASE("single revolution: singleton ground state, then pairs in opposite halves") {
  const RunResult r = run_pipeline(find_preset("fig9_10").config);
  const auto& groups = r.report.multiplets.groups;
  CHECK(groups[0].size == 1);
  for (std::size_t g = 1; g <= 10; ++g) CHECK(groups[g].size == 2);
  // Every second low-band spacing is near zero.
  const auto& s = r.report.spacing.spacings;
  for (std::size_t k = 1; k < 20; k += 2) CHECK(s[k] < 0.05 * s[k + 1]);
}

TEST_CASE("fig10 lowest twelve states sit at the two half-lattice centers") {
  const RunResult r = run_pipeline(find_preset("fig10").config);
  const double left_center = 151.5;
  const double right_center = 451.5;
  for (std::size_t k = 0; k < 12; ++k) {
    const double com = r.report.states[k].com;
    CHECK(std::min(std::fabs(com - left_center), std::fabs(com - right_center)) < 2.0);
  }
  for (std::size_t k = 1; k < 12; k += 2) {
    const double a = r.report.states[k].com - 301.5;
    const double b = r.report.states[k + 1].com - 301.5;
    CHECK(a * b < 0.0);
    const int na = half_lattice_node_count(r.eig.vector(k), r.hamiltonian.offdiag, 1e-8);
    const int nb = half_lattice_node_count(r.eig.vector(k + 1), r.hamiltonian.offdiag, 1e-8);
    CHECK(std::abs(na - nb) == 1);
  }
}

TEST_CASE("three revolutions: triplet ground multiplet followed by sextets") {
  const RunResult r = run_pipeline(find_preset("fig11_13").config);
  const auto& groups = r.report.multiplets.groups;
  CHECK(groups[0].first == 0);
  CHECK(groups[0].size == 3);
  CHECK(groups[1].size == 6);
  CHECK(groups[2].size == 6);
}

TEST_CASE("eigenstate map rows are renormalized and ordered from the top") {
  const EigenSystem eig = basis_system(4);
  const auto map = eigenstate_map(eig, {0, 1});
  REQUIRE(map.rows() == 1);
  CHECK(map.row(0)[0] == 1.0);
  CHECK(map.row(0)[1] == 0.0);

  const auto all = eigenstate_map(eig, {0, 4});
  CHECK(all.states == std::vector<std::size_t>{3, 2, 1, 0});
  CHECK(all.row(0)[3] == 1.0);
  CHECK_THROWS_AS(eigenstate_map(eig, {2, 2}), InvalidArgument);
  CHECK_THROWS_AS(eigenstate_map(eig, {0, 5}), InvalidArgument);
}

TEST_CASE("fig2 lower-band map: A and C wedges are centered") {
  const RunConfig config = find_preset("fig2_3").config;
  const RunResult r = run_pipeline(config);
  const auto map = eigenstate_map(r.eig, map_range(config, r.report));
  CHECK(map.rows() == 201);
  CHECK(map.sites == 402);
  for (std::size_t k = 0; k < 201; ++k) {
    if (r.report.labels.labels[k] != Subdomain::B) {
      CHECK(std::fabs(r.report.states[k].com - 201.5) <= 2.0);
    }
  }
}

TEST_CASE("monotonicity changes with hysteresis") {
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(std::fabs(i - 25.0));
  CHECK(monotonicity_changes(v) == 1);

  std::vector<double> wiggly;
  for (int i = 0; i < 100; ++i) wiggly.push_back(i + 0.01 * ((i % 2) ? 1 : -1));
  CHECK(monotonicity_changes(wiggly) == 0);

  std::vector<double> arc;
  for (int i = 0; i < 200; ++i) arc.push_back(i < 60 ? 1.0 : std::sin((i - 60) * kPi / 140.0) * 10 + 1.0);
  CHECK(monotonicity_changes(arc) == 1);
  CHECK(monotonicity_changes(std::vector<double>{1.0, 2.0}) == 0);
}

TEST_CASE("fig1 spacing curve has two monotonicity changes per band") {
  const RunResult r = run_pipeline(find_preset("fig1").config);
  for (const auto& band : r.report.bands.bands) {
    const auto& s = r.report.spacing.spacings;
    const std::vector<double> curve(s.begin() + static_cast<std::ptrdiff_t>(band.begin),
                                    s.begin() + static_cast<std::ptrdiff_t>(band.end - 1));
    CHECK(monotonicity_changes(curve) == 2);
  }
}
