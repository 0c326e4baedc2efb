#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ipl/eigensolver.hpp"
#include "ipl/errors.hpp"
#include "ipl/hamiltonian.hpp"
#include "ipl/rng.hpp"

using namespace ipl;
namespace {
constexpr double kPi = std::numbers::pi;
const CellParams kParams{1.0, 2.0, 0.2, false};

void check_cell(const CellMatrix& a, double a11, double a12, double a22) {
  CHECK(a.a11 == doctest::Approx(a11).epsilon(1e-15));
  CHECK(std::fabs(a.a12 - a12) < 1e-15);
  CHECK(a.a12 == a.a21);
  CHECK(a.a22 == doctest::Approx(a22).epsilon(1e-15));
}
}  // namespace

TEST_CASE("cell matrix at special phases") {
  check_cell(cell_matrix(kParams, 0.0), 1.0, 0.0, 2.0);
  check_cell(cell_matrix(kParams, kPi / 4.0), 1.5, 0.5, 1.5);
  check_cell(cell_matrix(kParams, kPi / 2.0), 2.0, 0.0, 1.0);
}

TEST_CASE("psi parametrization") {
  check_cell(cell_matrix_psi(kParams, 0.0), 1.5, 0.5, 1.5);
  check_cell(cell_matrix_psi(kParams, kPi / 2.0), 1.5, -0.5, 1.5);
  SplitMix64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const double psi = rng.uniform(-kPi, kPi);
    const CellMatrix a = cell_matrix_psi(kParams, psi);
    const CellMatrix b = cell_matrix(kParams, psi + kPi / 4.0);
    CHECK(std::fabs(a.a11 - b.a11) <= 1e-15);
    CHECK(std::fabs(a.a12 - b.a12) <= 1e-15);
    CHECK(std::fabs(a.a22 - b.a22) <= 1e-15);

    const Block2 t = traceless_part(kParams, psi);
    const double mean = 0.5 * (kParams.d1 + kParams.d2);
    CHECK(std::fabs(mean + t[0][0] - a.a11) <= 1e-14);
    CHECK(std::fabs(t[0][1] - a.a12) <= 1e-14);
    CHECK(std::fabs(mean + t[1][1] - a.a22) <= 1e-14);
  }
}

TEST_CASE("cells are isospectral with trace and determinant fixed") {
  SplitMix64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const CellMatrix a = cell_matrix(kParams, rng.uniform(0.0, 2.0 * kPi));
    const auto ev = a.eigenvalues();
    CHECK(std::fabs(ev[0] - 1.0) <= 1e-12);
    CHECK(std::fabs(ev[1] - 2.0) <= 1e-12);
    CHECK(std::fabs(a.trace() - 3.0) <= 1e-14);
    CHECK(std::fabs(a.determinant() - 2.0) <= 1e-14);
  }
}

TEST_CASE("coupling block reduces to a single real entry") {
  const Block2 c = coupling_block(0.2);
  CHECK(c[0][0] == 0.0);
  CHECK(c[0][1] == doctest::Approx(0.2));
  CHECK(c[1][0] == 0.0);
  CHECK(c[1][1] == 0.0);
  CHECK(coupling_block(0.3)[0][1] == doctest::Approx(0.3));
  const Block2 zero = coupling_block(0.0);
  for (const auto& row : zero) {
    for (double x : row) CHECK(x == 0.0);
  }
}

TEST_CASE("single cell assembles to its own block") {
  PhaseProfile p;
  p.phases = {kPi / 4.0};
  const auto h = assemble(p, kParams);
  CHECK(h.diag[0] == doctest::Approx(1.5));
  CHECK(h.diag[1] == doctest::Approx(1.5));
  REQUIRE(h.offdiag.size() == 1);
  CHECK(h.offdiag[0] == doctest::Approx(0.5));
  const auto eig = eigh_tridiagonal(h);
  CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("two cells follow the block layout and match the dense oracle") {
  PhaseProfile p;
  p.phases = {kPi / 4.0, kPi / 4.0};
  const auto h = assemble(p, kParams);
  for (double d : h.diag) CHECK(d == doctest::Approx(1.5));
  REQUIRE(h.offdiag.size() == 3);
  CHECK(h.offdiag[0] == doctest::Approx(0.5));
  CHECK(h.offdiag[1] == doctest::Approx(0.2));
  CHECK(h.offdiag[2] == doctest::Approx(0.5));
  CHECK(h.cells == 2);

  const auto fast = eigh_tridiagonal(h);
  const auto dense = dense_oracle(h);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::fabs(fast.values[k] - dense.values[k]) < 1e-12);
}

TEST_CASE("decoupled lattice has spectrum d1 and d2 with multiplicity N") {
  PhaseProfile p;
  SplitMix64 rng(5);
  for (int m = 0; m < 40; ++m) p.phases.push_back(rng.uniform(0.0, kPi));
  const auto eig = eigh_tridiagonal(assemble(p, CellParams{1.0, 2.0, 0.0, false}));
  for (std::size_t k = 0; k < 40; ++k) CHECK(std::fabs(eig.values[k] - 1.0) < 1e-12);
  for (std::size_t k = 40; k < 80; ++k) CHECK(std::fabs(eig.values[k] - 2.0) < 1e-12);
}

TEST_CASE("swapped d1 and d2 are normalized and flagged") {
  const CellParams n = normalized(CellParams{2.0, 1.0, 0.2, false});
  CHECK(n.d1 == 1.0);
  CHECK(n.d2 == 2.0);
  CHECK(n.swapped);
  CHECK_FALSE(normalized(kParams).swapped);
  CHECK_THROWS_AS(normalized(CellParams{NAN, 1.0, 0.2, false}), InvalidSpec);
}

TEST_CASE("on-site chain") {
  OnsiteSequence seq;
  seq.values = {1.0, 2.0};
  const auto h = assemble_onsite(seq, 0.2);
  CHECK(h.diag == std::vector<double>{1.0, 2.0});
  CHECK(h.offdiag == std::vector<double>{0.2});
  const auto eig = eigh_tridiagonal(h);
  CHECK(eig.values[0] == doctest::Approx(1.5 - std::sqrt(0.29)).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(1.5 + std::sqrt(0.29)).epsilon(1e-14));

  seq.values = {2.0, 1.0, 1.0, 2.0, 1.0};
  const auto decoupled = eigh_tridiagonal(assemble_onsite(seq, 0.0));
  CHECK(decoupled.values == std::vector<double>{1.0, 1.0, 1.0, 2.0, 2.0});
  CHECK_THROWS_AS(assemble_onsite(OnsiteSequence{}, 0.2), InvalidSpec);
}

TEST_CASE("fig5-style random chain truncated to 64 sites matches the dense oracle") {
  const auto seq = random_onsite_sequence(1.0, 2.0, 64, 5);
  const auto h = assemble_onsite(seq, 0.2);
  const auto fast = eigh_tridiagonal(h);
  const auto dense = dense_oracle(h);
  for (std::size_t k = 0; k < 64; ++k) CHECK(std::fabs(fast.values[k] - dense.values[k]) < 1e-10);
}
