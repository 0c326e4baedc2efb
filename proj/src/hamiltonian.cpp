#include "ipl/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "ipl/errors.hpp"

namespace ipl {

CellParams normalized(CellParams params) {
  if (!std::isfinite(params.d1) || !std::isfinite(params.d2) || !std::isfinite(params.eps)) {
    throw InvalidSpec("cell parameters must be finite");
  }
  if (params.d1 > params.d2) {
    std::swap(params.d1, params.d2);
    params.swapped = true;
  }
  return params;
}

std::array<double, 2> CellMatrix::eigenvalues() const noexcept {
  const double mean = 0.5 * (a11 + a22);
  const double half_diff = 0.5 * (a11 - a22);
  const double radius = std::hypot(half_diff, a12);
  return {mean - radius, mean + radius};
}

CellMatrix cell_matrix(const CellParams& params, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double off = (params.d2 - params.d1) * s * c;
  return CellMatrix{
      .a11 = params.d1 * c * c + params.d2 * s * s,
      .a12 = off,
      .a21 = off,
      .a22 = params.d1 * s * s + params.d2 * c * c,
      .phi = phi,
  };
}

CellMatrix cell_matrix_psi(const CellParams& params, double psi) {
  return cell_matrix(params, psi + std::numbers::pi / 4.0);
}

Block2 traceless_part(const CellParams& params, double psi) {
  const double half = 0.5 * (params.d2 - params.d1);
  const double s2 = std::sin(2.0 * psi);
  const double c2 = std::cos(2.0 * psi);
  return {{{half * s2, half * c2}, {half * c2, -half * s2}}};
}

Block2 coupling_block(double eps) {
  // sigma_x = [[0,1],[1,0]], i*sigma_y = [[0,1],[-1,0]]; their sum is [[0,2],[0,0]].
  const Block2 sigma_x{{{0.0, 1.0}, {1.0, 0.0}}};
  const Block2 i_sigma_y{{{0.0, 1.0}, {-1.0, 0.0}}};
  Block2 c{};
  for (int r = 0; r < 2; ++r) {
    for (int k = 0; k < 2; ++k) {
      c[r][k] = 0.5 * eps * (sigma_x[r][k] + i_sigma_y[r][k]);
    }
  }
  return c;
}

TridiagonalHamiltonian assemble(const PhaseProfile& profile, const CellParams& params) {
  if (profile.phases.empty()) {
    throw InvalidSpec("cannot assemble a lattice from an empty profile");
  }
  const CellParams p = normalized(params);
  const std::size_t cells = profile.phases.size();

  TridiagonalHamiltonian h;
  h.cells = static_cast<int>(cells);
  h.params = p;
  h.provenance = profile.spec;
  h.diag.resize(2 * cells);
  h.offdiag.resize(2 * cells - 1);

  // Block (m+1, m) is C; its only entry [0][1] couples site 2m+1 to site 2m+2.
  const double link = coupling_block(p.eps)[0][1];
  for (std::size_t m = 0; m < cells; ++m) {
    const CellMatrix a = cell_matrix(p, profile.phases[m]);
    h.diag[2 * m] = a.a11;
    h.diag[2 * m + 1] = a.a22;
    h.offdiag[2 * m] = a.a12;
    if (m + 1 < cells) {
      h.offdiag[2 * m + 1] = link;
    }
  }
  return h;
}

TridiagonalHamiltonian assemble_onsite(const OnsiteSequence& seq, double eps) {
  if (seq.values.empty()) {
    throw InvalidSpec("cannot assemble a chain from an empty on-site sequence");
  }
  TridiagonalHamiltonian h;
  h.diag = seq.values;
  h.offdiag.assign(seq.values.size() - 1, eps);
  h.cells = static_cast<int>(seq.values.size() / 2);
  h.params.eps = eps;
  return h;
}

}  // namespace ipl
