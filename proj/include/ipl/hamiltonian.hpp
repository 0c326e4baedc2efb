#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ipl/profiles.hpp"

namespace ipl {

/// Spectral content (d1, d2) shared by every cell and the intercell coupling eps.
struct CellParams {
  double d1 = 1.0;
  double d2 = 2.0;
  double eps = 0.2;
  /// Set by normalized() when the caller passed d1 > d2.
  bool swapped = false;

  bool operator==(const CellParams&) const = default;
};

/// Returns params with d1 <= d2, recording a swap instead of rejecting it.
CellParams normalized(CellParams params);

/// One 2x2 isospectral cell A = O^T D O with O the rotation by phi.
struct CellMatrix {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double phi = 0.0;

  double trace() const noexcept { return a11 + a22; }
  double determinant() const noexcept { return a11 * a22 - a12 * a21; }
  /// Ascending eigenvalues from the closed-form 2x2 formula.
  std::array<double, 2> eigenvalues() const noexcept;
};

using Block2 = std::array<std::array<double, 2>, 2>;

CellMatrix cell_matrix(const CellParams& params, double phi);

/// Same cell in the shifted angle psi = phi - pi/4, where it splits into
/// (d1+d2)/2 * 1 plus a traceless part; psi = pi/2 is the SSH limit.
CellMatrix cell_matrix_psi(const CellParams& params, double psi);

/// Traceless part of A in the psi parametrization:
/// (d2-d1)/2 * [[sin 2psi, cos 2psi], [cos 2psi, -sin 2psi]].
Block2 traceless_part(const CellParams& params, double psi);

/// C = (eps/2)(sigma_x + i sigma_y). The imaginary parts cancel, leaving [[0, eps], [0, 0]].
Block2 coupling_block(double eps);

/// Lattice operator stored as its two bands. Sites are 0-based; cell m
/// (0-based) occupies sites 2m and 2m+1.
struct TridiagonalHamiltonian {
  std::vector<double> diag;
  std::vector<double> offdiag;
  int cells = 0;
  CellParams params;
  std::optional<ProfileSpec> provenance;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Blocks A_m on the diagonal, C below and C^T above with open boundaries.
/// Since C has a single nonzero entry the result is exactly tridiagonal.
TridiagonalHamiltonian assemble(const PhaseProfile& profile, const CellParams& params);

/// Uniform chain with the given on-site energies and hopping eps everywhere.
TridiagonalHamiltonian assemble_onsite(const OnsiteSequence& seq, double eps);

}  // namespace ipl
