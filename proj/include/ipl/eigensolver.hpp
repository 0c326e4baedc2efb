#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ipl/hamiltonian.hpp"

namespace ipl {

/// Full eigendecomposition: values ascending, vector(k) pairs with values[k].
struct EigenSystem {
  std::vector<double> values;
  /// Row-major: eigenvector k occupies [k * n, (k + 1) * n).
  std::vector<double> vectors;
  /// max_k ||H v_k - lambda_k v_k||_inf
  double residual_bound = 0.0;
  /// max_jk |<v_j, v_k> - delta_jk|
  double ortho_bound = 0.0;
  /// Number of eigenvectors replaced by their twisted-factorization refinement.
  std::size_t refined = 0;

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> vector(std::size_t k) const noexcept {
    return {vectors.data() + k * size(), size()};
  }
};

struct SolverOptions {
  /// Sweeps allowed per eigenvalue before SolverFailure.
  int max_iterations = 50;
  /// Recompute eigenvectors from a twisted factorization so that exponentially
  /// small tail components keep their sign and relative accuracy.
  bool refine_vectors = true;
};

inline constexpr std::size_t kDenseOracleMaxSize = 256;

/// Implicit QL with Wilkinson shifts and accumulated plane rotations.
EigenSystem eigh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag,
                             const SolverOptions& options = {});
EigenSystem eigh_tridiagonal(const TridiagonalHamiltonian& h, const SolverOptions& options = {});

/// Cyclic Jacobi on the expanded dense matrix. Independent of the QL path;
/// refuses inputs larger than kDenseOracleMaxSize.
EigenSystem dense_oracle(std::span<const double> diag, std::span<const double> offdiag);
EigenSystem dense_oracle(const TridiagonalHamiltonian& h);

/// Scale used by the residual contract: max|diag| + 2 max|offdiag|.
double spectral_scale(std::span<const double> diag, std::span<const double> offdiag);

/// Number of eigenvalues strictly below x, from the signs of the LDL^T pivots of H - x.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, double x);

/// Sign changes between consecutive components whose magnitudes both exceed
/// amplitude_floor * max|v_i|.
int node_count(std::span<const double> v, double amplitude_floor = 0.0);

/// Node count after the diagonal sign gauge that makes every coupling negative.
/// For an unreduced matrix the k-th eigenvector (0-based, ascending) has exactly
/// k such nodes whatever the signs of the couplings; with all couplings positive
/// this equals n - 1 - node_count(v).
int sturm_node_count(std::span<const double> v, std::span<const double> offdiag,
                     double amplitude_floor = 0.0);

/// ||H v - lambda v||_inf
double residual_inf(std::span<const double> diag, std::span<const double> offdiag,
                    double lambda, std::span<const double> v);

}  // namespace ipl
