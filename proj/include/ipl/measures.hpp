#pragma once

#include <span>
#include <utility>
#include <vector>

namespace ipl {

/// Localization diagnostics of one eigenstate.
struct StateMeasures {
  double ipr = 0.0;
  double cfs = 0.0;
  double com = 0.0;  // 1-based site index
  double w_left = 0.0;
  double w_right = 0.0;
  int nodes = 0;
};

/// Consecutive eigenvalue differences s_k = lambda_{k+1} - lambda_k.
struct SpacingSpectrum {
  std::vector<double> spacings;
};

inline constexpr double kNormTolerance = 1e-10;
inline constexpr int kDefaultEdgeWindow = 2;

/// Inverse participation ratio sum |psi_i|^4; in [1/N, 1].
double ipr(std::span<const double> psi);

/// Cumulative Friedel sum f = |sum_n (exp(2 pi i P_n) + 1)| / (2N),
/// P_n = sum_{m<=n} |psi_m|^2.
double cfs(std::span<const double> psi);

/// sum_i i |psi_i|^2 with 1-based i.
double center_of_mass(std::span<const double> psi);

/// Probability in the first and last `window` sites.
std::pair<double, double> edge_weights(std::span<const double> psi, int window);

SpacingSpectrum spacing_spectrum(std::span<const double> sorted_values);

}  // namespace ipl
