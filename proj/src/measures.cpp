#include "ipl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ipl/errors.hpp"

namespace ipl {

namespace {

void require_normalized(std::span<const double> psi, const char* what) {
  if (psi.empty()) {
    throw ContractViolation(std::string(what) + ": empty state vector");
  }
  double norm2 = 0.0;
  for (double x : psi) norm2 += x * x;
  if (std::fabs(std::sqrt(norm2) - 1.0) > kNormTolerance) {
    throw ContractViolation(std::string(what) + ": state is not normalized (|psi| = " +
                            std::to_string(std::sqrt(norm2)) + ")");
  }
}

}  // namespace

double ipr(std::span<const double> psi) {
  require_normalized(psi, "ipr");
  double r = 0.0;
  for (double x : psi) {
    const double p = x * x;
    r += p * p;
  }
  return r;
}

double cfs(std::span<const double> psi) {
  require_normalized(psi, "cfs");
  double cumulative = 0.0;
  double re = 0.0;
  double im = 0.0;
  for (double x : psi) {
    cumulative += x * x;
    const double angle = 2.0 * std::numbers::pi * cumulative;
    re += std::cos(angle) + 1.0;
    im += std::sin(angle);
  }
  const double f = std::hypot(re, im) / (2.0 * static_cast<double>(psi.size()));
  return std::min(f, 1.0);
}

double center_of_mass(std::span<const double> psi) {
  double com = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    com += static_cast<double>(i + 1) * psi[i] * psi[i];
  }
  return com;
}

std::pair<double, double> edge_weights(std::span<const double> psi, int window) {
  const auto n = static_cast<int>(psi.size());
  if (window < 1 || 2 * window > n) {
    throw InvalidArgument("edge window " + std::to_string(window) + " outside [1, " +
                          std::to_string(n / 2) + "]");
  }
  double left = 0.0;
  double right = 0.0;
  for (int i = 0; i < window; ++i) {
    left += psi[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(i)];
    const auto j = static_cast<std::size_t>(n - 1 - i);
    right += psi[j] * psi[j];
  }
  return {left, right};
}

SpacingSpectrum spacing_spectrum(std::span<const double> sorted_values) {
  SpacingSpectrum out;
  if (sorted_values.size() < 2) return out;
  out.spacings.resize(sorted_values.size() - 1);
  for (std::size_t k = 0; k + 1 < sorted_values.size(); ++k) {
    const double s = sorted_values[k + 1] - sorted_values[k];
    if (s < -1e-12) {
      throw ContractViolation("spacing_spectrum: eigenvalues not ascending at index " +
                              std::to_string(k));
    }
    out.spacings[k] = std::max(s, 0.0);
  }
  return out;
}

}  // namespace ipl
