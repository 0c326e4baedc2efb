#include "ipl/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "ipl/errors.hpp"

namespace ipl {

namespace {

using Quad = __float128;

constexpr double kDeflationTol = 1e-15;
// Neighbouring eigenvalues closer than this (times the spectral scale) are
// refined in quad precision before their eigenvectors are formed.
constexpr double kClusterGap = 1e-5;
constexpr double kAcceptResidual = 1e-12;
constexpr double kAcceptOverlap = 1e-12;
constexpr double kSignThreshold = 1e-12;

void check_shapes(std::span<const double> diag, std::span<const double> offdiag) {
  if (diag.empty()) {
    throw InvalidArgument("eigensolver needs at least one site");
  }
  if (offdiag.size() + 1 != diag.size()) {
    throw InvalidArgument("offdiag must have exactly one entry fewer than diag");
  }
  for (double x : diag) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite diagonal entry");
  }
  for (double x : offdiag) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite off-diagonal entry");
  }
}

template <class T>
T abs_t(T x) {
  return x < T(0) ? -x : x;
}

// Row-major n x n; row k is eigenvector k.
struct Basis {
  std::size_t n = 0;
  std::vector<double> rows;

  double* row(std::size_t k) { return rows.data() + k * n; }
  const double* row(std::size_t k) const { return rows.data() + k * n; }
};

// Implicit QL with Wilkinson shift (tql2 lineage). Rotations are applied to
// rows of `basis` so that both touched eigenvectors stay contiguous.
void implicit_ql(std::vector<double>& d, std::vector<double>& e, Basis& basis, int max_iterations) {
  const std::size_t n = d.size();
  e.push_back(0.0);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double tol = kDeflationTol * (std::fabs(d[m]) + std::fabs(d[m + 1]));
        if (std::fabs(e[m]) <= tol || std::fabs(e[m]) <= std::numeric_limits<double>::min()) {
          break;
        }
      }
      if (m == l) break;
      if (iter++ == max_iterations) {
        throw SolverFailure("implicit QL did not converge for eigenvalue index " + std::to_string(l),
                            l);
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;

        double* zi = basis.row(i);
        double* zj = basis.row(i + 1);
        for (std::size_t k = 0; k < n; ++k) {
          const double t = zj[k];
          zj[k] = s * zi[k] + c * t;
          zi[k] = c * zi[k] - s * t;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  e.pop_back();
}

void sort_ascending(std::vector<double>& values, Basis& basis) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted_values(n);
  Basis sorted{n, std::vector<double>(n * n)};
  for (std::size_t k = 0; k < n; ++k) {
    sorted_values[k] = values[order[k]];
    std::copy_n(basis.row(order[k]), n, sorted.row(k));
  }
  values = std::move(sorted_values);
  basis = std::move(sorted);
}

template <class T>
std::size_t sturm_count_t(std::span<const double> diag, std::span<const double> offdiag, T x) {
  const T pivmin = T(std::numeric_limits<double>::min());
  std::size_t negatives = 0;
  T q = T(diag[0]) - x;
  for (std::size_t i = 0;; ++i) {
    if (abs_t(q) < pivmin) q = -pivmin;
    if (q < T(0)) ++negatives;
    if (i + 1 == diag.size()) break;
    const T e = T(offdiag[i]);
    q = (T(diag[i + 1]) - x) - e * e / q;
  }
  return negatives;
}

// Bisection on the Sturm count in quad precision for the eigenvalue with
// 0-based index k, starting from a double-precision estimate.
Quad bisect_eigenvalue(std::span<const double> diag, std::span<const double> offdiag,
                       std::size_t k, double estimate, double scale) {
  Quad step = Quad(1e-13 * scale + 1e-300);
  Quad lo = Quad(estimate) - step;
  while (sturm_count_t<Quad>(diag, offdiag, lo) > k) {
    step *= 2;
    lo -= step;
  }
  step = Quad(1e-13 * scale + 1e-300);
  Quad hi = Quad(estimate) + step;
  while (sturm_count_t<Quad>(diag, offdiag, hi) < k + 1) {
    step *= 2;
    hi += step;
  }
  const Quad resolution = Quad(1e-32) * Quad(scale);
  for (int it = 0; it < 256; ++it) {
    const Quad mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi || hi - lo <= resolution) break;
    if (sturm_count_t<Quad>(diag, offdiag, mid) <= k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

// Eigenvector of H at a (very accurate) eigenvalue from the twisted
// factorization H - lambda = N_r Delta_r N_r^T. Components are generated by
// two-term multiplicative recurrences outward from the twist index, so every
// component, however small, is computed to high relative accuracy.
template <class T>
std::vector<double> twisted_vector(std::span<const double> diag, std::span<const double> offdiag,
                                   T lambda, std::optional<std::size_t> twist) {
  const std::size_t n = diag.size();
  const T pivmin = T(std::numeric_limits<double>::min());
  auto guard = [&](T q) { return abs_t(q) < pivmin ? -pivmin : q; };

  std::vector<T> lower(n);  // pivots of the top-down LDL^T
  std::vector<T> upper(n);  // pivots of the bottom-up UDU^T
  lower[0] = guard(T(diag[0]) - lambda);
  for (std::size_t i = 1; i < n; ++i) {
    const T e = T(offdiag[i - 1]);
    lower[i] = guard(T(diag[i]) - lambda - e * e / lower[i - 1]);
  }
  upper[n - 1] = guard(T(diag[n - 1]) - lambda);
  for (std::size_t i = n - 1; i-- > 0;) {
    const T e = T(offdiag[i]);
    upper[i] = guard(T(diag[i]) - lambda - e * e / upper[i + 1]);
  }

  std::size_t r = 0;
  if (twist) {
    r = *twist;
  } else {
    T best = T(0);
    for (std::size_t i = 0; i < n; ++i) {
      const T gamma = abs_t(lower[i] + upper[i] - (T(diag[i]) - lambda));
      if (i == 0 || gamma < best) {
        best = gamma;
        r = i;
      }
    }
  }

  std::vector<T> z(n, T(0));
  z[r] = T(1);
  for (std::size_t i = r; i-- > 0;) {
    z[i] = -(T(offdiag[i]) * z[i + 1]) / lower[i];
  }
  for (std::size_t i = r; i + 1 < n; ++i) {
    z[i + 1] = -(T(offdiag[i]) * z[i]) / upper[i + 1];
  }

  T zmax = T(0);
  for (const T& x : z) zmax = std::max(zmax, abs_t(x));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<double>(z[i] / zmax);
  }
  double norm2 = 0.0;
  for (double x : out) norm2 += x * x;
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : out) x *= inv;
  return out;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

std::size_t peak_index(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::fabs(v[i]) > std::fabs(v[best])) best = i;
  }
  return best;
}

bool orthonormal_set(const std::vector<std::vector<double>>& vs) {
  const std::size_t n = vs.empty() ? 0 : vs.front().size();
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      if (std::fabs(dot(vs[a].data(), vs[b].data(), n)) > kAcceptOverlap) return false;
    }
  }
  return true;
}

// Replaces QL eigenvectors by twisted-factorization vectors where this can be
// verified to keep the residual and orthogonality contracts; clusters that are
// degenerate even in quad precision keep the QL basis.
std::size_t refine_basis(std::span<const double> diag, std::span<const double> offdiag,
                         const std::vector<double>& values, Basis& basis) {
  const std::size_t n = values.size();
  if (n < 2) return 0;
  const double scale = spectral_scale(diag, offdiag);
  const double gap_tol = kClusterGap * scale;
  const double accept = kAcceptResidual * std::max(scale, std::numeric_limits<double>::min());

  auto accepted = [&](std::size_t k, const std::vector<double>& v) {
    return residual_inf(diag, offdiag, values[k], v) <= accept;
  };

  std::size_t refined = 0;
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && values[end] - values[end - 1] < gap_tol) ++end;

    if (end - begin == 1) {
      auto v = twisted_vector<double>(diag, offdiag, values[begin], std::nullopt);
      if (accepted(begin, v)) {
        std::copy(v.begin(), v.end(), basis.row(begin));
        ++refined;
      }
    } else {
      std::vector<Quad> lambdas;
      for (std::size_t k = begin; k < end; ++k) {
        lambdas.push_back(bisect_eigenvalue(diag, offdiag, k, values[k], scale));
      }
      auto attempt = [&](bool twist_at_peak) {
        std::vector<std::vector<double>> vs;
        for (std::size_t k = begin; k < end; ++k) {
          std::optional<std::size_t> twist;
          if (twist_at_peak) twist = peak_index(basis.row(k), n);
          vs.push_back(twisted_vector<Quad>(diag, offdiag, lambdas[k - begin], twist));
          if (!accepted(k, vs.back())) return std::optional<std::vector<std::vector<double>>>{};
        }
        if (!orthonormal_set(vs)) return std::optional<std::vector<std::vector<double>>>{};
        return std::optional{std::move(vs)};
      };
      auto vs = attempt(false);
      if (!vs) vs = attempt(true);
      if (vs) {
        for (std::size_t k = begin; k < end; ++k) {
          std::copy((*vs)[k - begin].begin(), (*vs)[k - begin].end(), basis.row(k));
        }
        refined += end - begin;
      }
    }
    begin = end;
  }
  return refined;
}

void fix_signs(Basis& basis) {
  for (std::size_t k = 0; k < basis.n; ++k) {
    double* v = basis.row(k);
    for (std::size_t i = 0; i < basis.n; ++i) {
      if (std::fabs(v[i]) > kSignThreshold) {
        if (v[i] < 0.0) {
          for (std::size_t j = 0; j < basis.n; ++j) v[j] = -v[j];
        }
        break;
      }
    }
  }
}

double compute_ortho_bound(const Basis& basis) {
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.n; ++a) {
    for (std::size_t b = a; b < basis.n; ++b) {
      const double target = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(dot(basis.row(a), basis.row(b), basis.n) - target));
    }
  }
  return worst;
}

EigenSystem finish(std::span<const double> diag, std::span<const double> offdiag,
                   std::vector<double> values, Basis basis, std::size_t refined) {
  fix_signs(basis);
  EigenSystem sys;
  sys.refined = refined;
  for (std::size_t k = 0; k < values.size(); ++k) {
    sys.residual_bound = std::max(
        sys.residual_bound, residual_inf(diag, offdiag, values[k], {basis.row(k), basis.n}));
  }
  sys.ortho_bound = compute_ortho_bound(basis);
  sys.values = std::move(values);
  sys.vectors = std::move(basis.rows);
  return sys;
}

Basis identity_basis(std::size_t n) {
  Basis basis{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) basis.rows[i * n + i] = 1.0;
  return basis;
}

}  // namespace

double spectral_scale(std::span<const double> diag, std::span<const double> offdiag) {
  double dmax = 0.0;
  double emax = 0.0;
  for (double x : diag) dmax = std::max(dmax, std::fabs(x));
  for (double x : offdiag) emax = std::max(emax, std::fabs(x));
  return dmax + 2.0 * emax;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, double x) {
  check_shapes(diag, offdiag);
  return sturm_count_t<double>(diag, offdiag, x);
}

double residual_inf(std::span<const double> diag, std::span<const double> offdiag, double lambda,
                    std::span<const double> v) {
  const std::size_t n = diag.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double hv = (diag[i] - lambda) * v[i];
    if (i > 0) hv += offdiag[i - 1] * v[i - 1];
    if (i + 1 < n) hv += offdiag[i] * v[i + 1];
    worst = std::max(worst, std::fabs(hv));
  }
  return worst;
}

EigenSystem eigh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag,
                             const SolverOptions& options) {
  check_shapes(diag, offdiag);
  const std::size_t n = diag.size();
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(offdiag.begin(), offdiag.end());
  Basis basis = identity_basis(n);

  implicit_ql(d, e, basis, options.max_iterations);
  sort_ascending(d, basis);

  if (!options.refine_vectors) {
    return finish(diag, offdiag, std::move(d), std::move(basis), 0);
  }
  Basis ql_basis = basis;
  const std::size_t refined = refine_basis(diag, offdiag, d, basis);
  EigenSystem sys = finish(diag, offdiag, d, std::move(basis), refined);
  if (sys.ortho_bound > 1e-10) {
    // Refined vectors from different clusters interfered; the QL basis is
    // orthonormal by construction.
    return finish(diag, offdiag, std::move(d), std::move(ql_basis), 0);
  }
  return sys;
}

EigenSystem eigh_tridiagonal(const TridiagonalHamiltonian& h, const SolverOptions& options) {
  return eigh_tridiagonal(h.diag, h.offdiag, options);
}

EigenSystem dense_oracle(std::span<const double> diag, std::span<const double> offdiag) {
  check_shapes(diag, offdiag);
  const std::size_t n = diag.size();
  if (n > kDenseOracleMaxSize) {
    throw InvalidArgument("dense oracle refused: " + std::to_string(n) + " sites exceeds the " +
                          std::to_string(kDenseOracleMaxSize) + "-site limit");
  }

  std::vector<double> a(n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) at(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    at(i, i + 1) = offdiag[i];
    at(i + 1, i) = offdiag[i];
  }
  // Columns of v are eigenvectors.
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    }
    if (std::sqrt(off) <= 1e-18 * frob || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<double> values(n);
  Basis basis{n, std::vector<double>(n * n)};
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = at(k, k);
    for (std::size_t i = 0; i < n; ++i) basis.rows[k * n + i] = v[i * n + k];
  }
  sort_ascending(values, basis);
  return finish(diag, offdiag, std::move(values), std::move(basis), 0);
}

EigenSystem dense_oracle(const TridiagonalHamiltonian& h) { return dense_oracle(h.diag, h.offdiag); }

int node_count(std::span<const double> v, double amplitude_floor) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::fabs(x));
  const double threshold = amplitude_floor * vmax;
  int nodes = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (std::fabs(v[i]) > threshold && std::fabs(v[i + 1]) > threshold &&
        std::signbit(v[i]) != std::signbit(v[i + 1])) {
      ++nodes;
    }
  }
  return nodes;
}

int sturm_node_count(std::span<const double> v, std::span<const double> offdiag,
                     double amplitude_floor) {
  if (offdiag.size() + 1 != v.size()) {
    throw InvalidArgument("offdiag length must be vector length - 1");
  }
  std::vector<double> gauged(v.begin(), v.end());
  double sign = 1.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(offdiag[i] < 0.0)) sign = -sign;
    gauged[i + 1] *= sign;
  }
  return node_count(gauged, amplitude_floor);
}

}  // namespace ipl
