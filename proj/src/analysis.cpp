#include "ipl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "ipl/errors.hpp"

namespace ipl {

namespace {

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(xs.size() / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  if (xs.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(xs.begin(), mid);
  return 0.5 * (lower + upper);
}

// Relative margin by which the largest spacing must beat the median before a
// low-confidence split is made at it.
constexpr double kDistinctLargest = 1e-6;
// Spacings below this fraction of the spectral width never count as gaps.
constexpr double kGapFloor = 1e-9;

}  // namespace

std::size_t BandPartition::band_of(std::size_t state) const {
  for (std::size_t b = 0; b < bands.size(); ++b) {
    if (bands[b].contains(state)) return b;
  }
  throw InvalidArgument("state " + std::to_string(state) + " not covered by any band");
}

std::size_t SubdomainLabels::count(Subdomain s, const IndexRange& range) const {
  std::size_t c = 0;
  for (std::size_t k = range.begin; k < range.end; ++k) c += labels[k] == s;
  return c;
}

std::size_t MultipletReport::group_of(std::size_t state) const {
  auto it = std::upper_bound(groups.begin(), groups.end(), state,
                             [](std::size_t s, const Multiplet& g) { return s < g.first; });
  if (it == groups.begin()) throw InvalidArgument("state precedes every multiplet");
  --it;
  if (state > it->last()) throw InvalidArgument("state not covered by any multiplet");
  return static_cast<std::size_t>(it - groups.begin());
}

BandPartition detect_bands(std::span<const double> sorted_values, double gamma) {
  BandPartition out;
  const std::size_t n = sorted_values.size();
  if (n < 2) {
    out.bands.push_back({0, n});
    out.low_confidence = true;
    return out;
  }
  const auto spacing = spacing_spectrum(sorted_values).spacings;
  const double width = sorted_values.back() - sorted_values.front();
  const double threshold = std::max(gamma * median(spacing), kGapFloor * width);

  std::vector<std::size_t> cuts;
  for (std::size_t k = 0; k < spacing.size(); ++k) {
    if (spacing[k] > threshold) cuts.push_back(k + 1);
  }
  if (cuts.empty()) {
    out.low_confidence = true;
    const auto largest = std::max_element(spacing.begin(), spacing.end());
    if (*largest > (1.0 + kDistinctLargest) * median(spacing) && *largest > 0.0) {
      cuts.push_back(static_cast<std::size_t>(largest - spacing.begin()) + 1);
    }
  }

  std::size_t begin = 0;
  for (std::size_t cut : cuts) {
    out.bands.push_back({begin, cut});
    out.gaps.push_back({spacing[cut - 1], cut});
    begin = cut;
  }
  out.bands.push_back({begin, n});

  if (out.bands.size() != 2) {
    out.warnings.push_back("expected 2 bands for two-site cells, found " +
                           std::to_string(out.bands.size()));
  }
  return out;
}

SubdomainLabels classify_states(std::span<const double> w_left, std::span<const double> w_right,
                                const BandPartition& bands, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw InvalidArgument("tau must lie in (0, 1)");
  }
  if (w_left.size() != w_right.size()) {
    throw InvalidArgument("edge weight arrays differ in length");
  }
  const std::size_t n = w_left.size();
  SubdomainLabels out;
  out.labels.assign(n, Subdomain::A);
  out.localized.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.localized[k] = std::min(w_left[k], w_right[k]) < tau;
  }

  for (const IndexRange& band : bands.bands) {
    BandCrossovers cross;
    for (std::size_t k = band.begin; k < band.end; ++k) {
      if (!out.localized[k]) {
        if (!cross.first_delocalized) cross.first_delocalized = k;
        cross.last_delocalized = k;
      }
    }
    if (cross.first_delocalized) {
      for (std::size_t k = *cross.first_delocalized; k <= *cross.last_delocalized; ++k) {
        out.labels[k] = Subdomain::B;
        cross.localized_inside_b += out.localized[k] ? 1 : 0;
      }
      for (std::size_t k = *cross.last_delocalized + 1; k < band.end; ++k) {
        out.labels[k] = Subdomain::C;
      }
    }
    out.crossovers.push_back(cross);
  }
  return out;
}

SubdomainLabels classify_states(const EigenSystem& eig, const BandPartition& bands, int nb,
                                double tau) {
  std::vector<double> left(eig.size());
  std::vector<double> right(eig.size());
  for (std::size_t k = 0; k < eig.size(); ++k) {
    std::tie(left[k], right[k]) = edge_weights(eig.vector(k), nb);
  }
  return classify_states(left, right, bands, tau);
}

double delocalized_fraction(const SubdomainLabels& labels) {
  if (labels.localized.empty()) return 0.0;
  const auto delocalized = std::count(labels.localized.begin(), labels.localized.end(), false);
  return static_cast<double>(delocalized) / static_cast<double>(labels.localized.size());
}

MultipletReport detect_multiplets(const SpacingSpectrum& spacings, const BandPartition& bands,
                                  double delta_rel, std::span<const int> nodes) {
  if (!(delta_rel > 0.0)) {
    throw InvalidArgument("delta_rel must be positive");
  }
  MultipletReport out;
  const auto& s = spacings.spacings;
  for (const IndexRange& band : bands.bands) {
    if (band.size() == 0) continue;
    std::vector<double> inside(s.begin() + static_cast<std::ptrdiff_t>(band.begin),
                               s.begin() + static_cast<std::ptrdiff_t>(band.end - 1));
    const double threshold = delta_rel * median(inside);

    Multiplet current{band.begin, 1, {}};
    for (std::size_t k = band.begin; k + 1 < band.end; ++k) {
      if (s[k] < threshold) {
        ++current.size;
      } else {
        out.groups.push_back(current);
        current = {k + 1, 1, {}};
      }
    }
    out.groups.push_back(current);
  }
  if (!nodes.empty()) {
    for (auto& g : out.groups) {
      g.nodes.assign(nodes.begin() + static_cast<std::ptrdiff_t>(g.first),
                     nodes.begin() + static_cast<std::ptrdiff_t>(g.first + g.size));
    }
  }
  return out;
}

EigenstateMap eigenstate_map(const EigenSystem& eig, IndexRange selection) {
  if (selection.size() == 0 || selection.begin >= selection.end) {
    throw InvalidArgument("eigenstate map needs a nonempty selection");
  }
  if (selection.end > eig.size()) {
    throw InvalidArgument("eigenstate map selection exceeds the spectrum");
  }
  EigenstateMap map;
  map.sites = eig.size();
  map.pixels.reserve(selection.size() * map.sites);
  for (std::size_t k = selection.end; k-- > selection.begin;) {
    map.states.push_back(k);
    const auto v = eig.vector(k);
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::fabs(x));
    for (double x : v) map.pixels.push_back(vmax > 0.0 ? std::fabs(x) / vmax : 0.0);
  }
  return map;
}

int monotonicity_changes(std::span<const double> curve, std::size_t window, double hysteresis) {
  if (window == 0 || curve.size() < window) return 0;
  std::vector<double> smooth(curve.size() - window + 1);
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < window; ++j) sum += curve[i + j];
    smooth[i] = sum / static_cast<double>(window);
  }
  const auto [lo_it, hi_it] = std::minmax_element(smooth.begin(), smooth.end());
  const double step = hysteresis * (*hi_it - *lo_it);
  if (!(step > 0.0)) return 0;

  int direction = 0;  // +1 rising, -1 falling
  int changes = 0;
  double lo = smooth.front();
  double hi = smooth.front();
  double extreme = smooth.front();
  for (double x : smooth) {
    if (direction == 0) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      if (x - lo >= step) {
        direction = 1;
        extreme = x;
      } else if (hi - x >= step) {
        direction = -1;
        extreme = x;
      }
    } else if (direction == 1) {
      if (x > extreme) {
        extreme = x;
      } else if (extreme - x >= step) {
        ++changes;
        direction = -1;
        extreme = x;
      }
    } else {
      if (x < extreme) {
        extreme = x;
      } else if (x - extreme >= step) {
        ++changes;
        direction = 1;
        extreme = x;
      }
    }
  }
  return changes;
}

int half_lattice_node_count(std::span<const double> v, std::span<const double> offdiag,
                            double amplitude_floor) {
  const std::size_t n = v.size();
  if (n < 2 || offdiag.size() + 1 != n) {
    throw InvalidArgument("half_lattice_node_count: size mismatch");
  }
  const std::size_t half = n / 2;
  const bool left = center_of_mass(v) < (static_cast<double>(n) + 1.0) / 2.0;
  const std::size_t begin = left ? 0 : half;
  const std::size_t end = left ? half : n;
  return sturm_node_count(v.subspan(begin, end - begin), offdiag.subspan(begin, end - begin - 1),
                          amplitude_floor);
}

SpectralReport analyze(const TridiagonalHamiltonian& h, const EigenSystem& eig,
                       const AnalysisOptions& options) {
  SpectralReport report;
  report.options = options;
  report.values = eig.values;
  report.spacing = spacing_spectrum(eig.values);
  report.bands = detect_bands(eig.values, options.gamma);

  const std::size_t n = eig.size();
  report.states.resize(n);
  std::vector<double> left(n);
  std::vector<double> right(n);
  std::vector<int> nodes(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = eig.vector(k);
    StateMeasures& m = report.states[k];
    m.ipr = ipr(v);
    m.cfs = cfs(v);
    m.com = center_of_mass(v);
    std::tie(m.w_left, m.w_right) = edge_weights(v, options.nb);
    m.nodes = sturm_node_count(v, h.offdiag, options.node_floor);
    left[k] = m.w_left;
    right[k] = m.w_right;
    nodes[k] = m.nodes;
  }
  report.labels = classify_states(left, right, report.bands, options.tau);
  report.delocalized_fraction = delocalized_fraction(report.labels);
  report.multiplets = detect_multiplets(report.spacing, report.bands, options.delta_rel, nodes);
  return report;
}

}  // namespace ipl
