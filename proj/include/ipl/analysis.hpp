#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipl/eigensolver.hpp"
#include "ipl/hamiltonian.hpp"
#include "ipl/measures.hpp"

namespace ipl {

/// Half-open range of state indices [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(std::size_t k) const noexcept { return k >= begin && k < end; }
  bool operator==(const IndexRange&) const = default;
};

struct BandGap {
  double width = 0.0;
  /// Index of the first state above the gap.
  std::size_t boundary = 0;
};

struct BandPartition {
  std::vector<IndexRange> bands;
  std::vector<BandGap> gaps;
  /// No spacing cleared the gap threshold.
  bool low_confidence = false;
  std::vector<std::string> warnings;

  std::size_t band_of(std::size_t state) const;
};

enum class Subdomain : char { A = 'A', B = 'B', C = 'C' };

/// Position of the delocalized span inside one band.
struct BandCrossovers {
  std::optional<std::size_t> first_delocalized;
  std::optional<std::size_t> last_delocalized;
  /// Localized states found strictly inside the B span (reported, not relabeled).
  std::size_t localized_inside_b = 0;
};

struct SubdomainLabels {
  std::vector<Subdomain> labels;
  std::vector<bool> localized;
  std::vector<BandCrossovers> crossovers;  // one per band

  std::size_t count(Subdomain s, const IndexRange& range) const;
};

struct Multiplet {
  std::size_t first = 0;
  std::size_t size = 0;
  /// Node counts of the members, when supplied to detect_multiplets.
  std::vector<int> nodes;

  std::size_t last() const noexcept { return first + size - 1; }
};

struct MultipletReport {
  std::vector<Multiplet> groups;

  /// Index into `groups` of the group containing `state`.
  std::size_t group_of(std::size_t state) const;
};

/// Per-row renormalized magnitudes |psi_i| / max_i |psi_i|; row 0 is the
/// highest selected state.
struct EigenstateMap {
  std::size_t sites = 0;
  std::vector<std::size_t> states;
  std::vector<double> pixels;

  std::size_t rows() const noexcept { return states.size(); }
  std::span<const double> row(std::size_t r) const noexcept {
    return {pixels.data() + r * sites, sites};
  }
};

struct AnalysisOptions {
  /// Edge probability below which a state is said not to reach that edge.
  double tau = 1e-6;
  /// Near-degeneracy threshold as a fraction of the band's median spacing.
  double delta_rel = 0.05;
  /// Gap threshold as a multiple of the median spacing.
  double gamma = 20.0;
  int nb = kDefaultEdgeWindow;
  double node_floor = 1e-8;

  bool operator==(const AnalysisOptions&) const = default;
};

/// Splits wherever a spacing exceeds gamma * median spacing.
BandPartition detect_bands(std::span<const double> sorted_values, double gamma = 20.0);

/// Localized iff min(w_left, w_right) < tau. Within each band, A is the
/// localized prefix, C the localized suffix and B everything from the first
/// to the last delocalized state. A band with no delocalized state is all A.
SubdomainLabels classify_states(std::span<const double> w_left, std::span<const double> w_right,
                                const BandPartition& bands, double tau);
SubdomainLabels classify_states(const EigenSystem& eig, const BandPartition& bands, int nb,
                                double tau);

double delocalized_fraction(const SubdomainLabels& labels);

MultipletReport detect_multiplets(const SpacingSpectrum& spacings, const BandPartition& bands,
                                  double delta_rel, std::span<const int> nodes = {});

EigenstateMap eigenstate_map(const EigenSystem& eig, IndexRange selection);

/// Direction reversals of a curve after a centred moving average of `window`
/// points. A reversal only counts once the curve has moved back by at least
/// `hysteresis` times the smoothed range, so nearly flat stretches register
/// as flat rather than as a sequence of tiny wiggles.
int monotonicity_changes(std::span<const double> curve, std::size_t window = 5,
                         double hysteresis = 0.1);

/// Gauge-corrected node count of `v` restricted to the lattice half that holds
/// its center of mass, i.e. the local degree of excitation of a state confined
/// to one half. Tail oscillations inherited from the other half are ignored.
int half_lattice_node_count(std::span<const double> v, std::span<const double> offdiag,
                            double amplitude_floor = 0.0);

/// Everything the CSV/summary writers need about one diagonalized lattice.
struct SpectralReport {
  std::vector<double> values;
  SpacingSpectrum spacing;
  std::vector<StateMeasures> states;
  BandPartition bands;
  SubdomainLabels labels;
  MultipletReport multiplets;
  double delocalized_fraction = 0.0;
  AnalysisOptions options;
};

/// Node counts in the report are gauge-corrected (sturm_node_count) with
/// options.node_floor, i.e. they count nodes of the envelope.
SpectralReport analyze(const TridiagonalHamiltonian& h, const EigenSystem& eig,
                       const AnalysisOptions& options = {});

}  // namespace ipl
