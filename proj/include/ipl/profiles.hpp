#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ipl {

enum class ProfileKind { linear, revolutions, constant, random_phase, random_onsite };

std::string_view to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/// Blueprint of a lattice design. Angles are radians.
///
/// `linear` covers both the symmetric grid (center pi/4) and asymmetric
/// intervals; `lf` is informational for it and equals (pi/4) / (phi_end - phi_start).
/// `random_onsite` carries no phases: it randomizes the diagonal instead and
/// uses `cells` only to fix the site count 2 * cells.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::linear;
  int cells = 0;
  double phi_start = 0.0;
  double phi_end = 0.0;
  double lf = 0.0;
  int revolutions = 0;
  std::uint64_t seed = 0;

  bool operator==(const ProfileSpec&) const = default;
};

struct PhaseProfile {
  std::vector<double> phases;
  ProfileSpec spec;

  std::size_t size() const noexcept { return phases.size(); }
};

/// Random on-site energies for the comparison lattice; every entry is d1 or d2.
struct OnsiteSequence {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

/// Phase interval length covered by a linear grid with scaling factor `lf`.
double interval_from_lf(double lf);

PhaseProfile linear_profile(double center, double lf, int cells);
PhaseProfile asymmetric_profile(double phi_start, double phi_end, int cells);
PhaseProfile constant_profile(double phi, int cells);

/// k up-and-down traversals of [phi_min, phi_max], sampled from a triangle
/// wave at t = (m-1)/(N-1). Starts and ends at phi_min.
PhaseProfile revolution_profile(double phi_min, double phi_max, int revolutions, int cells);

PhaseProfile random_phase_profile(double phi_min, double phi_max, int cells, std::uint64_t seed);

OnsiteSequence random_onsite_sequence(double d1, double d2, int sites, std::uint64_t seed);

/// Dispatches on spec.kind; throws InvalidSpec for random_onsite.
PhaseProfile make_profile(const ProfileSpec& spec);

}  // namespace ipl
