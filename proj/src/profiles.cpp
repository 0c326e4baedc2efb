#include "ipl/profiles.hpp"

#include <cmath>
#include <numbers>

#include "ipl/errors.hpp"
#include "ipl/rng.hpp"

namespace ipl {

namespace {

void require_cells(int cells) {
  if (cells < 2) {
    throw InvalidSpec("a lattice needs at least 2 cells, got " + std::to_string(cells));
  }
}

// Fraction (m-1)/(N-1) computed from integers so grid points are reproducible.
double grid_fraction(int m, int cells) {
  return static_cast<double>(m) / static_cast<double>(cells - 1);
}

}  // namespace

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::linear:
      return "linear";
    case ProfileKind::revolutions:
      return "revolutions";
    case ProfileKind::constant:
      return "constant";
    case ProfileKind::random_phase:
      return "random-phase";
    case ProfileKind::random_onsite:
      return "random-onsite";
  }
  return "linear";
}

ProfileKind profile_kind_from_string(std::string_view name) {
  if (name == "linear") return ProfileKind::linear;
  if (name == "revolutions") return ProfileKind::revolutions;
  if (name == "constant") return ProfileKind::constant;
  if (name == "random-phase" || name == "random_phase") return ProfileKind::random_phase;
  if (name == "random-onsite" || name == "random_onsite") return ProfileKind::random_onsite;
  throw InvalidSpec("unknown profile kind '" + std::string(name) + "'");
}

double interval_from_lf(double lf) {
  if (!(lf > 0.0) || !std::isfinite(lf)) {
    throw InvalidSpec("lf must be a positive finite number");
  }
  return (std::numbers::pi / 4.0) / lf;
}

PhaseProfile linear_profile(double center, double lf, int cells) {
  require_cells(cells);
  const double length = interval_from_lf(lf);
  PhaseProfile profile = asymmetric_profile(center - length / 2.0, center + length / 2.0, cells);
  profile.spec.lf = lf;
  return profile;
}

PhaseProfile asymmetric_profile(double phi_start, double phi_end, int cells) {
  require_cells(cells);
  if (!std::isfinite(phi_start) || !std::isfinite(phi_end)) {
    throw InvalidSpec("phase interval endpoints must be finite");
  }
  PhaseProfile profile;
  profile.spec.kind = ProfileKind::linear;
  profile.spec.cells = cells;
  profile.spec.phi_start = phi_start;
  profile.spec.phi_end = phi_end;
  const double length = phi_end - phi_start;
  profile.spec.lf = length != 0.0 ? (std::numbers::pi / 4.0) / length : 0.0;

  profile.phases.resize(static_cast<std::size_t>(cells));
  for (int m = 0; m < cells; ++m) {
    profile.phases[static_cast<std::size_t>(m)] = phi_start + grid_fraction(m, cells) * length;
  }
  profile.phases.back() = phi_end;
  return profile;
}

PhaseProfile constant_profile(double phi, int cells) {
  require_cells(cells);
  PhaseProfile profile;
  profile.spec.kind = ProfileKind::constant;
  profile.spec.cells = cells;
  profile.spec.phi_start = phi;
  profile.spec.phi_end = phi;
  profile.phases.assign(static_cast<std::size_t>(cells), phi);
  return profile;
}

PhaseProfile revolution_profile(double phi_min, double phi_max, int revolutions, int cells) {
  require_cells(cells);
  if (revolutions < 1) {
    throw InvalidSpec("revolutions must be >= 1");
  }
  if (!(phi_min < phi_max)) {
    throw InvalidSpec("revolution profile needs phi_min < phi_max");
  }
  PhaseProfile profile;
  profile.spec.kind = ProfileKind::revolutions;
  profile.spec.cells = cells;
  profile.spec.phi_start = phi_min;
  profile.spec.phi_end = phi_max;
  profile.spec.revolutions = revolutions;

  // Position within the current period as an exact rational p/q, p in [0, q).
  const long long q = cells - 1;
  profile.phases.resize(static_cast<std::size_t>(cells));
  for (int m = 0; m < cells; ++m) {
    const long long p = (static_cast<long long>(revolutions) * m) % q;
    double rise;  // 0 at phi_min, 1 at phi_max
    if (p == 0) {
      rise = 0.0;
    } else if (2 * p == q) {
      rise = 1.0;
    } else if (2 * p < q) {
      rise = 2.0 * static_cast<double>(p) / static_cast<double>(q);
    } else {
      rise = 2.0 * static_cast<double>(q - p) / static_cast<double>(q);
    }
    double phi;
    if (rise == 0.0) {
      phi = phi_min;
    } else if (rise == 1.0) {
      phi = phi_max;
    } else {
      phi = phi_min + (phi_max - phi_min) * rise;
    }
    profile.phases[static_cast<std::size_t>(m)] = phi;
  }
  return profile;
}

PhaseProfile random_phase_profile(double phi_min, double phi_max, int cells, std::uint64_t seed) {
  require_cells(cells);
  if (phi_max < phi_min) {
    throw InvalidSpec("random phase interval is reversed");
  }
  PhaseProfile profile;
  profile.spec.kind = ProfileKind::random_phase;
  profile.spec.cells = cells;
  profile.spec.phi_start = phi_min;
  profile.spec.phi_end = phi_max;
  profile.spec.seed = seed;

  SplitMix64 rng(seed);
  profile.phases.resize(static_cast<std::size_t>(cells));
  for (auto& phi : profile.phases) {
    phi = rng.uniform(phi_min, phi_max);
  }
  return profile;
}

OnsiteSequence random_onsite_sequence(double d1, double d2, int sites, std::uint64_t seed) {
  if (sites < 2) {
    throw InvalidSpec("random on-site lattice needs at least 2 sites");
  }
  OnsiteSequence seq;
  seq.seed = seed;
  seq.values.resize(static_cast<std::size_t>(sites));
  SplitMix64 rng(seed);
  for (auto& v : seq.values) {
    v = rng.coin() ? d2 : d1;
  }
  return seq;
}

PhaseProfile make_profile(const ProfileSpec& spec) {
  PhaseProfile profile;
  switch (spec.kind) {
    case ProfileKind::linear:
      profile = asymmetric_profile(spec.phi_start, spec.phi_end, spec.cells);
      break;
    case ProfileKind::revolutions:
      profile = revolution_profile(spec.phi_start, spec.phi_end, spec.revolutions, spec.cells);
      break;
    case ProfileKind::constant:
      profile = constant_profile(spec.phi_start, spec.cells);
      break;
    case ProfileKind::random_phase:
      profile = random_phase_profile(spec.phi_start, spec.phi_end, spec.cells, spec.seed);
      break;
    case ProfileKind::random_onsite:
      throw InvalidSpec("random-onsite lattices carry no phase profile");
  }
  profile.spec = spec;
  return profile;
}

}  // namespace ipl
