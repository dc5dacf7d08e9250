#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "scatterbox/errors.hpp"

namespace scatterbox {

inline constexpr int kMaxDimension = 3;

/// Per-axis mode selection: keep every quantum number, or odd ones only.
enum class AxisFilter { all, odd_only };

/// Rectangular Dirichlet box (d = 1, 2, 3) with one point scatterer strictly inside.
///
/// Units: hbar = 1 throughout; energies are E = (pi^2 / 2M) sum_i (n_i / l_i)^2.
struct BilliardSpec {
  int dimension = 1;
  std::array<double, kMaxDimension> side_lengths{1.0, 0.0, 0.0};
  double mass = 1.0;
  std::array<double, kMaxDimension> scatterer_position{0.5, 0.0, 0.0};
  std::array<AxisFilter, kMaxDimension> parity_filter{AxisFilter::all, AxisFilter::all,
                                                      AxisFilter::all};

  std::span<const double> sides() const {
    return {side_lengths.data(), static_cast<std::size_t>(dimension)};
  }
  std::span<const double> scatterer() const {
    return {scatterer_position.data(), static_cast<std::size_t>(dimension)};
  }

  double volume() const;

  /// Fraction of the full Weyl density retained by the parity filter
  /// (1/2 per odd-only axis; e.g. 1/8 for all-odd modes in d=3).
  double symmetry_factor() const;

  /// Mean eigenfunction weight <phi_n(x0)^2> over retained modes: 1/volume
  /// generically, 2^d/volume for the odd-only filter with a centered scatterer.
  double mean_weight() const;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Quantum numbers of one box mode; unused axes hold 0.
struct ModeIndex {
  std::array<std::int32_t, kMaxDimension> n{0, 0, 0};

  bool operator==(const ModeIndex&) const = default;
};

struct Level {
  double energy = 0.0;
  double weight = 0.0;  ///< phi_n(x0)^2; 0 marks a transparent (uncoupled) level
  ModeIndex mode;

  bool transparent() const { return weight == 0.0; }
};

/// Sorted unperturbed levels with scatterer weights, complete below e_max.
///
/// After degeneracy merging the positive-weight entries (the secular-equation
/// poles) are strictly increasing in energy; transparent entries may coincide
/// with a pole they were split from. Immutable after construction and safe to
/// share across threads.
struct LevelSet {
  std::vector<Level> levels;
  int dimension = 1;
  double e_max = 0.0;
  double volume = 1.0;
  double mean_weight = 1.0;
  double symmetry_factor = 1.0;
  double mass = 1.0;
  std::optional<BilliardSpec> spec;  ///< absent for synthetic sets

  std::size_t size() const { return levels.size(); }
  std::size_t pole_count() const;
};

/// Enumerate every retained mode with E <= e_max, sorted ascending, with
/// weights from eigenfunction_weight and degenerate clusters merged.
///
/// Throws EmptySetError if the cutoff is below the first retained level and
/// CapacityError if the candidate mode box exceeds 1e8 entries.
LevelSet enumerate_levels(const BilliardSpec& spec, double e_max);

/// phi_n(x0)^2 = prod_i (2/l_i) sin^2(n_i pi x0_i / l_i).
double eigenfunction_weight(const BilliardSpec& spec, const ModeIndex& mode);

/// phi_n(x) = prod_i sqrt(2/l_i) sin(n_i pi x_i / l_i); x in the closed box.
double eigenfunction_value(const BilliardSpec& spec, const ModeIndex& mode,
                           std::span<const double> x);

/// Smooth average level density at omega > 0, including the parity-filter
/// symmetry factor. Constant in omega for d=2, ~omega^{-1/2} for d=1,
/// ~omega^{1/2} for d=3.
double avg_density(const BilliardSpec& spec, double omega);

/// Leading Weyl counting function: integral of avg_density from 0 to omega.
double counting_function(const BilliardSpec& spec, double omega);

/// Inverse of counting_function (exact, closed form per dimension).
double energy_at_count(const BilliardSpec& spec, double count);

/// Dimension-dependent density prefactor c_d with avg_density = c_d *
/// omega^{(d-2)/2} before the symmetry factor.
double density_coefficient(int dimension, double mass, double volume);

/// Build a LevelSet directly from (energy, weight) data; used by oracles and
/// toy problems. Energies must be sorted strictly increasing.
LevelSet synthetic_level_set(std::vector<double> energies, std::vector<double> weights,
                             int dimension = 1, double volume = 1.0, double mean_weight = 1.0);

/// sin(pi t), exact at integer and half-integer t.
double sin_pi(double t);

/// CSV with header `index,energy,weight,n1[,n2[,n3]]`, 17 significant digits.
void write_levels_csv(const LevelSet& set, std::ostream& out);

}  // namespace scatterbox
