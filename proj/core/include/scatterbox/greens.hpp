#pragma once

#include <span>
#include <vector>

#include "scatterbox/billiard.hpp"

namespace scatterbox {

enum class TailMode { none, analytic };

/// Immutable evaluation context for the spectral sums over one LevelSet.
///
/// Truncation policy: with TailMode::analytic the sum over poles below
/// e_cut (= levels.e_max) is completed by a closed-form tail built on the
/// smooth density and the mean weight; queries must satisfy omega <= e_cut/2
/// and are rejected otherwise rather than silently degraded.
///
/// Thread-safe: all evaluation is read-only, and the internal summation
/// order is fixed, so results are independent of caller scheduling.
class GreensContext {
 public:
  GreensContext(LevelSet levels, double lambda, TailMode tail_mode);

  const LevelSet& levels() const { return levels_; }
  int dimension() const { return levels_.dimension; }
  double lambda() const { return lambda_; }
  TailMode tail_mode() const { return tail_; }
  double e_cut() const { return levels_.e_max; }

  std::span<const double> pole_energies() const { return pole_energy_; }
  std::span<const double> pole_weights() const { return pole_weight_; }
  std::span<const double> pole_subtractions() const { return pole_subtraction_; }
  std::size_t pole_count() const { return pole_energy_.size(); }

  /// mean_weight * symmetry_factor * c_d: prefactor of the analytic tail.
  double tail_coefficient() const { return tail_coefficient_; }

  /// Local pole spacing around omega (width of the containing interval).
  double local_gap(double omega) const;

  /// Throws PoleProximityError if omega is within 1e-13 local spacings of a
  /// pole, and TruncationError if an analytic-tail query exceeds e_cut/2.
  void require_evaluable(double omega) const;

 private:
  LevelSet levels_;
  double lambda_;
  TailMode tail_;
  double tail_coefficient_ = 0.0;
  std::vector<double> pole_energy_;
  std::vector<double> pole_weight_;
  std::vector<double> pole_subtraction_;  // E/(E^2 + Lambda^2) per pole
};

/// Bare spectral sum sum_n w_n/(omega - E_n) (+ analytic tail). d=1 only:
/// the series diverges for d >= 2 and the call throws DimensionError there.
double g_bare(const GreensContext& ctx, double omega);

/// Renormalized sum sum_n w_n [1/(omega - E_n) + E_n/(E_n^2 + Lambda^2)]
/// (+ analytic tail). Strictly decreasing between consecutive poles.
double g_renorm(const GreensContext& ctx, double omega);

/// d/d(omega) of both spectral sums: -sum_n w_n/(omega - E_n)^2, truncated
/// (the quadratic decay needs no tail). Always negative.
double g_derivative(const GreensContext& ctx, double omega);

/// d=1 only: shifted bare inverse coupling v^{-1} = v_theta^{-1} -
/// sum_n w_n E_n/(E_n^2 + Lambda^2), so that g_bare(omega) = v^{-1} has the
/// same roots as g_renorm(omega) = v_theta^{-1}.
double coupling_shift_1d(const GreensContext& ctx, double v_theta_inverse);

/// Unnormalized perturbed eigenfunction sum_m phi_m(x) phi_m(x0)/(omega - E_m)
/// at a solved root omega. Requires mode data (enumerated LevelSets only);
/// x may lie on the closed box boundary.
double wavefunction_value(const GreensContext& ctx, double omega, std::span<const double> x);

}  // namespace scatterbox
