#pragma once

#include "scatterbox/errors.hpp"

namespace scatterbox {

/// Strong-coupling band at energy omega: the scatterer distorts eigenstates
/// substantially when |v^{-1} - center| <= half_width. The band edge is
/// treated as a sharp predicate here although the underlying estimate is an
/// order-of-magnitude one.
struct StrongBand {
  int dimension = 0;
  double omega = 0.0;
  double center = 0.0;
  double half_width = 0.0;

  bool contains(double inverse_coupling) const;
};

/// Smooth interpolant g^(d)(omega) of the spectral function between poles:
/// 0 (d=1), (M/2pi) ln(omega/Lambda) (d=2), -M^{3/2} Lambda^{1/2}/(2pi) (d=3).
double g_smooth(int dimension, double mass, double lambda, double omega);

/// Band width Delta^(d)(omega): pi M^{1/2}/(2^{1/2} omega^{1/2}) (d=1),
/// pi M/2 (d=2), M^{3/2} omega^{1/2}/2^{1/2} (d=3). Filter-invariant.
double width_delta(int dimension, double mass, double omega);

StrongBand strong_band(int dimension, double mass, double lambda, double omega);

/// Verification-grade route to g_smooth: principal-value integral evaluated
/// numerically (symmetric excision + Richardson) on [0, E_hi], closed-form
/// antiderivative beyond E_hi.
double g_smooth_via_pv(int dimension, double mass, double volume, double lambda, double omega,
                       double mean_weight);

// Antiderivatives reused by the greens tail. All omit the density prefactor
// c_d; the density kernel is E^{(d-2)/2}.

/// Antiderivative of E^{-1/2} / (omega - E); valid as a principal value
/// across E = omega.
double bare_pole_antideriv_d1(double energy, double omega);

/// Antiderivative of E^{-1/2} * E/(E^2 + Lambda^2), and its E -> inf limit.
double subtraction_antideriv_d1(double energy, double lambda);
double subtraction_antideriv_d1_limit(double lambda);

/// Antiderivative of [1/(omega-E) + E/(E^2+Lambda^2)] * E^{(d-2)/2}, and its
/// E -> inf limit. For d=1 this is exactly bare_pole_antideriv_d1 +
/// subtraction_antideriv_d1.
double renorm_tail_antideriv(int dimension, double energy, double omega, double lambda);
double renorm_tail_antideriv_limit(int dimension, double omega, double lambda);

}  // namespace scatterbox
