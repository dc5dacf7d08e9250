#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "scatterbox/greens.hpp"

namespace scatterbox {

/// Scatterer coupling. The bare scheme is only meaningful in d=1; for d >= 2
/// the renormalized pair (v_theta^{-1}, Lambda) must be used.
struct CouplingConfig {
  enum class Scheme { bare, renormalized };

  Scheme scheme = Scheme::renormalized;
  double inverse_coupling = 0.0;  ///< v^{-1} (bare) or v_theta^{-1} (renormalized)
  double lambda = 1.0;            ///< subtraction mass scale, renormalized scheme only

  static CouplingConfig bare(double v_inverse);
  static CouplingConfig renormalized(double v_theta_inverse, double lambda);

  /// Throws ValidationError on scheme/dimension mismatch or if the
  /// renormalized lambda differs from the evaluation context's.
  void validate(const GreensContext& ctx) const;
};

struct Root {
  std::size_t index = 0;   ///< 1-based inter-pole interval index
  double omega = 0.0;
  double residual = 0.0;   ///< |G(omega) - v^{-1}| at the returned root
  double e_left = 0.0;     ///< bracketing poles (equal for fixed levels)
  double e_right = 0.0;
  bool fixed = false;      ///< transparent level passed through unchanged
};

/// Roots of the secular equation, one per inter-pole interval of the window,
/// plus any transparent levels passed through as fixed entries.
struct PerturbedSpectrum {
  std::vector<Root> roots;        ///< solved roots, index n_lo..n_hi
  std::vector<Root> fixed_levels; ///< transparent pass-through, in energy order
  std::size_t n_lo = 0, n_hi = 0;
};

struct SolveOptions {
  /// Residual bound per unit of local pole spacing: each root satisfies
  /// |G(omega_n) - v^{-1}| <= residual_tol_per_spacing * (E_{n+1} - E_n).
  double residual_tol_per_spacing = 1e-9;
  /// Also search (0, E_1) for a root pushed below the ground state.
  /// Reported with index 0 when present; off by default.
  bool include_subground = false;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Solve G(omega) = v^{-1} on the n-th inter-pole interval by bracketed
/// bisection, pulling the bracket toward the poles until the target is
/// straddled. `residual_tol` is the absolute bound on |G(omega) - v^{-1}|.
/// Deterministic; throws NumericalError if double precision cannot resolve
/// the root to the requested residual.
Root solve_interval(const GreensContext& ctx, const CouplingConfig& coupling, std::size_t n,
                    double residual_tol);

/// One root per interval n_lo..n_hi (1-based, inclusive). Intervals are
/// independent and solved by a worker pool; results do not depend on
/// scheduling.
PerturbedSpectrum solve_spectrum(const GreensContext& ctx, const CouplingConfig& coupling,
                                 std::pair<std::size_t, std::size_t> window,
                                 const SolveOptions& options = {});

/// CSV with header `index,omega,residual,E_left,E_right`.
void write_spectrum_csv(const PerturbedSpectrum& spectrum, std::ostream& out);

}  // namespace scatterbox
