#pragma once

#include <span>
#include <vector>

namespace scatterbox {

/// Finite restriction of the secular problem, oracle-scale (N <= 2000).
struct TruncatedProblem {
  std::vector<double> energies;  ///< strictly increasing
  std::vector<double> weights;   ///< >= 0
  double coupling_inverse = 1.0;
};

/// All N eigenvalues of diag(E) + v u u^T with u_n = sqrt(w_n), sorted
/// ascending, via a dense symmetric eigensolve. Deliberately independent of
/// the greens/solver evaluation path: the interior eigenvalues satisfy the
/// finite secular equation and cross-check solved roots.
std::vector<double> rank_one_eigensolve(const TruncatedProblem& problem);

enum class PvIntegrand { bare_d1, renorm_d2, renorm_d3 };

/// Principal-value integral <w> P int_0^inf rho_av(E) k(E, omega) dE with
/// k the bare (d=1) or renormalized (d=2,3) kernel, evaluated by symmetric
/// excision around the pole with linear Richardson extrapolation over
/// epsilon_sequence (decreasing). Fully numerical, including the infinite
/// tail; agrees with the g_smooth closed forms.
double pv_quadrature(PvIntegrand kind, double mass, double volume, double lambda, double omega,
                     std::span<const double> epsilon_sequence);

}  // namespace scatterbox
