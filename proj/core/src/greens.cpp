#include "scatterbox/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scatterbox/bands.hpp"
#include "scatterbox/errors.hpp"
#include "scatterbox/kahan.hpp"

namespace scatterbox {

namespace {

constexpr double kPoleGuardRel = 1e-13;

// Sum term(i) over poles in ascending |omega - E_i| order (descending term
// magnitude), compensated. The fixed order keeps results deterministic.
template <typename Term>
double sum_by_distance(std::span<const double> energies, double omega, Term term) {
  KahanSum acc;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(energies.size());
  std::ptrdiff_t right = std::upper_bound(energies.begin(), energies.end(), omega) -
                         energies.begin();
  std::ptrdiff_t left = right - 1;
  while (left >= 0 && right < n) {
    if (omega - energies[left] <= energies[right] - omega) {
      acc.add(term(left--));
    } else {
      acc.add(term(right++));
    }
  }
  while (left >= 0) acc.add(term(left--));
  while (right < n) acc.add(term(right++));
  return acc.value();
}

}  // namespace

GreensContext::GreensContext(LevelSet levels, double lambda, TailMode tail_mode)
    : levels_(std::move(levels)), lambda_(lambda), tail_(tail_mode) {
  if (!(lambda_ > 0.0)) throw ValidationError("lambda must be > 0");
  if (levels_.levels.empty()) throw ValidationError("empty LevelSet");

  pole_energy_.reserve(levels_.levels.size());
  pole_weight_.reserve(levels_.levels.size());
  for (const Level& l : levels_.levels) {
    if (l.transparent()) continue;
    if (!pole_energy_.empty() && !(l.energy > pole_energy_.back())) {
      throw ValidationError("pole energies must be strictly increasing");
    }
    pole_energy_.push_back(l.energy);
    pole_weight_.push_back(l.weight);
  }
  if (pole_energy_.empty()) throw ValidationError("LevelSet has no positive-weight poles");

  pole_subtraction_.resize(pole_energy_.size());
  for (std::size_t i = 0; i < pole_energy_.size(); ++i) {
    const double e = pole_energy_[i];
    pole_subtraction_[i] = e / (e * e + lambda_ * lambda_);
  }

  tail_coefficient_ = levels_.mean_weight * levels_.symmetry_factor *
                      density_coefficient(levels_.dimension, levels_.mass, levels_.volume);
}

double GreensContext::local_gap(double omega) const {
  const auto& e = pole_energy_;
  if (e.size() < 2) return std::max(1.0, std::abs(e.front()));
  const std::size_t right = static_cast<std::size_t>(
      std::upper_bound(e.begin(), e.end(), omega) - e.begin());
  if (right == 0) return e[1] - e[0];
  if (right == e.size()) return e[e.size() - 1] - e[e.size() - 2];
  return e[right] - e[right - 1];
}

void GreensContext::require_evaluable(double omega) const {
  if (tail_ == TailMode::analytic) {
    if (!(omega > 0.0)) throw DomainError("omega must be > 0 with an analytic tail");
    if (2.0 * omega > levels_.e_max) {
      throw TruncationError("query omega exceeds e_cut/2; enlarge the enumeration cutoff");
    }
  }
  const auto& e = pole_energy_;
  const auto it = std::lower_bound(e.begin(), e.end(), omega);
  double dist = std::numeric_limits<double>::infinity();
  if (it != e.end()) dist = std::min(dist, std::abs(*it - omega));
  if (it != e.begin()) dist = std::min(dist, std::abs(omega - *(it - 1)));
  if (dist < kPoleGuardRel * local_gap(omega)) {
    throw PoleProximityError("omega indistinguishable from a pole at double precision");
  }
}

double g_bare(const GreensContext& ctx, double omega) {
  if (ctx.dimension() != 1) {
    throw DimensionError("the bare spectral series converges only for d=1");
  }
  ctx.require_evaluable(omega);
  const auto energies = ctx.pole_energies();
  const auto weights = ctx.pole_weights();
  double value = sum_by_distance(energies, omega,
                                 [&](std::ptrdiff_t i) { return weights[i] / (omega - energies[i]); });
  if (ctx.tail_mode() == TailMode::analytic) {
    value -= ctx.tail_coefficient() * bare_pole_antideriv_d1(ctx.e_cut(), omega);
  }
  return value;
}

double g_renorm(const GreensContext& ctx, double omega) {
  ctx.require_evaluable(omega);
  const auto energies = ctx.pole_energies();
  const auto weights = ctx.pole_weights();
  const auto subtractions = ctx.pole_subtractions();
  double value = sum_by_distance(energies, omega, [&](std::ptrdiff_t i) {
    return weights[i] * (1.0 / (omega - energies[i]) + subtractions[i]);
  });
  if (ctx.tail_mode() == TailMode::analytic) {
    const int d = ctx.dimension();
    const double lambda = ctx.lambda();
    const double e_cut = ctx.e_cut();
    double tail;
    if (d == 1) {
      // Split so that (g_renorm - g_bare) stays omega-independent to rounding.
      tail = (subtraction_antideriv_d1_limit(lambda) - subtraction_antideriv_d1(e_cut, lambda)) -
             bare_pole_antideriv_d1(e_cut, omega);
    } else {
      tail = renorm_tail_antideriv_limit(d, omega, lambda) -
             renorm_tail_antideriv(d, e_cut, omega, lambda);
    }
    value += ctx.tail_coefficient() * tail;
  }
  return value;
}

double g_derivative(const GreensContext& ctx, double omega) {
  ctx.require_evaluable(omega);
  const auto energies = ctx.pole_energies();
  const auto weights = ctx.pole_weights();
  return -sum_by_distance(energies, omega, [&](std::ptrdiff_t i) {
    const double d = omega - energies[i];
    return weights[i] / (d * d);
  });
}

double coupling_shift_1d(const GreensContext& ctx, double v_theta_inverse) {
  if (ctx.dimension() != 1) {
    throw DimensionError("coupling_shift_1d is defined for d=1 only");
  }
  const auto weights = ctx.pole_weights();
  const auto subtractions = ctx.pole_subtractions();
  KahanSum acc;
  for (std::size_t i = weights.size(); i-- > 0;) {
    acc.add(weights[i] * subtractions[i]);
  }
  double shift = acc.value();
  if (ctx.tail_mode() == TailMode::analytic) {
    shift += ctx.tail_coefficient() * (subtraction_antideriv_d1_limit(ctx.lambda()) -
                                       subtraction_antideriv_d1(ctx.e_cut(), ctx.lambda()));
  }
  return v_theta_inverse - shift;
}

double wavefunction_value(const GreensContext& ctx, double omega, std::span<const double> x) {
  if (!ctx.levels().spec) {
    throw DomainError("wavefunction_value requires an enumerated LevelSet with mode data");
  }
  ctx.require_evaluable(omega);
  const BilliardSpec& spec = *ctx.levels().spec;
  KahanSum acc;
  for (const Level& l : ctx.levels().levels) {
    const double at_scatterer = eigenfunction_value(spec, l.mode, spec.scatterer());
    if (at_scatterer == 0.0) continue;
    acc.add(eigenfunction_value(spec, l.mode, x) * at_scatterer / (omega - l.energy));
  }
  return acc.value();
}

}  // namespace scatterbox
