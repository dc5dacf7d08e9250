#include "scatterbox/bands.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "scatterbox/billiard.hpp"
#include "scatterbox/quadrature.hpp"

namespace scatterbox {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(int d) {
  if (d < 1 || d > 3) throw DomainError("dimension must be 1, 2, or 3");
}

void require_positive_omega(double omega) {
  if (!(omega > 0.0)) throw DomainError("omega must be > 0");
}

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
}

}  // namespace

bool StrongBand::contains(double inverse_coupling) const {
  return std::abs(inverse_coupling - center) <= half_width;
}

double g_smooth(int dimension, double mass, double lambda, double omega) {
  require_dimension(dimension);
  require_positive_omega(omega);
  switch (dimension) {
    case 1:
      return 0.0;
    case 2:
      require_positive_lambda(lambda);
      return mass / (2.0 * kPi) * std::log(omega / lambda);
    default:
      require_positive_lambda(lambda);
      return -std::pow(mass, 1.5) * std::sqrt(lambda) / (2.0 * kPi);
  }
}

double width_delta(int dimension, double mass, double omega) {
  require_dimension(dimension);
  require_positive_omega(omega);
  switch (dimension) {
    case 1:
      return kPi * std::sqrt(mass) / (std::sqrt(2.0) * std::sqrt(omega));
    case 2:
      return kPi * mass / 2.0;
    default:
      return std::pow(mass, 1.5) * std::sqrt(omega) / std::sqrt(2.0);
  }
}

StrongBand strong_band(int dimension, double mass, double lambda, double omega) {
  StrongBand band;
  band.dimension = dimension;
  band.omega = omega;
  band.center = g_smooth(dimension, mass, lambda, omega);
  band.half_width = width_delta(dimension, mass, omega) / 2.0;
  return band;
}

double bare_pole_antideriv_d1(double energy, double omega) {
  require_positive_omega(omega);
  if (energy < 0.0) throw DomainError("energy must be >= 0");
  const double rw = std::sqrt(omega);
  const double re = std::sqrt(energy);
  return std::log(std::abs((rw + re) / (rw - re))) / rw;
}

double subtraction_antideriv_d1(double energy, double lambda) {
  require_positive_lambda(lambda);
  if (energy < 0.0) throw DomainError("energy must be >= 0");
  const double s2l = std::sqrt(2.0 * lambda);
  const double root = std::sqrt(2.0 * lambda * energy);
  const double q = std::sqrt(2.0 * energy / lambda);
  const double log_term = std::log((energy + root + lambda) / (energy - root + lambda));
  const double atan_term = std::atan(q + 1.0) + std::atan(q - 1.0);
  return (-0.5 * log_term + atan_term) / s2l;
}

double subtraction_antideriv_d1_limit(double lambda) {
  require_positive_lambda(lambda);
  return kPi / std::sqrt(2.0 * lambda);
}

double renorm_tail_antideriv(int dimension, double energy, double omega, double lambda) {
  require_dimension(dimension);
  if (energy < 0.0) throw DomainError("energy must be >= 0");
  switch (dimension) {
    case 1:
      return bare_pole_antideriv_d1(energy, omega) + subtraction_antideriv_d1(energy, lambda);
    case 2: {
      require_positive_omega(omega);
      require_positive_lambda(lambda);
      return -std::log(std::abs(omega - energy) /
                       std::sqrt(energy * energy + lambda * lambda));
    }
    default: {
      require_positive_omega(omega);
      require_positive_lambda(lambda);
      const double rw = std::sqrt(omega);
      const double re = std::sqrt(energy);
      const double root = std::sqrt(2.0 * lambda * energy);
      const double q = std::sqrt(2.0 * energy / lambda);
      const double half_l = std::sqrt(lambda / 2.0);
      return rw * std::log(std::abs((rw + re) / (rw - re))) -
             0.5 * half_l * std::log((energy + root + lambda) / (energy - root + lambda)) -
             half_l * (std::atan(q + 1.0) + std::atan(q - 1.0));
    }
  }
}

double renorm_tail_antideriv_limit(int dimension, double omega, double lambda) {
  require_dimension(dimension);
  switch (dimension) {
    case 1:
      return subtraction_antideriv_d1_limit(lambda);
    case 2:
      return 0.0;
    default:
      require_positive_lambda(lambda);
      return -std::sqrt(lambda / 2.0) * kPi;
  }
}

namespace {

// Principal-value integral of kernel(E)/(omega - E)-type integrands on
// [0, e_hi] by symmetric excision of half-width eps around the pole. The
// d=1 and d=3 kernels carry an E^{+-1/2} factor; substituting u = sqrt(E)
// removes the endpoint singularity.
double pv_numeric_part(int dimension, double omega, double lambda, double e_hi, double eps,
                       double tol) {
  const auto kernel = [&](double e) {
    switch (dimension) {
      case 1:
        return 1.0 / (omega - e);
      default:
        return 1.0 / (omega - e) + e / (e * e + lambda * lambda);
    }
  };
  if (dimension == 2) {
    return adaptive_simpson(kernel, 0.0, omega - eps, tol) +
           adaptive_simpson(kernel, omega + eps, e_hi, tol);
  }
  // u = sqrt(E): integrand E^{p} k(E) dE -> 2 u^{2p+1} k(u^2) du, p = +-1/2.
  const auto sub = [&](double u) {
    const double e = u * u;
    const double factor = dimension == 1 ? 2.0 : 2.0 * e;
    return factor * kernel(e);
  };
  const double u_lo = std::sqrt(omega - eps);
  const double u_hi = std::sqrt(omega + eps);
  return adaptive_simpson(sub, 0.0, u_lo, tol) +
         adaptive_simpson(sub, u_hi, std::sqrt(e_hi), tol);
}

}  // namespace

double g_smooth_via_pv(int dimension, double mass, double volume, double lambda, double omega,
                       double mean_weight) {
  require_dimension(dimension);
  require_positive_omega(omega);
  if (dimension >= 2) require_positive_lambda(lambda);
  if (!(volume > 0.0) || !(mean_weight > 0.0)) {
    throw DomainError("volume and mean_weight must be > 0");
  }

  const double coeff = mean_weight * density_coefficient(dimension, mass, volume);
  const double e_hi = 16.0 * std::max(omega, dimension >= 2 ? lambda : omega);
  const double tol = 1e-11 * std::max(1.0, omega);

  // Linear Richardson extrapolation in the excision half-width.
  const std::vector<double> eps_seq{omega / 16.0, omega / 32.0, omega / 64.0, omega / 128.0};
  std::vector<double> extrapolated;
  double prev_i = 0.0;
  for (std::size_t k = 0; k < eps_seq.size(); ++k) {
    const double ik = pv_numeric_part(dimension, omega, lambda, e_hi, eps_seq[k], tol);
    if (k > 0) {
      const double e0 = eps_seq[k - 1], e1 = eps_seq[k];
      extrapolated.push_back((e0 * ik - e1 * prev_i) / (e0 - e1));
    }
    prev_i = ik;
  }
  const double result = extrapolated.back();
  const double settle = std::abs(result - extrapolated[extrapolated.size() - 2]);
  if (settle > 1e-7 * std::max(1.0, std::abs(result))) {
    throw NumericalError("g_smooth_via_pv: excision extrapolation did not settle");
  }

  // Beyond e_hi the integral is taken in closed form. The d=1 interpolant
  // uses the bare kernel only.
  double upper;
  if (dimension == 1) {
    upper = -bare_pole_antideriv_d1(e_hi, omega);
  } else {
    upper = renorm_tail_antideriv_limit(dimension, omega, lambda) -
            renorm_tail_antideriv(dimension, e_hi, omega, lambda);
  }
  return coeff * (result + upper);
}

}  // namespace scatterbox
