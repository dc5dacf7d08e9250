#include "scatterbox/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "scatterbox/errors.hpp"
#include "scatterbox/quadrature.hpp"

namespace scatterbox {

namespace {

constexpr std::size_t kOracleCapacity = 2000;
constexpr double kPi = std::numbers::pi;

}  // namespace

std::vector<double> rank_one_eigensolve(const TruncatedProblem& problem) {
  const std::size_t n = problem.energies.size();
  if (n == 0) throw DomainError("rank_one_eigensolve: empty problem");
  if (n != problem.weights.size()) {
    throw ValidationError("rank_one_eigensolve: energies/weights size mismatch");
  }
  if (n > kOracleCapacity) {
    throw CapacityError("rank_one_eigensolve oracle is capped at N <= 2000");
  }
  if (problem.coupling_inverse == 0.0) {
    throw DomainError("rank_one_eigensolve requires a finite coupling (v^{-1} != 0)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(problem.energies[i] > problem.energies[i - 1])) {
      throw ValidationError("rank_one_eigensolve: energies must be strictly increasing");
    }
    if (problem.weights[i] < 0.0) {
      throw ValidationError("rank_one_eigensolve: negative weight");
    }
  }

  const double v = 1.0 / problem.coupling_inverse;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = problem.energies[i];
    u(static_cast<Eigen::Index>(i)) = std::sqrt(problem.weights[i]);
  }
  a.noalias() += v * u * u.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("rank_one_eigensolve: eigensolver failed");
  }
  std::vector<double> eigenvalues(solver.eigenvalues().data(),
                                  solver.eigenvalues().data() + n);
  std::sort(eigenvalues.begin(), eigenvalues.end());
  return eigenvalues;
}

namespace {

// Raw integrand <w> rho_av(E) k(E): written out from first principles so the
// oracle shares no code with the closed-form antiderivatives it checks.
struct PvProblem {
  PvIntegrand kind;
  double mass, volume, lambda, omega;

  double density(double e) const {
    switch (kind) {
      case PvIntegrand::bare_d1:
        return std::sqrt(mass) * volume / (std::sqrt(2.0) * kPi * std::sqrt(e));
      case PvIntegrand::renorm_d2:
        return mass * volume / (2.0 * kPi);
      default:
        return std::pow(mass, 1.5) * volume * std::sqrt(e) / (std::sqrt(2.0) * kPi * kPi);
    }
  }

  double kernel(double e) const {
    if (kind == PvIntegrand::bare_d1) return 1.0 / (omega - e);
    return 1.0 / (omega - e) + e / (e * e + lambda * lambda);
  }

  double mean_weight() const { return 1.0 / volume; }

  double integrand(double e) const { return mean_weight() * density(e) * kernel(e); }
};

// PV over [0, B] with excision (omega - eps, omega + eps); u = sqrt(E)
// substitution removes the E^{ -1/2 } endpoint singularity for d=1,3.
double excised_part(const PvProblem& p, double b, double eps, double tol) {
  if (p.kind == PvIntegrand::renorm_d2) {
    const auto f = [&](double e) { return p.integrand(e); };
    const double split = std::min(2.0 * p.omega, b);
    double value = adaptive_simpson(f, 0.0, p.omega - eps, tol) +
                   adaptive_simpson(f, p.omega + eps, split, tol);
    if (split < b) value += adaptive_simpson(f, split, b, tol);
    return value;
  }
  const auto f = [&](double u) { return 2.0 * u * p.integrand(u * u); };
  const double u_pole_lo = std::sqrt(p.omega - eps);
  const double u_pole_hi = std::sqrt(p.omega + eps);
  const double u_split = std::sqrt(std::min(2.0 * p.omega, b));
  const double u_b = std::sqrt(b);
  double value = adaptive_simpson(f, 0.0, u_pole_lo, tol) +
                 adaptive_simpson(f, u_pole_hi, u_split, tol);
  if (u_split < u_b) value += adaptive_simpson(f, u_split, u_b, tol);
  return value;
}

// int_B^inf via E = B/t^2 (t from 1 to 0); the transformed integrand is
// bounded, so a small t cutoff only drops an O(t_min) contribution.
double far_tail(const PvProblem& p, double b, double tol) {
  const auto f = [&](double t) {
    const double e = b / (t * t);
    return p.integrand(e) * 2.0 * b / (t * t * t);
  };
  return adaptive_simpson(f, 1e-8, 1.0, tol);
}

}  // namespace

double pv_quadrature(PvIntegrand kind, double mass, double volume, double lambda, double omega,
                     std::span<const double> epsilon_sequence) {
  if (!(omega > 0.0)) throw DomainError("omega must be > 0");
  if (!(mass > 0.0) || !(volume > 0.0)) throw DomainError("mass and volume must be > 0");
  if (kind != PvIntegrand::bare_d1 && !(lambda > 0.0)) {
    throw DomainError("lambda must be > 0 for renormalized kernels");
  }
  if (epsilon_sequence.size() < 3) {
    throw DomainError("epsilon_sequence needs at least 3 decreasing entries");
  }
  for (std::size_t i = 0; i < epsilon_sequence.size(); ++i) {
    if (!(epsilon_sequence[i] > 0.0) || epsilon_sequence[i] >= omega) {
      throw DomainError("epsilon values must lie in (0, omega)");
    }
    if (i > 0 && !(epsilon_sequence[i] < epsilon_sequence[i - 1])) {
      throw DomainError("epsilon_sequence must be strictly decreasing");
    }
  }

  const PvProblem p{kind, mass, volume, lambda, omega};
  const double b = 64.0 * std::max({omega, kind == PvIntegrand::bare_d1 ? omega : lambda, 1.0});
  const double tol = 1e-11 * std::max(1.0, std::abs(omega));
  const double tail = far_tail(p, b, tol);

  std::vector<double> extrapolated;
  double prev = 0.0;
  for (std::size_t k = 0; k < epsilon_sequence.size(); ++k) {
    const double ik = excised_part(p, b, epsilon_sequence[k], tol) + tail;
    if (k > 0) {
      const double e0 = epsilon_sequence[k - 1], e1 = epsilon_sequence[k];
      extrapolated.push_back((e0 * ik - e1 * prev) / (e0 - e1));
    }
    prev = ik;
  }
  const double result = extrapolated.back();
  if (std::abs(result - extrapolated[extrapolated.size() - 2]) >
      1e-6 * std::max(1.0, std::abs(result))) {
    throw NumericalError("pv_quadrature: Richardson extrapolation did not converge");
  }
  return result;
}

}  // namespace scatterbox
