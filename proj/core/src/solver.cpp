#include "scatterbox/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include "scatterbox/errors.hpp"

namespace scatterbox {

namespace {

// Bracket endpoints may not come closer to a pole than this fraction of the
// interval; one order above the greens pole guard so evaluation never throws
// mid-solve.
constexpr double kPoleApproachRel = 1e-12;

constexpr double kWidthStopRel = 1e-12;

double evaluate(const GreensContext& ctx, const CouplingConfig& coupling, double omega) {
  return coupling.scheme == CouplingConfig::Scheme::bare ? g_bare(ctx, omega)
                                                         : g_renorm(ctx, omega);
}

struct Best {
  double omega;
  double residual;

  void offer(double w, double r) {
    if (r < residual) {
      omega = w;
      residual = r;
    }
  }
};

// Root of G = target on (lo, hi) where G decreases from g_lo_limit to
// g_hi_limit. `left_pole`/`right_pole` say whether G is unbounded at the
// respective end (pole) or attains a finite boundary value (sub-ground edge).
std::optional<Root> bisect_root(const GreensContext& ctx, const CouplingConfig& coupling,
                                std::size_t index, double lo, double hi, bool left_pole,
                                double residual_tol) {
  const double gap = hi - lo;
  const double target = coupling.inverse_coupling;

  // Pull the left endpoint toward lo until G(a) > target.
  double da = 0.25 * gap;
  double a = lo + da;
  double fa = evaluate(ctx, coupling, a);
  while (!(fa > target)) {
    da *= 0.125;
    if (da < kPoleApproachRel * gap) {
      if (!left_pole) return std::nullopt;  // no sub-ground root exists
      throw NumericalError("bisection bracket hit the pole-approach limit (interval " +
                           std::to_string(index) + ")");
    }
    a = lo + da;
    fa = evaluate(ctx, coupling, a);
  }

  // Pull the right endpoint toward the pole at hi until G(b) < target.
  double db = 0.25 * gap;
  double b = hi - db;
  double fb = evaluate(ctx, coupling, b);
  while (!(fb < target)) {
    db *= 0.125;
    if (db < kPoleApproachRel * gap) {
      throw NumericalError("bisection bracket hit the pole-approach limit (interval " +
                           std::to_string(index) + ")");
    }
    b = hi - db;
    fb = evaluate(ctx, coupling, b);
  }

  Best best{a, std::abs(fa - target)};
  best.offer(b, std::abs(fb - target));

  const double width_stop = kWidthStopRel * gap;
  while ((b - a) > width_stop || best.residual > residual_tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;  // double precision exhausted
    const double fm = evaluate(ctx, coupling, m);
    best.offer(m, std::abs(fm - target));
    if (fm > target) {
      a = m;
    } else {
      b = m;
    }
  }
  if (best.residual > residual_tol) {
    throw NumericalError("secular residual did not reach tolerance on interval " +
                         std::to_string(index));
  }
  return Root{index, best.omega, best.residual, lo, hi, false};
}

}  // namespace

CouplingConfig CouplingConfig::bare(double v_inverse) {
  CouplingConfig c;
  c.scheme = Scheme::bare;
  c.inverse_coupling = v_inverse;
  return c;
}

CouplingConfig CouplingConfig::renormalized(double v_theta_inverse, double lambda) {
  CouplingConfig c;
  c.scheme = Scheme::renormalized;
  c.inverse_coupling = v_theta_inverse;
  c.lambda = lambda;
  return c;
}

void CouplingConfig::validate(const GreensContext& ctx) const {
  if (scheme == Scheme::bare) {
    if (ctx.dimension() != 1) {
      throw ValidationError("bare coupling is only defined for d=1");
    }
    return;
  }
  if (!(lambda > 0.0)) throw ValidationError("lambda must be > 0");
  if (lambda != ctx.lambda()) {
    throw ValidationError("coupling lambda differs from the evaluation context's lambda");
  }
}

Root solve_interval(const GreensContext& ctx, const CouplingConfig& coupling, std::size_t n,
                    double residual_tol) {
  coupling.validate(ctx);
  if (!(residual_tol > 0.0)) throw DomainError("residual tolerance must be > 0");
  if (n < 1 || n >= ctx.pole_count()) {
    throw DomainError("interval index out of range");
  }
  const double lo = ctx.pole_energies()[n - 1];
  const double hi = ctx.pole_energies()[n];
  auto root = bisect_root(ctx, coupling, n, lo, hi, /*left_pole=*/true, residual_tol);
  return *root;  // left_pole guarantees a value or a throw
}

PerturbedSpectrum solve_spectrum(const GreensContext& ctx, const CouplingConfig& coupling,
                                 std::pair<std::size_t, std::size_t> window,
                                 const SolveOptions& options) {
  coupling.validate(ctx);
  const auto [n_lo, n_hi] = window;
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("invalid window");
  if (n_hi >= ctx.pole_count()) {
    throw DomainError("window exceeds the enumerated poles");
  }
  if (ctx.tail_mode() == TailMode::analytic &&
      2.0 * ctx.pole_energies()[n_hi] > ctx.e_cut()) {
    throw TruncationError("window exceeds the truncation-validity region (need e_cut >= 2 omega)");
  }

  const std::size_t count = n_hi - n_lo + 1;
  PerturbedSpectrum spectrum;
  spectrum.n_lo = n_lo;
  spectrum.n_hi = n_hi;
  spectrum.roots.resize(count);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count || failed.load()) break;
      try {
        const std::size_t n = n_lo + k;
        const double gap = ctx.pole_energies()[n] - ctx.pole_energies()[n - 1];
        spectrum.roots[k] =
            solve_interval(ctx, coupling, n, options.residual_tol_per_spacing * gap);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };

  unsigned n_threads = options.threads != 0 ? options.threads
                                            : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, count));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(error);

  if (options.include_subground) {
    const double e1 = ctx.pole_energies()[0];
    const double tol = options.residual_tol_per_spacing * ctx.local_gap(0.5 * e1);
    auto sub = bisect_root(ctx, coupling, 0, 0.0, e1, /*left_pole=*/false, tol);
    if (sub) spectrum.roots.insert(spectrum.roots.begin(), *sub);
  }

  // Transparent levels inside the window's energy range pass through as
  // fixed entries.
  const double e_lo = ctx.pole_energies()[n_lo - 1];
  const double e_hi = ctx.pole_energies()[n_hi];
  for (const Level& l : ctx.levels().levels) {
    if (!l.transparent() || l.energy < e_lo || l.energy > e_hi) continue;
    spectrum.fixed_levels.push_back({0, l.energy, 0.0, l.energy, l.energy, true});
  }
  return spectrum;
}

void write_spectrum_csv(const PerturbedSpectrum& spectrum, std::ostream& out) {
  out << "index,omega,residual,E_left,E_right\n";
  char buf[64];
  const auto field = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  const auto row = [&](const Root& r) {
    out << r.index;
    field(r.omega);
    field(r.residual);
    field(r.e_left);
    field(r.e_right);
    out << "\n";
  };
  for (const Root& r : spectrum.roots) row(r);
  for (const Root& r : spectrum.fixed_levels) row(r);
}

}  // namespace scatterbox
