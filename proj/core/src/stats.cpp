#include "scatterbox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "scatterbox/errors.hpp"
#include "scatterbox/kahan.hpp"

namespace scatterbox {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinSample = 50;

double mean(const std::vector<double>& v) {
  KahanSum acc;
  for (double x : v) acc.add(x);
  return acc.value() / static_cast<double>(v.size());
}

}  // namespace

SpacingSample unfold(const PerturbedSpectrum& spectrum, const BilliardSpec& spec,
                     const Unfolding& method) {
  const auto& roots = spectrum.roots;
  if (roots.size() < kMinSample) {
    throw SampleSizeError("unfolding requires at least 50 levels in the window");
  }

  std::vector<double> raw(roots.size() - 1);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    raw[i] = roots[i + 1].omega - roots[i].omega;
  }

  SpacingSample sample;
  sample.n_lo = spectrum.n_lo;
  sample.n_hi = spectrum.n_hi;
  sample.method = method;
  sample.mean_spacing_raw = mean(raw);
  sample.spacings.resize(raw.size());

  if (method.kind == Unfolding::Kind::analytic_weyl) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double midpoint = 0.5 * (roots[i].omega + roots[i + 1].omega);
      sample.spacings[i] = raw[i] * avg_density(spec, midpoint);
    }
    return sample;
  }

  if (method.window_width < 3 || method.window_width % 2 == 0) {
    throw ValidationError("local_window width must be an odd integer >= 3");
  }
  const std::ptrdiff_t half = method.window_width / 2;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(raw.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min(n, i + half + 1);
    KahanSum acc;
    for (std::ptrdiff_t j = lo; j < hi; ++j) acc.add(raw[j]);
    sample.spacings[i] = raw[i] * static_cast<double>(hi - lo) / acc.value();
  }
  // Edge windows bias the mean slightly; rescale to exactly unit mean.
  const double m = mean(sample.spacings);
  for (double& s : sample.spacings) s /= m;
  return sample;
}

SpacingHistogram histogram(const SpacingSample& sample, double bin_width, double s_max) {
  if (!(bin_width > 0.0)) throw DomainError("bin_width must be > 0");
  if (!(s_max > 0.0)) throw DomainError("s_max must be > 0");
  SpacingHistogram hist;
  hist.bin_width = bin_width;
  hist.s_max = s_max;
  hist.sample_count = sample.spacings.size();
  const std::size_t bins = static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
  hist.densities.assign(bins, 0.0);
  if (hist.sample_count == 0) return hist;
  const double norm = 1.0 / (static_cast<double>(hist.sample_count) * bin_width);
  for (double s : sample.spacings) {
    if (s < 0.0 || s >= s_max) continue;
    const std::size_t bin = std::min(bins - 1, static_cast<std::size_t>(s / bin_width));
    hist.densities[bin] += norm;
  }
  return hist;
}

double reference_pdf(ReferenceKind kind, double s) {
  if (s < 0.0) throw DomainError("spacing must be >= 0");
  if (kind == ReferenceKind::poisson) return std::exp(-s);
  return 0.5 * kPi * s * std::exp(-0.25 * kPi * s * s);
}

double reference_cdf(ReferenceKind kind, double s) {
  if (s < 0.0) throw DomainError("spacing must be >= 0");
  if (kind == ReferenceKind::poisson) return 1.0 - std::exp(-s);
  return 1.0 - std::exp(-0.25 * kPi * s * s);
}

double ks_distance(const SpacingSample& sample, ReferenceKind kind) {
  if (sample.spacings.empty()) throw SampleSizeError("ks_distance requires a non-empty sample");
  std::vector<double> sorted = sample.spacings;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(kind, sorted[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

SpacingSummary summarize(const SpacingSample& sample) {
  SpacingSummary s;
  s.n_levels = sample.spacings.size() + 1;
  s.mean_spacing_raw = sample.mean_spacing_raw;
  s.ks_poisson = ks_distance(sample, ReferenceKind::poisson);
  s.ks_goe = ks_distance(sample, ReferenceKind::goe);
  return s;
}

namespace {

void print_full(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_histogram_csv(const SpacingHistogram& hist, std::ostream& out) {
  out << "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < hist.densities.size(); ++i) {
    print_full(out, static_cast<double>(i) * hist.bin_width);
    out << ',';
    print_full(out, static_cast<double>(i + 1) * hist.bin_width);
    out << ',';
    print_full(out, hist.densities[i]);
    out << "\n";
  }
}

void write_gnuplot_data(const SpacingHistogram& hist, std::ostream& out) {
  for (std::size_t i = 0; i < hist.densities.size(); ++i) {
    print_full(out, (static_cast<double>(i) + 0.5) * hist.bin_width);
    out << ' ';
    print_full(out, hist.densities[i]);
    out << "\n";
  }
}

void write_summary(const SpacingSummary& summary, std::ostream& out) {
  out << "n_levels = " << summary.n_levels << "\n";
  out << "mean_spacing_raw = ";
  print_full(out, summary.mean_spacing_raw);
  out << "\nks_poisson = ";
  print_full(out, summary.ks_poisson);
  out << "\nks_goe = ";
  print_full(out, summary.ks_goe);
  out << "\n";
}

}  // namespace scatterbox
