#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "scatterbox/billiard.hpp"
#include "scatterbox/solver.hpp"

namespace scatterbox {

/// Spectrum unfolding method. analytic_weyl rescales each spacing by the
/// smooth density at the midpoint; local_window divides by the mean raw
/// spacing over a surrounding window (odd width), then rescales the whole
/// sample to unit mean.
struct Unfolding {
  enum class Kind { analytic_weyl, local_window };
  Kind kind = Kind::analytic_weyl;
  int window_width = 51;
};

/// Nearest-neighbor spacings of the unfolded spectrum (unit mean).
struct SpacingSample {
  std::vector<double> spacings;
  std::size_t n_lo = 0, n_hi = 0;
  Unfolding method;
  double mean_spacing_raw = 0.0;  ///< mean of the raw (energy-unit) spacings
};

struct SpacingHistogram {
  double bin_width = 0.0;
  double s_max = 0.0;
  std::vector<double> densities;  ///< bars integrate to the in-range fraction
  std::size_t sample_count = 0;
};

enum class ReferenceKind { poisson, goe };

/// Unfold the solved roots (fixed levels are never mixed in). Requires at
/// least 50 roots; throws SampleSizeError otherwise.
SpacingSample unfold(const PerturbedSpectrum& spectrum, const BilliardSpec& spec,
                     const Unfolding& method);

SpacingHistogram histogram(const SpacingSample& sample, double bin_width, double s_max);

/// Poisson: exp(-S). GOE (Wigner surmise): (pi S/2) exp(-pi S^2/4).
double reference_pdf(ReferenceKind kind, double s);
double reference_cdf(ReferenceKind kind, double s);

/// Sup-norm distance between the sample's empirical CDF and the reference.
double ks_distance(const SpacingSample& sample, ReferenceKind kind);

struct SpacingSummary {
  std::size_t n_levels = 0;
  double mean_spacing_raw = 0.0;
  double ks_poisson = 0.0;
  double ks_goe = 0.0;
};

SpacingSummary summarize(const SpacingSample& sample);

/// CSV with header `bin_left,bin_right,density`.
void write_histogram_csv(const SpacingHistogram& hist, std::ostream& out);

/// Two-column `bin_center density` rows, gnuplot-ready.
void write_gnuplot_data(const SpacingHistogram& hist, std::ostream& out);

/// Structured `key = value` record.
void write_summary(const SpacingSummary& summary, std::ostream& out);

}  // namespace scatterbox
