#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "scatterbox/billiard.hpp"
#include "scatterbox/greens.hpp"
#include "scatterbox/solver.hpp"
#include "scatterbox/stats.hpp"

namespace scatterbox {

struct HistogramConfig {
  double bin_width = 0.1;
  double s_max = 3.0;
};

/// One reproducible end-to-end run: enumerate -> solve -> statistics -> bands.
struct ScenarioConfig {
  BilliardSpec billiard;
  CouplingConfig::Scheme scheme = CouplingConfig::Scheme::renormalized;
  std::vector<double> coupling_inverses;  ///< sweep, deduplicated in order
  double lambda = 1.0;
  std::size_t window_lo = 1, window_hi = 100;
  Unfolding unfolding;
  HistogramConfig histogram;
  double tolerance = 1e-9;  ///< solver residual bound per unit local spacing
  std::string output_dir = "out";
  unsigned threads = 0;  ///< CLI override, not a config-file field

  std::vector<std::string> warnings;  ///< non-fatal parse notes
};

/// Parse and validate a JSON scenario document. Unknown fields, missing
/// required fields, and out-of-range values are rejected with messages
/// naming the offending key.
ScenarioConfig parse_config(std::string_view json_text);

struct ManifestEntry {
  std::string path;  ///< relative to the output directory
  std::string sha256;
};

struct Manifest {
  std::vector<ManifestEntry> outputs;  ///< sorted by path
};

/// Enumerate with headroom for roots 1..n_hi and wrap in an analytic-tail
/// context: e_cut = max(2 omega_max, omega_max + 50 mean spacings) with
/// omega_max the (n_hi+1)-th pole.
GreensContext prepare_context(const BilliardSpec& spec, std::size_t n_hi, double lambda);

/// Run the full pipeline, writing per-coupling levels/spectrum/histogram/
/// gnuplot/summary files plus a band-diagram CSV and `manifest.json` into
/// config.output_dir. Files are written atomically; identical configs
/// reproduce byte-identical outputs.
Manifest run_scenario(const ScenarioConfig& config);

/// CSV `omega,center,half_width` on a linear grid of `points` energies.
void write_bands_csv(int dimension, double mass, double lambda, double omega_lo, double omega_hi,
                     std::size_t points, std::ostream& out);

/// File-name-safe tag for a coupling value ('-' -> 'm', '.' -> 'p').
std::string coupling_tag(double value);

}  // namespace scatterbox
