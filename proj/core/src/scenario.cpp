#include "scatterbox/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "scatterbox/bands.hpp"
#include "scatterbox/digest.hpp"
#include "scatterbox/errors.hpp"

namespace scatterbox {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ValidationError(key + ": " + what);
}

void reject_unknown(const json& obj, const std::string& scope,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end()) {
      fail(scope.empty() ? key : scope + "." + key, "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& scope, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(scope.empty() ? key : scope + "." + key, "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

AxisFilter parse_axis_filter(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected \"all\" or \"odd\"");
  const auto s = v.get<std::string>();
  if (s == "all") return AxisFilter::all;
  if (s == "odd" || s == "odd_only") return AxisFilter::odd_only;
  fail(key, "expected \"all\" or \"odd\" (got \"" + s + "\")");
}

BilliardSpec parse_billiard(const json& obj) {
  if (!obj.is_object()) fail("billiard", "expected an object");
  reject_unknown(obj, "billiard",
                 {"dimension", "side_lengths", "mass", "scatterer_position", "parity_filter"});

  BilliardSpec spec;
  const json& dim = require(obj, "billiard", "dimension");
  if (!dim.is_number_integer()) fail("billiard.dimension", "expected an integer");
  spec.dimension = dim.get<int>();
  if (spec.dimension < 1 || spec.dimension > kMaxDimension) {
    fail("billiard.dimension", "must be 1, 2, or 3");
  }

  const json& sides = require(obj, "billiard", "side_lengths");
  if (!sides.is_array() || sides.size() != static_cast<std::size_t>(spec.dimension)) {
    fail("billiard.side_lengths", "expected an array of dimension entries");
  }
  for (int i = 0; i < spec.dimension; ++i) {
    spec.side_lengths[i] = as_number(sides[i], "billiard.side_lengths");
  }

  spec.mass = as_number(require(obj, "billiard", "mass"), "billiard.mass");

  const json& pos = require(obj, "billiard", "scatterer_position");
  if (pos.is_string() && pos.get<std::string>() == "center") {
    for (int i = 0; i < spec.dimension; ++i) {
      spec.scatterer_position[i] = 0.5 * spec.side_lengths[i];
    }
  } else if (pos.is_array() && pos.size() == static_cast<std::size_t>(spec.dimension)) {
    for (int i = 0; i < spec.dimension; ++i) {
      spec.scatterer_position[i] = as_number(pos[i], "billiard.scatterer_position");
    }
  } else {
    fail("billiard.scatterer_position", "expected \"center\" or an array of dimension entries");
  }

  if (const auto it = obj.find("parity_filter"); it != obj.end()) {
    if (it->is_string()) {
      const AxisFilter f = parse_axis_filter(*it, "billiard.parity_filter");
      for (int i = 0; i < spec.dimension; ++i) spec.parity_filter[i] = f;
    } else if (it->is_array() && it->size() == static_cast<std::size_t>(spec.dimension)) {
      for (int i = 0; i < spec.dimension; ++i) {
        spec.parity_filter[i] = parse_axis_filter((*it)[i], "billiard.parity_filter");
      }
    } else {
      fail("billiard.parity_filter", "expected a string or an array of dimension entries");
    }
  }

  try {
    spec.validate();
  } catch (const ValidationError& err) {
    fail("billiard", err.what());
  }
  return spec;
}

}  // namespace

ScenarioConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("config is not valid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ValidationError("config root must be a JSON object");
  reject_unknown(doc, "",
                 {"billiard", "coupling", "window", "unfolding", "histogram", "tolerance",
                  "output_dir"});

  ScenarioConfig cfg;
  cfg.billiard = parse_billiard(require(doc, "", "billiard"));

  const json& coupling = require(doc, "", "coupling");
  if (!coupling.is_object()) fail("coupling", "expected an object");
  reject_unknown(coupling, "coupling", {"scheme", "v_theta_inverse", "v_inverse", "lambda"});
  const json& scheme = require(coupling, "coupling", "scheme");
  if (!scheme.is_string()) fail("coupling.scheme", "expected \"bare\" or \"renormalized\"");
  const std::string scheme_name = scheme.get<std::string>();
  const char* value_key = nullptr;
  if (scheme_name == "bare") {
    cfg.scheme = CouplingConfig::Scheme::bare;
    value_key = "v_inverse";
    if (coupling.contains("v_theta_inverse")) {
      fail("coupling.v_theta_inverse", "not valid with the bare scheme (use v_inverse)");
    }
    if (cfg.billiard.dimension != 1) {
      fail("coupling.scheme", "bare coupling is only defined for dimension 1");
    }
  } else if (scheme_name == "renormalized") {
    cfg.scheme = CouplingConfig::Scheme::renormalized;
    value_key = "v_theta_inverse";
    if (coupling.contains("v_inverse")) {
      fail("coupling.v_inverse", "not valid with the renormalized scheme (use v_theta_inverse)");
    }
  } else {
    fail("coupling.scheme", "expected \"bare\" or \"renormalized\"");
  }
  const json& values = require(coupling, "coupling", value_key);
  const std::string value_scope = std::string("coupling.") + value_key;
  if (values.is_number()) {
    cfg.coupling_inverses.push_back(values.get<double>());
  } else if (values.is_array() && !values.empty()) {
    for (const json& v : values) {
      cfg.coupling_inverses.push_back(as_number(v, value_scope));
    }
  } else {
    fail(value_scope, "expected a number or a non-empty array of numbers");
  }
  // Deduplicate the sweep, preserving first occurrences.
  std::vector<double> unique;
  for (double v : cfg.coupling_inverses) {
    if (std::find(unique.begin(), unique.end(), v) != unique.end()) {
      cfg.warnings.push_back(value_scope + ": duplicate sweep value " + std::to_string(v) +
                             " dropped");
      continue;
    }
    unique.push_back(v);
  }
  cfg.coupling_inverses = std::move(unique);

  if (const auto it = coupling.find("lambda"); it != coupling.end()) {
    cfg.lambda = as_number(*it, "coupling.lambda");
  }
  if (cfg.scheme == CouplingConfig::Scheme::renormalized && !(cfg.lambda > 0.0)) {
    fail("coupling.lambda", "must be > 0");
  }

  const json& window = require(doc, "", "window");
  if (!window.is_array() || window.size() != 2 || !window[0].is_number_integer() ||
      !window[1].is_number_integer()) {
    fail("window", "expected [n_lo, n_hi] with integer entries");
  }
  const auto lo = window[0].get<std::int64_t>();
  const auto hi = window[1].get<std::int64_t>();
  if (lo < 1 || hi < lo) fail("window", "need 1 <= n_lo <= n_hi");
  cfg.window_lo = static_cast<std::size_t>(lo);
  cfg.window_hi = static_cast<std::size_t>(hi);

  if (const auto it = doc.find("unfolding"); it != doc.end()) {
    if (it->is_string()) {
      const auto s = it->get<std::string>();
      if (s == "analytic_weyl") {
        cfg.unfolding.kind = Unfolding::Kind::analytic_weyl;
      } else if (s == "local_window") {
        cfg.unfolding.kind = Unfolding::Kind::local_window;
      } else {
        fail("unfolding", "expected \"analytic_weyl\" or \"local_window\"");
      }
    } else if (it->is_object()) {
      reject_unknown(*it, "unfolding", {"method", "width"});
      const json& m = require(*it, "unfolding", "method");
      if (!m.is_string() || m.get<std::string>() != "local_window") {
        fail("unfolding.method", "only \"local_window\" takes parameters");
      }
      cfg.unfolding.kind = Unfolding::Kind::local_window;
      if (const auto w = it->find("width"); w != it->end()) {
        if (!w->is_number_integer()) fail("unfolding.width", "expected an odd integer >= 3");
        cfg.unfolding.window_width = w->get<int>();
        if (cfg.unfolding.window_width < 3 || cfg.unfolding.window_width % 2 == 0) {
          fail("unfolding.width", "expected an odd integer >= 3");
        }
      }
    } else {
      fail("unfolding", "expected a string or an object");
    }
  }

  if (const auto it = doc.find("histogram"); it != doc.end()) {
    if (!it->is_object()) fail("histogram", "expected an object");
    reject_unknown(*it, "histogram", {"bin_width", "s_max"});
    if (const auto b = it->find("bin_width"); b != it->end()) {
      cfg.histogram.bin_width = as_number(*b, "histogram.bin_width");
      if (!(cfg.histogram.bin_width > 0.0)) fail("histogram.bin_width", "must be > 0");
    }
    if (const auto s = it->find("s_max"); s != it->end()) {
      cfg.histogram.s_max = as_number(*s, "histogram.s_max");
      if (!(cfg.histogram.s_max > 0.0)) fail("histogram.s_max", "must be > 0");
    }
  }

  if (const auto it = doc.find("tolerance"); it != doc.end()) {
    cfg.tolerance = as_number(*it, "tolerance");
    if (!(cfg.tolerance > 0.0)) fail("tolerance", "must be > 0");
  }

  if (const auto it = doc.find("output_dir"); it != doc.end()) {
    if (!it->is_string()) fail("output_dir", "expected a string");
    cfg.output_dir = it->get<std::string>();
  }

  return cfg;
}

namespace {

double nth_pole_energy(const LevelSet& set, std::size_t n) {
  std::size_t seen = 0;
  for (const Level& l : set.levels) {
    if (l.transparent()) continue;
    if (++seen == n) return l.energy;
  }
  throw NumericalError("level set has fewer poles than requested");
}

}  // namespace

GreensContext prepare_context(const BilliardSpec& spec, std::size_t n_hi, double lambda) {
  spec.validate();
  const double target = static_cast<double>(n_hi) + 1.0;
  double e_est = energy_at_count(spec, target + 10.0 * std::sqrt(target) + 50.0);
  for (int attempt = 0; attempt < 12; ++attempt) {
    const LevelSet probe = enumerate_levels(spec, e_est);
    if (probe.pole_count() >= n_hi + 1) {
      const double omega_max = nth_pole_energy(probe, n_hi + 1);
      const double spacing = 1.0 / avg_density(spec, omega_max);
      const double e_cut = std::max(2.0 * omega_max, omega_max + 50.0 * spacing);
      return GreensContext(enumerate_levels(spec, e_cut), lambda, TailMode::analytic);
    }
    e_est *= 1.5;
  }
  throw NumericalError("enumeration failed to cover the requested window");
}

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("failed to move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace

std::string coupling_tag(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string tag = "v";
  for (const char* p = buf; *p; ++p) {
    switch (*p) {
      case '-': tag += 'm'; break;
      case '.': tag += 'p'; break;
      case '+': break;
      default: tag += *p;
    }
  }
  return tag;
}

void write_bands_csv(int dimension, double mass, double lambda, double omega_lo, double omega_hi,
                     std::size_t points, std::ostream& out) {
  if (points < 2) throw DomainError("band grid needs at least 2 points");
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) {
    throw DomainError("band grid needs 0 < omega_lo < omega_hi");
  }
  out << "omega,center,half_width\n";
  char buf[64];
  const auto field = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << sep;
  };
  for (std::size_t i = 0; i < points; ++i) {
    const double omega =
        omega_lo + (omega_hi - omega_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const StrongBand band = strong_band(dimension, mass, lambda, omega);
    field(omega, ',');
    field(band.center, ',');
    field(band.half_width, '\n');
  }
}

Manifest run_scenario(const ScenarioConfig& config) {
  config.billiard.validate();
  if (config.coupling_inverses.empty()) {
    throw ValidationError("coupling sweep is empty");
  }

  fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());

  Manifest manifest;
  const auto emit = [&](const std::string& name, const std::string& content) {
    write_atomic(dir / name, content);
    manifest.outputs.push_back({name, sha256_hex(content)});
  };

  GreensContext ctx = prepare_context(config.billiard, config.window_hi, config.lambda);

  {
    std::ostringstream ss;
    write_levels_csv(ctx.levels(), ss);
    emit("levels.csv", ss.str());
  }

  SolveOptions options;
  options.residual_tol_per_spacing = config.tolerance;
  options.threads = config.threads;

  for (double v : config.coupling_inverses) {
    const CouplingConfig coupling = config.scheme == CouplingConfig::Scheme::bare
                                        ? CouplingConfig::bare(v)
                                        : CouplingConfig::renormalized(v, config.lambda);
    const PerturbedSpectrum spectrum =
        solve_spectrum(ctx, coupling, {config.window_lo, config.window_hi}, options);
    const std::string tag = coupling_tag(v);

    {
      std::ostringstream ss;
      write_spectrum_csv(spectrum, ss);
      emit("spectrum_" + tag + ".csv", ss.str());
    }

    try {
      const SpacingSample sample = unfold(spectrum, config.billiard, config.unfolding);
      const SpacingHistogram hist =
          histogram(sample, config.histogram.bin_width, config.histogram.s_max);
      const SpacingSummary summary = summarize(sample);
      std::ostringstream hs, gs, ss;
      write_histogram_csv(hist, hs);
      emit("hist_" + tag + ".csv", hs.str());
      write_gnuplot_data(hist, gs);
      emit("ps_" + tag + ".dat", gs.str());
      write_summary(summary, ss);
      emit("summary_" + tag + ".txt", ss.str());
    } catch (const SampleSizeError& err) {
      std::ostringstream ss;
      ss << "n_levels = " << spectrum.roots.size() << "\n";
      ss << "stats = skipped (" << err.what() << ")\n";
      emit("summary_" + tag + ".txt", ss.str());
    }
  }

  {
    const double omega_lo = ctx.pole_energies()[config.window_lo - 1];
    const double omega_hi = ctx.pole_energies()[config.window_hi];
    std::ostringstream ss;
    write_bands_csv(config.billiard.dimension, config.billiard.mass, config.lambda, omega_lo,
                    omega_hi, 256, ss);
    emit("bands.csv", ss.str());
  }

  std::sort(manifest.outputs.begin(), manifest.outputs.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  json mj;
  mj["outputs"] = json::array();
  for (const ManifestEntry& entry : manifest.outputs) {
    mj["outputs"].push_back({{"path", entry.path}, {"sha256", entry.sha256}});
  }
  write_atomic(dir / "manifest.json", mj.dump(2) + "\n");

  return manifest;
}

}  // namespace scatterbox
