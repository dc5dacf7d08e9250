#include "scatterbox/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

namespace scatterbox {

namespace {

constexpr double kPi = std::numbers::pi;

// Levels closer than this relative gap are one pole of the secular equation.
constexpr double kDegeneracyRelGap = 1e-12;

constexpr double kModeCapacity = 1e8;

std::string axis_name(int axis) { return std::string(1, static_cast<char>('x' + axis)); }

void format_full(char* buf, std::size_t n, double v) { std::snprintf(buf, n, "%.17g", v); }

}  // namespace

double sin_pi(double t) {
  // remainder() is exact, so integer t maps to exactly 0 and half-integer t
  // to exactly +-0.5 before the final sin.
  double r = std::remainder(t, 2.0);
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(kPi * r);
}

double BilliardSpec::volume() const {
  double v = 1.0;
  for (double l : sides()) v *= l;
  return v;
}

double BilliardSpec::symmetry_factor() const {
  double f = 1.0;
  for (int i = 0; i < dimension; ++i) {
    if (parity_filter[i] == AxisFilter::odd_only) f *= 0.5;
  }
  return f;
}

double BilliardSpec::mean_weight() const {
  // <sin^2> over retained quantum numbers is 1/2 per axis, except for the
  // odd-only filter at the exact axis center where every retained sin^2 is 1.
  double w = 1.0;
  for (int i = 0; i < dimension; ++i) {
    const double ratio = scatterer_position[i] / side_lengths[i];
    const bool centered_odd = parity_filter[i] == AxisFilter::odd_only && ratio == 0.5;
    w *= (2.0 / side_lengths[i]) * (centered_odd ? 1.0 : 0.5);
  }
  return w;
}

void BilliardSpec::validate() const {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw ValidationError("dimension must be 1, 2, or 3 (got " + std::to_string(dimension) + ")");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ValidationError("mass must be a positive finite real");
  }
  for (int i = 0; i < dimension; ++i) {
    if (!(side_lengths[i] > 0.0) || !std::isfinite(side_lengths[i])) {
      throw ValidationError("side_lengths[" + axis_name(i) + "] must be positive");
    }
    if (!(scatterer_position[i] > 0.0) || !(scatterer_position[i] < side_lengths[i])) {
      throw ValidationError("scatterer_position[" + axis_name(i) +
                            "] must lie strictly inside (0, l_" + axis_name(i) + ")");
    }
  }
}

double eigenfunction_weight(const BilliardSpec& spec, const ModeIndex& mode) {
  double w = 1.0;
  for (int i = 0; i < spec.dimension; ++i) {
    if (mode.n[i] < 1) throw DomainError("quantum numbers must be >= 1");
    const double s = sin_pi(mode.n[i] * (spec.scatterer_position[i] / spec.side_lengths[i]));
    w *= (2.0 / spec.side_lengths[i]) * s * s;
  }
  return w;
}

double eigenfunction_value(const BilliardSpec& spec, const ModeIndex& mode,
                           std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.dimension)) {
    throw DomainError("evaluation point has wrong dimension");
  }
  double v = 1.0;
  for (int i = 0; i < spec.dimension; ++i) {
    if (x[i] < 0.0 || x[i] > spec.side_lengths[i]) {
      throw DomainError("evaluation point outside the box");
    }
    v *= std::sqrt(2.0 / spec.side_lengths[i]) * sin_pi(mode.n[i] * (x[i] / spec.side_lengths[i]));
  }
  return v;
}

double density_coefficient(int dimension, double mass, double volume) {
  switch (dimension) {
    case 1:
      return std::sqrt(mass) * volume / (std::sqrt(2.0) * kPi);
    case 2:
      return mass * volume / (2.0 * kPi);
    case 3:
      return std::pow(mass, 1.5) * volume / (std::sqrt(2.0) * kPi * kPi);
    default:
      throw DomainError("dimension must be 1, 2, or 3");
  }
}

double avg_density(const BilliardSpec& spec, double omega) {
  if (!(omega > 0.0)) throw DomainError("avg_density requires omega > 0");
  const double c = density_coefficient(spec.dimension, spec.mass, spec.volume());
  const double s = spec.symmetry_factor();
  switch (spec.dimension) {
    case 1:
      return s * c / std::sqrt(omega);
    case 2:
      return s * c;
    default:
      return s * c * std::sqrt(omega);
  }
}

double counting_function(const BilliardSpec& spec, double omega) {
  if (omega < 0.0) throw DomainError("counting_function requires omega >= 0");
  if (omega == 0.0) return 0.0;
  const double c = density_coefficient(spec.dimension, spec.mass, spec.volume());
  const double s = spec.symmetry_factor();
  switch (spec.dimension) {
    case 1:
      return s * c * 2.0 * std::sqrt(omega);
    case 2:
      return s * c * omega;
    default:
      return s * c * (2.0 / 3.0) * std::pow(omega, 1.5);
  }
}

double energy_at_count(const BilliardSpec& spec, double count) {
  if (count < 0.0) throw DomainError("energy_at_count requires count >= 0");
  const double c = density_coefficient(spec.dimension, spec.mass, spec.volume());
  const double s = spec.symmetry_factor();
  switch (spec.dimension) {
    case 1: {
      const double r = count / (2.0 * s * c);
      return r * r;
    }
    case 2:
      return count / (s * c);
    default:
      return std::pow(1.5 * count / (s * c), 2.0 / 3.0);
  }
}

std::size_t LevelSet::pole_count() const {
  std::size_t n = 0;
  for (const Level& l : levels) {
    if (!l.transparent()) ++n;
  }
  return n;
}

LevelSet enumerate_levels(const BilliardSpec& spec, double e_max) {
  spec.validate();
  if (!std::isfinite(e_max)) throw DomainError("e_max must be finite");

  const double k_max = std::sqrt(std::max(0.0, 2.0 * spec.mass * e_max));
  std::array<std::int64_t, kMaxDimension> n_max{0, 0, 0};
  double box = 1.0;
  for (int i = 0; i < spec.dimension; ++i) {
    n_max[i] = static_cast<std::int64_t>(std::floor(spec.side_lengths[i] * k_max / kPi));
    box *= static_cast<double>(std::max<std::int64_t>(n_max[i], 0));
  }
  if (box > kModeCapacity) {
    throw CapacityError("mode enumeration would visit > 1e8 candidates");
  }

  // First retained mode is n_i = 1 on every axis under both filters.
  double ground = 0.0;
  for (int i = 0; i < spec.dimension; ++i) {
    const double k = kPi / spec.side_lengths[i];
    ground += k * k;
  }
  ground /= 2.0 * spec.mass;
  if (e_max < ground) {
    throw EmptySetError("cutoff e_max below the first retained level");
  }

  std::vector<Level> raw;
  raw.reserve(static_cast<std::size_t>(std::min(box, 1.0e7)));

  std::array<double, kMaxDimension> axis_k2{};  // (n pi / l)^2 per axis, reused
  ModeIndex mode;
  const auto step = [&](int i) { return spec.parity_filter[i] == AxisFilter::odd_only ? 2 : 1; };

  for (std::int64_t n1 = 1; n1 <= n_max[0]; n1 += step(0)) {
    mode.n[0] = static_cast<std::int32_t>(n1);
    const double k1 = n1 * kPi / spec.side_lengths[0];
    axis_k2[0] = k1 * k1;
    if (spec.dimension == 1) {
      const double e = axis_k2[0] / (2.0 * spec.mass);
      if (e <= e_max) raw.push_back({e, eigenfunction_weight(spec, mode), mode});
      continue;
    }
    for (std::int64_t n2 = 1; n2 <= n_max[1]; n2 += step(1)) {
      mode.n[1] = static_cast<std::int32_t>(n2);
      const double k2 = n2 * kPi / spec.side_lengths[1];
      axis_k2[1] = k2 * k2;
      if (axis_k2[0] + axis_k2[1] > 2.0 * spec.mass * e_max) break;
      if (spec.dimension == 2) {
        const double e = (axis_k2[0] + axis_k2[1]) / (2.0 * spec.mass);
        if (e <= e_max) raw.push_back({e, eigenfunction_weight(spec, mode), mode});
        continue;
      }
      for (std::int64_t n3 = 1; n3 <= n_max[2]; n3 += step(2)) {
        mode.n[2] = static_cast<std::int32_t>(n3);
        const double k3 = n3 * kPi / spec.side_lengths[2];
        const double e = (axis_k2[0] + axis_k2[1] + k3 * k3) / (2.0 * spec.mass);
        if (e > e_max) break;
        raw.push_back({e, eigenfunction_weight(spec, mode), mode});
      }
      mode.n[2] = 0;
    }
    mode.n[1] = 0;
  }

  if (raw.empty()) {
    throw EmptySetError("no retained modes below e_max");
  }

  std::sort(raw.begin(), raw.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.mode.n < b.mode.n;
  });

  // Merge degenerate clusters: one pole carries the summed weight, the rest
  // are re-emitted as transparent levels at their original energies.
  std::vector<Level> merged;
  merged.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    double w_sum = raw[i].weight;
    while (j < raw.size() &&
           raw[j].energy - raw[j - 1].energy <= kDegeneracyRelGap * raw[j].energy) {
      w_sum += raw[j].weight;
      ++j;
    }
    merged.push_back({raw[i].energy, w_sum, raw[i].mode});
    for (std::size_t k = i + 1; k < j; ++k) {
      merged.push_back({raw[k].energy, 0.0, raw[k].mode});
    }
    i = j;
  }

  LevelSet set;
  set.levels = std::move(merged);
  set.dimension = spec.dimension;
  set.e_max = e_max;
  set.volume = spec.volume();
  set.mean_weight = spec.mean_weight();
  set.symmetry_factor = spec.symmetry_factor();
  set.mass = spec.mass;
  set.spec = spec;
  return set;
}

LevelSet synthetic_level_set(std::vector<double> energies, std::vector<double> weights,
                             int dimension, double volume, double mean_weight) {
  if (energies.size() != weights.size()) {
    throw ValidationError("synthetic_level_set: energies/weights size mismatch");
  }
  if (energies.empty()) throw ValidationError("synthetic_level_set: empty data");
  LevelSet set;
  set.levels.reserve(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (i > 0 && !(energies[i] > energies[i - 1])) {
      throw ValidationError("synthetic_level_set: energies must be strictly increasing");
    }
    if (weights[i] < 0.0) throw ValidationError("synthetic_level_set: negative weight");
    set.levels.push_back({energies[i], weights[i], ModeIndex{}});
  }
  if (dimension < 1 || dimension > kMaxDimension) {
    throw ValidationError("synthetic_level_set: bad dimension");
  }
  set.dimension = dimension;
  set.e_max = energies.back();
  set.volume = volume;
  set.mean_weight = mean_weight;
  set.symmetry_factor = 1.0;
  set.spec = std::nullopt;
  return set;
}

void write_levels_csv(const LevelSet& set, std::ostream& out) {
  const int d = set.dimension;
  out << "index,energy,weight";
  for (int i = 0; i < d; ++i) out << ",n" << (i + 1);
  out << "\n";
  char buf[64];
  std::size_t index = 1;
  for (const Level& l : set.levels) {
    out << index++;
    format_full(buf, sizeof buf, l.energy);
    out << ',' << buf;
    format_full(buf, sizeof buf, l.weight);
    out << ',' << buf;
    for (int i = 0; i < d; ++i) out << ',' << l.mode.n[i];
    out << "\n";
  }
}

}  // namespace scatterbox
