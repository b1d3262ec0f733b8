#include <sketchpress/datagen.hpp>

#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>
#include <sketchpress/random.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sketchpress {

namespace {

constexpr std::uint64_t kLeftStream = 10;
constexpr std::uint64_t kRightStream = 11;
constexpr std::uint64_t kModeStream = 20;
constexpr std::uint64_t kMeanStream = 21;

struct Mode {
  Index kx;
  Index ky;
  double a;
  double b;
};

std::vector<Mode> heat_modes(const Heat2dSpec& spec) {
  const Index cap = std::min(spec.modes, spec.grid / 2 - 1);
  const CounterRng rng(spec.seed, kModeStream);
  std::vector<Mode> modes;
  std::uint64_t idx = 0;
  for (Index kx = 0; kx <= cap; ++kx) {
    for (Index ky = -cap; ky <= cap; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      const double damp = 1.0 / (1.0 + static_cast<double>(kx * kx + ky * ky));
      modes.push_back({kx, ky, damp * rng.normal(2 * idx), damp * rng.normal(2 * idx + 1)});
      ++idx;
    }
  }
  return modes;
}

}  // namespace

std::string_view to_string(DecayKind kind) {
  switch (kind) {
    case DecayKind::Exponential: return "exponential";
    case DecayKind::Power: return "power";
    case DecayKind::ExactRank: return "exact-rank";
  }
  return "unknown";
}

DecayKind parse_decay_kind(std::string_view name) {
  if (name == "exponential" || name == "exp") return DecayKind::Exponential;
  if (name == "power") return DecayKind::Power;
  if (name == "exact-rank" || name == "rank") return DecayKind::ExactRank;
  throw ConfigError("unknown decay '" + std::string(name) + "' (expected exponential, power or exact-rank)");
}

void SpectrumSpec::validate() const {
  if (m < 1 || n < 1) throw ConfigError("spectrum: m and n must be >= 1");
  switch (decay) {
    case DecayKind::Exponential:
      if (!(rate > 0.0)) throw ConfigError("spectrum: exponential rate must be > 0");
      break;
    case DecayKind::Power:
      if (!(alpha > 0.0)) throw ConfigError("spectrum: power exponent must be > 0");
      break;
    case DecayKind::ExactRank:
      if (rank < 1 || rank > std::min(m, n)) throw ConfigError("spectrum: rank must lie in [1, min(m, n)]");
      break;
  }
}

Vector SpectrumSpec::singular_values() const {
  validate();
  const Index r = std::min(m, n);
  Vector s(r);
  for (Index i = 0; i < r; ++i) {
    const double idx = static_cast<double>(i + 1);
    switch (decay) {
      case DecayKind::Exponential: s[i] = std::exp(-rate * static_cast<double>(i)); break;
      case DecayKind::Power: s[i] = std::pow(idx, -alpha); break;
      case DecayKind::ExactRank: s[i] = i < rank ? 1.0 / idx : 0.0; break;
    }
  }
  return s;
}

Matrix gen_spectrum_matrix(const SpectrumSpec& spec) {
  const Vector s = spec.singular_values();
  const Index r = s.size();
  const Matrix u = thin_qr(gaussian_matrix(spec.m, r, spec.seed, kLeftStream)).Q;
  const Matrix v = thin_qr(gaussian_matrix(spec.n, r, spec.seed, kRightStream)).Q;
  return u * s.asDiagonal() * v.transpose();
}

void gen_spectrum(const SpectrumSpec& spec, const std::filesystem::path& path, ScalarKind kind) {
  const RowBlock a = gen_spectrum_matrix(spec);
  write_snapshot_file(path, a, kind);
}

void Heat2dSpec::validate() const {
  if (grid < 4) throw ConfigError("heat2d: grid must be >= 4");
  if (steps < 2) throw ConfigError("heat2d: need at least 2 time steps");
  if (!(diffusivity > 0.0)) throw ConfigError("heat2d: diffusivity must be > 0");
  if (!(dt > 0.0)) throw ConfigError("heat2d: dt must be > 0");
  if (modes < 1) throw ConfigError("heat2d: modes must be >= 1");
}

RowBlock heat2d_rows(const Heat2dSpec& spec, Index first, Index count) {
  spec.validate();
  if (first < 0 || count < 0 || first + count > spec.steps) throw ConfigError("heat2d: row range out of bounds");
  const Index g = spec.grid;
  const std::vector<Mode> modes = heat_modes(spec);
  const double mean = CounterRng(spec.seed, kMeanStream).normal(0);

  Vector x(g);
  for (Index i = 0; i < g; ++i) x[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(g);

  // cos/sin tables per mode, x- and y-direction
  std::vector<Vector> cx, sx, cy, sy;
  for (const auto& md : modes) {
    cx.emplace_back((static_cast<double>(md.kx) * x).array().cos());
    sx.emplace_back((static_cast<double>(md.kx) * x).array().sin());
    cy.emplace_back((static_cast<double>(md.ky) * x).array().cos());
    sy.emplace_back((static_cast<double>(md.ky) * x).array().sin());
  }

  RowBlock out(count, g * g);
  Matrix field(g, g);
  for (Index r = 0; r < count; ++r) {
    const double t = static_cast<double>(first + r) * spec.dt;
    field.setConstant(mean);
    for (std::size_t p = 0; p < modes.size(); ++p) {
      const auto& md = modes[p];
      const double w = std::exp(-spec.diffusivity * static_cast<double>(md.kx * md.kx + md.ky * md.ky) * t);
      if (w == 0.0) continue;
      const Vector along_c = w * (md.a * cy[p] + md.b * sy[p]);
      const Vector along_s = w * (md.b * cy[p] - md.a * sy[p]);
      field.noalias() += cx[p] * along_c.transpose() + sx[p] * along_s.transpose();
    }
    for (Index i = 0; i < g; ++i) out.row(r).segment(i * g, g) = field.row(i);
  }
  return out;
}

Matrix gen_heat2d_matrix(const Heat2dSpec& spec) { return heat2d_rows(spec, 0, spec.steps); }

void gen_heat2d(const Heat2dSpec& spec, const std::filesystem::path& path, ScalarKind kind) {
  spec.validate();
  const Index g = spec.grid;
  SnapshotWriter writer(path, g * g, kind);
  constexpr Index kChunk = 16;
  for (Index first = 0; first < spec.steps; first += kChunk) {
    writer.append(heat2d_rows(spec, first, std::min(kChunk, spec.steps - first)));
  }
  writer.finish();
}

}  // namespace sketchpress
