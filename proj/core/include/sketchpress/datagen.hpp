#pragma once

#include <sketchpress/snapshot_io.hpp>
#include <sketchpress/types.hpp>

#include <cstdint>
#include <filesystem>
#include <string_view>

namespace sketchpress {

enum class DecayKind : std::uint8_t { Exponential = 0, Power = 1, ExactRank = 2 };

std::string_view to_string(DecayKind kind);
DecayKind parse_decay_kind(std::string_view name);

/// A = U diag(sigma) V^T with seeded orthonormal U, V and a prescribed
/// spectrum: exp(-rate (i-1)), i^{-alpha}, or 1/i for i <= rank and 0 after.
struct SpectrumSpec {
  Index m = 0;
  Index n = 0;
  DecayKind decay = DecayKind::Power;
  double rate = 0.5;   // Exponential
  double alpha = 0.5;  // Power
  Index rank = 1;      // ExactRank
  std::uint64_t seed = 0;

  void validate() const;
  /// min(m, n) prescribed singular values, sigma_1 = 1.
  Vector singular_values() const;
};

Matrix gen_spectrum_matrix(const SpectrumSpec& spec);
void gen_spectrum(const SpectrumSpec& spec, const std::filesystem::path& path,
                  ScalarKind kind = ScalarKind::f64);

/// Exact solution of u_t = kappa (u_xx + u_yy) on the periodic square
/// [0, 2 pi)^2 sampled on a g x g grid at t_i = i dt. The initial field is a
/// seeded random Fourier series with wavenumbers up to `modes`; each mode
/// decays as exp(-kappa |k|^2 t). Row i is the flattened field (x-major).
struct Heat2dSpec {
  Index grid = 32;
  Index steps = 64;
  double diffusivity = 0.01;
  double dt = 1.0;
  Index modes = 6;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rows [first, first + count) of the heat snapshot matrix.
RowBlock heat2d_rows(const Heat2dSpec& spec, Index first, Index count);
Matrix gen_heat2d_matrix(const Heat2dSpec& spec);
void gen_heat2d(const Heat2dSpec& spec, const std::filesystem::path& path, ScalarKind kind = ScalarKind::f64);

}  // namespace sketchpress
