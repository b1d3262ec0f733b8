#include <sketchpress/analysis.hpp>

#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>

#include "streaming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sketchpress {

namespace {

Matrix gramian(const Eigen::Ref<const Matrix>& a) {
  Matrix g = a * a.transpose();
  return 0.5 * (g + g.transpose());
}

void check_rows(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c) {
  if (a_f.rows() != a_c.rows()) {
    throw ConfigError("A_f has " + std::to_string(a_f.rows()) + " rows but A_c has " +
                      std::to_string(a_c.rows()));
  }
}

TauSweep sweep_gramians(const Matrix& gf, const Matrix& gc, std::span<const double> grid, double scale) {
  TauSweep out;
  out.tau.assign(grid.begin(), grid.end());
  if (out.tau.empty()) throw ConfigError("tau grid is empty");
  for (std::size_t i = 0; i < out.tau.size(); ++i) {
    if (!(out.tau[i] > 0.0) || !std::isfinite(out.tau[i])) throw ConfigError("tau grid values must be positive");
    if (i > 0 && !(out.tau[i] > out.tau[i - 1])) throw ConfigError("tau grid must be strictly increasing");
  }
  out.epsilon.reserve(out.tau.size());
  for (double t : out.tau) out.epsilon.push_back(scale * lambda_max(gf - t * gc));

  const double lo = *std::min_element(out.epsilon.begin(), out.epsilon.end());
  double magnitude = 0.0;
  for (double e : out.epsilon) magnitude = std::max(magnitude, std::abs(e));
  const double slack = 1e-9 * magnitude;
  for (std::size_t i = 0; i < out.epsilon.size(); ++i) {
    if (out.epsilon[i] <= lo + slack) {
      out.minimizer = i;
      break;
    }
  }
  return out;
}

double centre_from_gramians(const Matrix& gf, const Matrix& gc) {
  const double top_c = lambda_max(gc);
  const double top_f = lambda_max(gf);
  if (!(top_c > 0.0)) throw NumericalError("coarse Gramian is zero; cannot centre the tau grid");
  if (!(top_f > 0.0)) throw NumericalError("fine Gramian is zero; cannot centre the tau grid");
  return top_f / top_c;
}

}  // namespace

double rel_frob_error(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& a_hat) {
  if (a.rows() != a_hat.rows() || a.cols() != a_hat.cols()) {
    throw ConfigError("rel_frob_error: shape mismatch");
  }
  const double ref = a.norm();
  if (!(ref > 0.0)) throw ConfigError("rel_frob_error: reference matrix has zero norm");
  return (a - a_hat).norm() / ref;
}

double oracle_error_from_spectrum(const Eigen::Ref<const Vector>& s, Index k) {
  if (k < 0) throw ConfigError("oracle_error: k must be >= 0");
  if (k >= s.size()) return 0.0;
  return s.tail(s.size() - k).norm();
}

double oracle_error(const Eigen::Ref<const Matrix>& a, Index k) {
  if (k < 0 || k > std::min(a.rows(), a.cols())) {
    throw ConfigError("oracle_error: k must lie in [0, min(m, n)]");
  }
  return oracle_error_from_spectrum(singular_values(a), k);
}

MreoResult mreo(std::span<const double> trial_errors, double oracle) {
  if (trial_errors.empty()) throw ConfigError("mreo: need at least one trial");
  if (!(oracle >= 0.0)) throw ConfigError("mreo: oracle must be nonnegative");
  const double worst = *std::max_element(trial_errors.begin(), trial_errors.end());
  MreoResult out;
  if (oracle == 0.0) {
    out.ratio = worst == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return out;
  }
  out.ratio = worst / oracle;
  const double best = *std::min_element(trial_errors.begin(), trial_errors.end());
  out.below_oracle = best < oracle * (1.0 - 1e-10);
  return out;
}

ErrorReport error_report(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& a_hat, Index k,
                         double coarsening_factor) {
  ErrorReport out;
  out.rel_frob = rel_frob_error(a, a_hat);
  out.oracle_error = oracle_error(a, k) / a.norm();
  const double trial[] = {out.rel_frob};
  out.mreo = mreo(trial, out.oracle_error).ratio;
  out.coarsening_factor = coarsening_factor;
  return out;
}

double epsilon_tau(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, double tau) {
  check_rows(a_f, a_c);
  return lambda_max(gramian(a_f) - tau * gramian(a_c));
}

double rho_tau(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, double tau) {
  check_rows(a_f, a_c);
  return spectral_norm(gramian(a_f) - tau * gramian(a_c));
}

std::vector<double> default_tau_grid(double centre, int points) {
  if (!(centre > 0.0) || !std::isfinite(centre)) throw ConfigError("tau grid centre must be positive");
  if (points < 2) throw ConfigError("tau grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = centre * std::pow(10.0, -2.0 + 4.0 * i / (points - 1));
  }
  return grid;
}

double tau_centre(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c) {
  check_rows(a_f, a_c);
  return centre_from_gramians(gramian(a_f), gramian(a_c));
}

TauSweep epsilon_sweep(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c,
                       std::span<const double> tau_grid) {
  check_rows(a_f, a_c);
  TauSweep out = sweep_gramians(gramian(a_f), gramian(a_c), tau_grid, 1.0);
  out.sampled_rows.resize(static_cast<std::size_t>(a_f.rows()));
  for (Index i = 0; i < a_f.rows(); ++i) out.sampled_rows[static_cast<std::size_t>(i)] = i;
  return out;
}

IndexList estimator_rows(Index m, Index m_c) {
  if (m_c < 1 || m_c > m) {
    throw ConfigError("spc_id_err: m_c=" + std::to_string(m_c) + " must lie in [1, m=" + std::to_string(m) + "]");
  }
  const Index c = m / m_c;
  IndexList rows;
  rows.reserve(static_cast<std::size_t>(m_c));
  for (Index i = 0; i < m && static_cast<Index>(rows.size()) < m_c; ++i) {
    if ((i + 1) % c == 0) rows.push_back(i);
  }
  return rows;
}

TauSweep spc_id_err(SnapshotStream& stream, const SketchOperator& sketch, Index m_c,
                    std::optional<std::vector<double>> tau_grid, Index block_rows) {
  detail::check_stream_matches(stream, sketch);
  const IndexList rows = estimator_rows(stream.rows(), m_c);
  const Index c = stream.rows() / m_c;
  const SketchOperator coarse_op = sketch.coarse_only();

  Matrix b_f(static_cast<Index>(rows.size()), stream.cols());
  Matrix b_c(static_cast<Index>(rows.size()), coarse_op.output_dim());
  std::size_t next = 0;
  for_each_block(stream, block_rows, [&](const RowBlock& block, Index first) {
    const Index last = first + block.rows();
    const std::size_t begin = next;
    while (next < rows.size() && rows[next] < last) ++next;
    if (next == begin) return;
    RowBlock picked(static_cast<Index>(next - begin), block.cols());
    for (std::size_t t = begin; t < next; ++t) picked.row(static_cast<Index>(t - begin)) = block.row(rows[t] - first);
    b_f.middleRows(static_cast<Index>(begin), picked.rows()) = picked;
    b_c.middleRows(static_cast<Index>(begin), picked.rows()) = coarse_op.apply(picked);
  });

  const Matrix gf = gramian(b_f);
  const Matrix gc = gramian(b_c);
  const std::vector<double> grid = tau_grid ? *tau_grid : default_tau_grid(centre_from_gramians(gf, gc));
  TauSweep out = sweep_gramians(gf, gc, grid, static_cast<double>(c));
  out.sample_stride = c;
  out.sampled_rows = rows;
  return out;
}

}  // namespace sketchpress
