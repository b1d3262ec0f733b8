#pragma once

#include <sketchpress/sketch.hpp>
#include <sketchpress/snapshot_io.hpp>
#include <sketchpress/types.hpp>

#include <optional>
#include <span>
#include <vector>

namespace sketchpress {

struct ErrorReport {
  double rel_frob = 0.0;
  double oracle_error = 0.0;  // relative Frobenius error of the best rank-k approximation
  double mreo = 0.0;
  double coarsening_factor = 0.0;
};

struct MreoResult {
  double ratio = 0.0;
  bool below_oracle = false;  // some trial beat Eckart-Young by more than round-off
};

/// ||A - A_hat||_F / ||A||_F. Throws ConfigError on a shape mismatch or a
/// zero reference.
double rel_frob_error(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& a_hat);

/// Frobenius norm of the singular-value tail beyond k (absolute, not relative).
double oracle_error(const Eigen::Ref<const Matrix>& a, Index k);

/// Singular-value tail from a precomputed spectrum.
double oracle_error_from_spectrum(const Eigen::Ref<const Vector>& s, Index k);

/// max(trials) / oracle. A zero oracle gives 1 when every trial is zero too,
/// infinity otherwise.
MreoResult mreo(std::span<const double> trial_errors, double oracle);

ErrorReport error_report(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& a_hat, Index k,
                         double coarsening_factor);

/// lambda_max(A_f A_f^T - tau A_c A_c^T).
double epsilon_tau(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, double tau);

/// ||A_f A_f^T - tau A_c A_c^T||_2.
double rho_tau(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, double tau);

/// 33 (by default) log-spaced values spanning [centre / 100, centre * 100].
std::vector<double> default_tau_grid(double centre, int points = 33);

/// sigma_{f,1}^2 / sigma_{c,1}^2, the centre of the default grid.
double tau_centre(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c);

struct TauSweep {
  std::vector<double> tau;
  std::vector<double> epsilon;  // eps(tau) or its estimate
  std::size_t minimizer = 0;
  Index sample_stride = 1;  // c
  IndexList sampled_rows;   // zero-based rows retained

  double best_tau() const { return tau.at(minimizer); }
  double best_epsilon() const { return epsilon.at(minimizer); }
};

/// Exact sweep of eps(tau) on materialised matrices.
TauSweep epsilon_sweep(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c,
                       std::span<const double> tau_grid);

/// Single-pass estimator: rows with (i+1) mod c == 0, c = floor(m / m_c), are
/// retained (at most m_c of them) into B_f and, sketched without any
/// projection, into B_c; eps_hat(tau) = c lambda_max(B_f B_f^T - tau B_c B_c^T).
/// Without a grid the default one around lambda_max(B_f B_f^T) /
/// lambda_max(B_c B_c^T) is used.
TauSweep spc_id_err(SnapshotStream& stream, const SketchOperator& sketch, Index m_c,
                    std::optional<std::vector<double>> tau_grid = std::nullopt,
                    Index block_rows = kDefaultBlockRows);

/// Rows retained by spc_id_err for an m-row stream.
IndexList estimator_rows(Index m, Index m_c);

}  // namespace sketchpress
