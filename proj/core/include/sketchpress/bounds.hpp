#pragma once

#include <sketchpress/types.hpp>

#include <span>
#include <vector>

namespace sketchpress {

/// Least-squares interpolation witness: A_f = A_c M + E_I with M = A_c^+ A_f.
struct InterpolationWitness {
  Matrix M;
  Matrix E;
  double norm_M = 0.0;
  double norm_E = 0.0;
};

InterpolationWitness interpolation_witness(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c);

/// j-th largest singular value (1-based); zero past the end of the spectrum.
double sigma(const Eigen::Ref<const Vector>& s, Index j);

/// ||M||_2 sigma_{c,k+1} + ||E_I||_2.
double bound_tpc_svd(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, Index k);

/// sigma_{f,k+1} + ||E_I||_2.
double bound_spc_svd(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, Index k);

/// Right-hand side for one (tau, r):
///   (eps+ + tau sigma_{c,r+1}^2)^{1/2} + id_error (tau + eps+ sigma_{c,r}^{-2})^{1/2},
/// where eps+ = max(eps(tau), 0) and id_error = ||A_c - P_c A_c(I_c,:)||_2.
double bound_spc_id_point(double epsilon, double tau, const Eigen::Ref<const Vector>& coarse_sigma, Index r,
                        double id_error);

struct IdBoundEvaluation {
  double best = 0.0;          // minimum over the grid and the r range
  double best_tau = 0.0;
  Index best_r = 0;
  std::vector<double> per_r;  // minimum over tau for r = k, k+1, ...
};

/// Minimises bound_spc_id_point over tau_grid x [k, rank(A_c)].
IdBoundEvaluation bound_spc_id(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, Index k,
                          double id_error, std::span<const double> tau_grid);

/// q tau^{q-1} ||C||^{2q-2} ||A_f|| rho(tau) + rho(tau)^2.
double cpwr_constant(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& c, double tau, Index q);

/// sigma_{f,k+1} + C(tau, q)^{1/(2q+1)}.
double bound_cpwr_svd(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& c, double tau, Index q,
                  Index k);

/// ||(A_f A_f^T)^q A_f - (tau C C^T)^q A_f||_2, the quantity C(tau, q) controls.
double cpwr_gap_norm(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& c, double tau, Index q);

/// sqrt(1 + k (m - k)) sigma_{k+1}(M).
double row_id_bound(const Eigen::Ref<const Matrix>& m, Index k);

/// ||B||_2 eps2 + (||C||_2 + eps2) eps1.
double factor_error_bound(double norm_b, double norm_c, double eps1, double eps2);

}  // namespace sketchpress
