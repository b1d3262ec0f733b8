#include <sketchpress/bounds.hpp>

#include <sketchpress/analysis.hpp>
#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sketchpress {

InterpolationWitness interpolation_witness(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c) {
  if (a_f.rows() != a_c.rows()) throw ConfigError("interpolation witness: row counts differ");
  InterpolationWitness w;
  w.M = pinv(a_c) * a_f;
  w.E = a_f - a_c * w.M;
  w.norm_M = spectral_norm(w.M);
  w.norm_E = spectral_norm(w.E);
  return w;
}

double sigma(const Eigen::Ref<const Vector>& s, Index j) {
  if (j < 1) throw ConfigError("sigma: index is 1-based");
  return j <= s.size() ? s[j - 1] : 0.0;
}

double bound_tpc_svd(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, Index k) {
  const InterpolationWitness w = interpolation_witness(a_f, a_c);
  return w.norm_M * sigma(singular_values(a_c), k + 1) + w.norm_E;
}

double bound_spc_svd(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, Index k) {
  const InterpolationWitness w = interpolation_witness(a_f, a_c);
  return sigma(singular_values(a_f), k + 1) + w.norm_E;
}

double bound_spc_id_point(double epsilon, double tau, const Eigen::Ref<const Vector>& coarse_sigma, Index r,
                        double id_error) {
  const double eps = std::max(epsilon, 0.0);
  const double next = sigma(coarse_sigma, r + 1);
  const double here = sigma(coarse_sigma, r);
  const double first = std::sqrt(eps + tau * next * next);
  if (!(here > 0.0)) return std::numeric_limits<double>::infinity();
  return first + id_error * std::sqrt(tau + eps / (here * here));
}

IdBoundEvaluation bound_spc_id(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& a_c, Index k,
                          double id_error, std::span<const double> tau_grid) {
  const Vector s = singular_values(a_c);
  const Index rank = numerical_rank(s);
  if (k < 1 || k > rank) throw ConfigError("bound_spc_id: k must lie in [1, rank(A_c)]");
  const TauSweep sweep = epsilon_sweep(a_f, a_c, tau_grid);

  IdBoundEvaluation out;
  out.best = std::numeric_limits<double>::infinity();
  for (Index r = k; r <= rank; ++r) {
    double best_r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sweep.tau.size(); ++i) {
      const double v = bound_spc_id_point(sweep.epsilon[i], sweep.tau[i], s, r, id_error);
      best_r = std::min(best_r, v);
      if (v < out.best) {
        out.best = v;
        out.best_tau = sweep.tau[i];
        out.best_r = r;
      }
    }
    out.per_r.push_back(best_r);
  }
  return out;
}

double cpwr_constant(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& c, double tau, Index q) {
  if (q < 1) throw ConfigError("cpwr_constant: q must be >= 1");
  const double rho = rho_tau(a_f, c, tau);
  const double qd = static_cast<double>(q);
  return qd * std::pow(tau, qd - 1.0) * std::pow(spectral_norm(c), 2.0 * qd - 2.0) * spectral_norm(a_f) * rho +
         rho * rho;
}

double bound_cpwr_svd(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& c, double tau, Index q,
                  Index k) {
  const double constant = cpwr_constant(a_f, c, tau, q);
  return sigma(singular_values(a_f), k + 1) + std::pow(constant, 1.0 / (2.0 * static_cast<double>(q) + 1.0));
}

double cpwr_gap_norm(const Eigen::Ref<const Matrix>& a_f, const Eigen::Ref<const Matrix>& c, double tau, Index q) {
  if (a_f.rows() != c.rows()) throw ConfigError("C-PWR gap: row counts differ");
  Matrix fine = a_f;
  Matrix coarse = a_f;
  for (Index step = 0; step < q; ++step) {
    fine = a_f * (a_f.transpose() * fine);
    coarse = tau * (c * (c.transpose() * coarse));
  }
  return spectral_norm(fine - coarse);
}

double row_id_bound(const Eigen::Ref<const Matrix>& m, Index k) {
  const double factor = std::sqrt(1.0 + static_cast<double>(k) * static_cast<double>(m.rows() - k));
  return factor * sigma(singular_values(m), k + 1);
}

double factor_error_bound(double norm_b, double norm_c, double eps1, double eps2) {
  if (norm_b < 0.0 || norm_c < 0.0 || eps1 < 0.0 || eps2 < 0.0) {
    throw ConfigError("factor_error_bound: norms must be nonnegative");
  }
  return norm_b * eps2 + (norm_c + eps2) * eps1;
}

}  // namespace sketchpress
