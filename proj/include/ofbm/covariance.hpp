#pragma once
#include <vector>

#include "ofbm/model.hpp"
#include "ofbm/quadrature.hpp"

namespace ofbm {

struct QuadratureConfig {
  double inner_cutoff = 0.0;   // > 0 overrides the automatic small-x cutoff
  double outer_cutoff = 0.0;   // > 0 overrides the automatic large-x cutoff
  int panel_budget = 6000;     // adaptive panels per integral
  enum class TailMode { AsymptoticCorrection, ExtendedTruncation };
  TailMode tail_mode = TailMode::AsymptoticCorrection;
  double abs_tol = 1e-8;       // per-quadrature absolute target
  double rel_tol = 1e-6;       // end-to-end relative target

  void validate() const;
};

enum class CovMethod { ClosedForm, QuadratureSymmetric, QuadratureFull };

struct CovEntry {
  double s = 0.0, t = 0.0;
  Mat value;
  Mat err;
  CovMethod method = CovMethod::QuadratureSymmetric;
};

struct CovarianceReport {
  std::vector<CovEntry> entries;
};

/// r^H V r^{H^T}, with the zero convention at r = 0.
Mat scale_variance(const ExponentSpec& exponent, const Mat& V, double r);

/// Closed-form covariance of a time-reversible model from Gamma(1,1).
Mat cov_time_reversible(const ExponentSpec& exponent, const Mat& gamma11, double s, double t);

/// Exact covariance of one model: certified quadrature for the variance
/// profile, the stationary-increment identity for the symmetric part, and
/// oscillatory quadrature for the antisymmetric part. Instances cache
/// Gamma(1,1) and are safe for concurrent use once constructed.
class Covariance {
 public:
  explicit Covariance(const OfbmModel& model, QuadratureConfig cfg = {});

  /// V(r) = E B(r) B(r)^T by direct quadrature at r.
  Mat variance(double r, Mat* err_out = nullptr) const;

  /// E B(s) B(t)^T. Symmetric part from the cached Gamma(1,1) by exact
  /// operator scaling; antisymmetric part by quadrature (zero for
  /// time-reversible models).
  Mat cov(double s, double t, Mat* err_out = nullptr, CovMethod* method_out = nullptr) const;

  /// Antisymmetric part U(s, t) of cov(s, t).
  Mat antisym(double s, double t, Mat* err_out = nullptr) const;

  /// || cov(s,t) + cov(t,s) - [V(s) + V(t) - V(t-s)] ||_max with fresh
  /// variance quadratures on the right-hand side.
  double stationary_identity_residual(double s, double t) const;

  CovarianceReport grid(const std::vector<double>& s_values,
                        const std::vector<double>& t_values) const;

  const Mat& gamma11() const { return gamma11_; }
  const Mat& gamma11_err() const { return gamma11_err_; }
  bool low_accuracy() const { return low_accuracy_; }
  const OfbmModel& model() const { return *model_; }
  const QuadratureConfig& config() const { return cfg_; }

 private:
  Mat density_pos(double x, const Mat& S) const;  // x^{-D} S x^{-D^T}, x > 0
  Mat variance_quadrature(double r, Mat* err_out) const;

  const OfbmModel* model_;
  QuadratureConfig cfg_;
  MatrixPowerEvaluator power_d_;
  MatrixPowerEvaluator power_h_;
  Mat S_re_, S_im_;
  Mat E_;  // D + I
  double d_max_, d_min_;
  int log_order_;      // largest block size - 1
  double env_const_;   // (||P|| ||P^-1||)^2 * ||S_re||
  bool low_accuracy_ = false;
  Mat gamma11_, gamma11_err_;
};

}  // namespace ofbm
