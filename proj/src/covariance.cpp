#include "ofbm/covariance.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace ofbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double max_block_order(const SpectralDecomposition& S) {
  int m = 1;
  for (const auto& b : S.blocks) m = std::max(m, b.size);
  return m - 1;
}

double norm2(const CMat& M) {
  Eigen::JacobiSVD<CMat> svd(M);
  return svd.singularValues()(0);
}

// sum_{q<=qmax} (2^q/q!) * head/tail closed forms; envelope for the squared
// log polynomial carried by Jordan blocks.
double head_series(double eps, double a, int qmax) {
  double c = 1.0, s = 0.0;
  for (int q = 0; q <= qmax; ++q) {
    s += c * quad::power_log_head(eps, a, q);
    c *= 2.0 / (q + 1);
  }
  return s;
}

double tail_series(double X, double p, int qmax) {
  double c = 1.0, s = 0.0;
  for (int q = 0; q <= qmax; ++q) {
    s += c * quad::power_log_tail(X, p, q);
    c *= 2.0 / (q + 1);
  }
  return s;
}

// stable 2(1 - cos(r x)) / x^2
double weight_sq(double r, double x) {
  const double h = std::sin(0.5 * r * x);
  return 4.0 * h * h / (x * x);
}

}  // namespace

void QuadratureConfig::validate() const {
  if (inner_cutoff != 0.0 && !(inner_cutoff > 0.0 && inner_cutoff < 1.0))
    throw ValidationError("quadrature inner cutoff must satisfy 0 < eps < 1");
  if (outer_cutoff != 0.0 && !(outer_cutoff > 1.0))
    throw ValidationError("quadrature outer cutoff must satisfy X_max > 1");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (panel_budget < 8) throw ValidationError("panel budget too small");
}

Mat scale_variance(const ExponentSpec& exponent, const Mat& V, double r) {
  const double a = std::abs(r);
  if (a == 0.0) return Mat::Zero(V.rows(), V.cols());
  const Mat rH = matrix_power(exponent.SH, a, +1);
  return rH * V * rH.transpose();
}

Mat cov_time_reversible(const ExponentSpec& exponent, const Mat& gamma11, double s, double t) {
  sqrt_psd(gamma11);  // psd check
  return 0.5 * (scale_variance(exponent, gamma11, t) + scale_variance(exponent, gamma11, s) -
                scale_variance(exponent, gamma11, t - s));
}

Covariance::Covariance(const OfbmModel& model, QuadratureConfig cfg)
    : model_(&model),
      cfg_(cfg),
      power_d_(model.exponent().SD),
      power_h_(model.exponent().SH) {
  cfg_.validate();
  S_re_ = model.re_aa_star();
  S_im_ = model.im_aa_star();
  const int n = model.dim();
  E_ = model.exponent().D + Mat::Identity(n, n);
  const auto roots = model.exponent().SD.roots();
  d_max_ = -1.0;
  d_min_ = 1.0;
  for (int i = 0; i < roots.size(); ++i) {
    d_max_ = std::max(d_max_, roots(i).real());
    d_min_ = std::min(d_min_, roots(i).real());
  }
  log_order_ = static_cast<int>(max_block_order(model.exponent().SD));
  const double pnorm = norm2(model.exponent().SD.P) * norm2(model.exponent().SD.P_inv);
  env_const_ = pnorm * pnorm * std::max(norm2(S_re_.cast<cplx>()), 1e-300);
  low_accuracy_ = d_max_ > 0.49 || d_min_ < -0.49;
  gamma11_ = variance_quadrature(1.0, &gamma11_err_);
}

Mat Covariance::density_pos(double x, const Mat& S) const {
  const Mat W = power_d_.eval(x, -1);
  return W * S * W.transpose();
}

Mat Covariance::variance_quadrature(double r, Mat* err_out) const {
  const int n = model_->dim();
  r = std::abs(r);
  if (r == 0.0 || S_re_.cwiseAbs().maxCoeff() == 0.0) {
    if (err_out) *err_out = Mat::Zero(n, n);
    return Mat::Zero(n, n);
  }

  const int qmax = 2 * log_order_;
  Mat total = Mat::Zero(n, n);
  Mat err = Mat::Zero(n, n);
  double err_flat = 0.0;

  // (0, 1]: x = e^u resolves the power singularity / slow decay at 0.
  const double decay_in = std::max(1.0 - 2.0 * d_max_, 0.02);
  double u_min = -(50.0 + 12.0 * log_order_) / decay_in;
  u_min = std::max(u_min, -20000.0);
  const double eps = std::exp(u_min);
  auto inner = [&](double u) {
    const double x = std::exp(u);
    return Mat(weight_sq(r, x) * x * density_pos(x, S_re_));
  };
  auto segs = quad::split_uniform(u_min, 0.0, std::max(4.0, -u_min / 512.0));
  if (r > 4.0) {
    const double u_osc = std::log(2.0 / r);
    if (u_osc > u_min) {
      auto fine = quad::split_uniform(u_osc, 0.0, kPi / (2.0 * r) > 0.25 ? 0.25 : kPi / (2.0 * r));
      std::vector<quad::Segment> merged = quad::split_uniform(u_min, u_osc, 4.0);
      merged.insert(merged.end(), fine.begin(), fine.end());
      segs = std::move(merged);
    }
  }
  auto in_res = quad::adaptive(inner, segs, 0.25 * cfg_.abs_tol, cfg_.panel_budget);
  total += in_res.value;
  err += in_res.err;
  err_flat += r * r * env_const_ * head_series(eps, 2.0 * d_max_, qmax);

  // [1, X]: oscillatory region, half-period presplit.
  double X = cfg_.outer_cutoff > 0.0 ? cfg_.outer_cutoff : std::max(2000.0, 4000.0 / r);
  if (cfg_.tail_mode == QuadratureConfig::TailMode::ExtendedTruncation) X *= 4.0;
  auto mid = [&](double x) { return Mat(weight_sq(r, x) * density_pos(x, S_re_)); };
  const double max_len = std::min(kPi / r, (X - 1.0) / 64.0);
  auto mid_res =
      quad::adaptive(mid, quad::split_uniform(1.0, X, max_len, 40000), 0.5 * cfg_.abs_tol,
                     std::max(cfg_.panel_budget, 2 * static_cast<int>((X - 1.0) / max_len) + 64));
  total += mid_res.value;
  err += mid_res.err;

  // Beyond X: 2(1 - cos(r x))/x^2 splits into a positive mean part, integrated
  // under the same substitution, and an oscillatory remainder handled by
  // integration by parts.
  const double decay_out = std::max(1.0 + 2.0 * d_min_, 0.02);
  double v_far = std::log(X) + (50.0 + 12.0 * log_order_) / decay_out;
  v_far = std::min(v_far, std::log(X) + 20000.0);
  auto mean_tail = [&](double v) {
    const double x = std::exp(v);
    return Mat(2.0 / x * density_pos(x, S_re_));  // 2 x^{-2} g(x) * x (jacobian)
  };
  auto tail_res = quad::adaptive(
      mean_tail, quad::split_uniform(std::log(X), v_far, std::max(4.0, (v_far - std::log(X)) / 512.0)),
      0.25 * cfg_.abs_tol, cfg_.panel_budget);
  total += tail_res.value;
  err += tail_res.err;
  err_flat += 2.0 * env_const_ * tail_series(std::exp(v_far), 2.0 + 2.0 * d_min_, qmax);

  const Mat phi0 = density_pos(X, S_re_) / (X * X);
  auto Tmap = [&](const Mat& M) { return Mat(E_ * M + M * E_.transpose()); };
  const Mat t1 = Tmap(phi0);
  const Mat t2 = Tmap(t1);
  const Mat t3 = Tmap(t2);
  if (cfg_.tail_mode == QuadratureConfig::TailMode::AsymptoticCorrection) {
    const Mat phi1 = -t1 / X;
    const Mat phi2 = (t2 + t1) / (X * X);
    const double bound3 = 2.0 * (t3 + 3.0 * t2 + 2.0 * t1).cwiseAbs().maxCoeff() / (X * X);
    auto osc = quad::osc_tail_cos(r, X, phi0, phi1, phi2, bound3);
    total -= 2.0 * osc.value;
    err_flat += 2.0 * osc.err;
  } else {
    err_flat += 4.0 * phi0.cwiseAbs().maxCoeff() / r;
  }

  err.array() += err_flat;
  if (err_out) *err_out = err;

  const double scale = std::max(1.0, total.cwiseAbs().maxCoeff());
  if (err.maxCoeff() > 1e-2 * scale) {
    std::ostringstream os;
    os << "variance quadrature error bound " << err.maxCoeff() << " too large at r = " << r;
    throw ToleranceError(os.str(), err.maxCoeff());
  }
  // exact symmetry of the profile
  total = 0.5 * (total + total.transpose()).eval();
  return total;
}

Mat Covariance::variance(double r, Mat* err_out) const { return variance_quadrature(r, err_out); }

Mat Covariance::antisym(double s, double t, Mat* err_out) const {
  const int n = model_->dim();
  if (err_out) *err_out = Mat::Zero(n, n);
  if (S_im_.cwiseAbs().maxCoeff() == 0.0 || s == t || s == 0.0 || t == 0.0)
    return Mat::Zero(n, n);

  // U(s,t) = -2 int_0^inf b(x) x^{-D} Im(AA*) x^{-D^T} dx with
  // b(x) = [sin(t x)(1-cos(s x)) - sin(s x)(1-cos(t x))] / x^2.
  auto bval = [s, t](double x) {
    const double hs = std::sin(0.5 * s * x), ht = std::sin(0.5 * t * x);
    return (std::sin(t * x) * 2.0 * hs * hs - std::sin(s * x) * 2.0 * ht * ht) / (x * x);
  };

  const int qmax = 2 * log_order_;
  Mat total = Mat::Zero(n, n);
  Mat err = Mat::Zero(n, n);
  double err_flat = 0.0;

  const double decay_in = std::max(2.0 - 2.0 * d_max_, 1.0);
  double u_min = -(50.0 + 12.0 * log_order_) / decay_in;
  auto inner = [&](double u) {
    const double x = std::exp(u);
    return Mat(-2.0 * bval(x) * x * density_pos(x, S_im_));
  };
  auto in_res = quad::adaptive(inner, quad::split_uniform(u_min, 0.0, 4.0), 0.25 * cfg_.abs_tol,
                               cfg_.panel_budget);
  total += in_res.value;
  err += in_res.err;
  const double c3 =
      (std::pow(std::abs(s - t), 3) + std::pow(std::abs(s), 3) + std::pow(std::abs(t), 3)) / 6.0;
  const double env_im =
      env_const_ / std::max(norm2(S_re_.cast<cplx>()), 1e-300) * norm2(S_im_.cast<cplx>());
  err_flat += 2.0 * c3 * env_im * head_series(std::exp(u_min), 2.0 * d_max_ - 1.0, qmax);

  const double w_max = std::max({std::abs(s - t), std::abs(s), std::abs(t)});
  double X = cfg_.outer_cutoff > 0.0 ? cfg_.outer_cutoff : std::max(2000.0, 4000.0 / w_max);
  if (cfg_.tail_mode == QuadratureConfig::TailMode::ExtendedTruncation) X *= 4.0;
  auto mid = [&](double x) { return Mat(-2.0 * bval(x) * density_pos(x, S_im_)); };
  const double max_len = std::min(kPi / w_max, (X - 1.0) / 64.0);
  auto mid_res =
      quad::adaptive(mid, quad::split_uniform(1.0, X, max_len, 40000), 0.5 * cfg_.abs_tol,
                     std::max(cfg_.panel_budget, 2 * static_cast<int>((X - 1.0) / max_len) + 64));
  total += mid_res.value;
  err += mid_res.err;

  // tail: -2 sum_k c_k int_X^inf sin(w_k x) phi(x) dx, phi = x^{-2} Psi(x)
  const Mat phi0 = density_pos(X, S_im_) / (X * X);
  auto Tmap = [&](const Mat& M) { return Mat(E_ * M + M * E_.transpose()); };
  const Mat t1 = Tmap(phi0);
  const Mat t2 = Tmap(t1);
  const Mat t3 = Tmap(t2);
  const Mat phi1 = -t1 / X;
  const Mat phi2 = (t2 + t1) / (X * X);
  const double bound3 = 2.0 * (t3 + 3.0 * t2 + 2.0 * t1).cwiseAbs().maxCoeff() / (X * X);
  const std::pair<double, double> comps[3] = {{1.0, s - t}, {-1.0, s}, {1.0, t}};
  for (const auto& [ck, wk] : comps) {
    if (wk == 0.0) continue;
    if (cfg_.tail_mode == QuadratureConfig::TailMode::AsymptoticCorrection) {
      auto osc = quad::osc_tail_sin(wk, X, phi0, phi1, phi2, bound3);
      total += -2.0 * ck * osc.value;
      err_flat += 2.0 * osc.err;
    } else {
      err_flat += 4.0 * phi0.cwiseAbs().maxCoeff() / std::abs(wk);
    }
  }

  err.array() += err_flat;
  if (err_out) *err_out = err;
  // exact antisymmetry
  total = 0.5 * (total - total.transpose()).eval();
  return total;
}

Mat Covariance::cov(double s, double t, Mat* err_out, CovMethod* method_out) const {
  const int n = model_->dim();
  const Mat abs_t = scale_variance(model_->exponent(), gamma11_, t);
  const Mat abs_s = scale_variance(model_->exponent(), gamma11_, s);
  const Mat abs_ts = scale_variance(model_->exponent(), gamma11_, t - s);
  Mat sym = 0.5 * (abs_t + abs_s - abs_ts);

  Mat err = Mat::Zero(n, n);
  if (err_out) {
    auto scale_err = [&](double r) -> Mat {
      const double a = std::abs(r);
      if (a == 0.0) return Mat::Zero(n, n);
      const Mat B = power_h_.eval(a, +1).cwiseAbs();
      return B * gamma11_err_ * B.transpose();
    };
    err = 0.5 * (scale_err(t) + scale_err(s) + scale_err(t - s));
  }

  CovMethod method = CovMethod::QuadratureSymmetric;
  if (!model_->time_reversible()) {
    Mat u_err;
    sym += antisym(s, t, err_out ? &u_err : nullptr);
    if (err_out) err += u_err;
    method = CovMethod::QuadratureFull;
  }
  if (err_out) *err_out = err;
  if (method_out) *method_out = method;
  return sym;
}

double Covariance::stationary_identity_residual(double s, double t) const {
  const Mat lhs = cov(s, t) + cov(t, s);
  const Mat rhs = variance(s) + variance(t) - variance(t - s);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

CovarianceReport Covariance::grid(const std::vector<double>& s_values,
                                  const std::vector<double>& t_values) const {
  CovarianceReport rep;
  for (double s : s_values)
    for (double t : t_values) {
      CovEntry e;
      e.s = s;
      e.t = t;
      e.value = cov(s, t, &e.err, &e.method);
      rep.entries.push_back(std::move(e));
    }
  return rep;
}

}  // namespace ofbm
