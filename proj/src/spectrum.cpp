#include "ofbm/spectrum.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace ofbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct DensityContext {
  MatrixPowerEvaluator power;
  Mat re, im;
  double d_min, d_max;
  int log_order;
  double env_const;

  explicit DensityContext(const OfbmModel& m)
      : power(m.exponent().SD), re(m.re_aa_star()), im(m.im_aa_star()) {
    const auto roots = m.exponent().SD.roots();
    d_min = 1.0;
    d_max = -1.0;
    for (int i = 0; i < roots.size(); ++i) {
      d_min = std::min(d_min, roots(i).real());
      d_max = std::max(d_max, roots(i).real());
    }
    int mb = 1;
    for (const auto& b : m.exponent().SD.blocks) mb = std::max(mb, b.size);
    log_order = mb - 1;
    Eigen::JacobiSVD<CMat> sp(m.exponent().SD.P), spi(m.exponent().SD.P_inv),
        sa(m.aa_star());
    const double pn = sp.singularValues()(0) * spi.singularValues()(0);
    env_const = pn * pn * sa.singularValues()(0);
  }

  // x_+^{-D} AA* x_+^{-D*} + x_-^{-D} conj(AA*) x_-^{-D*}
  CMat h_pm(double y) const {
    const int n = re.rows();
    if (y == 0.0) return CMat::Zero(n, n);
    const Mat W = power.eval(std::abs(y), -1);
    const Mat a = W * re * W.transpose();
    const Mat b = W * im * W.transpose();
    const double sgn = y > 0.0 ? 1.0 : -1.0;
    return a.cast<cplx>() + cplx(0.0, sgn) * b.cast<cplx>();
  }

  // envelope for |h_pm(y)|_2 / |y|^2 summed over the log polynomial
  double term_tail_integral(double Y, int qmax) const {
    double c = 1.0, s = 0.0;
    for (int q = 0; q <= qmax; ++q) {
      s += c * quad::power_log_tail(Y, 2.0 + 2.0 * d_min, q);
      c *= 2.0 / (q + 1);
    }
    return env_const * s;
  }

  double term_bound(double y, int qmax) const {
    double c = 1.0, s = 0.0, l = std::abs(std::log(y));
    for (int q = 0; q <= qmax; ++q) {
      s += c * std::pow(l, q);
      c *= 2.0 / (q + 1);
    }
    return env_const * s * std::pow(y, -2.0 - 2.0 * d_min);
  }
};

double weight_sq(double x) {
  if (x == 0.0) return 1.0;
  const double h = std::sin(0.5 * x);
  return 4.0 * h * h / (x * x);
}

void require_lrd(const OfbmModel& model) {
  const auto& roots = model.exponent().roots;
  for (int k = 0; k < roots.size(); ++k) {
    const double re = roots(k).real();
    if (!(re > 0.5 && re < 1.0)) {
      std::ostringstream os;
      os << "root h_" << k + 1 << " = " << roots(k)
         << " lies outside (1/2, 1); the dichotomy classification is undefined "
            "(use the diagnostic probe for out-of-range models)";
      throw LrdRangeError(os.str());
    }
  }
}

std::vector<double> probe_grid(const DichotomyOptions& opt) {
  std::vector<double> xs(opt.probes);
  const double l0 = std::log(opt.x_lo), l1 = std::log(opt.x_hi);
  for (int i = 0; i < opt.probes; ++i)
    xs[i] = std::exp(l0 + (l1 - l0) * i / double(opt.probes - 1));
  return xs;
}

DichotomyProbeReport probe_impl(const OfbmModel& model, const DichotomyOptions& opt) {
  DichotomyProbeReport rep;
  rep.xs = probe_grid(opt);
  DensityContext ctx(model);
  const int n = model.dim();
  for (double x : rep.xs) {
    const Mat W = ctx.power.eval(x, -1);
    const Mat a = W * ctx.re * W.transpose();
    const Mat b = W * ctx.im * W.transpose();
    rep.h_values.push_back(a.cast<cplx>() + cplx(0, 1) * b.cast<cplx>());
  }
  rep.in_theorem_range = true;
  for (int k = 0; k < model.exponent().roots.size(); ++k) {
    const double re = model.exponent().roots(k).real();
    if (!(re > 0.5 && re < 1.0)) rep.in_theorem_range = false;
  }

  double scale = 0.0;
  for (const auto& h : rep.h_values) scale = std::max(scale, h.cwiseAbs().maxCoeff());
  scale = std::max(scale, 1e-300);

  const int m = static_cast<int>(rep.xs.size());
  const int band = std::min(5, m / 2);
  rep.labels.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double all_max = 0.0, low_max = 0.0, high_max = 0.0;
      for (int k = 0; k < m; ++k) {
        const double v = std::abs(rep.h_values[k](i, j));
        all_max = std::max(all_max, v);
        if (k < band) low_max = std::max(low_max, v);           // smallest x
        if (k >= m - band) high_max = std::max(high_max, v);    // largest x
      }
      if (all_max <= opt.zero_rel_tol * scale)
        rep.labels(i, j) = static_cast<int>(DichotomyLabel::Zero);
      else if (low_max >= opt.growth_factor * high_max)
        rep.labels(i, j) = static_cast<int>(DichotomyLabel::Diverges);
      else
        rep.labels(i, j) = static_cast<int>(DichotomyLabel::Bounded);
    }
  }
  return rep;
}

}  // namespace

CMat ofgn_density_ct(const OfbmModel& model, double x) {
  DensityContext ctx(model);
  return weight_sq(x) * ctx.h_pm(x);
}

DtDensity ofgn_density_dt(const OfbmModel& model, double x, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  DensityContext ctx(model);
  const int n = model.dim();
  const double w = 2.0 * (1.0 - std::cos(x));
  const int qmax = 2 * ctx.log_order;

  DtDensity out;
  int K = 8;
  for (;;) {
    const double Y = 2.0 * kPi * (K + 1) - kPi;  // |x + 2 pi k| >= Y for |k| > K
    out.tail_bound =
        w * 2.0 * (ctx.term_bound(Y, qmax) + ctx.term_tail_integral(Y, qmax) / (2.0 * kPi));
    if (out.tail_bound <= tol || K >= (1 << 15)) break;
    K *= 2;
  }

  CMat g = CMat::Zero(n, n);
  for (int k = -K; k <= K; ++k) {
    const double y = x + 2.0 * kPi * k;
    if (y == 0.0) continue;
    g += ctx.h_pm(y) / (y * y);
  }
  out.g = w * g;
  out.K = K;
  return out;
}

SpectrumGrid sample_ofgn_ct(const OfbmModel& model, const std::vector<double>& xs) {
  SpectrumGrid grid;
  grid.frequencies = xs;
  for (double x : xs) grid.values.push_back(ofgn_density_ct(model, x));
  return grid;
}

SpectrumGrid sample_ofgn_dt(const OfbmModel& model, const std::vector<double>& xs, double tol) {
  SpectrumGrid grid;
  grid.frequencies = xs;
  for (double x : xs) {
    auto d = ofgn_density_dt(model, x, tol);
    grid.values.push_back(d.g);
    grid.K.push_back(d.K);
    grid.tail_bounds.push_back(d.tail_bound);
  }
  return grid;
}

Mat integrate_dt_density(const OfbmModel& model, double tol) {
  // g(-x) = conj(g(x)), so the integral is 2 int_0^pi Re g.
  DensityContext ctx(model);
  const double dt_tol = tol / 20.0;
  auto f = [&](double x) { return Mat(ofgn_density_dt(model, x, dt_tol).g.real()); };
  auto inner = [&](double u) {
    const double x = std::exp(u);
    return Mat(x * f(x));
  };
  const double u_min =
      std::max(-(50.0 + 12.0 * ctx.log_order) / std::max(1.0 - 2.0 * ctx.d_max, 0.05), -4000.0);
  auto res_in =
      quad::adaptive(inner, quad::split_uniform(u_min, 0.0, std::max(4.0, -u_min / 256.0)),
                     tol / 4.0, 900);
  auto res_out = quad::adaptive(f, quad::split_uniform(1.0, kPi, 0.25), tol / 4.0, 600);
  return 2.0 * (res_in.value + res_out.value);
}

Eigen::MatrixXi dichotomy_classify(const OfbmModel& model, const DichotomyOptions& opt) {
  require_lrd(model);
  DichotomyProbeReport rep = probe_impl(model, opt);
  for (int i = 0; i < rep.labels.rows(); ++i)
    for (int j = 0; j < rep.labels.cols(); ++j)
      if (rep.labels(i, j) == static_cast<int>(DichotomyLabel::Bounded))
        throw AmbiguousEntryError("spectral entry (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) +
                                      ") neither vanishes nor grows along the probe grid",
                                  i, j);
  return rep.labels;
}

DichotomyProbeReport dichotomy_probe(const OfbmModel& model, const DichotomyOptions& opt) {
  return probe_impl(model, opt);
}

}  // namespace ofbm
