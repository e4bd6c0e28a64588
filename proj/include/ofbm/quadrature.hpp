#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace ofbm::quad {

using Mat = Eigen::MatrixXd;
using cplx = std::complex<double>;

struct Segment {
  double a, b;
};

struct Result {
  Mat value;
  Mat err;          // entrywise error estimate
  double err_max = 0.0;
  long evals = 0;
  bool converged = true;
};

/// Matrix-valued adaptive Gauss-Kronrod (7-15) over a list of initial
/// segments. Splits the worst panel until the summed error estimate drops
/// below abs_tol or the panel budget is exhausted.
Result adaptive(const std::function<Mat(double)>& f, std::vector<Segment> segments,
                double abs_tol, int max_panels = 4000);

struct ScalarResult {
  cplx value{0.0, 0.0};
  double err = 0.0;
  bool converged = true;
};

/// Complex scalar variant of `adaptive`.
ScalarResult adaptive_scalar(const std::function<cplx(double)>& f, std::vector<Segment> segments,
                             double abs_tol, int max_panels = 4000);

/// Uniform subdivision of [a, b] into at most `cap` panels of length <= max_len.
std::vector<Segment> split_uniform(double a, double b, double max_len, int cap = 20000);

/// int_X^inf x^{-p} (log x)^q dx for p > 1, X > 1, q >= 0 (closed form).
double power_log_tail(double X, double p, int q);

/// int_0^eps x^{-a} (log(1/x))^q dx for a < 1, eps < 1, q >= 0 (closed form).
double power_log_head(double eps, double a, int q);

/// Three-term integration-by-parts value for int_X^inf cos(w x) phi(x) dx with
/// remainder bound err = bound3 / |w|^3, where bound3 >= int_X^inf |phi'''|.
struct OscTail {
  Mat value;
  double err;
};
OscTail osc_tail_cos(double w, double X, const Mat& phi0, const Mat& phi1, const Mat& phi2,
                     double bound3);
OscTail osc_tail_sin(double w, double X, const Mat& phi0, const Mat& phi1, const Mat& phi2,
                     double bound3);

/// int_X^inf e^{i w x} phi(x) dx by three-term integration by parts.
struct OscTailScalar {
  cplx value;
  double err;
};
OscTailScalar osc_tail_exp(double w, double X, cplx phi0, cplx phi1, cplx phi2, double bound3);

}  // namespace ofbm::quad
