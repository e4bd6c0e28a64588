#pragma once
#include <string>
#include <vector>

#include "ofbm/model.hpp"
#include "ofbm/quadrature.hpp"

namespace ofbm {

enum class KernelFamily { GeneralPm, BrownianCase, JordanExample };

/// Time-domain kernel of one representation family, bundled with the matrices
/// it multiplies. The covariance of the represented process is
/// int k(s,u) k(t,u)^T du.
struct KernelEvaluator {
  KernelFamily family = KernelFamily::GeneralPm;
  ExponentSpec exponent;
  Mat M_plus, M_minus;  // GeneralPm
  Mat M, N;             // BrownianCase / JordanExample

  static KernelEvaluator general(ExponentSpec exponent, TimeParam p);
  static KernelEvaluator brownian(ExponentSpec exponent, BrownianCaseParam p);
  static KernelEvaluator jordan(ExponentSpec exponent, Mat M, Mat N);
};

/// (t-u)^D_side - (-u)^D_side evaluated as primary matrix functions.
Mat time_kernel_side(const ExponentSpec& exponent, double t, double u, int side);

/// Full kernel of the evaluator's family at (t, u).
Mat time_kernel(const KernelEvaluator& ev, double t, double u);

/// Sign/log kernels of the nilpotent 2x2 shift exponent.
Mat jordan_f1(double t, double u);
Mat jordan_f2(double t, double u);

/// h_side(t, x) = ((e^{itx}-1)/(ix)) |x|^{-D} Gamma(D+I) e^{-side sign(x) i pi D / 2}.
CMat spectral_kernel(const ExponentSpec& exponent, double t, double x, int side);

struct FtIdentityRow {
  double x = 0.0;
  int side = 1;
  double gap = 0.0;    // max entrywise |quadrature - closed form|
  double bound = 0.0;  // truncation + quadrature estimate
};

struct FtIdentityReport {
  std::vector<FtIdentityRow> rows;
  double max_gap = 0.0;
  double max_bound = 0.0;
  bool within_declared = true;
};

/// Soft pointwise check of the kernel Fourier-transform identity: the time
/// kernel decays like |u|^{Re d - 1}, so truncation at +-U dominates the
/// reported bound. `declared` is the gap the caller is prepared to accept.
FtIdentityReport verify_ft_identity(const ExponentSpec& exponent, double t,
                                    const std::vector<double>& xs, double U, double declared);

/// Covariance of the represented process by absolutely convergent time-domain
/// quadrature (the hard, certified form of the transform identity).
Mat plancherel_time_cov(const KernelEvaluator& ev, double s, double t, double abs_tol = 1e-8,
                        double* err_out = nullptr);

struct IntegralRow {
  std::string name;
  std::string description;
  double gap = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Closed-form oscillatory integral table (sinc, cosine-ratio and log-weighted
/// half-line integrals plus the two assembled matrix identities).
std::vector<IntegralRow> oscillatory_integral_suite(double tol = 1e-5);

}  // namespace ofbm
