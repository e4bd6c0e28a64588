#pragma once
#include <optional>

#include "ofbm/matfun.hpp"

namespace ofbm {

/// Operator self-similarity exponent H with its factorization and the shift
/// D = H - (1/2)I. Construction validates 0 < Re(h_k) < 1 for every root.
struct ExponentSpec {
  Mat H;
  Mat D;
  SpectralDecomposition SH;
  SpectralDecomposition SD;
  Eigen::VectorXcd roots;  // h_k, repeated by block size
  bool half_root = false;  // some Re(h_k) within 1e-12 of 1/2

  static ExponentSpec from_matrix(const Mat& H);
  static ExponentSpec from_jordan(const CMat& P, std::vector<JordanBlockSpec> blocks);

  int dim() const { return static_cast<int>(H.rows()); }
  bool is_half_identity() const;
};

struct SpectralParam {
  Mat A1, A2;  // A = A1 + i A2
};

struct TimeParam {
  Mat M_plus, M_minus;
};

/// Parameters of the H = (1/2)I representation (sign kernel + log kernel).
struct BrownianCaseParam {
  Mat M, N;
};

TimeParam m_from_a(const SpectralParam& A, const ExponentSpec& exponent);
SpectralParam a_from_m(const TimeParam& M, const ExponentSpec& exponent);
BrownianCaseParam brownian_params(const SpectralParam& A, const ExponentSpec& exponent);
SpectralParam spectral_from_brownian(const BrownianCaseParam& p);

/// A A* rebuilt from time-domain parameters through the Gamma/sin/cos
/// quadratic form; used to certify conversions.
CMat reconstruct_aa_star(const TimeParam& M, const ExponentSpec& exponent);

struct PropernessCertificate {
  bool certified = false;
  double witness = 0.0;  // smallest eigenvalue of Re(A A*)
};

enum class ParamKind { Spectral, Time, Brownian };

/// Validated pairing of an exponent with one parameterization. The spectral
/// form is canonical: other forms are derived at construction when their
/// preconditions hold. Classification flags are cached; instances are
/// immutable and safe to share across threads.
class OfbmModel {
 public:
  static OfbmModel from_spectral(ExponentSpec exponent, SpectralParam param);
  static OfbmModel from_time(ExponentSpec exponent, TimeParam param);
  static OfbmModel from_brownian(ExponentSpec exponent, BrownianCaseParam param);

  const ExponentSpec& exponent() const { return exponent_; }
  const SpectralParam& spectral() const { return spectral_; }
  const std::optional<TimeParam>& time() const { return time_; }
  const std::optional<BrownianCaseParam>& brownian() const { return bm_; }
  ParamKind source() const { return source_; }

  int dim() const { return exponent_.dim(); }
  CMat aa_star() const;
  Mat re_aa_star() const;
  Mat im_aa_star() const;

  bool proper_certified() const { return proper_.certified; }
  double proper_witness() const { return proper_.witness; }
  bool time_reversible() const { return time_reversible_; }
  bool is_obm() const { return is_obm_; }

 private:
  OfbmModel(ExponentSpec exponent, SpectralParam spectral, ParamKind source);

  ExponentSpec exponent_;
  SpectralParam spectral_;
  std::optional<TimeParam> time_;
  std::optional<BrownianCaseParam> bm_;
  ParamKind source_;
  PropernessCertificate proper_;
  bool time_reversible_ = false;
  bool is_obm_ = false;
};

PropernessCertificate check_proper(const OfbmModel& model);
bool check_time_reversible(const OfbmModel& model);
bool check_obm(const OfbmModel& model);

/// Principal square root of A1 A1^T + A2 A2^T for an operator Brownian motion.
Mat obm_root(const OfbmModel& model);

/// Principal square root of a symmetric positive semidefinite matrix.
Mat sqrt_psd(const Mat& S, double tol = 1e-12);

}  // namespace ofbm
