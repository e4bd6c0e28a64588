#include "ofbm/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace ofbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kHalfRootTol = 1e-12;
constexpr double kClassifyRelTol = 1e-10;

void validate_roots(const Eigen::VectorXcd& roots) {
  for (int k = 0; k < roots.size(); ++k) {
    const double re = roots(k).real();
    if (!(re > 0.0 && re < 1.0)) {
      std::ostringstream os;
      os << "exponent root h_" << k + 1 << " = " << roots(k)
         << " violates 0 < Re(h) < 1; no proper model exists for such exponents";
      throw ValidationError(os.str());
    }
  }
}

bool any_half_root(const Eigen::VectorXcd& roots) {
  for (int k = 0; k < roots.size(); ++k)
    if (std::abs(roots(k).real() - 0.5) <= kHalfRootTol) return true;
  return false;
}

void require_square(const Mat& M, int n, const char* name) {
  if (M.rows() != n || M.cols() != n)
    throw ValidationError(std::string(name) + " must be a square matrix matching the exponent dimension");
}

// Inverse of a primary matrix function after checking the stem at every root.
Mat inverse_of_stem(const StemFunction& stem, const SpectralDecomposition& SD) {
  for (const auto& b : SD.blocks) {
    if (!stem.in_domain(b.eigenvalue) || std::abs(stem.derivative(b.eigenvalue, 0)) < 1e-12)
      throw SingularConversionError("stem '" + stem.name +
                                    "' is singular or vanishes at an exponent root");
  }
  const Mat F = primary_matfun_real(stem, SD);
  return F.inverse();
}

}  // namespace

ExponentSpec ExponentSpec::from_matrix(const Mat& H) {
  if (H.rows() != H.cols() || H.rows() == 0) throw ValidationError("H must be square");
  ExponentSpec e;
  e.H = H;
  e.SH = decompose(H);
  e.SD = e.SH.shifted(-0.5);
  e.D = H - 0.5 * Mat::Identity(H.rows(), H.cols());
  e.roots = e.SH.roots();
  validate_roots(e.roots);
  e.half_root = any_half_root(e.roots);
  return e;
}

ExponentSpec ExponentSpec::from_jordan(const CMat& P, std::vector<JordanBlockSpec> blocks) {
  ExponentSpec e;
  e.SH = make_decomposition(P, std::move(blocks));
  e.H = e.SH.reconstruct_real();
  e.SD = e.SH.shifted(-0.5);
  e.D = e.H - 0.5 * Mat::Identity(e.H.rows(), e.H.cols());
  e.roots = e.SH.roots();
  validate_roots(e.roots);
  e.half_root = any_half_root(e.roots);
  return e;
}

bool ExponentSpec::is_half_identity() const {
  return (H - 0.5 * Mat::Identity(H.rows(), H.cols())).cwiseAbs().maxCoeff() == 0.0;
}

TimeParam m_from_a(const SpectralParam& A, const ExponentSpec& exponent) {
  if (exponent.half_root)
    throw SingularConversionError(
        "time-domain parameters require Re(h_k) != 1/2 for every root");
  const int n = exponent.dim();
  require_square(A.A1, n, "A1");
  require_square(A.A2, n, "A2");

  const Mat sin_inv = inverse_of_stem(stems::sin_half_pi(), exponent.SD);
  const Mat cos_inv = inverse_of_stem(stems::cos_half_pi(), exponent.SD);
  const Mat gamma_inv = inverse_of_stem(stems::gamma_shift(), exponent.SD);

  const double root_2pi = std::sqrt(2.0 * kPi);
  const Mat diff = root_2pi * sin_inv * gamma_inv * A.A1;  // M+ - M-
  const Mat sum = root_2pi * cos_inv * gamma_inv * A.A2;   // M+ + M-
  TimeParam out{0.5 * (sum + diff), 0.5 * (sum - diff)};

  // Certify through the quadratic-form reconstruction of A A*.
  const CMat target = CMat(A.A1.cast<cplx>()) * CMat(A.A1.transpose().cast<cplx>()) +
                      A.A2.cast<cplx>() * A.A2.transpose().cast<cplx>() +
                      cplx(0, 1) * (A.A2.cast<cplx>() * A.A1.transpose().cast<cplx>() -
                                    A.A1.cast<cplx>() * A.A2.transpose().cast<cplx>());
  const CMat rebuilt = reconstruct_aa_star(out, exponent);
  const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  const double resid = (rebuilt - target).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * scale)
    throw SingularConversionError("conversion failed its A A* reconstruction certificate");
  return out;
}

SpectralParam a_from_m(const TimeParam& M, const ExponentSpec& exponent) {
  if (exponent.half_root)
    throw SingularConversionError(
        "time-domain parameters require Re(h_k) != 1/2 for every root");
  const int n = exponent.dim();
  require_square(M.M_plus, n, "M_plus");
  require_square(M.M_minus, n, "M_minus");
  const Mat G = primary_matfun_real(stems::gamma_shift(), exponent.SD);
  const Mat S = primary_matfun_real(stems::sin_half_pi(), exponent.SD);
  const Mat C = primary_matfun_real(stems::cos_half_pi(), exponent.SD);
  const double c = 1.0 / std::sqrt(2.0 * kPi);
  return {c * G * S * (M.M_plus - M.M_minus), c * G * C * (M.M_plus + M.M_minus)};
}

BrownianCaseParam brownian_params(const SpectralParam& A, const ExponentSpec& exponent) {
  if (!exponent.is_half_identity())
    throw WrongExponentError("sign/log parameters exist only for H = (1/2)I");
  return {std::sqrt(kPi / 2.0) * A.A1, -std::sqrt(2.0 / kPi) * A.A2};
}

SpectralParam spectral_from_brownian(const BrownianCaseParam& p) {
  return {std::sqrt(2.0 / kPi) * p.M, -std::sqrt(kPi / 2.0) * p.N};
}

CMat reconstruct_aa_star(const TimeParam& M, const ExponentSpec& exponent) {
  const Mat G = primary_matfun_real(stems::gamma_shift(), exponent.SD);
  const Mat S = primary_matfun_real(stems::sin_half_pi(), exponent.SD);
  const Mat C = primary_matfun_real(stems::cos_half_pi(), exponent.SD);
  const Mat diff = M.M_plus - M.M_minus;
  const Mat sum = M.M_plus + M.M_minus;
  const Mat re_part = S * diff * diff.transpose() * S.transpose() +
                      C * sum * sum.transpose() * C.transpose();
  const Mat im_part = C * sum * diff.transpose() * S.transpose() -
                      S * diff * sum.transpose() * C.transpose();
  const Mat scale = G / std::sqrt(2.0 * kPi);
  const Mat re = scale * re_part * scale.transpose();
  const Mat im = scale * im_part * scale.transpose();
  return re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>();
}

OfbmModel::OfbmModel(ExponentSpec exponent, SpectralParam spectral, ParamKind source)
    : exponent_(std::move(exponent)), spectral_(std::move(spectral)), source_(source) {
  const int n = exponent_.dim();
  require_square(spectral_.A1, n, "A1");
  require_square(spectral_.A2, n, "A2");
  if (!exponent_.half_root) time_ = m_from_a(spectral_, exponent_);
  if (exponent_.is_half_identity()) bm_ = brownian_params(spectral_, exponent_);

  // cached classification
  const Mat re = re_aa_star();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (re + re.transpose()));
  proper_.witness = es.eigenvalues()(0);
  proper_.certified = proper_.witness > kClassifyRelTol * std::max(1.0, re.cwiseAbs().maxCoeff());

  const Mat im = im_aa_star();
  time_reversible_ =
      im.cwiseAbs().maxCoeff() <= kClassifyRelTol * std::max(1.0, re.cwiseAbs().maxCoeff());
  is_obm_ = exponent_.is_half_identity() && time_reversible_;
}

OfbmModel OfbmModel::from_spectral(ExponentSpec exponent, SpectralParam param) {
  return OfbmModel(std::move(exponent), std::move(param), ParamKind::Spectral);
}

OfbmModel OfbmModel::from_time(ExponentSpec exponent, TimeParam param) {
  if (exponent.half_root)
    throw ValidationError("a time parameterization requires Re(h_k) != 1/2 for every root");
  SpectralParam sp = a_from_m(param, exponent);
  OfbmModel m(std::move(exponent), std::move(sp), ParamKind::Time);
  m.time_ = std::move(param);  // keep the user's matrices exactly
  return m;
}

OfbmModel OfbmModel::from_brownian(ExponentSpec exponent, BrownianCaseParam param) {
  if (!exponent.is_half_identity())
    throw WrongExponentError("sign/log parameters exist only for H = (1/2)I");
  SpectralParam sp = spectral_from_brownian(param);
  OfbmModel m(std::move(exponent), std::move(sp), ParamKind::Brownian);
  m.bm_ = std::move(param);
  return m;
}

CMat OfbmModel::aa_star() const {
  return re_aa_star().cast<cplx>() + cplx(0, 1) * im_aa_star().cast<cplx>();
}

Mat OfbmModel::re_aa_star() const {
  return spectral_.A1 * spectral_.A1.transpose() + spectral_.A2 * spectral_.A2.transpose();
}

Mat OfbmModel::im_aa_star() const {
  return spectral_.A2 * spectral_.A1.transpose() - spectral_.A1 * spectral_.A2.transpose();
}

PropernessCertificate check_proper(const OfbmModel& model) {
  return {model.proper_certified(), model.proper_witness()};
}

bool check_time_reversible(const OfbmModel& model) { return model.time_reversible(); }

bool check_obm(const OfbmModel& model) { return model.is_obm(); }

Mat sqrt_psd(const Mat& S, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol * scale) throw ValidationError("matrix is not positive semidefinite");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Mat obm_root(const OfbmModel& model) {
  if (!model.is_obm())
    throw NotObmError("model is not an operator Brownian motion (needs H = (1/2)I and A2 A1* = A1 A2*)");
  return sqrt_psd(model.re_aa_star());
}

}  // namespace ofbm
