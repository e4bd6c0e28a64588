#include "ofbm/matfun.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ofbm/special.hpp"

namespace ofbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

CMat SpectralDecomposition::jordan_matrix() const {
  const int n = dim();
  CMat J = CMat::Zero(n, n);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.size; ++i) {
      J(off + i, off + i) = b.eigenvalue;
      if (i > 0) J(off + i, off + i - 1) = 1.0;
    }
    off += b.size;
  }
  return J;
}

Mat SpectralDecomposition::reconstruct_real(double tol) const {
  const CMat M = P * jordan_matrix() * P_inv;
  const double scale = std::max(1.0, M.real().cwiseAbs().maxCoeff());
  const double imag_max = M.imag().cwiseAbs().maxCoeff();
  if (imag_max > tol * scale) {
    std::ostringstream os;
    os << "decomposition does not reconstruct a real matrix (imaginary residue " << imag_max
       << ")";
    throw ValidationError(os.str());
  }
  return M.real();
}

Eigen::VectorXcd SpectralDecomposition::roots() const {
  Eigen::VectorXcd r(dim());
  int k = 0;
  for (const auto& b : blocks)
    for (int i = 0; i < b.size; ++i) r(k++) = b.eigenvalue;
  return r;
}

SpectralDecomposition SpectralDecomposition::shifted(double s) const {
  SpectralDecomposition out = *this;
  for (auto& b : out.blocks) b.eigenvalue += s;
  return out;
}

SpectralDecomposition SpectralDecomposition::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != static_cast<int>(blocks.size()))
    throw ValidationError("permutation size does not match block count");
  std::vector<int> offsets(blocks.size());
  int off = 0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    offsets[i] = off;
    off += blocks[i].size;
  }
  SpectralDecomposition out;
  out.P.resize(dim(), dim());
  out.P_inv.resize(dim(), dim());
  out.blocks.reserve(blocks.size());
  int col = 0;
  for (int idx : perm) {
    const auto& b = blocks.at(idx);
    out.blocks.push_back(b);
    out.P.middleCols(col, b.size) = P.middleCols(offsets[idx], b.size);
    out.P_inv.middleRows(col, b.size) = P_inv.middleRows(offsets[idx], b.size);
    col += b.size;
  }
  if (col != dim()) throw ValidationError("permutation is not a bijection on blocks");
  return out;
}

namespace stems {

StemFunction power(double base) {
  if (!(base > 0.0)) throw ValidationError("power stem requires base > 0");
  const double logb = std::log(base);
  StemFunction s;
  s.name = "power";
  s.derivative_cap = 64;
  s.conjugate_symmetric = true;
  s.derivative = [base, logb](cplx z, int j) {
    return std::pow(logb, j) * std::exp(z * logb);
  };
  s.in_domain = [](cplx) { return true; };
  return s;
}

StemFunction gamma_shift() {
  StemFunction s;
  s.name = "gamma_shift";
  s.derivative_cap = 12;
  s.conjugate_symmetric = true;
  s.derivative = [](cplx z, int j) {
    // h = Gamma(z+1); h^{(m+1)} = sum_k C(m,k) h^{(k)} psi^{(m-k)}(z+1)
    const cplx w = z + 1.0;
    std::vector<cplx> h(j + 1), g(std::max(j, 1));
    h[0] = special::gamma(w);
    for (int m = 0; m < j; ++m) g[m] = special::polygamma(m, w);
    for (int m = 0; m < j; ++m) {
      cplx acc = 0.0;
      double binom = 1.0;
      for (int k = 0; k <= m; ++k) {
        acc += binom * h[k] * g[m - k];
        binom = binom * (m - k) / (k + 1.0);
      }
      h[m + 1] = acc;
    }
    return h[j];
  };
  s.in_domain = [](cplx z) { return !special::near_nonpositive_integer(z + 1.0); };
  return s;
}

StemFunction sin_half_pi() {
  StemFunction s;
  s.name = "sin_half_pi";
  s.derivative_cap = 64;
  s.conjugate_symmetric = true;
  s.derivative = [](cplx z, int j) {
    return std::pow(kPi / 2.0, j) * std::sin(kPi / 2.0 * z + j * kPi / 2.0);
  };
  s.in_domain = [](cplx) { return true; };
  return s;
}

StemFunction cos_half_pi() {
  StemFunction s;
  s.name = "cos_half_pi";
  s.derivative_cap = 64;
  s.conjugate_symmetric = true;
  s.derivative = [](cplx z, int j) {
    return std::pow(kPi / 2.0, j) * std::cos(kPi / 2.0 * z + j * kPi / 2.0);
  };
  s.in_domain = [](cplx) { return true; };
  return s;
}

StemFunction exp_half_pi(int dir) {
  if (dir != 1 && dir != -1) throw ValidationError("exp_half_pi direction must be +-1");
  StemFunction s;
  s.name = dir > 0 ? "exp_half_pi+" : "exp_half_pi-";
  s.derivative_cap = 64;
  s.conjugate_symmetric = false;
  const cplx rate(0.0, dir * kPi / 2.0);
  s.derivative = [rate](cplx z, int j) { return std::pow(rate, j) * std::exp(rate * z); };
  s.in_domain = [](cplx) { return true; };
  return s;
}

}  // namespace stems

double condition_number(const CMat& M) {
  Eigen::JacobiSVD<CMat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / (sv(sv.size() - 1));
}

SpectralDecomposition decompose(const Mat& H, double cond_limit) {
  if (H.rows() != H.cols() || H.rows() == 0) throw ValidationError("decompose: matrix must be square");
  Eigen::EigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw NonDiagonalizableError("eigendecomposition failed");

  SpectralDecomposition S;
  S.P = es.eigenvectors();
  const double cond = condition_number(S.P);
  if (!(cond <= cond_limit)) {
    std::ostringstream os;
    os << "eigenvector basis too ill-conditioned (cond = " << cond
       << "); supply an explicit (P, blocks) factorization";
    throw NonDiagonalizableError(os.str());
  }
  S.P_inv = S.P.inverse();
  S.blocks.reserve(H.rows());
  for (int i = 0; i < H.rows(); ++i) S.blocks.push_back({es.eigenvalues()(i), 1});

  const CMat R = S.P * S.jordan_matrix() * S.P_inv;
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double resid =
      std::max((R.real() - H).cwiseAbs().maxCoeff(), R.imag().cwiseAbs().maxCoeff());
  if (resid > 1e-12 * scale) {
    std::ostringstream os;
    os << "reconstruction residual " << resid << " exceeds 1e-12 * max(1, ||H||)";
    throw NonDiagonalizableError(os.str());
  }
  return S;
}

SpectralDecomposition make_decomposition(const CMat& P, std::vector<JordanBlockSpec> blocks,
                                         double tol) {
  const int n = static_cast<int>(P.rows());
  if (P.cols() != n || n == 0) throw ValidationError("P must be square");
  int total = 0;
  for (const auto& b : blocks) {
    if (b.size < 1) throw ValidationError("jordan block size must be >= 1");
    total += b.size;
  }
  if (total != n) throw ValidationError("jordan block sizes must sum to the dimension");

  // Non-real eigenvalues of a real matrix come in conjugate pairs of equal size.
  std::vector<bool> used(blocks.size(), false);
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (used[i] || std::abs(blocks[i].eigenvalue.imag()) <= tol) continue;
    bool matched = false;
    for (size_t j = i + 1; j < blocks.size(); ++j) {
      if (used[j] || blocks[j].size != blocks[i].size) continue;
      if (std::abs(blocks[j].eigenvalue - std::conj(blocks[i].eigenvalue)) <= 1e-9) {
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ValidationError("non-real eigenvalues must appear in conjugate pairs with equal block sizes");
  }

  SpectralDecomposition S;
  S.P = P;
  Eigen::FullPivLU<CMat> lu(P);
  if (!lu.isInvertible()) throw ValidationError("P is singular");
  S.P_inv = lu.inverse();
  const double id_resid = (P * S.P_inv - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
  if (id_resid > 1e-10) throw ValidationError("P * P^{-1} deviates from identity");
  S.blocks = std::move(blocks);

  S.reconstruct_real(tol);  // throws when not real
  return S;
}

CMat jordan_block_apply(const StemFunction& stem, const JordanBlockSpec& block) {
  if (block.size < 1) throw ValidationError("jordan block size must be >= 1");
  if (!stem.in_domain(block.eigenvalue))
    throw StemSingularError("stem '" + stem.name + "' singular at a block eigenvalue");
  if (block.size - 1 > stem.derivative_cap)
    throw DerivativeUnavailableError("stem '" + stem.name + "' implements derivatives up to order " +
                                     std::to_string(stem.derivative_cap));
  const int r = block.size;
  CMat B = CMat::Zero(r, r);
  std::vector<cplx> d(r);
  for (int j = 0; j < r; ++j) d[j] = stem.derivative(block.eigenvalue, j) / factorial(j);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j <= i; ++j) B(i, j) = d[i - j];
  return B;
}

CMat primary_matfun(const StemFunction& stem, const SpectralDecomposition& S) {
  const int n = S.dim();
  CMat hJ = CMat::Zero(n, n);
  int off = 0;
  for (const auto& b : S.blocks) {
    hJ.block(off, off, b.size, b.size) = jordan_block_apply(stem, b);
    off += b.size;
  }
  return S.P * hJ * S.P_inv;
}

Mat primary_matfun_real(const StemFunction& stem, const SpectralDecomposition& S, double rel_tol) {
  const CMat Z = primary_matfun(stem, S);
  const double scale = std::max(1.0, Z.real().cwiseAbs().maxCoeff());
  const double resid = Z.imag().cwiseAbs().maxCoeff();
  if (resid > rel_tol * scale) {
    std::ostringstream os;
    os << "imaginary residue " << resid << " exceeds " << rel_tol << " * " << scale << " for stem '"
       << stem.name << "'";
    throw ToleranceError(os.str(), resid);
  }
  return Z.real();
}

Mat matrix_power(const SpectralDecomposition& S, double base, int exponent_sign) {
  if (!(base > 0.0)) throw ValidationError("matrix_power requires base > 0");
  return primary_matfun_real(stems::power(exponent_sign >= 0 ? base : 1.0 / base), S);
}

Mat matrix_power_signed(const SpectralDecomposition& S_D, double x, int side) {
  const double part = side >= 0 ? x : -x;
  if (!(part > 0.0)) return Mat::Zero(S_D.dim(), S_D.dim());
  return matrix_power(S_D, part, -1);
}

MatrixPowerEvaluator::MatrixPowerEvaluator(const SpectralDecomposition& S)
    : n_(S.dim()), P_(S.P), P_inv_(S.P_inv), blocks_(S.blocks) {}

Mat MatrixPowerEvaluator::eval(double base, int exponent_sign) const {
  if (!(base > 0.0)) throw ValidationError("matrix power requires base > 0");
  const double logb = exponent_sign >= 0 ? std::log(base) : -std::log(base);
  CMat hJ = CMat::Zero(n_, n_);
  int off = 0;
  for (const auto& b : blocks_) {
    const cplx v = std::exp(b.eigenvalue * logb);
    double c = 1.0;  // logb^k / k!
    for (int k = 0; k < b.size; ++k) {
      if (k > 0) c *= logb / k;
      for (int i = k; i < b.size; ++i) hJ(off + i, off + i - k) = c * v;
    }
    off += b.size;
  }
  const CMat Z = P_ * hJ * P_inv_;
  const double scale = std::max(1.0, Z.real().cwiseAbs().maxCoeff());
  const double resid = Z.imag().cwiseAbs().maxCoeff();
  if (resid > 1e-10 * scale) throw ToleranceError("matrix power has a large imaginary residue", resid);
  return Z.real();
}

Mat MatrixPowerEvaluator::signed_power(double x, int side) const {
  const double part = side >= 0 ? x : -x;
  if (!(part > 0.0)) return Mat::Zero(n_, n_);
  return eval(part, -1);
}

}  // namespace ofbm
