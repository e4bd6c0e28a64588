#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ofbm/errors.hpp"

namespace ofbm {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// One lower-triangular Jordan block: eigenvalue and size.
struct JordanBlockSpec {
  cplx eigenvalue;
  int size = 1;
};

/// Factorization M = P J P^{-1} with J block diagonal in lower Jordan blocks.
/// Immutable after construction; all evaluations are pure.
struct SpectralDecomposition {
  CMat P;
  CMat P_inv;
  std::vector<JordanBlockSpec> blocks;

  int dim() const { return static_cast<int>(P.rows()); }

  /// Assembles J (eigenvalues on the diagonal, ones on the first subdiagonal).
  CMat jordan_matrix() const;

  /// P J P^{-1}; throws ValidationError when the imaginary residue exceeds tol.
  Mat reconstruct_real(double tol = 1e-12) const;

  /// Eigenvalues repeated according to block size.
  Eigen::VectorXcd roots() const;

  /// Decomposition of M + s I (same P, shifted eigenvalues).
  SpectralDecomposition shifted(double s) const;

  /// Same decomposition with blocks (and the matching column groups of P)
  /// reordered by `perm`.
  SpectralDecomposition permuted(const std::vector<int>& perm) const;
};

/// Scalar stem function with analytic derivatives, the ingredient of a
/// primary matrix function. `derivative(z, j)` returns h^{(j)}(z).
struct StemFunction {
  std::string name;
  int derivative_cap = 0;
  bool conjugate_symmetric = false;  // h(conj z) == conj(h(z))
  std::function<cplx(cplx, int)> derivative;
  std::function<bool(cplx)> in_domain;

  cplx operator()(cplx z) const { return derivative(z, 0); }
};

namespace stems {
StemFunction power(double base);        // h(z) = base^z, base > 0
StemFunction gamma_shift();             // h(z) = Gamma(z + 1)
StemFunction sin_half_pi();             // h(z) = sin(pi z / 2)
StemFunction cos_half_pi();             // h(z) = cos(pi z / 2)
StemFunction exp_half_pi(int dir);      // h(z) = exp(dir * i * pi * z / 2), dir = +-1
}  // namespace stems

/// Eigendecomposition of a real matrix, accepted only when the eigenvector
/// basis is well conditioned (cond_2(P) <= cond_limit) and P J P^{-1}
/// reproduces H to 1e-12 * max(1, ||H||). Otherwise NonDiagonalizableError:
/// defective structure must be supplied explicitly via make_decomposition.
SpectralDecomposition decompose(const Mat& H, double cond_limit = 1e8);

/// Validates and packages an explicit (P, blocks) factorization of a real
/// matrix. Checks invertibility of P, block sizes, conjugate pairing of
/// non-real eigenvalues and the realness of P J P^{-1}.
SpectralDecomposition make_decomposition(const CMat& P, std::vector<JordanBlockSpec> blocks,
                                         double tol = 1e-12);

/// h(J_lambda): lower-triangular Toeplitz with (i, j) entry h^{(i-j)}(lambda)/(i-j)!.
CMat jordan_block_apply(const StemFunction& stem, const JordanBlockSpec& block);

/// h(M) = P h(J) P^{-1}.
CMat primary_matfun(const StemFunction& stem, const SpectralDecomposition& S);

/// As primary_matfun for a real decomposed matrix and a conjugate-symmetric
/// stem; the imaginary residue is checked against rel_tol and truncated.
Mat primary_matfun_real(const StemFunction& stem, const SpectralDecomposition& S,
                        double rel_tol = 1e-10);

/// base^{M} (exponent_sign = +1) or base^{-M} (exponent_sign = -1) for base > 0.
Mat matrix_power(const SpectralDecomposition& S, double base, int exponent_sign);

/// x_+^{-D} (side = +1) or x_-^{-D} (side = -1), with z^D = 0 when the signed
/// part vanishes.
Mat matrix_power_signed(const SpectralDecomposition& S_D, double x, int side);

/// Fast repeated evaluation of b^{±M} for a fixed decomposition.
class MatrixPowerEvaluator {
 public:
  explicit MatrixPowerEvaluator(const SpectralDecomposition& S);

  /// base^{sign * M}; base > 0.
  Mat eval(double base, int exponent_sign) const;

  /// x_+^{-M} / x_-^{-M} with the zero convention.
  Mat signed_power(double x, int side) const;

  int dim() const { return n_; }

 private:
  int n_;
  CMat P_, P_inv_;
  std::vector<JordanBlockSpec> blocks_;
};

/// 2-norm condition number (dense SVD; matrices here are small).
double condition_number(const CMat& M);

}  // namespace ofbm
