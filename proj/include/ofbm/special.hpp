#pragma once
#include <complex>

namespace ofbm::special {

using cplx = std::complex<double>;

/// Euler's constant to full double precision.
inline constexpr double euler_gamma = 0.5772156649015329;

/// Gamma function on the complex plane (Lanczos, reflection for Re z < 1/2).
/// Throws std::domain_error at the poles z = 0, -1, -2, ...
cplx gamma(cplx z);

/// Digamma psi(z) for complex z away from the poles.
cplx digamma(cplx z);

/// m-th polygamma psi^((m))(z); m = 0 is digamma. Supported up to m = 12.
cplx polygamma(int m, cplx z);

/// True when z is within `tol` of a nonpositive integer (a gamma pole).
bool near_nonpositive_integer(cplx z, double tol = 1e-12);

}  // namespace ofbm::special
