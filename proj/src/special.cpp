#include "ofbm/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace ofbm::special {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Lanczos g = 7, 9 coefficients.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

// B_2, B_4, ..., B_14
constexpr std::array<double, 7> kBernoulli = {1.0 / 6.0,   -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                              5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0};

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

bool near_nonpositive_integer(cplx z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  const double r = std::round(z.real());
  return r <= 0.5 && std::abs(z.real() - r) <= tol;
}

cplx gamma(cplx z) {
  if (near_nonpositive_integer(z)) throw std::domain_error("gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    // reflection
    return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int k = 1; k < 9; ++k) x += kLanczos[k] / (z + static_cast<double>(k));
  const cplx t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx digamma(cplx z) {
  if (near_nonpositive_integer(z)) throw std::domain_error("digamma: pole at nonpositive integer");
  cplx acc = 0.0;
  while (z.real() < 20.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx s = std::log(z) - 0.5 * inv;
  cplx p = inv2;
  for (int k = 0; k < 7; ++k) {
    s -= kBernoulli[k] / (2.0 * (k + 1)) * p;
    p *= inv2;
  }
  return acc + s;
}

cplx polygamma(int m, cplx z) {
  if (m < 0 || m > 12) throw std::domain_error("polygamma: order out of range");
  if (m == 0) return digamma(z);
  if (near_nonpositive_integer(z)) throw std::domain_error("polygamma: pole at nonpositive integer");

  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;  // (-1)^m
  cplx acc = 0.0;
  while (z.real() < 20.0) {
    // psi^(m)(z) = psi^(m)(z+1) - (-1)^m m! z^(-m-1)
    acc -= sign_m * factorial(m) * std::pow(z, -(m + 1.0));
    z += 1.0;
  }
  // psi^(m)(z) ~ (-1)^(m-1) [ (m-1)!/z^m + m!/(2 z^(m+1)) + sum B_2k (2k+m-1)!/((2k)! z^(2k+m)) ]
  cplx s = factorial(m - 1) * std::pow(z, -static_cast<double>(m)) +
           factorial(m) / 2.0 * std::pow(z, -(m + 1.0));
  for (int k = 1; k <= 7; ++k) {
    s += kBernoulli[k - 1] * factorial(2 * k + m - 1) / factorial(2 * k) *
         std::pow(z, -(2.0 * k + m));
  }
  return acc - sign_m * s;
}

}  // namespace ofbm::special
