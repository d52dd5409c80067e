#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sal/laurent.hpp"

namespace sal {

using cx = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// sin(pi z), cos(pi z) with exact zeros at the integers
double sinpi(double x);
double cospi(double x);
cx sinpi(cx z);

cx gamma(cx z);
double gamma(double x);
cx log_gamma(cx z);  // principal branch for Re z >= 1/2, continued by reflection otherwise
cx rgamma(cx z);     // 1/Gamma, entire
cx digamma(cx z);
cx polygamma(int m, cx z);

// Gamma_j(z) = Res_{s=z} (s-z)^{-j-1} Gamma(s), j >= -1
cx gamma_laurent(cx z, int j);
// Laurent series of Gamma around z, powers -1..order
Laurent gamma_series(cx z, int order);

// Upper incomplete gamma Gamma(a, x) for x > 0.
double upper_gamma(double a, double x);
cx upper_gamma(cx a, double x);

cx riemann_zeta(cx s);
double riemann_zeta(double s);
cx hurwitz_zeta(cx s, double a);
double hurwitz_zeta(double s, double a);

// Z_d(s) = sum over nonzero k in Z^d of |k|^{-s}, continued to C \ {d}
cx epstein_zeta(cx s, int d);
// number of representations of n as an ordered sum of d squares, n = 0..n_max
std::vector<double> sum_of_squares_counts(int d, int n_max);

cx jacobi_theta3(cx z, cx q);

// exact Bernoulli numbers, B_1 = -1/2, B_2 = 1/6
inline constexpr int kBernoulliCapacity = 600;
Rational bernoulli_number(int k);
double bernoulli_double(int k);
double bernoulli_poly(int k, double x);
Rational bernoulli_poly(int k, const Rational& x);
// coefficients of B_k(x) in increasing powers of x
std::vector<Rational> bernoulli_poly_coeffs(int k);

// antiderivative of s^w log^n s at s > 0
cx power_log_primitive(cx w, int n, double s);

// q-number [x] = (q^{-x} - q^x)/(q^{-1} - q)
double q_number(double x, double q);

Rational to_rational(double x);  // exact binary value
double to_double(const Rational& r);

}  // namespace sal
