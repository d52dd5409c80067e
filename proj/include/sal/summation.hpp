#pragma once

// Poisson and Euler-Maclaurin summation; closed-form actions on S^3, T^3, S^4.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/differentiation/autodiff.hpp>

#include "sal/series_engine.hpp"
#include "sal/special_fn.hpp"

namespace sal {

// g(x) = G(|x|) on R^m
struct RadialFunction {
  std::string name;
  std::function<double(double r)> G;
  // int_{R^m} G(|x|) dx when known in closed form
  std::function<double(int m)> fourier_zero;
  std::optional<DecayEnvelope> envelope;
};

RadialFunction gaussian_radial();                 // e^{-r^2}
RadialFunction poly_gaussian_radial(int j);       // r^{2j} e^{-r^2}
RadialFunction exp_abs_radial();                  // e^{-r}

struct PoissonResult {
  double S = 0.0;  // sum over Z^m of g(t k)
  double I = 0.0;  // t^{-m} F[g](0)
  double discrepancy = 0.0;
  double tail_bound = 0.0;
  std::size_t terms_used = 0;
};
PoissonResult poisson_compare(const RadialFunction& g, double t, int m);

// derivs(x, k) returns g(x), g'(x), ..., g^{(k)}(x)
using DerivativeFn = std::function<std::vector<double>(double x, int max_order)>;

// central differences with step scaled to the order
DerivativeFn central_difference_derivatives(std::function<double(double)> g);

template <int Order, class F>
DerivativeFn autodiff_derivatives(F f) {
  return [f](double x, int max_order) {
    using boost::math::differentiation::make_fvar;
    auto y = f(make_fvar<double, Order>(x));
    std::vector<double> d;
    for (int k = 0; k <= std::min(max_order, Order); ++k) d.push_back(static_cast<double>(y.derivative(k)));
    return d;
  };
}

struct EulerMaclaurinResult {
  double estimate = 0.0;
  double remainder_bound = 0.0;  // 2 zeta(m)/(2 pi)^m int |g^{(m)}| plus quadrature error
  double integral = 0.0;
};
// sum_{k=0}^N g(k) from int_0^N g, endpoint and Bernoulli terms up to order m (even, >= 2)
EulerMaclaurinResult euler_maclaurin(const std::function<double(double)>& g, const DerivativeFn& derivs, long long N, int m);

// int_0^inf of h by adaptive Gauss-Kronrod on doubling intervals
double half_line_integral(const std::function<double(double)>& h);

double s3_action(const std::function<double(double)>& f, double lambda);
double t3_action(const std::function<double(double)>& f, double lambda);

// c_m from the closed Bernoulli formula; c_0 = 11/90
Rational s4_coefficient(int m);
// c_0..c_M from the odd Taylor coefficients of g(x) = (x^3 - x) h(x^2/Lambda^2)
std::vector<Rational> s4_coefficients_from_taylor(int M);
// h_derivs[m] = h^{(m)}(0) where f(u) = h(u^2); uses m = 1..M
double s4_action(const std::function<double(double)>& f, const std::vector<double>& h_derivs, double lambda, int M);

// least-squares slope of log|y| against log x (|y| floored at the smallest normal)
double log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sal
