#include "sal/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sal {

namespace {

double gk(const std::function<double(double)>& h, double a, double b, double* err, unsigned depth = 15, double tol = 1e-15) {
  using boost::math::quadrature::gauss_kronrod;
  double e = 0.0;
  double v = gauss_kronrod<double, 31>::integrate(h, a, b, depth, tol, &e);
  if (err) *err += e;
  if (!std::isfinite(v)) throw std::runtime_error("quadrature failure");
  return v;
}

double sphere_area(int m) { return 2.0 * std::pow(kPi, 0.5 * m) / sal::gamma(0.5 * m); }

}  // namespace

double half_line_integral(const std::function<double(double)>& h) {
  double total = gk(h, 0.0, 1.0, nullptr);
  double a = 1.0;
  int quiet = 0;
  for (int i = 0; i < 80; ++i) {
    double b = 2.0 * a;
    double piece = gk(h, a, b, nullptr);
    total += piece;
    // need two consecutive negligible pieces before stopping
    if (std::abs(piece) <= 1e-18 * std::max(1.0, std::abs(total))) {
      if (++quiet == 2) return total;
    } else {
      quiet = 0;
    }
    a = b;
  }
  throw std::runtime_error("half_line_integral: integrand does not decay");
}

RadialFunction gaussian_radial() {
  RadialFunction g;
  g.name = "gauss";
  g.G = [](double r) { return std::exp(-r * r); };
  g.fourier_zero = [](int m) { return std::pow(kPi, 0.5 * m); };
  g.envelope = DecayEnvelope{std::exp(0.25), 0.0, 1.0, 0.0};
  return g;
}

RadialFunction poly_gaussian_radial(int j) {
  if (j < 0) throw std::invalid_argument("poly_gaussian_radial: j < 0");
  RadialFunction g;
  g.name = "r^" + std::to_string(2 * j) + "gauss";
  g.G = [j](double r) { return std::pow(r, 2 * j) * std::exp(-r * r); };
  g.fourier_zero = [j](int m) { return std::pow(kPi, 0.5 * m) * sal::gamma(j + 0.5 * m) / sal::gamma(0.5 * m); };
  // r^{2j} e^{-r^2/2} <= (2j/e)^j and e^{-r^2/2} <= e^{1/2} e^{-r}
  double c = (j == 0 ? 1.0 : std::pow(2.0 * j / std::exp(1.0), j)) * std::exp(0.5);
  g.envelope = DecayEnvelope{c, 0.0, 1.0, 0.0};
  return g;
}

RadialFunction exp_abs_radial() {
  RadialFunction g;
  g.name = "expabs";
  g.G = [](double r) { return std::exp(-r); };
  g.fourier_zero = [](int m) { return sphere_area(m) * sal::gamma(static_cast<double>(m)); };
  g.envelope = DecayEnvelope{1.0, 0.0, 1.0, 0.0};
  return g;
}

PoissonResult poisson_compare(const RadialFunction& g, double t, int m) {
  if (!(t > 0.0)) throw std::invalid_argument("poisson_compare: t must be positive");
  if (m < 1) throw std::invalid_argument("poisson_compare: m must be >= 1");
  if (!g.envelope) throw std::invalid_argument("poisson_compare: g lacks a decay certificate");
  const DecayEnvelope& e = *g.envelope;
  DecayEnvelope scaled{e.C * std::pow(t, -e.p), e.p, e.a * t, e.x0 / t};
  auto spec = integer_lattice_spectrum(m);
  auto G = g.G;
  SumOptions opts;
  opts.rel_tol = 1e-16;
  auto rep = dirichlet_sum(*spec, [G, t](double x) { return cx(G(t * x), 0.0); }, scaled, cx(G(0.0), 0.0), opts);
  if (!rep.converged) throw std::runtime_error("poisson_compare: lattice sum did not converge");
  PoissonResult r;
  r.S = rep.value.real();
  r.tail_bound = rep.tail_bound;
  r.terms_used = rep.terms_used;
  double F0;
  if (g.fourier_zero) {
    F0 = g.fourier_zero(m);
  } else {
    F0 = sphere_area(m) * half_line_integral([G, m](double x) { return std::pow(x, m - 1) * G(x); });
  }
  r.I = std::pow(t, -m) * F0;
  r.discrepancy = r.S - r.I;
  return r;
}

DerivativeFn central_difference_derivatives(std::function<double(double)> g) {
  return [g](double x, int max_order) {
    std::vector<double> d{g(x)};
    for (int k = 1; k <= max_order; ++k) {
      double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2)) * std::max(1.0, std::abs(x));
      double acc = 0.0, binom = 1.0;
      for (int i = 0; i <= k; ++i) {
        acc += ((i % 2) ? -binom : binom) * g(x + (0.5 * k - i) * h);
        binom = binom * (k - i) / (i + 1);
      }
      d.push_back(acc / std::pow(h, k));
    }
    return d;
  };
}

EulerMaclaurinResult euler_maclaurin(const std::function<double(double)>& g, const DerivativeFn& derivs, long long N, int m) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("euler_maclaurin: m must be even and >= 2");
  if (N < 1) throw std::invalid_argument("euler_maclaurin: N must be >= 1");
  DerivativeFn D = derivs ? derivs : central_difference_derivatives(g);
  double step = std::max(1.0, std::ceil(static_cast<double>(N) / 256.0));
  double qerr = 0.0, integral = 0.0, absint = 0.0, abserr = 0.0;
  auto gm = [&](double x) { return std::abs(D(x, m).at(static_cast<std::size_t>(m))); };
  for (double a = 0.0; a < static_cast<double>(N); a += step) {
    double b = std::min(a + step, static_cast<double>(N));
    integral += gk(g, a, b, &qerr);
    // |g^{(m)}| has kinks; a coarse estimate plus its error suffices for a bound
    absint += gk(gm, a, b, &abserr, 4, 1e-6);
  }
  std::vector<double> d0 = D(0.0, m - 1), dN = D(static_cast<double>(N), m - 1);
  double est = integral + 0.5 * (g(0.0) + g(static_cast<double>(N)));
  double fact = 1.0;
  for (int j = 1; j <= m; ++j) {
    fact *= j;
    if (j < 2 || j % 2) continue;
    est += bernoulli_double(j) / fact * (dN.at(j - 1) - d0.at(j - 1));
  }
  EulerMaclaurinResult r;
  r.estimate = est;
  r.integral = integral;
  r.remainder_bound = 2.0 * riemann_zeta(static_cast<double>(m)) / std::pow(2.0 * kPi, m) * (absint + abserr) + qerr;
  return r;
}

double s3_action(const std::function<double(double)>& f, double lambda) {
  double i2 = 2.0 * half_line_integral([&](double x) { return x * x * f(x); });
  double i0 = 2.0 * half_line_integral(f);
  return lambda * lambda * lambda * i2 - 0.25 * lambda * i0;
}

double t3_action(const std::function<double(double)>& f, double lambda) {
  double radial = 4.0 * kPi * half_line_integral([&](double r) { return r * r * f(r); });
  return lambda * lambda * lambda * radial / (4.0 * kPi * kPi * kPi);
}

Rational s4_coefficient(int m) {
  if (m < 0) throw std::invalid_argument("s4_coefficient: m < 0");
  Rational fact = 1;
  for (int i = 2; i <= m; ++i) fact *= i;
  Rational br = bernoulli_number(2 * m + 2) / (2 * m + 2) - bernoulli_number(2 * m + 4) / (2 * m + 4);
  return Rational(4, 3) * br / fact;
}

std::vector<Rational> s4_coefficients_from_taylor(int M) {
  if (M < 0) throw std::invalid_argument("s4_coefficients_from_taylor: M < 0");
  std::vector<Rational> inv_fact(static_cast<std::size_t>(M) + 1);
  Rational f = 1;
  for (int i = 0; i <= M; ++i) {
    if (i > 0) f *= i;
    inv_fact[i] = 1 / f;
  }
  // g^{(n)}(0) as a combination of h^{(k)}(0) Lambda^{-2k}, n = 2j - 1
  std::vector<Rational> c(static_cast<std::size_t>(M) + 1, Rational(0));
  Rational nfact = 1;  // (2j-1)!
  Rational twojfact = 1;
  for (int j = 1; j <= M + 2; ++j) {
    nfact = (j == 1) ? Rational(1) : nfact * (2 * j - 2) * (2 * j - 1);
    twojfact = nfact * (2 * j);
    std::map<int, Rational> deriv;
    int n = 2 * j - 1;
    if ((n - 3) >= 0 && (n - 3) / 2 <= M) deriv[(n - 3) / 2] += nfact * inv_fact[(n - 3) / 2];
    if ((n - 1) / 2 <= M) deriv[(n - 1) / 2] -= nfact * inv_fact[(n - 1) / 2];
    Rational w = -bernoulli_number(2 * j) / twojfact;
    for (auto& [k, v] : deriv) c[k] += Rational(4, 3) * w * v;
  }
  return c;
}

double s4_action(const std::function<double(double)>& f, const std::vector<double>& h_derivs, double lambda, int M) {
  if (static_cast<int>(h_derivs.size()) < M + 1) throw std::invalid_argument("s4_action: need h^{(m)}(0) for m = 0..M");
  double l2 = lambda * lambda;
  double i3 = half_line_integral([&](double u) { return u * u * u * f(u); });
  double i1 = half_line_integral([&](double u) { return u * f(u); });
  double v = (4.0 / 3.0) * l2 * l2 * i3 - (4.0 / 3.0) * l2 * i1 + to_double(s4_coefficient(0)) * f(0.0);
  double lp = 1.0;
  for (int m = 1; m <= M; ++m) {
    lp /= l2;
    v += to_double(s4_coefficient(m)) * lp * h_derivs[m];
  }
  return v;
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_slope: need two or more points");
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]);
    double ly = std::log(std::max(std::abs(y[i]), std::numeric_limits<double>::min()));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sal
