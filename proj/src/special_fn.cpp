#include "sal/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

namespace sal {

namespace {

constexpr double kTiny = 1e-300;
const double kLog2Pi = std::log(2.0 * kPi);

bool is_nonpositive_integer(cx z) {
  if (z.imag() != 0.0) return false;
  const double x = z.real();
  return x <= 0.0 && x == std::floor(x);
}

// Lanczos approximation, g = 607/128, 15 terms; |rel err| ~ 1e-15 for Re z >= 1/2
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

cx lanczos_lgamma(cx x) {
  cx y = x;
  cx tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  cx ser = 0.999999999999997092;
  for (double c : kLanczos) {
    y += 1.0;
    ser += c / y;
  }
  return tmp + std::log(2.5066282746310005 * ser / x);
}

}  // namespace

double sinpi(double x) {
  double r = std::fmod(x, 2.0);  // (-2, 2)
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(kPi * r);
}

double cospi(double x) { return sinpi(x + 0.5); }

cx sinpi(cx z) {
  const double y = kPi * z.imag();
  return {sinpi(z.real()) * std::cosh(y), cospi(z.real()) * std::sinh(y)};
}

namespace {

// log sin(pi z) without overflow for large |Im z| (branch not normalized)
cx log_sinpi(cx z) {
  const double y = z.imag();
  if (std::abs(y) < 30.0) return std::log(sinpi(z));
  const cx i(0.0, 1.0);
  if (y > 0) return cx(kPi * y, -kPi * z.real()) + std::log(0.5 * i) + std::log(1.0 - std::exp(2.0 * kPi * i * z));
  return cx(-kPi * y, kPi * z.real()) + std::log(-0.5 * i) + std::log(1.0 - std::exp(-2.0 * kPi * i * z));
}

// cot(pi z)
cx cotpi(cx z) {
  const double y = z.imag();
  if (std::abs(y) < 1.0) return sinpi(z + 0.5) / sinpi(z);
  const cx i(0.0, 1.0);
  if (y > 0) {
    const cx w = std::exp(2.0 * kPi * i * z);
    return i * (w + 1.0) / (w - 1.0);
  }
  const cx w = std::exp(-2.0 * kPi * i * z);
  return i * (w + 1.0) / (1.0 - w);
}

}  // namespace

cx gamma(cx z) {
  if (is_nonpositive_integer(z)) throw PoleError("gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    if (std::abs(z.imag()) >= 30.0) return std::exp(std::log(kPi) - log_sinpi(z) - lanczos_lgamma(1.0 - z));
    return kPi / (sinpi(z) * gamma(1.0 - z));
  }
  return std::exp(lanczos_lgamma(z));
}

double gamma(double x) { return gamma(cx(x, 0.0)).real(); }

cx log_gamma(cx z) {
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
  if (z.real() < 0.5) return std::log(kPi) - log_sinpi(z) - log_gamma(1.0 - z);
  return lanczos_lgamma(z);
}

cx rgamma(cx z) {
  if (z.real() < 0.5) {
    if (std::abs(z.imag()) >= 30.0) return std::exp(log_sinpi(z) + lanczos_lgamma(1.0 - z) - std::log(kPi));
    return sinpi(z) * gamma(1.0 - z) / kPi;
  }
  return 1.0 / gamma(z);
}

cx digamma(cx z) {
  if (is_nonpositive_integer(z)) throw PoleError("digamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    return digamma(1.0 - z) - kPi * cotpi(z);
  }
  cx acc = 0.0;
  while (std::abs(z) < 15.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const cx w2 = 1.0 / (z * z);
  cx pw = w2;
  cx series = 0.0;
  for (int k = 1; k <= 12; ++k) {
    series += bernoulli_double(2 * k) / (2.0 * k) * pw;
    pw *= w2;
  }
  return acc + std::log(z) - 0.5 / z - series;
}

cx polygamma(int m, cx z) {
  if (m < 0) throw std::invalid_argument("polygamma: negative order");
  if (m == 0) return digamma(z);
  if (is_nonpositive_integer(z)) throw PoleError("polygamma: pole at nonpositive integer");
  double mfact = 1.0;
  for (int i = 2; i <= m; ++i) mfact *= i;
  const double sgn = (m % 2 == 0) ? 1.0 : -1.0;  // (-1)^m
  cx acc = 0.0;
  while (std::abs(z) < 20.0 + m) {
    acc -= sgn * mfact / std::pow(z, m + 1);
    z += 1.0;
  }
  // (-1)^{m+1} [ (m-1)!/z^m + m!/(2 z^{m+1}) + sum_k B_2k (2k+m-1)!/((2k)! z^{2k+m}) ]
  const double mfact1 = mfact / m;
  cx s = mfact1 / std::pow(z, m) + mfact / (2.0 * std::pow(z, m + 1));
  for (int k = 1; k <= 14; ++k) {
    // (2k+m-1)!/(2k)!
    double ratio = 1.0;
    for (int i = 2 * k + 1; i <= 2 * k + m - 1; ++i) ratio *= i;
    s += bernoulli_double(2 * k) * ratio / std::pow(z, 2 * k + m);
  }
  return acc - sgn * s;
}

Laurent gamma_series(cx z, int order) {
  if (order < 0) order = 0;
  const double xr = std::round(z.real());
  const bool at_pole = std::abs(z.imag()) < 1e-14 && xr <= 0.0 && std::abs(z.real() - xr) < 1e-12;
  if (at_pole) {
    const int k = static_cast<int>(-xr);
    const int n = order + 2;  // need Gamma(1+h) up to h^{order+1}
    // log Gamma(1+h) = -gamma h + sum_{m>=2} (-1)^m zeta(m) h^m / m
    std::vector<cx> lg(static_cast<std::size_t>(n), 0.0);
    if (n > 1) lg[1] = -kEulerGamma;
    for (int m = 2; m < n; ++m) lg[static_cast<std::size_t>(m)] = ((m % 2 == 0) ? 1.0 : -1.0) * riemann_zeta(static_cast<double>(m)) / m;
    Laurent g = series_exp(Laurent(0, lg));
    for (int j = 1; j <= k; ++j) {
      // 1/(h - j) = -(1/j) sum (h/j)^i
      std::vector<cx> inv(static_cast<std::size_t>(n));
      double p = -1.0 / j;
      for (int i = 0; i < n; ++i) {
        inv[static_cast<std::size_t>(i)] = p;
        p /= j;
      }
      g = g * Laurent(0, inv);
    }
    g.lead = -1;  // divide by h
    return g.truncated(order);
  }
  std::vector<cx> lg(static_cast<std::size_t>(order + 1), 0.0);
  double fact = 1.0;
  for (int m = 1; m <= order; ++m) {
    fact *= m;
    lg[static_cast<std::size_t>(m)] = polygamma(m - 1, z) / fact;
  }
  Laurent g = scale(series_exp(Laurent(0, lg)), gamma(z));
  std::vector<cx> c{0.0};
  c.insert(c.end(), g.c.begin(), g.c.end());
  return {-1, c};
}

cx gamma_laurent(cx z, int j) {
  if (j < -1) return 0.0;
  return gamma_series(z, std::max(j, 0)).coeff(j);
}

// ---------------------------------------------------------------- incomplete gamma

namespace {

template <class T>
T lower_gamma_series(T a, double x) {
  // gamma(a,x) = x^a e^{-x} sum x^n / (a (a+1) ... (a+n))
  T term = 1.0 / a;
  T sum = term;
  for (int n = 1; n < 2000; ++n) {
    term *= x / (a + static_cast<double>(n));
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(a * std::log(x) - x);
}

template <class T>
T upper_gamma_cf(T a, double x) {
  const double fpmin = 1e-300;
  T b = x + 1.0 - a;
  T c = 1.0 / fpmin;
  T d = 1.0 / b;
  T h = d;
  for (int i = 1; i < 100000; ++i) {
    const T an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const T del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(x) - x) * h;
}

double expint_e1(double x) {
  if (x >= 1.0) return upper_gamma_cf(0.0, x);
  double sum = 0.0, term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    sum += term / k;
    if (std::abs(term) < 1e-18) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

}  // namespace

double upper_gamma(double a, double x) {
  if (!(x > 0.0)) throw std::domain_error("upper_gamma: x must be positive");
  if (a > 0.0 && x < a + 1.0) return gamma(a) - lower_gamma_series(a, x);
  if (x >= 1.0) return upper_gamma_cf(a, x);
  // small x, a <= 0: recurrence Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a
  if (a == 0.0) return expint_e1(x);
  return (upper_gamma(a + 1.0, x) - std::exp(a * std::log(x) - x)) / a;
}

cx upper_gamma(cx a, double x) {
  if (!(x > 0.0)) throw std::domain_error("upper_gamma: x must be positive");
  if (a.imag() == 0.0) return upper_gamma(a.real(), x);
  if (a.real() > 0.0 && x < a.real() + 1.0) return gamma(a) - lower_gamma_series(a, x);
  if (x >= 1.0) return upper_gamma_cf(a, x);
  return (upper_gamma(a + 1.0, x) - std::exp(a * std::log(x) - x)) / a;
}

// ---------------------------------------------------------------- zeta functions

namespace {

// Euler-Maclaurin for sum_{n>=0} (n+a)^{-s}
cx hurwitz_em(cx s, double a) {
  const int n_terms = std::max(8, static_cast<int>(std::ceil(1.2 * std::abs(s))) + 10);
  cx sum = 0.0;
  for (int n = n_terms - 1; n >= 0; --n) sum += std::exp(-s * std::log(n + a));
  const double x = n_terms + a;
  const double lx = std::log(x);
  const cx x1s = std::exp((1.0 - s) * lx);
  sum += x1s / (s - 1.0) + 0.5 * std::exp(-s * lx);
  // B_2k/(2k)! (s)_{2k-1} x^{1-s-2k}
  cx poch = s;  // (s)_1
  double fact = 2.0;
  double xp = 1.0 / (x * x);
  cx prev = 1e300;
  for (int k = 1; k <= 60; ++k) {
    const cx term = bernoulli_double(2 * k) / fact * poch * x1s * xp;
    if (std::abs(term) > std::abs(prev) && k > 3) break;  // asymptotic turnaround
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    prev = term;
    poch *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    xp /= x * x;
  }
  return sum;
}

bool small_denominator(double a, int& p, int& q) {
  for (q = 1; q <= 64; ++q) {
    const double aq = a * q;
    const double r = std::round(aq);
    if (std::abs(aq - r) < 1e-13 * std::max(1.0, aq)) {
      p = static_cast<int>(r);
      return true;
    }
  }
  return false;
}

}  // namespace

cx riemann_zeta(cx s) {
  if (s == cx(1.0, 0.0)) throw PoleError("riemann_zeta: pole at s = 1");
  if (s.imag() == 0.0 && s.real() < 0.0 && s.real() == std::floor(s.real())) {
    const int m = static_cast<int>(-s.real());
    if (m + 1 <= kBernoulliCapacity) return to_double(-bernoulli_number(m + 1) / Rational(m + 1));
  }
  if (s.real() >= -0.25) return hurwitz_em(s, 1.0);
  // functional equation
  const cx one_s = 1.0 - s;
  const cx mag = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(one_s));
  return mag * sinpi(0.5 * s) * riemann_zeta(one_s);
}

double riemann_zeta(double s) { return riemann_zeta(cx(s, 0.0)).real(); }

cx hurwitz_zeta(cx s, double a) {
  if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: a must be positive");
  if (s == cx(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");
  if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real())) {
    const int m = static_cast<int>(-s.real());
    if (m + 1 <= kBernoulliCapacity) {
      Rational v = -bernoulli_poly(m + 1, to_rational(a)) / Rational(m + 1);
      return to_double(v);
    }
  }
  if (s.real() >= -1.0) return hurwitz_em(s, a);
  int p = 0, q = 1;
  if (small_denominator(a, p, q)) {
    // reduce to a0 in (0, 1]
    int shift = (p - 1) / q;  // a = a0 + shift
    const int p0 = p - shift * q;
    const double a0 = static_cast<double>(p0) / q;
    const cx sp = 1.0 - s;
    cx fplus = 0.0, fminus = 0.0;
    for (int r = 1; r <= q; ++r) {
      const double ang = 2.0 * kPi * r * p0 / q;
      const cx z = hurwitz_zeta(sp, static_cast<double>(r) / q);
      fplus += cx(std::cos(ang), std::sin(ang)) * z;
      fminus += cx(std::cos(ang), -std::sin(ang)) * z;
    }
    const cx qs = std::exp(-sp * std::log(static_cast<double>(q)));
    fplus *= qs;
    fminus *= qs;
    const cx pref = std::exp(log_gamma(sp) - sp * kLog2Pi);
    const cx ph = std::exp(cx(0.0, -0.5 * kPi) * sp);
    cx val = pref * (ph * fplus + fminus / ph);
    for (int j = 0; j < shift; ++j) val -= std::exp(-s * std::log(a0 + j));
    return val;
  }
  return hurwitz_em(s, a);
}

double hurwitz_zeta(double s, double a) { return hurwitz_zeta(cx(s, 0.0), a).real(); }

std::vector<double> sum_of_squares_counts(int d, int n_max) {
  if (d < 1 || n_max < 0) throw std::invalid_argument("sum_of_squares_counts: bad arguments");
  std::vector<double> r(static_cast<std::size_t>(n_max) + 1, 0.0);
  r[0] = 1.0;
  for (int dim = 0; dim < d; ++dim) {
    std::vector<double> next(r.size(), 0.0);
    for (int m = 0; m <= n_max; ++m) {
      if (r[static_cast<std::size_t>(m)] == 0.0) continue;
      for (int k = 0; m + k * k <= n_max; ++k) next[static_cast<std::size_t>(m + k * k)] += (k == 0 ? 1.0 : 2.0) * r[static_cast<std::size_t>(m)];
    }
    r.swap(next);
  }
  return r;
}

cx epstein_zeta(cx s, int d) {
  if (d < 1) throw std::invalid_argument("epstein_zeta: d must be >= 1");
  if (s == cx(static_cast<double>(d), 0.0)) throw PoleError("epstein_zeta: pole at s = d");
  if (s == cx(0.0, 0.0)) return -1.0;
  static std::mutex mu;
  static std::vector<std::vector<double>> cache(16);
  constexpr int n_max = 60;
  std::vector<double> r;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto idx = static_cast<std::size_t>(d);
    if (idx < cache.size()) {
      if (cache[idx].empty()) cache[idx] = sum_of_squares_counts(d, n_max);
      r = cache[idx];
    } else {
      r = sum_of_squares_counts(d, n_max);
    }
  }
  const cx h1 = 0.5 * s;
  const cx h2 = 0.5 * (static_cast<double>(d) - s);
  cx lam = -2.0 / s - 2.0 / (static_cast<double>(d) - s);
  for (int n = 1; n <= n_max; ++n) {
    const double c = r[static_cast<std::size_t>(n)];
    if (c == 0.0) continue;
    const double x = kPi * n;
    const double lx = std::log(x);
    lam += c * (std::exp(-h1 * lx) * upper_gamma(h1, x) + std::exp(-h2 * lx) * upper_gamma(h2, x));
  }
  return std::exp(h1 * std::log(kPi)) * rgamma(h1) * lam;
}

cx jacobi_theta3(cx z, cx q) {
  if (std::abs(q) >= 1.0) throw std::domain_error("jacobi_theta3: |q| must be < 1");
  if (q == cx(0.0)) return 1.0;
  cx sum = 1.0;
  const cx lq = std::log(q);
  for (int n = 1; n < 1000000; ++n) {
    const double nn = static_cast<double>(n);
    const cx qn = std::exp(nn * nn * lq);
    const cx e = std::exp(cx(0.0, 2.0 * nn) * z);
    const cx term = qn * (e + 1.0 / e);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && nn * nn * std::abs(lq.real()) > 10.0) break;
  }
  return sum;
}

// ---------------------------------------------------------------- Bernoulli

namespace {

const std::vector<Rational>& bernoulli_table() {
  static const std::vector<Rational> table = [] {
    const int n = kBernoulliCapacity / 2;
    // tangent numbers by the integer recurrence
    std::vector<BigInt> t(static_cast<std::size_t>(n) + 1);
    t[1] = 1;
    for (int k = 2; k <= n; ++k) t[static_cast<std::size_t>(k)] = (k - 1) * t[static_cast<std::size_t>(k - 1)];
    for (int k = 2; k <= n; ++k)
      for (int j = k; j <= n; ++j)
        t[static_cast<std::size_t>(j)] = (j - k) * t[static_cast<std::size_t>(j - 1)] + (j - k + 2) * t[static_cast<std::size_t>(j)];
    std::vector<Rational> b(static_cast<std::size_t>(kBernoulliCapacity) + 1, Rational(0));
    b[0] = 1;
    b[1] = Rational(-1, 2);
    for (int k = 1; k <= n; ++k) {
      BigInt four_k = BigInt(1) << (2 * k);
      Rational v(BigInt(2 * k) * t[static_cast<std::size_t>(k)], four_k * (four_k - 1));
      b[static_cast<std::size_t>(2 * k)] = (k % 2 == 1) ? v : Rational(-v);
    }
    return b;
  }();
  return table;
}

const std::vector<double>& bernoulli_double_table() {
  static const std::vector<double> table = [] {
    const auto& b = bernoulli_table();
    std::vector<double> d(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) d[i] = to_double(b[i]);
    return d;
  }();
  return table;
}

}  // namespace

Rational bernoulli_number(int k) {
  if (k < 0 || k > kBernoulliCapacity) throw std::out_of_range("bernoulli_number: index beyond table capacity");
  return bernoulli_table()[static_cast<std::size_t>(k)];
}

double bernoulli_double(int k) {
  if (k < 0 || k > kBernoulliCapacity) throw std::out_of_range("bernoulli_double: index beyond table capacity");
  return bernoulli_double_table()[static_cast<std::size_t>(k)];
}

std::vector<Rational> bernoulli_poly_coeffs(int k) {
  if (k < 0 || k > kBernoulliCapacity) throw std::out_of_range("bernoulli_poly: index beyond table capacity");
  std::vector<Rational> c(static_cast<std::size_t>(k) + 1);
  BigInt binom = 1;  // C(k, j)
  for (int j = 0; j <= k; ++j) {
    c[static_cast<std::size_t>(k - j)] = Rational(binom) * bernoulli_number(j);
    binom = binom * (k - j) / (j + 1);
  }
  return c;
}

Rational bernoulli_poly(int k, const Rational& x) {
  const auto c = bernoulli_poly_coeffs(k);
  Rational acc = 0;
  for (int i = k; i >= 0; --i) acc = acc * x + c[static_cast<std::size_t>(i)];
  return acc;
}

double bernoulli_poly(int k, double x) {
  const auto c = bernoulli_poly_coeffs(k);
  double acc = 0.0;
  for (int i = k; i >= 0; --i) acc = acc * x + to_double(c[static_cast<std::size_t>(i)]);
  return acc;
}

cx power_log_primitive(cx w, int n, double s) {
  const double ls = std::log(s);
  if (std::abs(w + 1.0) < 1e-15) return std::pow(ls, n + 1) / static_cast<double>(n + 1);
  const cx w1 = w + 1.0;
  cx acc = 0.0;
  double falling = 1.0;  // n!/(n-j)!
  for (int j = 0; j <= n; ++j) {
    acc += ((j % 2 == 0) ? 1.0 : -1.0) * falling * std::pow(ls, n - j) / std::pow(w1, j + 1);
    falling *= n - j;
  }
  return std::exp(w1 * ls) * acc;
}

double q_number(double x, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q_number: q must lie in (0,1)");
  const double l = -std::log(q);
  if (x == 0.0) return 0.0;
  return std::sinh(x * l) / std::sinh(l);
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("to_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, 0.5 <= |m| < 1
  const auto mi = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r{BigInt(mi)};
  if (e > 0) r *= Rational(BigInt(1) << e);
  if (e < 0) r /= Rational(BigInt(1) << (-e));
  return r;
}

double to_double(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (num == 0) return 0.0;
  const bool neg = num < 0;
  if (neg) num = -num;
  // scale to keep 64 significant bits in the quotient
  const long long nb = static_cast<long long>(boost::multiprecision::msb(num));
  const long long db = static_cast<long long>(boost::multiprecision::msb(den));
  const long long shift = 64 - (nb - db);
  BigInt q = shift >= 0 ? BigInt((num << shift) / den) : BigInt(num / (den << (-shift)));
  const double v = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
  return neg ? -v : v;
}

}  // namespace sal
