#include "sal/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sal/laurent.hpp"
#include "sal/special_fn.hpp"

namespace sal {

namespace {

using RealFn = std::function<double(double)>;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-12;

double integrate_finite(const RealFn& g, double a, double b) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  if (!(b > a)) return 0.0;
  return ts.integrate(g, a, b, kQuadTol);
}

double integrate_half_line(const RealFn& g) {
  static thread_local boost::math::quadrature::exp_sinh<double> es;
  return integrate_finite(g, 0.0, 1.0) + es.integrate(g, 1.0, kInf, kQuadTol);
}

// int g(s) dF(s) for one factor; abs_density uses |phi| for analytic factors
double expect(const Factor& f, const RealFn& g, bool abs_density) {
  switch (f.kind) {
    case Factor::Kind::atom:
      return g(f.a);
    case Factor::Kind::gamma: {
      const double lg = std::lgamma(f.r);
      return integrate_half_line([&](double y) {
        if (y <= 0.0) return 0.0;
        const double w = std::exp((f.r - 1.0) * std::log(y) - y - lg);
        return w == 0.0 ? 0.0 : g(y / f.lambda) * w;
      });
    }
    case Factor::Kind::box:
      return integrate_finite(g, f.a, f.b);
    case Factor::Kind::analytic: {
      const int k = f.density->power;
      return integrate_half_line([&](double v) {
        if (v <= 0.0) return 0.0;
        double ph = f.density->phi(v);
        if (abs_density) ph = std::abs(ph);
        if (ph == 0.0) return 0.0;
        return g(std::pow(v, k)) * ph * k * std::pow(v, k - 1);
      });
    }
  }
  return 0.0;
}

// E[g(shift + S_1 + ... + S_k)] by nested quadrature
double expect_sum(const std::vector<Factor>& fs, std::size_t i, double shift, const RealFn& g, bool abs_density) {
  if (i == fs.size()) return g(shift);
  return expect(fs[i], [&](double s) { return expect_sum(fs, i + 1, shift + s, g, abs_density); }, abs_density);
}

// raw integer moment of a single factor
double factor_moment(const Factor& f, int j, bool abs_density) {
  switch (f.kind) {
    case Factor::Kind::atom:
      return std::pow(f.a, j);
    case Factor::Kind::gamma:
      return std::exp(std::lgamma(f.r + j) - std::lgamma(f.r) - j * std::log(f.lambda));
    case Factor::Kind::box:
      return (std::pow(f.b, j + 1) - std::pow(f.a, j + 1)) / (j + 1);
    case Factor::Kind::analytic:
      return expect(f, [j](double s) { return std::pow(s, j); }, abs_density);
  }
  return 0.0;
}

struct Canonical {
  double weight = 1.0;
  double shift = 0.0;
  std::vector<Factor> rest;  // gammas merged by rate, boxes, analytic
};

Canonical canonical(const MeasureTerm& t) {
  Canonical c;
  c.weight = t.weight;
  std::map<double, double> gammas;  // rate -> total shape
  for (const auto& f : t.factors) {
    if (f.kind == Factor::Kind::atom) {
      c.shift += f.a;
    } else if (f.kind == Factor::Kind::gamma) {
      gammas[f.lambda] += f.r;
    } else {
      c.rest.push_back(f);
    }
  }
  for (const auto& [rate, shape] : gammas) c.rest.push_back(Factor::gamma(shape, rate));
  return c;
}

// order of the term density at s = 0; infinite when shifted away from 0
double local_order(const Canonical& c) {
  if (c.shift > 0.0) return kInf;
  double order = 0.0;
  for (const auto& f : c.rest) {
    switch (f.kind) {
      case Factor::Kind::gamma: order += f.r; break;
      case Factor::Kind::box: order += f.a > 0.0 ? kInf : 1.0; break;
      case Factor::Kind::analytic: order += f.density->order_at_zero; break;
      case Factor::Kind::atom: break;
    }
  }
  return order;
}

cx gamma_f_moment(double r, double lambda, cx z, int n) {
  const cx nu = -z;
  if (!((r + nu).real() > 0.0)) throw std::domain_error("f_moment: Re(z) must be below the gamma shape r = " + std::to_string(r));
  std::vector<cx> lg(static_cast<std::size_t>(n) + 1, 0.0);
  lg[0] = log_gamma(r + nu) - std::lgamma(r) - nu * std::log(lambda);
  double fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    fact *= k;
    lg[static_cast<std::size_t>(k)] = polygamma(k - 1, r + nu) / fact;
  }
  if (n >= 1) lg[1] -= std::log(lambda);
  const Laurent e = series_exp(Laurent(0, lg));
  double nfact = 1.0;
  for (int k = 2; k <= n; ++k) nfact *= k;
  return nfact * e.coeff(n);
}

std::shared_ptr<const AnalyticDensity> null_taylor_density() {
  static const auto d = [] {
    auto p = std::make_shared<AnalyticDensity>();
    p->name = "nulltaylor";
    p->power = 4;
    p->phi = [](double v) { return std::exp(-v) * std::sin(v); };
    p->order_at_zero = 1.25;
    p->laplace_bound = std::tgamma(1.25);  // |sin y| e^{-y} <= y
    return std::shared_ptr<const AnalyticDensity>(p);
  }();
  return d;
}

}  // namespace

Factor Factor::atom(double at) {
  if (!(at >= 0.0)) throw std::invalid_argument("atom location must be nonnegative");
  Factor f;
  f.kind = Kind::atom;
  f.a = at;
  return f;
}

Factor Factor::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw std::invalid_argument("gamma density needs r > 0 and a positive rate");
  Factor f;
  f.kind = Kind::gamma;
  f.r = shape;
  f.lambda = rate;
  return f;
}

Factor Factor::box(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("window needs 0 <= a < b");
  Factor f;
  f.kind = Kind::box;
  f.a = lo;
  f.b = hi;
  return f;
}

Factor Factor::analytic(std::shared_ptr<const AnalyticDensity> d) {
  Factor f;
  f.kind = Kind::analytic;
  f.density = std::move(d);
  return f;
}

double Factor::laplace(double x) const {
  switch (kind) {
    case Kind::atom:
      return std::exp(-a * x);
    case Kind::gamma:
      return std::pow(lambda / (lambda + x), r);
    case Kind::box:
      if (x == 0.0) return b - a;
      return -std::exp(-a * x) * std::expm1(-(b - a) * x) / x;
    case Kind::analytic:
      return expect(*this, [x](double s) { return std::exp(-s * x); }, false);
  }
  return 0.0;
}

CutoffFunction::CutoffFunction(SignedMeasure m, std::string name) : measure_(std::move(m)), name_(std::move(name)) { finalize(); }

CutoffFunction CutoffFunction::pointwise(std::function<double(double)> f, DecayEnvelope env, std::string name) {
  CutoffFunction c;
  c.pointwise_ = true;
  c.f_ = std::move(f);
  c.envelope_ = env;
  c.name_ = std::move(name);
  return c;
}

void CutoffFunction::finalize() {
  // per-term envelopes |w| C_i x^{-p_i} e^{-a_i x}, merged for x >= 1
  struct Env {
    double C, p, a;
  };
  std::vector<Env> envs;
  for (const auto& t : measure_.terms) {
    const Canonical c = canonical(t);
    Env e{std::abs(c.weight), 0.0, c.shift};
    for (const auto& f : c.rest) {
      switch (f.kind) {
        case Factor::Kind::gamma:
          e.C *= std::pow(f.lambda, f.r);
          e.p += f.r;
          break;
        case Factor::Kind::box:
          e.p += 1.0;
          e.a += f.a;
          break;
        case Factor::Kind::analytic:
          e.C *= f.density->laplace_bound;
          e.p += f.density->order_at_zero;
          break;
        case Factor::Kind::atom:
          break;
      }
    }
    envs.push_back(e);
  }
  if (envs.empty()) {
    envelope_ = DecayEnvelope{0.0, 0.0, 0.0, 0.0};
    return;
  }
  double pmin = kInf, amin = kInf;
  for (const auto& e : envs) {
    pmin = std::min(pmin, e.p);
    amin = std::min(amin, e.a);
  }
  double C = 0.0;
  for (const auto& e : envs) C += e.C * std::exp(-(e.a - amin));  // x0 = 1
  envelope_ = DecayEnvelope{C, pmin, amin, 1.0};
}

double CutoffFunction::operator()(double x) const {
  if (pointwise_) return f_(x);
  double acc = 0.0;
  for (const auto& t : measure_.terms) {
    double v = t.weight;
    for (const auto& f : t.factors) v *= f.laplace(x);
    acc += v;
  }
  return acc;
}

double CutoffFunction::decay_order() const { return envelope_.a > 0.0 ? kInf : envelope_.p; }

double CutoffFunction::moment(double m) const {
  if (pointwise_) throw std::logic_error("moment: " + name_ + " has no Laplace representation");
  if (m >= 0.0 && m == std::floor(m)) {
    const int mi = static_cast<int>(m);
    double acc = 0.0;
    for (const auto& t : measure_.terms) {
      // binomial convolution of factor moments
      std::vector<double> mom(static_cast<std::size_t>(mi) + 1, 0.0);
      mom[0] = 1.0;
      for (const auto& f : t.factors) {
        std::vector<double> fm(static_cast<std::size_t>(mi) + 1);
        for (int j = 0; j <= mi; ++j) fm[static_cast<std::size_t>(j)] = factor_moment(f, j, false);
        std::vector<double> next(mom.size(), 0.0);
        for (int k = 0; k <= mi; ++k) {
          double binom = 1.0;
          for (int j = 0; j <= k; ++j) {
            next[static_cast<std::size_t>(k)] += binom * mom[static_cast<std::size_t>(j)] * fm[static_cast<std::size_t>(k - j)];
            binom = binom * (k - j) / (j + 1);
          }
        }
        mom.swap(next);
      }
      acc += t.weight * mom[static_cast<std::size_t>(mi)];
    }
    return acc;
  }
  return f_moment(cx(-m, 0.0), 0).real();
}

double CutoffFunction::abs_moment(double m) const {
  if (pointwise_) throw std::logic_error("abs_moment: " + name_ + " has no Laplace representation");
  double acc = 0.0;
  for (const auto& t : measure_.terms) {
    const Canonical c = canonical(t);
    if (-m >= local_order(c)) throw std::domain_error("abs_moment: order " + std::to_string(m) + " diverges for " + name_);
    acc += std::abs(t.weight) * expect_sum(c.rest, 0, c.shift, [m](double s) { return s > 0.0 ? std::pow(s, m) : (m == 0.0 ? 1.0 : 0.0); }, true);
  }
  return acc;
}

double CutoffFunction::derivative_at_zero(int n) const {
  return ((n % 2 == 0) ? 1.0 : -1.0) * moment(static_cast<double>(n));
}

cx CutoffFunction::f_moment(cx z, int n) const {
  if (pointwise_) throw std::logic_error("f_moment: " + name_ + " has no Laplace representation");
  if (n < 0) throw std::invalid_argument("f_moment: n must be >= 0");
  cx acc = 0.0;
  for (const auto& t : measure_.terms) {
    const Canonical c = canonical(t);
    const double order = local_order(c);
    if (!(z.real() < order))
      throw std::domain_error("f_moment: Re(z) = " + std::to_string(z.real()) + " violates the decay certificate p = " + std::to_string(order) +
                              " of " + name_);
    cx v;
    if (c.rest.empty()) {
      v = std::exp(-z * std::log(c.shift)) * std::pow(std::log(c.shift), n);
    } else if (c.rest.size() == 1 && c.rest[0].kind == Factor::Kind::gamma && c.shift == 0.0) {
      v = gamma_f_moment(c.rest[0].r, c.rest[0].lambda, z, n);
    } else if (c.rest.size() == 1 && c.rest[0].kind == Factor::Kind::box) {
      const double lo = c.rest[0].a + c.shift, hi = c.rest[0].b + c.shift;
      v = power_log_primitive(-z, n, hi) - (lo > 0.0 ? power_log_primitive(-z, n, lo) : cx(0.0));
    } else {
      auto part = [&](bool imag) {
        return expect_sum(c.rest, 0, c.shift, [&](double s) {
          if (s <= 0.0) return 0.0;
          const double ls = std::log(s);
          const cx val = std::exp(-z * ls) * std::pow(ls, n);
          return imag ? val.imag() : val.real();
        }, false);
      };
      v = cx(part(false), z.imag() == 0.0 ? 0.0 : part(true));
    }
    acc += t.weight * v;
  }
  return acc;
}

cx CutoffFunction::mellin_moment(cx z) const {
  if (!(z.real() > 0.0) || !(z.real() < decay_order())) throw std::domain_error("mellin_moment: need 0 < Re z < decay order");
  auto part = [&](bool imag) {
    return integrate_half_line([&](double x) {
      if (x <= 0.0) return 0.0;
      const cx v = std::exp((z - 1.0) * std::log(x)) * (*this)(x);
      return imag ? v.imag() : v.real();
    });
  };
  const cx integral(part(false), z.imag() == 0.0 ? 0.0 : part(true));
  return integral * rgamma(z);
}

double CutoffFunction::nonneg_grid_min() const {
  double mn = kInf;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, -4.0 + 8.0 * i / 999.0);
    mn = std::min(mn, (*this)(x));
  }
  return mn;
}

PointwiseCutoff CutoffFunction::as_pointwise() const {
  PointwiseCutoff p;
  p.f = [c = *this](double x) { return c(x); };
  p.envelope = envelope_;
  return p;
}

CutoffFunction exp_cutoff(double a) { return {SignedMeasure{{MeasureTerm{1.0, {Factor::atom(a)}}}}, "exp:" + std::to_string(a)}; }

CutoffFunction window_cutoff(double a, double b) {
  return {SignedMeasure{{MeasureTerm{1.0, {Factor::box(a, b)}}}}, "window:" + std::to_string(a) + "," + std::to_string(b)};
}

CutoffFunction powerlaw_cutoff(double a, double b, double r) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("powerlaw needs a, b > 0");
  // (a x + b)^{-r} = b^{-r} (lambda/(lambda + x))^r with lambda = b/a
  return {SignedMeasure{{MeasureTerm{std::pow(b, -r), {Factor::gamma(r, b / a)}}}}, "powerlaw"};
}

CutoffFunction gauss_cutoff() {
  return CutoffFunction::pointwise([](double x) { return std::exp(-x * x); }, DecayEnvelope{std::exp(0.25), 0.0, 1.0, 0.0}, "gauss");
}

CutoffFunction nulltaylor_cutoff() {
  return {SignedMeasure{{MeasureTerm{1.0, {Factor::analytic(null_taylor_density())}}}}, "nulltaylor"};
}

CutoffFunction product(const CutoffFunction& f, const CutoffFunction& g) {
  if (!f.has_measure() || !g.has_measure()) {
    const auto& ef = f.envelope();
    const auto& eg = g.envelope();
    return CutoffFunction::pointwise([f, g](double x) { return f(x) * g(x); },
                                     DecayEnvelope{ef.C * eg.C, ef.p + eg.p, ef.a + eg.a, std::max(ef.x0, eg.x0)},
                                     "product(" + f.name() + "," + g.name() + ")");
  }
  SignedMeasure m;
  for (const auto& a : f.measure().terms)
    for (const auto& b : g.measure().terms) {
      MeasureTerm t{a.weight * b.weight, a.factors};
      t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
      m.terms.push_back(std::move(t));
    }
  return {m, "product(" + f.name() + "," + g.name() + ")"};
}

CutoffFunction power(const CutoffFunction& f, int n) {
  if (n < 1) throw std::invalid_argument("power: n must be >= 1");
  CutoffFunction out = f;
  for (int i = 1; i < n; ++i) out = product(out, f);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& s, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok = trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cutoff " + what + ": bad number '" + tok + "'");
    }
    if (used != tok.size()) throw std::invalid_argument("cutoff " + what + ": bad number '" + tok + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != count) throw std::invalid_argument("cutoff " + what + ": expected " + std::to_string(count) + " parameters");
  return out;
}

}  // namespace

CutoffFunction parse_cutoff(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  if (spec.rfind("product(", 0) == 0) {
    if (spec.back() != ')') throw std::invalid_argument("cutoff product: missing ')'");
    const std::string inner = spec.substr(8, spec.size() - 9);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (depth == 0 && inner[i] == ',') {
        // split at the first top-level comma that leaves a parsable left operand
        const std::string left = inner.substr(0, i);
        try {
          CutoffFunction l = parse_cutoff(left);
          return product(l, parse_cutoff(inner.substr(i + 1)));
        } catch (const std::invalid_argument&) {
          continue;
        }
      }
    }
    throw std::invalid_argument("cutoff product: expected product(c1,c2)");
  }
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "gauss" && colon == std::string::npos) return gauss_cutoff();
  if (head == "nulltaylor" && colon == std::string::npos) return nulltaylor_cutoff();
  if (head == "exp") return exp_cutoff(parse_numbers(args, 1, head)[0]);
  if (head == "window") {
    const auto v = parse_numbers(args, 2, head);
    return window_cutoff(v[0], v[1]);
  }
  if (head == "powerlaw") {
    const auto v = parse_numbers(args, 3, head);
    return powerlaw_cutoff(v[0], v[1], v[2]);
  }
  throw std::invalid_argument("unknown cutoff '" + spec + "'");
}

}  // namespace sal
