#include "sal/series_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sal/special_fn.hpp"

namespace sal {

double DecayEnvelope::operator()(double x) const { return C * std::pow(x, -p) * std::exp(-a * x); }

unsigned engine_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SAL_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct CxNeumaier {
  Neumaier re, im;
  void add(cx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cx value() const { return {re.value(), im.value()}; }
};

constexpr std::size_t kSubBlock = 1024;
constexpr std::size_t kParallelMin = 8192;

// Block sum with a fixed sub-block reduction order, independent of thread count.
cx block_sum(const std::vector<SpectrumEntry>& block, std::size_t first_index, const std::function<cx(double)>& g,
             const DiagonalWeight* weight) {
  const std::size_t nsub = (block.size() + kSubBlock - 1) / kSubBlock;
  std::vector<cx> partial(nsub);
  auto work = [&](std::size_t j) {
    CxNeumaier acc;
    const std::size_t end = std::min(block.size(), (j + 1) * kSubBlock);
    for (std::size_t i = j * kSubBlock; i < end; ++i) {
      cx term = static_cast<double>(block[i].multiplicity) * g(block[i].value);
      if (weight) term *= weight->w(first_index + i, block[i]);
      acc.add(term);
    }
    partial[j] = acc.value();
  };
  const unsigned nthreads = engine_threads();
  if (nthreads > 1 && block.size() >= kParallelMin) {
    std::vector<std::thread> pool;
    const unsigned used = std::min<unsigned>(nthreads, static_cast<unsigned>(nsub));
    for (unsigned t = 0; t < used; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t j = t; j < nsub; j += used) work(j);
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t j = 0; j < nsub; ++j) work(j);
  }
  CxNeumaier acc;
  for (const cx& v : partial) acc.add(v);
  return acc.value();
}

double envelope_integral(const DecayEnvelope& env, double e, double r) {
  // C int_r^inf x^{e-1-p} e^{-a x} dx
  const double k = e - env.p;
  if (env.a > 0.0) return env.C * std::pow(env.a, -k) * upper_gamma(k, env.a * r);
  if (k >= 0.0) return std::numeric_limits<double>::infinity();
  return env.C * std::pow(r, k) / (-k);
}

double polynomial_tail(const GrowthModel& gm, const DecayEnvelope& env, double r, double counted) {
  if (r <= 0.0 || r < env.x0) return std::numeric_limits<double>::infinity();
  double n_env = 0.0;
  double integral = 0.0;
  for (const auto& [c, e] : gm.counting_envelope) {
    n_env += c * std::pow(r, e);
    if (e > 0.0) integral += c * e * envelope_integral(env, e, r);
  }
  return env(r) * std::max(0.0, n_env - counted) + integral;
}

double exponential_tail(const GrowthModel& gm, const DecayEnvelope& env, std::size_t index, const SpectrumEntry& next) {
  if (next.value < env.x0) return std::numeric_limits<double>::infinity();
  const double rho = gm.min_ratio;
  const double n = static_cast<double>(index);
  const double ratio = std::pow((n + 2.0) / (n + 1.0), gm.mult_degree) * std::pow(rho, -env.p) *
                       std::exp(-env.a * (rho - 1.0) * next.value);
  if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return static_cast<double>(next.multiplicity) * env(next.value) / (1.0 - ratio);
}

}  // namespace

TruncationReport dirichlet_sum(const Spectrum& spec, const std::function<cx(double)>& g, const DecayEnvelope& env,
                               cx kernel_term, const SumOptions& opts, const DiagonalWeight* weight, double support_max) {
  const GrowthModel& gm = spec.meta().growth;
  const double wbound = weight ? weight->bound : 1.0;
  CxNeumaier total;
  total.add(kernel_term);
  TruncationReport rep;
  std::size_t index = 0;
  double counted = 0.0;
  double last_value = 0.0;
  std::vector<SpectrumEntry> block;
  block.reserve(opts.chunk);
  while (true) {
    block.clear();
    bool exhausted = false;
    bool past_support = false;
    while (block.size() < opts.chunk && index + block.size() < opts.max_terms) {
      auto e = spec.at(index + block.size());
      if (!e) {
        exhausted = true;
        break;
      }
      if (e->value > support_max) {
        past_support = true;
        break;
      }
      block.push_back(*e);
    }
    if (!block.empty()) {
      total.add(block_sum(block, index, g, weight));
      for (const auto& e : block) counted += static_cast<double>(e.multiplicity);
      last_value = block.back().value;
      index += block.size();
    }
    double tail = std::numeric_limits<double>::infinity();
    if (past_support || (exhausted && gm.kind == GrowthKind::finite)) {
      tail = 0.0;
    } else if (gm.kind == GrowthKind::polynomial) {
      tail = polynomial_tail(gm, env, last_value, counted);
    } else if (gm.kind == GrowthKind::exponential) {
      auto next = spec.at(index);
      tail = next ? exponential_tail(gm, env, index, *next) : 0.0;
    }
    tail *= wbound;
    const cx value = total.value();
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    rep.value = value;
    rep.terms_used = index;
    rep.tail_bound = tail;
    if (tail <= target) {
      rep.converged = true;
      break;
    }
    if (exhausted || past_support || index >= opts.max_terms) {
      rep.converged = false;
      rep.note = exhausted ? "spectrum exhausted before tolerance was certified" : "term budget exhausted";
      break;
    }
  }
  return rep;
}

TruncationReport heat_trace(const Spectrum& spec, double t, const SumOptions& opts, const DiagonalWeight* weight) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_trace: t must be positive");
  const cx kernel = static_cast<double>(spec.meta().kernel_dim) * (weight ? weight->kernel : cx(1.0));
  return dirichlet_sum(spec, [t](double mu) { return cx(std::exp(-t * mu)); }, DecayEnvelope{1.0, 0.0, t, 0.0}, kernel, opts, weight);
}

TruncationReport zeta_direct(const Spectrum& spec, cx s, const SumOptions& opts, const DiagonalWeight* weight) {
  const double p = spec.meta().dimension_p;
  if (!(s.real() > p))
    throw std::domain_error("zeta_direct: Re(s) = " + std::to_string(s.real()) + " does not exceed the dimension p = " + std::to_string(p));
  auto rep = dirichlet_sum(spec, [s](double mu) { return std::exp(-s * std::log(mu)); }, DecayEnvelope{1.0, s.real(), 0.0, 0.0}, 0.0, opts, weight);
  if (s.real() - p < 0.05) rep.note += (rep.note.empty() ? "" : "; ") + std::string("Re(s) within 0.05 of the abscissa");
  return rep;
}

TruncationReport spectral_action_direct(const Spectrum& spec, const PointwiseCutoff& f, double lambda, const SumOptions& opts) {
  if (!(lambda > 0.0)) throw std::invalid_argument("spectral_action_direct: Lambda must be positive");
  const cx kernel = static_cast<double>(spec.meta().kernel_dim) * f.f(0.0);
  auto g = [&](double mu) { return cx(f.f(mu / lambda)); };
  if (std::isfinite(f.support_max)) return dirichlet_sum(spec, g, DecayEnvelope{}, kernel, opts, nullptr, f.support_max * lambda);
  if (!f.envelope) throw std::invalid_argument("spectral_action_direct: cut-off has neither a decay certificate nor compact support");
  const DecayEnvelope& e = *f.envelope;
  const DecayEnvelope scaled{e.C * std::pow(lambda, e.p), e.p, e.a / lambda, e.x0 * lambda};
  if (e.a == 0.0 && spec.meta().growth.kind == GrowthKind::polynomial && !(e.p > spec.meta().dimension_p))
    throw std::domain_error("spectral_action_direct: cut-off decay x^-" + std::to_string(e.p) + " too slow for dimension " +
                            std::to_string(spec.meta().dimension_p));
  return dirichlet_sum(spec, g, scaled, kernel, opts);
}

std::int64_t counting(const Spectrum& spec, double lambda) {
  std::int64_t n = lambda >= 0.0 ? spec.meta().kernel_dim : 0;
  for (std::size_t i = 0;; ++i) {
    auto e = spec.at(i);
    if (!e || e->value > lambda) break;
    n += e->multiplicity;
  }
  return n;
}

double averaged_counting(const std::vector<double>& poly, double lambda, std::int64_t kernel_dim) {
  double v = static_cast<double>(kernel_dim);
  for (std::size_t j = 0; j < poly.size(); ++j) {
    const double jj = static_cast<double>(j);
    v += poly[j] * (std::pow(lambda, jj + 1.0) / (jj + 1.0) + riemann_zeta(-jj));
  }
  return v;
}

double partial_trace(const std::vector<SpectrumEntry>& decreasing, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("partial_trace: negative cut");
  double remaining = lambda;
  double acc = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& e : decreasing) {
    if (!(e.value > 0.0)) throw std::invalid_argument("partial_trace: singular values must be positive");
    if (e.value > prev) throw std::invalid_argument("partial_trace: values must be decreasing");
    prev = e.value;
    const double take = std::min(remaining, static_cast<double>(e.multiplicity));
    acc += take * e.value;
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  return acc;
}

DixmierReport dixmier_estimate(const Spectrum& spec, double exponent, std::size_t n_groups) {
  std::vector<SpectrumEntry> t;
  t.reserve(n_groups);
  double total = 0.0;
  for (std::size_t i = 0; i < n_groups; ++i) {
    auto e = spec.at(i);
    if (!e) break;
    t.push_back({std::pow(e->value, -exponent), e->multiplicity});
    total += static_cast<double>(e->multiplicity);
  }
  if (total < 4.0) throw std::invalid_argument("dixmier_estimate: not enough singular values");
  const double n1 = total, n2 = 0.5 * total;
  const double e1 = partial_trace(t, n1) / std::log(n1);
  const double e2 = partial_trace(t, n2) / std::log(n2);
  // E(N) ~ L + c / log N
  const double x1 = 1.0 / std::log(n1), x2 = 1.0 / std::log(n2);
  DixmierReport r;
  r.raw = e1;
  r.n_count = total;
  r.estimate = (x2 * e1 - x1 * e2) / (x2 - x1);
  return r;
}

double abscissa_estimate(const std::vector<cx>& a, const std::vector<double>& b, std::size_t n_probe) {
  if (n_probe < 10) throw std::invalid_argument("abscissa_estimate: n_probe must be >= 10");
  const std::size_t n = std::min({n_probe, a.size(), b.size()});
  cx partial = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    partial += a[i];
    if (i < n / 2 || !(b[i] > 0.0) || std::abs(partial) == 0.0) continue;
    best = std::max(best, std::log(std::abs(partial)) / b[i]);
  }
  return best;
}

MellinReport mellin_check(const Spectrum& spec, cx s, double t_min, const MellinHead& head) {
  using boost::math::quadrature::gauss_kronrod;
  MellinReport rep;
  rep.reference = gamma(s) * zeta_direct(spec, s).value;
  auto h = [&](double t) { return dirichlet_sum(spec, [t](double mu) { return cx(std::exp(-t * mu)); }, DecayEnvelope{1.0, 0.0, t, 0.0}, 0.0).value.real(); };
  auto first = spec.at(0);
  if (!first) throw std::invalid_argument("mellin_check: empty spectrum");
  // upper limit where t^{Re s} h(t) is negligible
  double t_max = 1.0;
  while (std::pow(t_max, s.real()) * h(t_max) > 1e-18 * std::abs(rep.reference)) t_max *= 2.0;
  rep.t_min = t_min;
  rep.t_max = t_max;
  const double u0 = std::log(t_min), u1 = std::log(t_max);
  const int pieces = std::max(1, static_cast<int>(std::ceil(u1 - u0)));
  cx acc = 0.0;
  for (int part = 0; part < 2; ++part) {
    if (part == 1 && s.imag() == 0.0) break;
    auto integrand = [&](double u) {
      const double t = std::exp(u);
      const cx ts = std::exp(s * u);
      const cx v = ts * h(t);
      return part == 0 ? v.real() : v.imag();
    };
    double sum = 0.0;
    for (int k = 0; k < pieces; ++k) {
      const double a = u0 + (u1 - u0) * k / pieces;
      const double b = u0 + (u1 - u0) * (k + 1) / pieces;
      double err = 0.0;
      sum += gauss_kronrod<double, 31>::integrate(integrand, a, b, 12, 1e-14, &err);
    }
    acc += part == 0 ? cx(sum, 0.0) : cx(0.0, sum);
  }
  if (head) acc += head(s, t_min);
  rep.integral = acc;
  rep.residual = std::abs(acc - rep.reference) / std::abs(rep.reference);
  return rep;
}

}  // namespace sal
