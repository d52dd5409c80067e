#include "sal/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sal {

namespace {

constexpr double kSameZ = 1e-10;

bool same_point(cx a, cx b) { return std::abs(a - b) < kSameZ; }

// Gamma series at z with the spurious zero leading coefficient removed at regular points
Laurent gamma_series_trimmed(cx z, int order) {
  Laurent g = gamma_series(z, order);
  if (!g.c.empty() && g.c[0] == cx(0.0)) {
    g.c.erase(g.c.begin());
    g.lead = 0;
  }
  return g;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

struct LinFit {
  double alpha = 0.0, beta = 0.0, sse = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinFit f;
  const double den = n * sxx - sx * sx;
  f.beta = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  f.alpha = (sy - f.beta * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.alpha - f.beta * x[i];
    f.sse += e * e;
  }
  return f;
}

}  // namespace

int AsymptoticExpansion::strip_count() const {
  int m = -1;
  for (const auto& t : terms) m = std::max(m, t.strip);
  return m + 1;
}

Laurent gamma_zeta_series(const PoleDatum& p) {
  if (p.includes_gamma) return p.laurent;
  const int need = std::max(p.order, 0) + 1;
  const Laurent g = gamma_series_trimmed(p.z, need);
  if (g.lead < 0 && p.laurent.top() < 0)
    throw std::invalid_argument("heat expansion: zeta Laurent data at a Gamma pole must reach the constant term");
  return g * p.laurent;
}

std::vector<cx> heat_coefficients(const Laurent& gz) {
  std::vector<cx> a;
  const int order = -gz.lead;
  double fact = 1.0;
  for (int n = 0; n < order; ++n) {
    if (n > 0) fact *= n;
    a.push_back(((n % 2 == 0) ? 1.0 : -1.0) / fact * gz.coeff(-n - 1));
  }
  return a;
}

AsymptoticExpansion heat_expansion_from_poles(const std::vector<PoleDatum>& poles_in, const HeatOptions& opts) {
  std::vector<PoleDatum> poles = poles_in;
  for (int k = 0; k <= opts.gamma_poles; ++k) {
    const cx z(-static_cast<double>(k), 0.0);
    const bool present = std::any_of(poles.begin(), poles.end(), [&](const PoleDatum& p) { return same_point(p.z, z); });
    if (present) continue;
    if (!opts.regular) throw std::invalid_argument("heat expansion: zeta values at Gamma poles required");
    poles.push_back(PoleDatum{z, 0, opts.regular(z, 0), false});
  }
  AsymptoticExpansion e;
  e.variable = ExpansionVariable::heat_t;
  for (const auto& p : poles) {
    const auto a = heat_coefficients(gamma_zeta_series(p));
    for (std::size_t n = 0; n < a.size(); ++n) {
      cx coeff = a[n];
      if (n == 0 && same_point(p.z, 0.0)) coeff += static_cast<double>(opts.kernel_dim);
      if (coeff == cx(0.0)) continue;
      if (static_cast<int>(n) > opts.max_log_power)
        throw std::domain_error("heat expansion: log power " + std::to_string(n) + " exceeds the configured cap");
      e.terms.push_back({p.z, static_cast<int>(n), coeff, 0});
    }
  }
  if (opts.kernel_dim != 0 &&
      std::none_of(poles.begin(), poles.end(), [](const PoleDatum& p) { return same_point(p.z, 0.0); }))
    e.terms.push_back({0.0, 0, static_cast<double>(opts.kernel_dim), 0});
  if (e.terms.empty()) return e;

  // distinct real parts, descending
  std::vector<double> re;
  for (const auto& t : e.terms) re.push_back(t.z.real());
  std::sort(re.begin(), re.end(), std::greater<>());
  std::vector<double> levels;
  for (double x : re)
    if (levels.empty() || levels.back() - x > kSameZ) levels.push_back(x);
  if (opts.scale.empty()) {
    e.scale.push_back(-levels[0] - 0.5);
    for (std::size_t k = 1; k < levels.size(); ++k) e.scale.push_back(-0.5 * (levels[k - 1] + levels[k]));
    e.scale.push_back(-levels.back() + 0.5);
  } else {
    e.scale = opts.scale;
  }
  for (auto& t : e.terms) {
    const double x = t.z.real();
    int strip = -1;
    for (std::size_t k = 0; k + 1 < e.scale.size(); ++k) {
      if (std::abs(x + e.scale[k]) < 1e-12 || std::abs(x + e.scale[k + 1]) < 1e-12)
        throw std::invalid_argument("heat expansion: scale line hits a pole");
      if (-e.scale[k + 1] < x && x < -e.scale[k]) {
        strip = static_cast<int>(k);
        break;
      }
    }
    if (strip < 0) throw std::invalid_argument("heat expansion: pole outside the strips of the scale");
    t.strip = strip;
  }
  std::sort(e.terms.begin(), e.terms.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
    if (a.strip != b.strip) return a.strip < b.strip;
    if (a.z.real() != b.z.real()) return a.z.real() > b.z.real();
    if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
    return a.n < b.n;
  });
  return e;
}

AsymptoticExpansion action_expansion(const AsymptoticExpansion& heat, const CutoffFunction& f) {
  if (!f.has_measure()) throw std::invalid_argument("action expansion: cut-off " + f.name() + " has no Laplace representation");
  if (heat.variable != ExpansionVariable::heat_t) throw std::invalid_argument("action expansion: expects a heat expansion");
  AsymptoticExpansion out;
  out.variable = ExpansionVariable::action_lambda;
  out.scale = heat.scale;
  std::size_t i = 0;
  while (i < heat.terms.size()) {
    std::size_t j = i;
    std::map<int, cx> a;
    while (j < heat.terms.size() && same_point(heat.terms[j].z, heat.terms[i].z)) {
      a[heat.terms[j].n] += heat.terms[j].coeff;
      ++j;
    }
    const cx z = heat.terms[i].z;
    const int strip = heat.terms[i].strip;
    const int d = a.rbegin()->first;
    std::vector<cx> fm(static_cast<std::size_t>(d) + 1);
    for (int m = 0; m <= d; ++m) fm[static_cast<std::size_t>(m)] = f.f_moment(z, m);
    for (int k = 0; k <= d; ++k) {
      cx c = 0.0;
      for (int m = k; m <= d; ++m) {
        auto it = a.find(m);
        if (it == a.end()) continue;
        const double binom = std::exp(log_factorial(m) - log_factorial(k) - log_factorial(m - k));
        c += binom * it->second * fm[static_cast<std::size_t>(m - k)];
      }
      if (k % 2 == 1) c = -c;
      if (c != cx(0.0)) out.terms.push_back({z, k, c, strip});
    }
    i = j;
  }
  return out;
}

std::vector<cx> strip_contributions(const AsymptoticExpansion& e, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("expansion: evaluation point must be positive");
  std::vector<cx> rho(static_cast<std::size_t>(e.strip_count()), 0.0);
  const double lx = std::log(x);
  const double sign = e.variable == ExpansionVariable::heat_t ? -1.0 : 1.0;
  for (const auto& t : e.terms) rho[static_cast<std::size_t>(t.strip)] += t.coeff * std::exp(sign * t.z * lx) * std::pow(lx, t.n);
  return rho;
}

cx evaluate_expansion(const AsymptoticExpansion& e, double x, int k_strips) {
  if (e.terms.empty()) throw std::invalid_argument("evaluate_expansion: empty expansion");
  const auto rho = strip_contributions(e, x);
  cx acc = 0.0;
  for (int k = 0; k <= k_strips && k < static_cast<int>(rho.size()); ++k) acc += rho[static_cast<std::size_t>(k)];
  return acc;
}

TruncationEstimate optimal_truncation(const AsymptoticExpansion& e, double x) {
  if (e.terms.empty()) throw std::invalid_argument("optimal_truncation: empty expansion");
  const auto rho = strip_contributions(e, x);
  std::vector<std::size_t> nz;
  for (std::size_t k = 0; k < rho.size(); ++k)
    if (rho[k] != cx(0.0)) nz.push_back(k);
  TruncationEstimate est;
  std::size_t stop = rho.size();  // first strip not summed
  for (std::size_t i = 1; i < nz.size(); ++i) {
    if (std::abs(rho[nz[i]]) > std::abs(rho[nz[i - 1]])) {
      stop = nz[i - 1];
      break;
    }
  }
  if (stop == rho.size() && !nz.empty()) est.remainder = std::abs(rho[nz.back()]);
  else if (stop < rho.size()) est.remainder = std::abs(rho[stop]);
  const double lx = std::log(x);
  const double sign = e.variable == ExpansionVariable::heat_t ? -1.0 : 1.0;
  double abs_sum = 0.0;
  for (std::size_t k = 0; k < stop; ++k) est.value += rho[k];
  for (const auto& t : e.terms)
    if (static_cast<std::size_t>(t.strip) < stop) abs_sum += std::abs(t.coeff * std::exp(sign * t.z * lx) * std::pow(lx, t.n));
  est.rounding = 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  est.strips_used = static_cast<int>(stop);
  return est;
}

cx ncint(const PoleDatum& p, int k) {
  if (!p.includes_gamma) {
    if (-k < p.laurent.lead) return 0.0;
    if (-k > p.laurent.top()) throw std::invalid_argument("ncint: insufficient Laurent data");
    return p.laurent.coeff(-k);
  }
  const Laurent inv = series_inverse(gamma_series_trimmed(p.z, p.laurent.top() - p.laurent.lead + 2));
  const Laurent zeta = p.laurent * inv;
  if (-k > zeta.top()) throw std::invalid_argument("ncint: insufficient Laurent data");
  return zeta.coeff(-k);
}

Laurent zeta_from_heat(cx z, const std::vector<cx>& a) {
  if (a.empty()) return Laurent(0, {});
  const int order = static_cast<int>(a.size());
  std::vector<cx> c(static_cast<std::size_t>(order));
  double fact = 1.0;
  for (int n = 0; n < order; ++n) {
    if (n > 0) fact *= n;
    // c_{-n-1} sits at index order - n - 1
    c[static_cast<std::size_t>(order - n - 1)] = ((n % 2 == 0) ? 1.0 : -1.0) * fact * a[static_cast<std::size_t>(n)];
  }
  const Laurent gz(-order, c);
  const Laurent inv = series_inverse(gamma_series_trimmed(z, order + 1));
  return gz * inv;
}

Laurent laurent_fit(const std::function<cx(cx)>& f, cx z, double radius, int k_max, int points) {
  std::vector<cx> vals(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    const double th = 2.0 * kPi * j / points;
    vals[static_cast<std::size_t>(j)] = f(z + radius * cx(std::cos(th), std::sin(th)));
  }
  std::vector<cx> c;
  for (int k = -k_max; k <= k_max; ++k) {
    cx acc = 0.0;
    for (int j = 0; j < points; ++j) {
      const double th = 2.0 * kPi * j / points;
      acc += vals[static_cast<std::size_t>(j)] * cx(std::cos(k * th), -std::sin(k * th));
    }
    c.push_back(acc / static_cast<double>(points) * std::pow(radius, -k));
  }
  return {-k_max, c};
}

RadiusReport convergence_radius(const std::vector<double>& c, const std::vector<double>& eps, const std::vector<double>& r) {
  const std::size_t n = std::min({c.size(), eps.size(), r.size()});
  if (n < 5) throw std::invalid_argument("convergence_radius: need at least 5 samples");
  RadiusReport rep;
  rep.window_begin = std::min(n / 2, n - 5);
  rep.window_end = n;
  std::vector<double> y, inv_r, log_r;
  double ymax = -std::numeric_limits<double>::infinity();
  for (std::size_t k = rep.window_begin; k < n; ++k) {
    if (!(r[k] > 0.0) || !(c[k] > 0.0) || !(eps[k] > 0.0)) throw std::invalid_argument("convergence_radius: samples must be positive");
    const double v = std::log(c[k] / eps[k]) / r[k];
    y.push_back(v);
    inv_r.push_back(1.0 / r[k]);
    log_r.push_back(std::log(r[k]));
    ymax = std::max(ymax, v);
  }
  rep.T_raw = std::exp(-ymax);
  const LinFit lim = linear_fit(inv_r, y);
  const LinFit drift = linear_fit(log_r, y);
  rep.drift = drift.beta;
  constexpr double kDrift = 0.5;
  if (drift.sse < 0.5 * lim.sse && std::abs(drift.beta) > kDrift) {
    rep.model = "log-drift";
    rep.T = drift.beta < 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    rep.model = "limit";
    rep.T = std::exp(-lim.alpha);
  }
  return rep;
}

MellinHead mellin_head(const AsymptoticExpansion& heat, std::int64_t kernel_dim) {
  if (heat.variable != ExpansionVariable::heat_t) throw std::invalid_argument("mellin_head: expects a heat expansion");
  return [heat, kernel_dim](cx s, double t_min) {
    cx acc = 0.0;
    for (const auto& t : heat.terms) {
      const cx w = s - t.z;
      if (!(w.real() > 0.0)) throw std::domain_error("mellin_head: Re(s) must exceed every pole");
      acc += t.coeff * power_log_primitive(w - 1.0, t.n, t_min);
    }
    acc -= static_cast<double>(kernel_dim) * std::exp(s * std::log(t_min)) / s;
    return acc;
  };
}

std::vector<RationalHeatTerm> exact_heat_terms(const std::vector<std::pair<int, Rational>>& positive_poles,
                                               const std::function<Rational(int k)>& zeta_at_neg, int k_max) {
  std::vector<RationalHeatTerm> out;
  for (const auto& [z, res] : positive_poles) {
    if (z < 1) throw std::invalid_argument("exact_heat_terms: poles must sit at positive integers");
    BigInt fact = 1;
    for (int j = 2; j < z; ++j) fact *= j;
    out.push_back({z, Rational(fact) * res});
  }
  BigInt fact = 1;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) fact *= k;
    Rational a = zeta_at_neg(k) / Rational(fact);
    if (k % 2 == 1) a = -a;
    out.push_back({-k, a});
  }
  return out;
}

}  // namespace sal
