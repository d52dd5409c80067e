#include "sal/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "sal/special_fn.hpp"

namespace sal {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in " + what + ": '" + s + "'");
  }
}

// zeta(c s) around z/c from data around z
PoleDatum dilate(const PoleDatum& p, double c) {
  PoleDatum out = p;
  out.z = p.z / c;
  for (std::size_t i = 0; i < out.laurent.c.size(); ++i) out.laurent.c[i] *= std::pow(c, p.laurent.lead + static_cast<int>(i));
  return out;
}

// simple pole with exact residue; regular part fitted on a circle
PoleDatum simple_pole(const std::function<cx(cx)>& zeta, cx z, cx residue, int max_power = 4) {
  auto reg = [&](cx s) { return zeta(s) - residue / (s - z); };
  Laurent fit = laurent_fit(reg, z, 0.2, max_power);
  std::vector<cx> c{residue};
  for (int k = 0; k <= max_power; ++k) c.push_back(fit.coeff(k));
  return PoleDatum{z, 1, Laurent(-1, c), false};
}

ZetaLaurentFn regular_from(std::function<cx(cx)> zeta) {
  return [zeta](cx z, int max_power) {
    if (max_power <= 0) return Laurent(0, {zeta(z)});
    return laurent_fit(zeta, z, 0.2, max_power).truncated(max_power);
  };
}

void require_q(const PodlesParams& p) {
  if (!(p.q > 0.0 && p.q < 1.0)) throw std::invalid_argument("Podles: q must lie in (0,1)");
  if (!(p.w_abs > 0.0)) throw std::invalid_argument("Podles: |w| must be positive");
}

cx kappa(const PodlesParams& p, int j) { return cx(0.0, 2.0 * kPi * j / p.log_q()); }

}  // namespace

double s1_heat_exact(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("s1_heat_exact: t must be positive");
  return 1.0 / std::tanh(0.5 * t);
}

std::vector<Rational> s1_laurent(int K) {
  std::vector<Rational> c;
  Rational fact = 1, pow4 = 1;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      fact *= (2 * k - 1) * (2 * k);
      pow4 *= 4;
    }
    c.push_back(pow4 * bernoulli_number(2 * k) / fact);
  }
  return c;
}

TripleId parse_triple_id(const std::string& raw) {
  TripleId id;
  if (raw.rfind("file:", 0) == 0) {
    id.base = "file";
    id.path = raw.substr(5);
    if (id.path.empty()) throw std::invalid_argument("triple id: file: needs a path");
    return id;
  }
  std::string head = raw, args;
  if (auto c = raw.find(':'); c != std::string::npos) {
    head = raw.substr(0, c);
    args = raw.substr(c + 1);
  }
  if (head.size() > 2 && head.compare(head.size() - 2, 2, "sq") == 0) {
    id.squared = true;
    head.resize(head.size() - 2);
  }
  if (head == "s1" || head == "s1nt") {
    id.base = head;
    id.d = 1;
  } else if (head == "s2" || head == "s3" || head == "s4") {
    id.base = "s";
    id.d = head[1] - '0';
  } else if (head == "nct2" || head == "nct4") {
    id.base = "nct";
    id.d = head[3] - '0';
  } else if (head == "t3") {
    id.base = "t";
    id.d = 3;
    std::string b = args.empty() ? "000" : args;
    if (b.size() != 3) throw std::invalid_argument("triple id: t3 needs three spin bits, e.g. t3:010");
    for (char ch : b) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("triple id: spin bits must be 0 or 1");
      id.bits.push_back(ch - '0');
    }
    return id;
  } else if (head == "podles" || head == "podless") {
    id.base = head;
    auto parts = split(args, ',');
    if (parts.size() != 2) throw std::invalid_argument("triple id: " + head + " needs q,w");
    id.podles.q = parse_double(parts[0], "q");
    id.podles.w_abs = std::abs(parse_double(parts[1], "w"));
    require_q(id.podles);
    return id;
  } else {
    throw std::invalid_argument("unknown triple id '" + raw + "'");
  }
  if (!args.empty()) throw std::invalid_argument("triple id: unexpected arguments in '" + raw + "'");
  return id;
}

SpectrumPtr spectrum_for(const TripleId& id) {
  SpectrumPtr base;
  if (id.base == "s1") base = sphere_spectrum(1, Spin::trivial);
  else if (id.base == "s1nt") base = sphere_spectrum(1, Spin::nontrivial);
  else if (id.base == "s") base = sphere_spectrum(id.d);
  else if (id.base == "nct") base = nctorus_spectrum(id.d);
  else if (id.base == "t") base = torus_spectrum(id.d, id.bits);
  else if (id.base == "podles") base = podles_spectrum(id.podles, false);
  else if (id.base == "podless") base = podles_spectrum(id.podles, true);
  else if (id.base == "file") {
    std::ifstream in(id.path);
    if (!in) throw std::invalid_argument("cannot open spectrum file " + id.path);
    base = load_spectrum_jsonl(in);
  } else {
    throw std::invalid_argument("unknown triple base " + id.base);
  }
  return id.squared ? squared(base) : base;
}

cx podles_simplified_zeta(const PodlesParams& p, cx s) {
  require_q(p);
  const double L = p.log_q();
  cx one_minus = 1.0 - std::exp(s * L);
  if (std::abs(one_minus) < 1e-300) throw std::domain_error("Podles zeta: pole");
  return 4.0 * std::exp(-s * std::log(p.u() / p.q)) / (one_minus * one_minus);
}

Laurent podles_simplified_laurent(const PodlesParams& p, int j, int max_power) {
  require_q(p);
  const double L = p.log_q();
  const double ell = std::log(p.u() / p.q);
  const cx z = kappa(p, j);
  const int K = max_power + 3;
  // E(h) = (1 - e^{Lh}) / (-Lh) = sum (Lh)^k / (k+1)!
  std::vector<cx> e(static_cast<std::size_t>(K));
  double fact = 1.0, pw = 1.0;
  for (int k = 0; k < K; ++k) {
    fact *= (k + 1);
    e[k] = pw / fact;
    pw *= L;
  }
  Laurent Einv = series_inverse(Laurent(0, e));
  std::vector<cx> lin(static_cast<std::size_t>(K), 0.0);
  if (K > 1) lin[1] = -ell;
  Laurent expo = series_exp(Laurent(0, lin));
  Laurent body = Einv * Einv * expo;
  Laurent out = scale(body, 4.0 * std::exp(-z * ell) / (L * L));
  out.lead -= 2;
  return out.truncated(max_power);
}

cx podles_full_zeta(const PodlesParams& p, cx s) {
  require_q(p);
  const double q = p.q;
  cx pref = 4.0 * std::exp(s * std::log((1.0 - q * q) / p.w_abs));
  cx ratio = 1.0, total = 0.0;
  double q2n = 1.0;
  for (int n = 0; n < 100000; ++n) {
    if (n > 0) {
      ratio *= (s + static_cast<double>(n - 1)) / static_cast<double>(n);
      q2n *= q * q;
    }
    cx x = std::exp((s + 2.0 * n) * std::log(q));
    cx denom = (1.0 - x) * (1.0 - x);
    if (std::abs(denom) < 1e-300) throw std::domain_error("Podles full zeta: pole");
    cx term = ratio * q2n / denom;
    total += term;
    if (n > 4 && std::abs(term) < 1e-18 * std::abs(total)) return pref * total;
  }
  throw std::runtime_error("Podles full zeta: series did not converge");
}

cx podles_F1(const PodlesParams& p, double x, int j_max) {
  cx acc = 4.0 * kEulerGamma;
  for (int j = -j_max; j <= j_max; ++j) {
    if (j == 0) continue;
    cx k = kappa(p, j);
    acc -= 4.0 * gamma(k) * std::exp(-k * x);
  }
  return acc;
}

cx podles_F0(const PodlesParams& p, double x, int j_max) {
  const double L = p.log_q();
  cx acc = (kPi * kPi + 6.0 * kEulerGamma * kEulerGamma - L * L) / 3.0;
  for (int j = -j_max; j <= j_max; ++j) {
    if (j == 0) continue;
    cx k = kappa(p, j);
    acc += 4.0 * gamma(k) * digamma(k) * std::exp(-k * x);
  }
  return acc;
}

double podles_heat_exact(const PodlesParams& p, double t, int j_max, int k_max) {
  require_q(p);
  if (!(t > 0.0)) throw std::invalid_argument("podles_heat_exact: t must be positive");
  const double L = p.log_q();
  const double x = std::log(p.u() * t);
  cx v = (2.0 * x * x + podles_F1(p, x, j_max) * x + podles_F0(p, x, j_max)) / (L * L);
  const double q = p.q, ut = p.u() * t;
  double term_fact = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    term_fact *= k;
    double qk = std::pow(q, -k);
    double den = (1.0 - qk) * (1.0 - qk);
    v += ((k % 2) ? -4.0 : 4.0) * qk * std::pow(ut, k) / (term_fact * den);
  }
  return v.real();
}

double epstein_residue(const std::vector<int>& q, int n) {
  if (n < 1 || static_cast<int>(q.size()) != n) throw std::invalid_argument("epstein_residue: need n exponents");
  double num = 2.0;
  int sum = 0;
  for (int qi : q) {
    if (qi < 0) throw std::invalid_argument("epstein_residue: exponents must be nonnegative");
    if (qi % 2) return 0.0;
    num *= gamma(0.5 * (qi + 1));
    sum += qi;
  }
  return num / gamma(0.5 * (n + sum));
}

PodlesResidueReport podles_A_residue(const PodlesParams& p) {
  require_q(p);
  const double q = p.q, L = p.log_q(), u = p.u();
  std::vector<double> ls;
  for (double l = 0.5; l < 1e4; l += 1.0) {
    double x = std::pow(q, 2.0 * l);
    if (x > 1e-2) continue;
    if (x < 1e-12) break;
    ls.push_back(l);
  }
  // fewer geometric terms when q is small and the window holds few levels
  const int J = std::min(3, static_cast<int>(ls.size()) / 2 - 3);
  const int cols = 2 * (J + 1);
  if (J < 1) throw std::runtime_error("podles_A_residue: too few fit points");
  Eigen::MatrixXd M(ls.size(), cols);
  Eigen::VectorXd y(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) {
    double l = ls[i], x = std::pow(q, 2.0 * l), xp = 1.0;
    for (int j = 0; j <= J; ++j) {
      M(i, j) = (2.0 * l + 1.0) * xp;
      M(i, J + 1 + j) = xp;
      xp *= x;
    }
    y[i] = podles_diag_A(p, l, 1) + podles_diag_A(p, l, -1);
  }
  // column scaling keeps the normal system balanced
  Eigen::VectorXd sc = M.colwise().norm();
  Eigen::MatrixXd Ms = M * sc.cwiseInverse().asDiagonal();
  Eigen::VectorXd coef = Ms.colPivHouseholderQr().solve(y).cwiseQuotient(sc);
  PodlesResidueReport r;
  r.fit_points = static_cast<int>(ls.size());
  r.fit_rms = std::sqrt((M * coef - y).squaredNorm() / static_cast<double>(ls.size()));
  r.residue = 2.0 * u * u * coef[1] / (q * L * L);
  r.printed = 2.0 * q * (1.0 + q * q) * p.w_abs * p.w_abs / (L * L);
  return r;
}

CatalogEntry catalog_entry(const std::string& raw, int podles_j_max) {
  TripleId id = parse_triple_id(raw);
  CatalogEntry e;
  e.id = raw;
  e.has_pole_data = true;
  if (id.base == "s1") {
    e.dimension_p = 1;
    e.kernel_dim = 1;
    e.zeta = [](cx s) { return 2.0 * riemann_zeta(s); };
    e.poles = {simple_pole(e.zeta, 1.0, 2.0)};
  } else if (id.base == "s1nt") {
    e.dimension_p = 1;
    e.zeta = [](cx s) { return 2.0 * hurwitz_zeta(s, 0.5); };
    e.poles = {simple_pole(e.zeta, 1.0, 2.0)};
  } else if (id.base == "s" && id.d == 2) {
    e.dimension_p = 2;
    e.zeta = [](cx s) { return 4.0 * riemann_zeta(s - 1.0); };
    e.poles = {simple_pole(e.zeta, 2.0, 4.0)};
  } else if (id.base == "s" && id.d == 3) {
    e.dimension_p = 3;
    e.zeta = [](cx s) { return 2.0 * hurwitz_zeta(s - 2.0, 1.5) - 0.5 * hurwitz_zeta(s, 1.5); };
    e.poles = {simple_pole(e.zeta, 3.0, 2.0), simple_pole(e.zeta, 1.0, -0.5)};
  } else if (id.base == "s" && id.d == 4) {
    e.dimension_p = 4;
    e.zeta = [](cx s) { return (4.0 / 3.0) * (riemann_zeta(s - 3.0) - riemann_zeta(s - 1.0)); };
    e.poles = {simple_pole(e.zeta, 4.0, 4.0 / 3.0), simple_pole(e.zeta, 2.0, -4.0 / 3.0)};
  } else if (id.base == "nct") {
    const int d = id.d;
    const double mult = std::pow(2.0, d / 2);
    e.dimension_p = d;
    e.kernel_dim = static_cast<std::int64_t>(mult);
    e.zeta = [d, mult](cx s) { return mult * epstein_zeta(s, d); };
    e.poles = {simple_pole(e.zeta, static_cast<double>(d), mult * epstein_residue(std::vector<int>(d, 0), d))};
  } else if (id.base == "t") {
    if (std::any_of(id.bits.begin(), id.bits.end(), [](int b) { return b != 0; }))
      throw std::invalid_argument("catalog: no closed-form zeta for shifted spin structures on T^3");
    e.dimension_p = 3;
    e.kernel_dim = 2;
    e.zeta = [](cx s) { return 2.0 * std::exp(-s * std::log(2.0 * kPi)) * epstein_zeta(s, 3); };
    e.poles = {simple_pole(e.zeta, 3.0, 2.0 * epstein_residue({0, 0, 0}, 3) / std::pow(2.0 * kPi, 3))};
  } else if (id.base == "podless") {
    PodlesParams p = id.podles;
    e.dimension_p = 0;
    e.zeta = [p](cx s) { return podles_simplified_zeta(p, s); };
    for (int j = -podles_j_max; j <= podles_j_max; ++j)
      e.poles.push_back(PoleDatum{kappa(p, j), 2, podles_simplified_laurent(p, j, 3), false});
  } else if (id.base == "podles") {
    PodlesParams p = id.podles;
    e.dimension_p = 0;
    e.zeta = [p](cx s) { return podles_full_zeta(p, s); };
    e.has_pole_data = false;
  } else {
    throw std::invalid_argument("catalog: no closed form for '" + raw + "'");
  }
  if (id.squared) {
    auto base = e.zeta;
    e.zeta = [base](cx s) { return base(2.0 * s); };
    e.dimension_p *= 0.5;
    for (auto& p : e.poles) p = dilate(p, 2.0);
  }
  e.regular = regular_from(e.zeta);
  return e;
}

cx catalog_zeta(const std::string& id, cx s) {
  CatalogEntry e = catalog_entry(id, 0);
  if (e.has_pole_data) {
    for (const auto& p : e.poles)
      if (std::abs(s - p.z) < 1e-12) throw std::domain_error("catalog_zeta: pole at s");
  }
  TripleId tid = parse_triple_id(id);
  if (tid.base == "podless" || tid.base == "podles") {
    // poles on the imaginary axis lattice
    const double L = tid.podles.log_q();
    double re = tid.squared ? 2.0 * s.real() : s.real();
    double im = tid.squared ? 2.0 * s.imag() : s.imag();
    double jj = im * L / (2.0 * kPi);
    if (std::abs(re) < 1e-12 && std::abs(jj - std::round(jj)) < 1e-12 && tid.base == "podless")
      throw std::domain_error("catalog_zeta: pole at s");
  }
  return e.zeta(s);
}

HeatOptions heat_options(const CatalogEntry& e, int gamma_poles, int max_log_power) {
  HeatOptions o;
  o.kernel_dim = e.kernel_dim;
  o.gamma_poles = gamma_poles;
  o.regular = e.regular;
  o.max_log_power = max_log_power;
  return o;
}

}  // namespace sal
