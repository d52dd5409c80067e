#include "sal/finite_triples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "sal/asymptotics.hpp"

namespace sal {

namespace {

using cd = std::complex<double>;

double tol_for(const Mat& D) { return 1e-10 * std::max(1.0, D.norm()); }

Mat comm(const Mat& a, const Mat& b) { return a * b - b * a; }

Mat identity(int n) { return Mat::Identity(n, n); }

void check_square(const Mat& m, int n, const char* what) {
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument(std::string("triple: wrong shape for ") + what);
}

// Hermitian function of a Hermitian matrix
Mat hermitian_apply(const Mat& H, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Eigen::VectorXd v = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * v.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

KOSigns ko_signs(int d) {
  static const int e[8] = {1, -1, 1, 1, 1, -1, 1, 1};
  static const int ep[8] = {1, 1, -1, -1, -1, -1, 1, 1};
  static const int es[8] = {1, 0, -1, 0, 1, 0, -1, 0};
  int k = ((d % 8) + 8) % 8;
  return {e[k], ep[k], es[k]};
}

FiniteTriple make_triple(Mat D, std::vector<Mat> gens, std::optional<Mat> gamma, std::optional<Mat> J_unitary,
                         std::optional<int> ko_dim) {
  FiniteTriple t;
  t.dim = static_cast<int>(D.rows());
  check_square(D, t.dim, "D");
  for (const auto& g : gens) check_square(g, t.dim, "generator");
  if (gamma) check_square(*gamma, t.dim, "gamma");
  if (J_unitary) check_square(*J_unitary, t.dim, "J");
  t.D = std::move(D);
  t.gens = std::move(gens);
  t.gamma = std::move(gamma);
  t.J_unitary = std::move(J_unitary);
  t.ko_dim = ko_dim;
  if (ko_dim) t.signs = ko_signs(*ko_dim);
  return t;
}

Mat conj_by_J(const FiniteTriple& t, const Mat& X) {
  if (!t.J_unitary) throw std::invalid_argument("triple has no real structure");
  const Mat& U = *t.J_unitary;
  return U * X.conjugate() * U.adjoint();
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate(const FiniteTriple& t) {
  ValidationReport r;
  const int n = t.dim;
  const double tol = tol_for(t.D);
  auto add = [&](const std::string& name, double v) { r.checks.push_back({name, v <= tol, v}); };
  add("selfadjoint", (t.D - t.D.adjoint()).norm());
  if (t.gamma) {
    const Mat& g = *t.gamma;
    add("grading_involution", (g * g - identity(n)).norm() + (g - g.adjoint()).norm());
    add("grading_anticommutes", (g * t.D + t.D * g).norm());
    double v = 0.0;
    for (const auto& a : t.gens) v = std::max(v, comm(g, a).norm());
    add("grading_even_algebra", v);
  }
  if (t.J_unitary) {
    const Mat& U = *t.J_unitary;
    add("J_unitary", (U * U.adjoint() - identity(n)).norm());
    add("J_D", (U * t.D.conjugate() - t.signs.eps * t.D * U).norm());
    add("J_squared", (U * U.conjugate() - t.signs.eps_prime * identity(n)).norm());
    if (t.gamma) {
      const Mat& g = *t.gamma;
      add("J_gamma", (U * g.conjugate() - t.signs.eps_second * g * U).norm());
    }
    double z = 0.0, f = 0.0;
    for (const auto& a : t.gens)
      for (const auto& b : t.gens) {
        Mat bo = conj_by_J(t, b.adjoint());
        z = std::max(z, comm(a, bo).norm());
        f = std::max(f, comm(comm(t.D, a), bo).norm());
      }
    add("order_zero", z);
    add("first_order", f);
  }
  return r;
}

GaugePotential one_form(const FiniteTriple& t, const std::vector<std::pair<Mat, Mat>>& witnesses) {
  GaugePotential g;
  g.A = Mat::Zero(t.dim, t.dim);
  for (const auto& [a, b] : witnesses) g.A += a * comm(t.D, b);
  g.witnesses = witnesses;
  return g;
}

GaugePotential hermitian_one_form(const FiniteTriple& t, const Mat& a, const Mat& b) {
  Mat one = identity(t.dim);
  // (a[D,b])^* = -[D, b^* a^*] + b^*[D, a^*]
  return one_form(t, {{a, b}, {-one, b.adjoint() * a.adjoint()}, {b.adjoint(), a.adjoint()}});
}

FiniteTriple fluctuate(const FiniteTriple& t, const Mat& A) {
  check_square(A, t.dim, "A");
  if ((A - A.adjoint()).norm() > tol_for(t.D)) throw std::invalid_argument("fluctuate: A is not Hermitian");
  FiniteTriple out = t;
  out.D = t.D + A;
  if (t.J_unitary) out.D += static_cast<double>(t.signs.eps) * conj_by_J(t, A);
  out.D = 0.5 * (out.D + out.D.adjoint());
  return out;
}

GaugeResult gauge_transform(const FiniteTriple& t, const Mat& A, const Mat& u) {
  check_square(u, t.dim, "u");
  if ((u * u.adjoint() - identity(t.dim)).norm() > 1e-10 * t.dim) throw std::invalid_argument("gauge_transform: u is not unitary");
  GaugeResult g;
  g.Au = u * A * u.adjoint() + u * comm(t.D, u.adjoint());
  g.Au = 0.5 * (g.Au + g.Au.adjoint());
  Mat U = t.J_unitary ? Mat(u * conj_by_J(t, u)) : u;
  Mat lhs = U * fluctuate(t, A).D * U.adjoint();
  g.residual = (lhs - fluctuate(t, g.Au).D).norm();
  auto rep = validate(t);
  const AxiomCheck* fo = rep.find("first_order");
  g.first_order_holds = fo == nullptr || fo->passed;
  return g;
}

std::vector<double> singular_values(const Mat& D) {
  Eigen::SelfAdjointEigenSolver<Mat> es(D, Eigen::EigenvaluesOnly);
  std::vector<double> v;
  for (int i = 0; i < es.eigenvalues().size(); ++i) v.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(v.begin(), v.end());
  return v;
}

Mat kernel_projection(const Mat& D) {
  double tol = 1e-10 * std::max(1.0, D.norm());
  return hermitian_apply(D, [tol](double x) { return std::abs(x) <= tol ? 1.0 : 0.0; });
}

double spectral_action_finite(const Mat& D, const std::function<double(double)>& f, double lambda) {
  double s = 0.0;
  for (double x : singular_values(D)) s += f(x / lambda);
  return s;
}

TopologicalReport topological_action(const FiniteTriple& t, const std::function<double(double)>& f, double lambda) {
  if (!t.gamma) throw std::invalid_argument("topological_action: triple has no grading");
  Eigen::SelfAdjointEigenSolver<Mat> es(t.D);
  const Mat& V = es.eigenvectors();
  const Mat& g = *t.gamma;
  TopologicalReport r;
  double tol = 1e-10 * std::max(1.0, t.D.norm());
  double ind = 0.0;
  for (int i = 0; i < t.dim; ++i) {
    double w = (V.col(i).adjoint() * g * V.col(i))(0, 0).real();
    double x = std::abs(es.eigenvalues()[i]);
    r.direct += w * f(x / lambda);
    if (x <= tol) ind += w;
  }
  r.index = std::llround(ind);
  r.from_index = f(0.0) * static_cast<double>(r.index);
  return r;
}

double mckean_singer(const FiniteTriple& t, double time) {
  if (!t.gamma) throw std::invalid_argument("mckean_singer: triple has no grading");
  Mat h = hermitian_apply(t.D, [time](double x) { return std::exp(-time * x * x); });
  return (*t.gamma * h).trace().real();
}

Rational HPolynomial::operator()(const Rational& s) const {
  Rational acc = 0, p = 1;
  for (int i = 0; i < n; ++i) p *= s;
  for (const auto& c : coeffs) {
    acc += c * p;
    p *= s;
  }
  return acc;
}

int HPolynomial::degree() const {
  for (int j = static_cast<int>(coeffs.size()) - 1; j >= 0; --j)
    if (coeffs[j] != 0) return n + j;
  return -1;
}

HPolynomial h_polynomial(int n, const std::vector<int>& ell) {
  if (n < 1) throw std::invalid_argument("h_polynomial: n >= 1");
  if (static_cast<int>(ell.size()) != n) throw std::invalid_argument("h_polynomial: |ell| must have n entries");
  for (int l : ell)
    if (l < 0) throw std::invalid_argument("h_polynomial: negative index");
  // binom(-y/2, l) = sum_e p[l][e] y^e
  std::vector<std::vector<Rational>> p;
  for (int l : ell) {
    std::vector<Rational> poly{Rational(1)};
    Rational fact = 1;
    for (int r = 0; r < l; ++r) {
      // multiply by (-y/2 - r)
      std::vector<Rational> next(poly.size() + 1, Rational(0));
      for (std::size_t e = 0; e < poly.size(); ++e) {
        next[e] += poly[e] * Rational(-r);
        next[e + 1] += poly[e] * Rational(-1, 2);
      }
      poly = std::move(next);
      fact *= (r + 1);
    }
    for (auto& c : poly) c /= fact;
    p.push_back(std::move(poly));
  }
  int total = 0;
  for (int l : ell) total += l;
  HPolynomial h;
  h.n = n;
  h.ell = ell;
  h.coeffs.assign(static_cast<std::size_t>(total) + 1, Rational(0));
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  // simplex integral of prod t_i^{e_i}: prod_i 1 / sum_{j<=i} (e_j + 1)
  std::function<void(int, Rational, int, int)> rec = [&](int i, Rational w, int partial, int deg) {
    if (i == n) {
      h.coeffs[static_cast<std::size_t>(deg)] += w;
      return;
    }
    for (int k = 0; k <= ell[i]; ++k) {
      if (p[i][k] == 0) continue;
      int ps = partial + k + 1;
      rec(i + 1, w * p[i][k] / ps, ps, deg + k);
    }
  };
  rec(0, Rational(1), 0, 0);
  Rational pre = 1;
  for (int i = 0; i < n; ++i) pre *= Rational(-1, 2);
  for (auto& c : h.coeffs) c *= pre;
  return h;
}

Rational eval(const AlphaPoly& p, const Rational& alpha) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * alpha + *it;
  return acc;
}

AlphaPoly binom_neg_alpha(int n) {
  // prod_{r<n} (-alpha - r) / n!
  AlphaPoly poly{Rational(1)};
  Rational fact = 1;
  for (int r = 0; r < n; ++r) {
    AlphaPoly next(poly.size() + 1, Rational(0));
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k] * Rational(-r);
      next[k + 1] -= poly[k];
    }
    poly = std::move(next);
    fact *= (r + 1);
  }
  for (auto& c : poly) c /= fact;
  return poly;
}

PerturbationPolynomial perturbation_polynomial(int n) {
  PerturbationPolynomial P;
  P.n = n;
  switch (n) {
    case 0:
      P.words = {{"1", 0, {Rational(1)}}};
      break;
    case 1:
      P.words = {{"AD^-1", 1, {Rational(0), Rational(-1)}}};
      break;
    case 2:
      // (alpha/4)(alpha+2) and alpha^2/4
      P.words = {{"(AD^-1)^2", 2, {Rational(0), Rational(1, 2), Rational(1, 4)}},
                 {"A^2D^-2", 2, {Rational(0), Rational(0), Rational(1, 4)}}};
      break;
    case 3:
      P.words = {{"(AD^-1)^3", 3, binom_neg_alpha(3)}};
      P.engine_derived = true;
      break;
    default:
      throw std::invalid_argument("perturbation_polynomial: n > 3 unsupported");
  }
  return P;
}

bool commuting_check(int n) {
  PerturbationPolynomial P = perturbation_polynomial(n);
  AlphaPoly sum;
  for (const auto& w : P.words) {
    if (w.x_power != n) return false;
    if (sum.size() < w.coeff.size()) sum.resize(w.coeff.size(), Rational(0));
    for (std::size_t k = 0; k < w.coeff.size(); ++k) sum[k] += w.coeff[k];
  }
  AlphaPoly want = binom_neg_alpha(n);
  sum.resize(std::max(sum.size(), want.size()), Rational(0));
  want.resize(sum.size(), Rational(0));
  return sum == want;
}

double perturbation_residual(const Eigen::VectorXd& d, const Eigen::VectorXd& a, double alpha, double s) {
  if (d.size() != a.size()) throw std::invalid_argument("perturbation_residual: size mismatch");
  double acc = 0.0;
  for (int i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw std::invalid_argument("perturbation_residual: D must be positive");
    double exact = std::pow(d[i] + s * a[i], -alpha);
    double x = s * a[i] / d[i];
    double approx = 0.0;
    for (int n = 0; n <= 2; ++n) {
      for (const auto& w : perturbation_polynomial(n).words)
        approx += to_double(eval(w.coeff, to_rational(alpha))) * std::pow(x, w.x_power);
    }
    approx *= std::pow(d[i], -alpha);
    acc += (exact - approx) * (exact - approx);
  }
  return std::sqrt(acc);
}

double zeta0_fluctuation_check(const FiniteTriple& t, const Mat& A) {
  // zeta(0) of |D| + P_0: every eigenvalue contributes lambda^0 = 1
  auto count = [](const Mat& D) { return static_cast<double>(singular_values(D).size()); };
  return std::abs(count(fluctuate(t, A).D) - count(t.D));
}

double tadpole_residue(const FiniteTriple& t, const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(t.D);
  double tol = tol_for(t.D);
  const Mat& V = es.eigenvectors();
  Mat AV = V.adjoint() * A * V;
  auto f = [&](cx s) {
    cx acc = 0.0;
    for (int i = 0; i < t.dim; ++i) {
      double lam = es.eigenvalues()[i];
      if (std::abs(lam) <= tol) continue;
      acc += AV(i, i) / lam * std::pow(std::abs(lam), -s);
    }
    return acc;
  };
  Laurent L = laurent_fit(f, cx(0.0), 0.5, 2);
  return std::abs(L.coeff(-1));
}

FiniteTriple ko_reference_triple(int d) {
  int k = ((d % 8) + 8) % 8;
  Mat I2 = identity(2), sx(2, 2), sy(2, 2), sz(2, 2), isy(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  isy << 0, 1, -1, 0;
  auto kron = [](const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
  };
  Mat U, D;
  switch (k) {
    case 0: U = kron(I2, I2); D = kron(sx, I2); break;
    case 1: U = kron(I2, I2); D = kron(I2, sy); break;
    case 2: U = kron(sx, isy); D = kron(sx, I2); break;
    case 3: U = kron(I2, isy); D = kron(I2, I2); break;
    case 4: U = kron(I2, isy); D = kron(sx, I2); break;
    case 5: U = kron(I2, isy); D = kron(I2, sx); break;
    case 6: U = kron(sx, I2); D = kron(sx, I2); break;
    default: U = kron(I2, I2); D = kron(I2, I2); break;
  }
  std::optional<Mat> gamma;
  if (k % 2 == 0) gamma = kron(sz, I2);
  return make_triple(D, {identity(4)}, gamma, U, k);
}

namespace {

Mat parse_matrix(const nlohmann::json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw std::invalid_argument(std::string("triple json: bad rows in ") + what);
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw std::invalid_argument(std::string("triple json: bad row in ") + what);
    for (int c = 0; c < n; ++c) {
      const auto& e = row[c];
      if (e.is_number()) {
        m(r, c) = cd(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = cd(e[0].get<double>(), e[1].get<double>());
      } else {
        throw std::invalid_argument(std::string("triple json: bad entry in ") + what);
      }
    }
  }
  return m;
}

}  // namespace

FiniteTriple load_triple_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("triple json: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("D")) throw std::invalid_argument("triple json: dim and D are required");
  int n = j["dim"].get<int>();
  if (n < 1) throw std::invalid_argument("triple json: dim must be positive");
  Mat D = parse_matrix(j["D"], n, "D");
  std::vector<Mat> gens;
  if (j.contains("gens"))
    for (const auto& g : j["gens"]) gens.push_back(parse_matrix(g, n, "gens"));
  std::optional<Mat> gamma, U;
  if (j.contains("gamma")) gamma = parse_matrix(j["gamma"], n, "gamma");
  if (j.contains("J_unitary")) U = parse_matrix(j["J_unitary"], n, "J_unitary");
  std::optional<int> ko;
  if (j.contains("ko_dim")) ko = j["ko_dim"].get<int>();
  return make_triple(std::move(D), std::move(gens), std::move(gamma), std::move(U), ko);
}

}  // namespace sal
