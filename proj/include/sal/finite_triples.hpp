#pragma once

// Finite-dimensional spectral triples: axioms, KO signs, fluctuations, index,
// and the exact combinatorics of the fluctuated zeta expansion.

#include <array>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sal/special_fn.hpp"

namespace sal {

using Mat = Eigen::MatrixXcd;

struct KOSigns {
  int eps = 1;
  int eps_prime = 1;
  int eps_second = 0;  // 0 for odd KO-dimension
};
// table for d mod 8
KOSigns ko_signs(int d);

struct FiniteTriple {
  int dim = 0;
  Mat D;
  std::optional<Mat> gamma;
  std::optional<Mat> J_unitary;  // J = J_unitary o conj
  std::vector<Mat> gens;
  std::optional<int> ko_dim;
  KOSigns signs;  // set from ko_dim by make_triple, may be overridden
};

FiniteTriple make_triple(Mat D, std::vector<Mat> gens, std::optional<Mat> gamma = std::nullopt,
                         std::optional<Mat> J_unitary = std::nullopt, std::optional<int> ko_dim = std::nullopt);

// J X J^{-1}
Mat conj_by_J(const FiniteTriple& t, const Mat& X);

struct AxiomCheck {
  std::string name;
  bool passed = false;
  double violation = 0.0;  // Frobenius norm
};
struct ValidationReport {
  std::vector<AxiomCheck> checks;
  bool all_passed() const;
  const AxiomCheck* find(const std::string& name) const;
};
// tolerance 1e-10 * max(1, |D|_F)
ValidationReport validate(const FiniteTriple& t);

// A = sum a_i [D, b_i] with its witnesses
struct GaugePotential {
  Mat A;
  std::vector<std::pair<Mat, Mat>> witnesses;
};
GaugePotential one_form(const FiniteTriple& t, const std::vector<std::pair<Mat, Mat>>& witnesses);
// W + W^* for W = a[D,b], written again as a one-form
GaugePotential hermitian_one_form(const FiniteTriple& t, const Mat& a, const Mat& b);

// D + A + eps J A J^{-1}, or D + A without J
FiniteTriple fluctuate(const FiniteTriple& t, const Mat& A);

struct GaugeResult {
  Mat Au;
  double residual = 0.0;  // |U D_A U* - D_{A^u}|_F with U = u J u J^{-1}
  bool first_order_holds = false;
};
GaugeResult gauge_transform(const FiniteTriple& t, const Mat& A, const Mat& u);

// kernel projection with tolerance 1e-10 |D|
Mat kernel_projection(const Mat& D);
std::vector<double> singular_values(const Mat& D);

double spectral_action_finite(const Mat& D, const std::function<double(double)>& f, double lambda);

struct TopologicalReport {
  double direct = 0.0;     // Tr gamma f(|D|/Lambda)
  double from_index = 0.0; // f(0) index
  long long index = 0;     // Tr gamma P_0
};
TopologicalReport topological_action(const FiniteTriple& t, const std::function<double(double)>& f, double lambda);
double mckean_singer(const FiniteTriple& t, double time);

struct HPolynomial {
  int n = 1;
  std::vector<int> ell;
  std::vector<Rational> coeffs;  // h_n(s; ell) = sum_j coeffs[j] s^{n+j}
  Rational operator()(const Rational& s) const;
  int degree() const;  // highest power with nonzero coefficient
};
HPolynomial h_polynomial(int n, const std::vector<int>& ell);

// polynomial in alpha with rational coefficients, low degree first
using AlphaPoly = std::vector<Rational>;
Rational eval(const AlphaPoly& p, const Rational& alpha);
// binom(-alpha, n) as a polynomial in alpha
AlphaPoly binom_neg_alpha(int n);

struct Word {
  std::string word;  // "1", "AD^-1", "(AD^-1)^2", "A^2D^-2", "(AD^-1)^3"
  int x_power = 0;   // under AD^{-1} = x, A^2 D^{-2} = x^2
  AlphaPoly coeff;
};
struct PerturbationPolynomial {
  int n = 0;
  std::vector<Word> words;
  bool engine_derived = false;  // n = 3
};
PerturbationPolynomial perturbation_polynomial(int n);
// collapsed polynomial equals binom(-alpha, n) for n <= 3
bool commuting_check(int n);

// |(D + sA)^{-alpha} - sum_{n<=2} P_n(sA) D^{-alpha}|_F for commuting diagonal D > 0 and A
double perturbation_residual(const Eigen::VectorXd& d, const Eigen::VectorXd& a, double alpha, double s);

// |zeta_{D_A}(0) - zeta_D(0)| with |D| + P_0 convention
double zeta0_fluctuation_check(const FiniteTriple& t, const Mat& A);
// Res_{s=0} Tr(A D^{-1} |D|^{-s}), fitted on a circle
double tadpole_residue(const FiniteTriple& t, const Mat& A);

// reference triple realizing the KO sign row d on C^2 (x) C^2
FiniteTriple ko_reference_triple(int d);

// JSON: {dim, D, gamma?, J_unitary?, gens[], ko_dim?}, entries number or [re, im]
FiniteTriple load_triple_json(std::istream& in);

}  // namespace sal
