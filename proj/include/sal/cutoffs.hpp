#pragma once

// Cut-off functions f = L[phi] for signed measures phi on [0, inf).

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "sal/series_engine.hpp"

namespace sal {

using cx = std::complex<double>;

// Density phi(s) on (0, inf) described in the variable v with s = v^power.
struct AnalyticDensity {
  std::string name;
  int power = 1;
  std::function<double(double v)> phi;  // phi(v^power)
  double order_at_zero = 1.0;           // phi(s) ~ s^{order-1} near 0
  double laplace_bound = 1.0;           // |L[phi](x)| <= laplace_bound * x^{-order_at_zero}
};

struct Factor {
  enum class Kind { atom, gamma, box, analytic };
  Kind kind = Kind::atom;
  double a = 0.0;       // atom location, box lower end
  double b = 0.0;       // box upper end
  double r = 1.0;       // gamma shape
  double lambda = 1.0;  // gamma rate: Laplace transform (lambda/(lambda+x))^r
  std::shared_ptr<const AnalyticDensity> density;

  static Factor atom(double at);
  static Factor gamma(double shape, double rate);
  static Factor box(double lo, double hi);
  static Factor analytic(std::shared_ptr<const AnalyticDensity> d);

  double laplace(double x) const;
};

// weight * (convolution of factors); no factors means delta_0
struct MeasureTerm {
  double weight = 1.0;
  std::vector<Factor> factors;
};

struct SignedMeasure {
  std::vector<MeasureTerm> terms;
};

class CutoffFunction {
 public:
  CutoffFunction() = default;
  CutoffFunction(SignedMeasure m, std::string name);
  // pointwise-only cut-off (no Laplace representation)
  static CutoffFunction pointwise(std::function<double(double)> f, DecayEnvelope env, std::string name);

  double operator()(double x) const;
  bool has_measure() const { return !pointwise_; }
  const SignedMeasure& measure() const { return measure_; }
  const std::string& name() const { return name_; }

  const DecayEnvelope& envelope() const { return envelope_; }
  // p with f = O(x^{-p}); infinity for exponential decay
  double decay_order() const;
  // max m with int s^m d|phi| < inf
  double moment_bound_order() const { return std::numeric_limits<double>::infinity(); }

  // int s^m dphi and an upper bound for int s^m d|phi|
  double moment(double m) const;
  double abs_moment(double m) const;
  // f^{(n)}(0+) = (-1)^n int s^n dphi
  double derivative_at_zero(int n) const;

  // f_{z,n} = int s^{-z} log^n s dphi
  cx f_moment(cx z, int n) const;
  // (1/Gamma(z)) int_0^inf x^{z-1} f(x) dx, 0 < Re z < decay_order
  cx mellin_moment(cx z) const;

  // min of f on a log-spaced 1000-point grid over [1e-4, 1e4]
  double nonneg_grid_min() const;

  PointwiseCutoff as_pointwise() const;

 private:
  void finalize();
  SignedMeasure measure_;
  std::string name_;
  bool pointwise_ = false;
  std::function<double(double)> f_;
  DecayEnvelope envelope_;
};

CutoffFunction exp_cutoff(double a);
CutoffFunction window_cutoff(double a, double b);
CutoffFunction powerlaw_cutoff(double a, double b, double r);
CutoffFunction gauss_cutoff();
CutoffFunction nulltaylor_cutoff();
CutoffFunction product(const CutoffFunction& f, const CutoffFunction& g);
CutoffFunction power(const CutoffFunction& f, int n);

// Grammar: exp:a | window:a,b | powerlaw:a,b,r | gauss | nulltaylor | product(c1,c2)
CutoffFunction parse_cutoff(const std::string& spec);

}  // namespace sal
