#pragma once

// Residue-driven heat-trace and spectral-action expansions.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sal/cutoffs.hpp"
#include "sal/laurent.hpp"
#include "sal/series_engine.hpp"
#include "sal/special_fn.hpp"

namespace sal {

using cx = std::complex<double>;

struct ExpansionTerm {
  cx z;
  int n = 0;
  cx coeff;
  int strip = 0;
};

enum class ExpansionVariable { heat_t, action_lambda };

struct AsymptoticExpansion {
  std::vector<ExpansionTerm> terms;  // sorted by (strip, -Re z, Im z, n)
  std::vector<double> scale;         // r_0 < r_1 < ...; strip k is -r_{k+1} < Re z < -r_k
  ExpansionVariable variable = ExpansionVariable::heat_t;
  int strip_count() const;
};

// Laurent data of zeta (or Gamma*zeta when includes_gamma) at z.
struct PoleDatum {
  cx z;
  int order = 1;
  Laurent laurent;
  bool includes_gamma = false;
};

// Laurent series of zeta around z up to power max_power; used at Gamma poles.
using ZetaLaurentFn = std::function<Laurent(cx z, int max_power)>;

struct HeatOptions {
  int max_log_power = 2;  // cap on n
  std::int64_t kernel_dim = 0;
  // Gamma poles z = -k, k = 0..gamma_poles, get merged with zeta data from regular()
  int gamma_poles = -1;
  ZetaLaurentFn regular;
  std::vector<double> scale;  // empty: midpoints between pole real parts
};

AsymptoticExpansion heat_expansion_from_poles(const std::vector<PoleDatum>& poles, const HeatOptions& opts);

// Laurent series of Gamma*zeta at the datum's point.
Laurent gamma_zeta_series(const PoleDatum& p);

// a_{z,n} from the Gamma*zeta principal part
std::vector<cx> heat_coefficients(const Laurent& gamma_zeta);

AsymptoticExpansion action_expansion(const AsymptoticExpansion& heat, const CutoffFunction& f);

cx evaluate_expansion(const AsymptoticExpansion& e, double x, int k_strips);
std::vector<cx> strip_contributions(const AsymptoticExpansion& e, double x);

struct TruncationEstimate {
  cx value;
  double remainder = 0.0;  // magnitude of the first omitted strip
  double rounding = 0.0;   // epsilon * sum of |terms| kept
  int strips_used = 0;
};
// Sums strips before the first local minimum of |rho_k|.
TruncationEstimate optimal_truncation(const AsymptoticExpansion& e, double x);

// nc integral: Res_{s=z} (s-z)^{k-1} zeta(s), i.e. the (-k)-th Laurent coefficient of zeta
cx ncint(const PoleDatum& p, int k);
// zeta Laurent principal part rebuilt from heat coefficients a_{z,0..} at z
Laurent zeta_from_heat(cx z, const std::vector<cx>& a);

// Laurent coefficients c_{-K..K} of f around z by the trapezoid rule on a circle
Laurent laurent_fit(const std::function<cx(cx)>& f, cx z, double radius, int k_max, int points = 256);

struct RadiusReport {
  double T = 0.0;      // selected estimate
  double T_raw = 0.0;  // trailing-max limsup estimate
  std::string model;   // "limit" or "log-drift"
  double drift = 0.0;  // slope beta of y against log r
  std::size_t window_begin = 0, window_end = 0;
};
// T = [limsup (c_k/eps_k)^{1/r_k}]^{-1}; trailing window = last half of the samples
RadiusReport convergence_radius(const std::vector<double>& c, const std::vector<double>& eps, const std::vector<double>& r);

// integral over (0, t_min) of t^{s-1} (heat expansion - kernel), for mellin_check
MellinHead mellin_head(const AsymptoticExpansion& heat, std::int64_t kernel_dim);

// exact small-t coefficients in rationals
struct RationalHeatTerm {
  int z;  // n = 0
  Rational a;
};
// simple zeta poles at positive integers z with rational residues, plus Gamma poles at -k
// where zeta(-k) is supplied exactly.
std::vector<RationalHeatTerm> exact_heat_terms(const std::vector<std::pair<int, Rational>>& positive_poles,
                                               const std::function<Rational(int k)>& zeta_at_neg, int k_max);

}  // namespace sal
