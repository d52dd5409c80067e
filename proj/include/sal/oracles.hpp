#pragma once

// Closed forms used as independent references.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sal/asymptotics.hpp"
#include "sal/spectra.hpp"

namespace sal {

// coth(t/2) = 1 + 2 sum_n e^{-tn}
double s1_heat_exact(double t);
// coefficients 2^{2k} B_{2k}/(2k)! of coth s = sum_k c_k s^{2k-1}, k = 0..K
std::vector<Rational> s1_laurent(int K);

// Parsed triple identifier: s1, s1nt, s2, s3, s4, t3:bits, nct2, nct4, podles:q,w,
// podless:q,w, file:PATH, each optionally with the sq suffix on the base name.
struct TripleId {
  std::string base;  // s1, s1nt, sd, td, nctd, podles, podless, file
  int d = 0;
  bool squared = false;
  std::vector<int> bits;
  PodlesParams podles;
  std::string path;
};
TripleId parse_triple_id(const std::string& id);
SpectrumPtr spectrum_for(const TripleId& id);

struct CatalogEntry {
  std::string id;
  double dimension_p = 0.0;
  std::int64_t kernel_dim = 0;
  std::function<cx(cx)> zeta;  // kernel excluded
  bool has_pole_data = false;
  std::vector<PoleDatum> poles;
  ZetaLaurentFn regular;
  // |D| + P_0 convention
  cx zeta_with_kernel(cx s) const { return zeta(s) + static_cast<double>(kernel_dim); }
};
// podles_j_max: poles 2 pi i j / log q with |j| <= podles_j_max
CatalogEntry catalog_entry(const std::string& id, int podles_j_max = 25);
// throws std::domain_error at a pole
cx catalog_zeta(const std::string& id, cx s);

HeatOptions heat_options(const CatalogEntry& e, int gamma_poles, int max_log_power = 2);

// zeta of the simplified Podles operator: 4 (u/q)^{-s} (1 - q^s)^{-2}
cx podles_simplified_zeta(const PodlesParams& p, cx s);
// Laurent data at kappa j = 2 pi i j / log q, powers up to max_power
Laurent podles_simplified_laurent(const PodlesParams& p, int j, int max_power);
// series over n of Gamma(s+n)/(n! Gamma(s)) q^{2n}/(1-q^{s+2n})^2
cx podles_full_zeta(const PodlesParams& p, cx s);

// periodic parts of the small-t heat expansion, x = log(u t)
cx podles_F1(const PodlesParams& p, double x, int j_max);
cx podles_F0(const PodlesParams& p, double x, int j_max);
double podles_heat_exact(const PodlesParams& p, double t, int j_max, int k_max);

// residue of the Epstein-type zeta sum' k_1^{q_1}...k_n^{q_n} |k|^{-s} at s = n + sum q
double epstein_residue(const std::vector<int>& q, int n);

struct PodlesResidueReport {
  double residue = 0.0;  // fitted
  double printed = 0.0;  // 2q(1+q^2)|w|^2 / log^2 q
  double fit_rms = 0.0;
  int fit_points = 0;
};
PodlesResidueReport podles_A_residue(const PodlesParams& p);

}  // namespace sal
