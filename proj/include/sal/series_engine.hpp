#pragma once

// Certified direct summation of Dirichlet series over a Spectrum.

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sal/spectra.hpp"

namespace sal {

using cx = std::complex<double>;

struct TruncationReport {
  cx value = 0.0;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
  bool converged = false;
  std::string note;
};

struct SumOptions {
  double rel_tol = 1e-15;
  double abs_tol = 0.0;
  std::size_t max_terms = 20'000'000;
  std::size_t chunk = 4096;  // entries per block between tail checks
};

// |g(x)| <= C x^{-p} e^{-a x} for x >= x0
struct DecayEnvelope {
  double C = 1.0;
  double p = 0.0;
  double a = 0.0;
  double x0 = 0.0;
  double operator()(double x) const;
};

// Optional diagonal weight K: per-entry factor and a bound on its modulus.
struct DiagonalWeight {
  std::function<cx(std::size_t index, const SpectrumEntry&)> w;
  double bound = 1.0;
  cx kernel = 1.0;
};

// Generic engine: kernel_term + sum_n M_n w_n g(mu_n) with |g| <= envelope.
TruncationReport dirichlet_sum(const Spectrum& spec, const std::function<cx(double)>& g, const DecayEnvelope& env,
                               cx kernel_term, const SumOptions& opts = {}, const DiagonalWeight* weight = nullptr,
                               double support_max = std::numeric_limits<double>::infinity());

TruncationReport heat_trace(const Spectrum& spec, double t, const SumOptions& opts = {}, const DiagonalWeight* weight = nullptr);
// Throws std::domain_error when Re s <= dimension_p.
TruncationReport zeta_direct(const Spectrum& spec, cx s, const SumOptions& opts = {}, const DiagonalWeight* weight = nullptr);

// Pointwise cut-off with either a decay certificate or compact support in [0, support_max].
struct PointwiseCutoff {
  std::function<double(double)> f;
  std::optional<DecayEnvelope> envelope;
  double support_max = std::numeric_limits<double>::infinity();
};

TruncationReport spectral_action_direct(const Spectrum& spec, const PointwiseCutoff& f, double lambda, const SumOptions& opts = {});

std::int64_t counting(const Spectrum& spec, double lambda);
// int_0^Lambda P(u) du + sum_j c_j zeta(-j) + kernel_dim
double averaged_counting(const std::vector<double>& poly, double lambda, std::int64_t kernel_dim);

// Tr_lambda of a positive compact operator from its singular values in decreasing order.
double partial_trace(const std::vector<SpectrumEntry>& decreasing, double lambda);

struct DixmierReport {
  double estimate = 0.0;      // Richardson-extrapolated limit
  double raw = 0.0;           // Tr_N / log N at the largest N
  double n_count = 0.0;       // N
};
// T = |D|^{-exponent}, first n_groups distinct singular values.
DixmierReport dixmier_estimate(const Spectrum& spec, double exponent, std::size_t n_groups);

// suffix max of log|A_n| / b_n over the upper half of the probe range
double abscissa_estimate(const std::vector<cx>& a, const std::vector<double>& b, std::size_t n_probe);

using MellinHead = std::function<cx(cx s, double t_min)>;
struct MellinReport {
  double residual = 0.0;
  cx integral = 0.0;
  cx reference = 0.0;  // Gamma(s) zeta(s) by direct summation
  double t_min = 0.0;
  double t_max = 0.0;
};
// Compares int_0^inf t^{s-1} (heat(t) - kernel) dt with Gamma(s) zeta(s).
// head(s, t_min) supplies the integral over (0, t_min); omitted means zero.
MellinReport mellin_check(const Spectrum& spec, cx s, double t_min, const MellinHead& head = {});

// worker threads for the engine (SAL_THREADS caps hardware_concurrency)
unsigned engine_threads();

}  // namespace sal
