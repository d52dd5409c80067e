#pragma once

// Eigenvalue/multiplicity sequences of |D| for the catalog of spectral triples.

#include <cstdint>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sal {

struct SpectrumEntry {
  double value = 0.0;
  std::int64_t multiplicity = 0;
};

enum class GrowthKind { polynomial, exponential, finite };

// Certified growth information used by the tail bounds of the series engine.
struct GrowthModel {
  GrowthKind kind = GrowthKind::finite;
  // polynomial: N(x) <= sum_j coeff * x^exponent for all x > 0 (kernel excluded)
  std::vector<std::pair<double, double>> counting_envelope;
  // exponential: mu_{n+1} >= min_ratio * mu_n and M_{n+1}/M_n <= ((n+2)/(n+1))^mult_degree
  double min_ratio = 1.0;
  int mult_degree = 0;
};

struct SpectrumMeta {
  double dimension_p = 0.0;
  std::int64_t kernel_dim = 0;
  std::string label;
  GrowthModel growth;
};

// Strictly increasing positive singular values with multiplicities; the kernel
// is carried separately in meta().kernel_dim.
class Spectrum {
 public:
  explicit Spectrum(SpectrumMeta meta) : meta_(std::move(meta)) {}
  virtual ~Spectrum() = default;
  Spectrum(const Spectrum&) = delete;
  Spectrum& operator=(const Spectrum&) = delete;

  virtual std::optional<SpectrumEntry> at(std::size_t i) const = 0;
  const SpectrumMeta& meta() const { return meta_; }

  // materialize entries while value <= limit (and index < max_count)
  std::vector<SpectrumEntry> take_until(double limit, std::size_t max_count = 10'000'000) const;

 protected:
  SpectrumMeta meta_;
};

using SpectrumPtr = std::shared_ptr<const Spectrum>;

enum class Spin { trivial, nontrivial };

struct PodlesParams {
  double q = 0.5;
  double w_abs = 1.0;
  double u() const;      // |w| q / (1 - q^2)
  double log_q() const;  // L = log q < 0
};

SpectrumPtr sphere_spectrum(int d, Spin spin = Spin::nontrivial, long long n_max = -1);
SpectrumPtr torus_spectrum(int d, const std::vector<int>& spin_bits, double radius_cut = -1.0);
SpectrumPtr nctorus_spectrum(int d, double radius_cut = -1.0);
// norms |k| of Z^d, one per lattice point; the origin is the kernel
SpectrumPtr integer_lattice_spectrum(int d);
SpectrumPtr podles_spectrum(const PodlesParams& params, bool simplified, long long n_max = -1);
// singular values squared: the spectrum of D^2
SpectrumPtr squared(SpectrumPtr base);
SpectrumPtr vector_spectrum(std::vector<SpectrumEntry> entries, SpectrumMeta meta);

// JSON lines: first a header {"p","kernel","label"}, then {"value","mult"} rows.
SpectrumPtr load_spectrum_jsonl(std::istream& in);

// sum over m of the diagonal coefficient A^0_{l,m,sign}
double podles_A0(const PodlesParams& params, double l, double m, int sign);
double podles_diag_A(const PodlesParams& params, double l, int sign);

// volume of the unit ball in R^d
double unit_ball_volume(int d);

}  // namespace sal
