#include "sal/spectra.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "sal/special_fn.hpp"

namespace sal {

std::vector<SpectrumEntry> Spectrum::take_until(double limit, std::size_t max_count) const {
  std::vector<SpectrumEntry> out;
  for (std::size_t i = 0; i < max_count; ++i) {
    auto e = at(i);
    if (!e || e->value > limit) break;
    out.push_back(*e);
  }
  return out;
}

double PodlesParams::u() const { return w_abs * q / (1.0 - q * q); }
double PodlesParams::log_q() const { return std::log(q); }

double unit_ball_volume(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

namespace {

// coefficients of c (a x + b)^d as (coeff, exponent) pairs
std::vector<std::pair<double, double>> binomial_envelope(double c, double a, double b, int d) {
  std::vector<std::pair<double, double>> env;
  double binom = 1.0;
  for (int e = 0; e <= d; ++e) {
    const double coeff = c * binom * std::pow(a, e) * std::pow(b, d - e);
    if (coeff != 0.0) env.emplace_back(coeff, static_cast<double>(e));
    binom = binom * (d - e) / (e + 1);
  }
  return env;
}

std::int64_t pow2(int k) { return std::int64_t{1} << k; }

class SphereSpectrum final : public Spectrum {
 public:
  SphereSpectrum(int d, Spin spin, long long n_max) : Spectrum(make_meta(d, spin)), d_(d), spin_(spin), n_max_(n_max) {}

  std::optional<SpectrumEntry> at(std::size_t i) const override {
    const auto n = static_cast<long long>(i);
    if (n_max_ >= 0 && n > n_max_) return std::nullopt;
    if (d_ == 1 && spin_ == Spin::trivial) return SpectrumEntry{static_cast<double>(n + 1), 2};
    // 2^{floor(d/2)+1} C(n+d-1, d-1)
    __int128 binom = 1;
    for (int j = 1; j <= d_ - 1; ++j) binom = binom * (n + j) / j;
    const __int128 mult = binom * pow2(d_ / 2 + 1);
    if (mult > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
    return SpectrumEntry{static_cast<double>(n) + 0.5 * d_, static_cast<std::int64_t>(mult)};
  }

 private:
  static SpectrumMeta make_meta(int d, Spin spin) {
    if (d < 1) throw std::invalid_argument("sphere_spectrum: d must be >= 1");
    if (spin == Spin::trivial && d != 1) throw std::invalid_argument("sphere_spectrum: trivial spin only exists for d = 1");
    SpectrumMeta m;
    m.dimension_p = d;
    m.growth.kind = GrowthKind::polynomial;
    if (d == 1 && spin == Spin::trivial) {
      m.kernel_dim = 1;
      m.label = "s1";
      m.growth.counting_envelope = {{2.0, 1.0}};
    } else {
      m.kernel_dim = 0;
      m.label = (d == 1) ? "s1nt" : "s" + std::to_string(d);
      double dfact = std::tgamma(d + 1.0);
      m.growth.counting_envelope = binomial_envelope(static_cast<double>(pow2(d / 2 + 1)) / dfact, 1.0, 0.5 * d, d);
    }
    return m;
  }

  int d_;
  Spin spin_;
  long long n_max_;
};

// Lattice spectra: values scale * sqrt(key), key = sum of per-coordinate squares.
class LatticeSpectrum final : public Spectrum {
 public:
  LatticeSpectrum(SpectrumMeta meta, int d, std::vector<int> parity, double scale, std::int64_t mult_per_point, double radius_cut)
      : Spectrum(std::move(meta)), d_(d), parity_(std::move(parity)), scale_(scale), mult_(mult_per_point) {
    if (radius_cut > 0.0) {
      const double r = radius_cut / scale_;
      key_cut_ = static_cast<long long>(std::floor(r * r * (1.0 + 1e-15)));
    }
  }

  std::optional<SpectrumEntry> at(std::size_t i) const override {
    std::lock_guard<std::mutex> lock(mu_);
    while (groups_.size() <= i) {
      if (key_cut_ >= 0 && key_limit_ >= key_cut_) return std::nullopt;
      long long next = std::max<long long>(64, key_limit_ * 2);
      if (key_cut_ >= 0) next = std::min(next, key_cut_);
      if (next > kMaxKey) return std::nullopt;
      extend(next);
    }
    return groups_[i];
  }

 private:
  static constexpr long long kMaxKey = 50'000'000;

  void extend(long long m_max) const {
    const auto size = static_cast<std::size_t>(m_max) + 1;
    std::vector<std::int64_t> r(size, 0);
    r[0] = 1;
    for (int c = 0; c < d_; ++c) {
      // per-coordinate values v = 2k + parity (torus) or k (nc torus, parity = -1)
      std::vector<std::pair<long long, std::int64_t>> sq;
      if (parity_[static_cast<std::size_t>(c)] < 0) {
        sq.emplace_back(0, 1);
        for (long long k = 1; k * k <= m_max; ++k) sq.emplace_back(k * k, 2);
      } else {
        for (long long v = parity_[static_cast<std::size_t>(c)]; v * v <= m_max; v += 2) sq.emplace_back(v * v, v == 0 ? 1 : 2);
      }
      std::vector<std::int64_t> next(size, 0);
      for (std::size_t m = 0; m < size; ++m) {
        if (r[m] == 0) continue;
        for (const auto& [s, cnt] : sq) {
          const auto idx = m + static_cast<std::size_t>(s);
          if (idx >= size) break;
          next[idx] += r[m] * cnt;
        }
      }
      r.swap(next);
    }
    groups_.clear();
    for (std::size_t m = 1; m < size; ++m)
      if (r[m] > 0) groups_.push_back({scale_ * std::sqrt(static_cast<double>(m)), r[m] * mult_});
    key_limit_ = m_max;
  }

  int d_;
  std::vector<int> parity_;
  double scale_;
  std::int64_t mult_;
  long long key_cut_ = -1;
  mutable std::mutex mu_;
  mutable std::vector<SpectrumEntry> groups_;
  mutable long long key_limit_ = 0;
};

class PodlesSpectrum final : public Spectrum {
 public:
  PodlesSpectrum(const PodlesParams& p, bool simplified, long long n_max) : Spectrum(make_meta(p, simplified)), p_(p), simplified_(simplified), n_max_(n_max) {}

  std::optional<SpectrumEntry> at(std::size_t i) const override {
    const auto n = static_cast<long long>(i);
    if (n_max_ >= 0 && n > n_max_) return std::nullopt;
    const double x = static_cast<double>(n + 1);
    const double v = simplified_ ? p_.u() * std::exp(-x * p_.log_q()) : p_.w_abs * q_number(x, p_.q);
    if (!std::isfinite(v)) return std::nullopt;
    return SpectrumEntry{v, 4 * (n + 1)};
  }

 private:
  static SpectrumMeta make_meta(const PodlesParams& p, bool simplified) {
    if (!(p.q > 0.0 && p.q < 1.0)) throw std::invalid_argument("podles_spectrum: q must lie in (0,1)");
    if (!(p.w_abs > 0.0)) throw std::invalid_argument("podles_spectrum: |w| must be positive");
    SpectrumMeta m;
    m.dimension_p = 0.0;
    m.kernel_dim = 0;
    m.label = simplified ? "podless" : "podles";
    m.growth.kind = GrowthKind::exponential;
    m.growth.min_ratio = 1.0 / p.q;  // [n+2]/[n+1] decreases to 1/q
    m.growth.mult_degree = 1;
    return m;
  }

  PodlesParams p_;
  bool simplified_;
  long long n_max_;
};

class SquaredSpectrum final : public Spectrum {
 public:
  explicit SquaredSpectrum(SpectrumPtr base) : Spectrum(make_meta(base->meta())), base_(std::move(base)) {}

  std::optional<SpectrumEntry> at(std::size_t i) const override {
    auto e = base_->at(i);
    if (!e) return std::nullopt;
    e->value *= e->value;
    if (!std::isfinite(e->value)) return std::nullopt;
    return e;
  }

 private:
  static SpectrumMeta make_meta(const SpectrumMeta& b) {
    SpectrumMeta m = b;
    m.dimension_p = 0.5 * b.dimension_p;
    m.label = b.label + "sq";
    for (auto& [c, e] : m.growth.counting_envelope) e *= 0.5;
    m.growth.min_ratio = b.growth.min_ratio * b.growth.min_ratio;
    return m;
  }

  SpectrumPtr base_;
};

class VectorSpectrum final : public Spectrum {
 public:
  VectorSpectrum(std::vector<SpectrumEntry> e, SpectrumMeta meta) : Spectrum(std::move(meta)), entries_(std::move(e)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!(entries_[i].value > 0.0)) throw std::invalid_argument("spectrum: values must be positive (kernel goes in the header)");
      if (entries_[i].multiplicity < 1) throw std::invalid_argument("spectrum: multiplicities must be >= 1");
      if (i > 0 && !(entries_[i].value > entries_[i - 1].value)) throw std::invalid_argument("spectrum: values must be strictly increasing");
    }
    meta_.growth.kind = GrowthKind::finite;
  }

  std::optional<SpectrumEntry> at(std::size_t i) const override {
    if (i >= entries_.size()) return std::nullopt;
    return entries_[i];
  }

 private:
  std::vector<SpectrumEntry> entries_;
};

}  // namespace

SpectrumPtr sphere_spectrum(int d, Spin spin, long long n_max) { return std::make_shared<SphereSpectrum>(d, spin, n_max); }

SpectrumPtr torus_spectrum(int d, const std::vector<int>& spin_bits, double radius_cut) {
  if (d < 1) throw std::invalid_argument("torus_spectrum: d must be >= 1");
  if (static_cast<int>(spin_bits.size()) != d) throw std::invalid_argument("torus_spectrum: need one spin bit per dimension");
  bool trivial = true;
  for (int b : spin_bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("torus_spectrum: spin bits must be 0 or 1");
    trivial = trivial && b == 0;
  }
  SpectrumMeta m;
  m.dimension_p = d;
  m.kernel_dim = trivial ? pow2(d / 2) : 0;
  m.label = "t" + std::to_string(d);
  m.growth.kind = GrowthKind::polynomial;
  const double mult = static_cast<double>(pow2(d / 2));
  m.growth.counting_envelope = binomial_envelope(mult * unit_ball_volume(d), 1.0 / (2.0 * kPi), 0.5 * std::sqrt(static_cast<double>(d)), d);
  // 2 pi |k + s/2| = pi |2k + s|
  return std::make_shared<LatticeSpectrum>(m, d, spin_bits, kPi, pow2(d / 2), radius_cut);
}

SpectrumPtr nctorus_spectrum(int d, double radius_cut) {
  if (d < 1) throw std::invalid_argument("nctorus_spectrum: d must be >= 1");
  SpectrumMeta m;
  m.dimension_p = d;
  m.kernel_dim = pow2(d / 2);
  m.label = "nct" + std::to_string(d);
  m.growth.kind = GrowthKind::polynomial;
  const double mult = static_cast<double>(pow2(d / 2));
  m.growth.counting_envelope = binomial_envelope(mult * unit_ball_volume(d), 1.0, 0.5 * std::sqrt(static_cast<double>(d)), d);
  return std::make_shared<LatticeSpectrum>(m, d, std::vector<int>(static_cast<std::size_t>(d), -1), 1.0, pow2(d / 2), radius_cut);
}

SpectrumPtr integer_lattice_spectrum(int d) {
  if (d < 1) throw std::invalid_argument("integer_lattice_spectrum: d must be >= 1");
  SpectrumMeta m;
  m.dimension_p = d;
  m.kernel_dim = 1;
  m.label = "z" + std::to_string(d);
  m.growth.kind = GrowthKind::polynomial;
  m.growth.counting_envelope = binomial_envelope(unit_ball_volume(d), 1.0, 0.5 * std::sqrt(static_cast<double>(d)), d);
  return std::make_shared<LatticeSpectrum>(m, d, std::vector<int>(static_cast<std::size_t>(d), -1), 1.0, 1, -1.0);
}

SpectrumPtr podles_spectrum(const PodlesParams& params, bool simplified, long long n_max) {
  return std::make_shared<PodlesSpectrum>(params, simplified, n_max);
}

SpectrumPtr squared(SpectrumPtr base) { return std::make_shared<SquaredSpectrum>(std::move(base)); }

SpectrumPtr vector_spectrum(std::vector<SpectrumEntry> entries, SpectrumMeta meta) {
  return std::make_shared<VectorSpectrum>(std::move(entries), std::move(meta));
}

SpectrumPtr load_spectrum_jsonl(std::istream& in) {
  using nlohmann::json;
  SpectrumMeta meta;
  std::vector<SpectrumEntry> entries;
  bool have_header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("spectrum file line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!have_header) {
      if (!j.contains("p")) throw std::invalid_argument("spectrum file: first line must be the header object");
      meta.dimension_p = j.at("p").get<double>();
      meta.kernel_dim = j.value("kernel", 0);
      meta.label = j.value("label", std::string("file"));
      have_header = true;
      continue;
    }
    entries.push_back({j.at("value").get<double>(), j.at("mult").get<std::int64_t>()});
  }
  if (!have_header) throw std::invalid_argument("spectrum file: missing header");
  return vector_spectrum(std::move(entries), meta);
}

double podles_A0(const PodlesParams& p, double l, double m, int sign) {
  const double q = p.q;
  auto b = [q](double x) { return q_number(x, q); };
  const double rq = 1.0 / std::sqrt(q);
  const double extra = sign > 0 ? q : -1.0 / q;
  const double alpha0 = rq * ((q - 1.0 / q) * b(l - 0.5) * b(l + 1.5) + extra) / (b(2 * l) * b(2 * l + 2));
  const double bracket = b(l - m + 1) * b(l + m) - q * q * b(l - m) * b(l + m + 1);
  return rq / (1.0 + q * q) * bracket * alpha0 + 1.0 / (1.0 + q * q);
}

double podles_diag_A(const PodlesParams& p, double l, int sign) {
  const double twice = 2.0 * l;
  if (l < 0.5 || std::abs(twice - std::round(twice)) > 1e-12 || static_cast<long long>(std::round(twice)) % 2 == 0)
    throw std::invalid_argument("podles_diag_A: l must be a positive half-integer");
  double sum = 0.0;
  for (double m = -l; m <= l + 0.25; m += 1.0) sum += podles_A0(p, l, m, sign);
  return sum;
}

}  // namespace sal
