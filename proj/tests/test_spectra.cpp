#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "sal/special_fn.hpp"
#include "sal/spectra.hpp"

using namespace sal;

namespace {

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool strictly_increasing(const Spectrum& s, std::size_t n) {
  double prev = -1;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = s.at(i);
    if (!e) break;
    if (!(e->value > prev) || e->multiplicity < 1) return false;
    prev = e->value;
  }
  return true;
}

}  // namespace

TEST_CASE("sphere spectra") {
  auto s3 = sphere_spectrum(3);
  CHECK(s3->at(0)->value == 1.5);
  CHECK(s3->at(0)->multiplicity == 4);
  CHECK(s3->meta().kernel_dim == 0);
  CHECK(s3->meta().dimension_p == 3);
  auto s1 = sphere_spectrum(1, Spin::trivial);
  CHECK(s1->at(0)->value == 1.0);
  CHECK(s1->at(0)->multiplicity == 2);
  CHECK(s1->meta().kernel_dim == 1);
  auto s1nt = sphere_spectrum(1, Spin::nontrivial);
  CHECK(s1nt->at(0)->value == 0.5);
  CHECK(s1nt->meta().kernel_dim == 0);
  auto s2 = sphere_spectrum(2);
  CHECK(s2->at(0)->value == 1.0);
  CHECK(s2->at(0)->multiplicity == 4);
  CHECK(s2->at(5)->multiplicity == 24);
  CHECK_THROWS(sphere_spectrum(0));
  CHECK_THROWS(sphere_spectrum(2, Spin::trivial));
  auto cut = sphere_spectrum(2, Spin::nontrivial, 3);
  CHECK(cut->at(3).has_value());
  CHECK_FALSE(cut->at(4).has_value());
}

TEST_CASE("sphere multiplicity totals follow the hockey stick") {
  for (int d = 1; d <= 5; ++d) {
    auto s = sphere_spectrum(d);
    long long acc = 0;
    long long pref = 1LL << (d / 2 + 1);
    for (int n = 0; n <= 30; ++n) {
      acc += s->at(n)->multiplicity;
      CHECK(acc == pref * binom(n + d, d));
    }
  }
}

TEST_CASE("torus spectra") {
  auto t0 = torus_spectrum(3, {0, 0, 0});
  CHECK(t0->meta().kernel_dim == 2);
  CHECK(std::abs(t0->at(0)->value - 2 * kPi) < 1e-14);
  CHECK(t0->at(0)->multiplicity == 12);
  auto t1 = torus_spectrum(3, {1, 0, 0});
  CHECK(t1->meta().kernel_dim == 0);
  CHECK(std::abs(t1->at(0)->value - kPi) < 1e-14);
  CHECK(t1->at(0)->multiplicity == 4);
  CHECK(strictly_increasing(*t0, 200));
  CHECK(strictly_increasing(*t1, 200));
  // total count inside a radius matches a brute-force enumeration
  long long brute = 0;
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b)
      for (int c = -5; c <= 5; ++c) {
        double r = 2 * kPi * std::sqrt((a + 0.5) * (a + 0.5) + b * b + c * c);
        if (r <= 2 * kPi * 4.2) brute += 2;
      }
  long long got = 0;
  for (const auto& e : t1->take_until(2 * kPi * 4.2)) got += e.multiplicity;
  CHECK(got == brute);
}

TEST_CASE("noncommutative torus spectra") {
  auto n2 = nctorus_spectrum(2);
  CHECK(n2->meta().kernel_dim == 2);
  CHECK(n2->at(0)->value == 1.0);
  CHECK(n2->at(0)->multiplicity == 8);
  auto n4 = nctorus_spectrum(4);
  CHECK(n4->meta().kernel_dim == 4);
  CHECK(std::abs(n4->at(1)->value - std::sqrt(2.0)) < 1e-14);
  CHECK(n4->at(1)->multiplicity == 96);
  auto z3 = integer_lattice_spectrum(3);
  CHECK(z3->meta().kernel_dim == 1);
  CHECK(z3->at(0)->multiplicity == 6);
}

TEST_CASE("Podles spectra") {
  PodlesParams p{0.5, 1.0};
  auto full = podles_spectrum(p, false);
  CHECK(std::abs(full->at(0)->value - 1.0) < 1e-15);
  CHECK(full->at(0)->multiplicity == 4);
  CHECK(std::abs(full->at(2)->value - 5.25) < 1e-14);
  CHECK(full->at(2)->multiplicity == 12);
  CHECK(full->meta().dimension_p == 0);
  auto simp = podles_spectrum(p, true);
  // simplified eigenvalue u q^{-(n+1)}
  CHECK(std::abs(simp->at(0)->value - 4.0 / 3.0) < 1e-15);
  CHECK_THROWS(podles_spectrum(PodlesParams{1.2, 1.0}, true));
  for (double q : {0.3, 0.5, 0.9}) {
    PodlesParams pq{q, 1.7};
    auto f = podles_spectrum(pq, false), s = podles_spectrum(pq, true);
    double u = pq.u(), worst = 0;
    for (int n = 0; n <= 50; ++n) {
      double ms = s->at(n)->value;
      worst = std::max(worst, std::abs(f->at(n)->value - (ms - u * u / ms)) / f->at(n)->value);
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("Podles representation coefficients") {
  PodlesParams p{0.5, 1.0};
  double worst = 0;
  for (double l = 0.5; l < 40; l += 1.0)
    for (double m = -l; m <= l + 0.25; m += 1.0)
      for (int sg : {1, -1}) worst = std::max(worst, std::abs(podles_A0(p, l, m, sg)));
  CHECK(worst <= 1.0 + 1e-12);
  // near q = 1 the diagonal sums approach (2l+1)/2
  PodlesParams near{0.999999, 1.0};
  for (double l : {0.5, 3.5, 10.5}) CHECK(std::abs(podles_diag_A(near, l, 1) - (2 * l + 1) / 2) < 1e-3);
  CHECK_THROWS(podles_diag_A(p, 1.0, 1));
  // l = 1/2, sign +: direct substitution
  const double q = 0.5, rq = 1 / std::sqrt(q);
  auto b = [q](double x) { return (std::pow(q, -x) - std::pow(q, x)) / (1 / q - q); };
  double a0 = rq * ((q - 1 / q) * b(0) * b(2) + q) / (b(1) * b(3));
  double sum = 0;
  for (double m : {-0.5, 0.5}) sum += rq / (1 + q * q) * (b(1.5 - m) * b(0.5 + m) - q * q * b(0.5 - m) * b(1.5 + m)) * a0 + 1 / (1 + q * q);
  CHECK(std::abs(podles_diag_A(p, 0.5, 1) - sum) < 1e-14);
}

TEST_CASE("squared spectra") {
  auto s = squared(sphere_spectrum(3));
  CHECK(s->at(0)->value == 2.25);
  CHECK(s->meta().dimension_p == 1.5);
  CHECK(s->at(0)->multiplicity == 4);
}

TEST_CASE("vector spectra and JSON lines") {
  SpectrumMeta m;
  m.dimension_p = 1;
  CHECK_THROWS(vector_spectrum({{2.0, 1}, {1.0, 1}}, m));
  CHECK_THROWS(vector_spectrum({{1.0, 0}}, m));
  std::istringstream good(R"({"p": 1.0, "kernel": 1, "label": "toy"}
{"value": 1.0, "mult": 2}
{"value": 2.0, "mult": 2}
)");
  auto s = load_spectrum_jsonl(good);
  CHECK(s->meta().kernel_dim == 1);
  CHECK(s->meta().label == "toy");
  CHECK(s->at(1)->value == 2.0);
  CHECK_FALSE(s->at(2).has_value());
  std::istringstream bad(R"({"p": 1.0, "kernel": 0, "label": "bad"}
{"value": 2.0, "mult": 1}
{"value": 1.0, "mult": 1}
)");
  CHECK_THROWS(load_spectrum_jsonl(bad));
}

TEST_CASE("unit ball volume") {
  CHECK(std::abs(unit_ball_volume(2) - kPi) < 1e-15);
  CHECK(std::abs(unit_ball_volume(3) - 4 * kPi / 3) < 1e-14);
}
