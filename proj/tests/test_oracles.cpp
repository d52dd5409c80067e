#include <cmath>

#include "doctest.h"
#include "sal/oracles.hpp"
#include "sal/series_engine.hpp"

using namespace sal;

TEST_CASE("S1 closed forms") {
  CHECK(std::abs(s1_heat_exact(0.4) - 1 / std::tanh(0.2)) < 1e-15);
  auto c = s1_laurent(3);
  CHECK(c[0] == 1);
  CHECK(c[1] == Rational(1, 3));
  CHECK(c[2] == Rational(-1, 45));
  CHECK(c[3] == Rational(2, 945));
}

TEST_CASE("catalog zeta against direct sums") {
  struct Case {
    const char* id;
    SpectrumPtr spec;
    double s;
  };
  std::vector<Case> cases = {{"s1", sphere_spectrum(1, Spin::trivial), 4.0},
                             {"s1nt", sphere_spectrum(1, Spin::nontrivial), 4.0},
                             {"s2", sphere_spectrum(2), 5.0},
                             {"s3", sphere_spectrum(3), 7.0},
                             {"s4", sphere_spectrum(4), 8.0},
                             {"nct2", nctorus_spectrum(2), 6.0},
                             {"t3", torus_spectrum(3, {0, 0, 0}), 12.0},
                             {"podless:0.5,1", podles_spectrum({0.5, 1.0}, true), 2.0},
                             {"podles:0.5,1", podles_spectrum({0.5, 1.0}, false), 2.0}};
  for (const auto& c : cases) {
    CatalogEntry e = catalog_entry(c.id);
    auto d = zeta_direct(*c.spec, c.s);
    REQUIRE(d.converged);
    double want = d.value.real();  // direct sums skip the kernel too
    CHECK(std::abs(e.zeta(c.s).real() - want) < 1e-11 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("catalog pole data") {
  const double L = std::log(0.5);
  CatalogEntry p = catalog_entry("podless:0.5,1");
  auto heat = heat_expansion_from_poles(p.poles, heat_options(p, 2));
  bool seen = false;
  for (const auto& t : heat.terms)
    if (std::abs(t.z) < 1e-12 && t.n == 2) {
      seen = true;
      CHECK(std::abs(t.coeff - 2 / (L * L)) < 1e-14);
    }
  CHECK(seen);
  // zeta(0) of the NC torus Laplacian cancels the kernel
  CatalogEntry n = catalog_entry("nct2");
  CHECK(std::abs(n.zeta_with_kernel(0.0)) < 1e-12);
  CatalogEntry s3 = catalog_entry("s3sq");
  REQUIRE(!s3.poles.empty());
  CHECK(std::abs(ncint(s3.poles.front(), 1) - 1.0) < 1e-12);
  CHECK_THROWS(catalog_entry("t3:110"));
  CHECK_THROWS_AS(catalog_zeta("s2", 2.0), std::domain_error);
}

TEST_CASE("Podles zeta: full series against the simplified closed form") {
  PodlesParams p{0.5, 1.0};
  // the full eigenvalues sit below the simplified ones
  CHECK(podles_full_zeta(p, 2.0).real() > podles_simplified_zeta(p, 2.0).real());
  auto l = podles_simplified_laurent(p, 0, 2);
  CHECK(std::abs(l.coeff(-2) - 4 / (p.log_q() * p.log_q())) < 1e-14);
}

TEST_CASE("Podles heat oracle") {
  PodlesParams p{0.5, 1.0};
  double direct = heat_trace(*podles_spectrum(p, true), 1.0).value.real();
  CHECK(std::abs(podles_heat_exact(p, 1.0, 25, 60) - direct) < 1e-8);
  // constant Fourier mode of F1 carries 4 gamma / L^2 inside the log(ut) coefficient
  const double L = p.log_q();
  double avg = 0;
  const int N = 64;
  for (int i = 0; i < N; ++i) avg += podles_F1(p, -L * i / N, 25).real() / N;
  CHECK(std::abs(avg - 4 * kEulerGamma) < 1e-10);
}

TEST_CASE("Epstein residues") {
  CHECK(std::abs(epstein_residue({0, 0}, 2) - 2 * kPi) < 1e-14);
  CHECK(std::abs(epstein_residue({2}, 1) - 2.0) < 1e-14);
  CHECK(epstein_residue({1, 0}, 2) == 0.0);
  CHECK_THROWS(epstein_residue({0}, 2));
}

TEST_CASE("Podles A residue scales with |w|^2") {
  auto a = podles_A_residue({0.5, 1.0}), b = podles_A_residue({0.5, 2.0});
  CHECK(a.fit_rms < 1e-10);
  CHECK(std::abs(b.residue / a.residue - 4.0) < 1e-8);
  CHECK(std::abs(b.printed / a.printed - 4.0) < 1e-12);
}

TEST_CASE("triple ids") {
  auto id = parse_triple_id("s3sq");
  CHECK(id.base == "s");
  CHECK(id.d == 3);
  CHECK(id.squared);
  auto t = parse_triple_id("t3:101");
  CHECK(t.bits == std::vector<int>{1, 0, 1});
  auto p = parse_triple_id("podless:0.3,-2");
  CHECK(p.podles.w_abs == 2.0);
  CHECK_THROWS(parse_triple_id("t3:12"));
  CHECK_THROWS(parse_triple_id("podles:0.5"));
  CHECK_THROWS(parse_triple_id("podles:1.5,1"));
  CHECK_THROWS(parse_triple_id("s2:3"));
  CHECK_THROWS(parse_triple_id("s7"));
}
