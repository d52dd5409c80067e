#include <cmath>

#include "doctest.h"
#include "sal/special_fn.hpp"

using namespace sal;

namespace {

bool close(cx a, cx b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

// zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
cx zeta_fe_rhs(cx s) {
  return std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi)) * sinpi(0.5 * s) * sal::gamma(1.0 - s) * riemann_zeta(1.0 - s);
}

}  // namespace

TEST_CASE("gamma basics") {
  CHECK(std::abs(sal::gamma(0.5) - std::sqrt(kPi)) < 1e-15);
  CHECK(std::abs(sal::gamma(5.0) - 24.0) < 1e-12);
  CHECK(close(sal::gamma(cx(3, 4)), cx(0.0052255384713692141947, -0.17254707929430018771913), 1e-13));
  CHECK(close(sal::gamma(cx(-2.5, 0.5)), cx(-0.33387520352243233740, -0.20645730796360841492), 1e-13));
  CHECK(std::abs(rgamma(cx(-3.5)) - 3.7024941420321506331) < 1e-13);
  CHECK(std::abs(rgamma(cx(-3.0))) < 1e-15);
  CHECK(close(polygamma(2, cx(1.5, 2)), cx(0.11593863046870224366, 0.16977914336071450586), 1e-12));
}

TEST_CASE("gamma stays finite far up the imaginary axis") {
  cx g = sal::gamma(cx(0.0, 226.6));
  CHECK(std::abs(g.real() - -3.43013108211413708308e-156) < 1e-13 * 3.43e-156);
  CHECK(std::abs(g.imag() - 2.66101955602957684873e-156) < 1e-13 * 2.66e-156);
  CHECK(close(digamma(cx(0.3, -45)), cx(3.8066517895252877469, -1.5752409248992004581), 1e-13));
  CHECK(close(log_gamma(cx(-2.7, 60)), cx(-106.43222248407940195, 180.54952504841336795), 1e-13));
}

TEST_CASE("gamma decays like exp(-pi|y|/2) on vertical lines") {
  for (double y : {10.0, 20.0}) {
    double bound = std::pow(y, 0.3 - 0.5) * std::exp(-kPi * y / 2);
    double g = std::abs(sal::gamma(cx(0.3, y)));
    CHECK(g < 3.0 * bound);
    CHECK(g > 0.3 * bound);
  }
}

TEST_CASE("gamma Laurent data") {
  CHECK(std::abs(gamma_laurent(1.0, -1)) < 1e-15);
  CHECK(std::abs(gamma_laurent(0.0, -1) - 1.0) < 1e-15);
  CHECK(std::abs(gamma_laurent(-3.0, -1) - (-1.0 / 6.0)) < 1e-15);
  CHECK(std::abs(gamma_laurent(1.0, 1) + kEulerGamma) < 1e-14);
  for (double z : {0.0, -1.0, 2.0}) {
    std::vector<double> errs;
    for (double h : {1e-2, 5e-3}) {
      cx approx = 0.0;
      for (int j = -1; j <= 3; ++j) approx += gamma_laurent(z, j) * std::pow(h, j);
      errs.push_back(std::abs(sal::gamma(cx(z + h)) - approx));
    }
    // O(h^4): halving h divides the error by about 16
    CHECK(errs[0] / errs[1] > 12.0);
    CHECK(errs[0] < 1e-6);
  }
}

TEST_CASE("upper incomplete gamma") {
  CHECK(std::abs(upper_gamma(0.5, 2.0) - 0.080647117960317690789) < 1e-14);
  CHECK(std::abs(upper_gamma(-1.5, 0.7) - 0.33333434409661185846) < 1e-13);
  CHECK(close(upper_gamma(cx(2, 1), 3.0), cx(0.030625110859155660222, 0.19080404235413572236), 1e-12));
}

TEST_CASE("Riemann zeta") {
  CHECK(std::abs(riemann_zeta(2.0) - kPi * kPi / 6) < 1e-15);
  CHECK(std::abs(riemann_zeta(0.0) + 0.5) < 4e-15);
  CHECK(std::abs(riemann_zeta(-7.5) - 0.0032690395726002200217) < 1e-16);
  CHECK(std::abs(riemann_zeta(-0.6) - -0.17459571193801338553) < 1e-15);
  CHECK(close(riemann_zeta(cx(3, 4)), cx(0.89055490696507325814, -0.0080759454243272598468), 1e-14));
  CHECK(close(riemann_zeta(cx(0.5, 14)), cx(0.022241142609993589246, -0.10325812326645005790), 1e-12));
  CHECK_THROWS_AS(riemann_zeta(1.0), PoleError);
  // zeta(-2k-1) = -B_{2k+2}/(2k+2) to the last bit
  for (int k = 0; k <= 3; ++k)
    CHECK(riemann_zeta(-2.0 * k - 1) == to_double(-bernoulli_number(2 * k + 2) / (2 * k + 2)));
}

TEST_CASE("zeta functional equation on a grid") {
  double worst = 0;
  for (double re = -5; re <= 5; re += 1.25)
    for (double im = -10; im <= 10; im += 2.5) {
      cx s(re, im + 0.1);
      worst = std::max(worst, std::abs(riemann_zeta(s) - zeta_fe_rhs(s)) / std::max(1.0, std::abs(riemann_zeta(s))));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("Hurwitz zeta") {
  CHECK(std::abs(hurwitz_zeta(3.0, 1.0) - riemann_zeta(3.0)) < 1e-15);
  for (int k = 0; k <= 4; ++k) CHECK(hurwitz_zeta(-2.0 * k, 0.5) == 0.0);
  CHECK(std::abs(hurwitz_zeta(2.0, 1.5) - (kPi * kPi / 2 - 4)) < 1e-14);
  CHECK(close(hurwitz_zeta(cx(2.5, 1), 0.7), cx(2.5415348878947539701, 0.55343354546421582518), 1e-13));
  CHECK(std::abs(hurwitz_zeta(-1.5, 0.3) - -0.0081855604858359760572) < 1e-14);
  // shift identity
  cx s(2.5, 1.0);
  CHECK(close(hurwitz_zeta(s, 1.7), hurwitz_zeta(s, 0.7) - std::exp(-s * std::log(0.7)), 1e-13));
}

TEST_CASE("Epstein zeta") {
  CHECK(std::abs(epstein_zeta(0.0, 2) + 1.0) < 1e-12);
  CHECK(std::abs(epstein_zeta(4.0, 2) - 6.0268120396919401235) < 1e-10);
  CHECK(std::abs(epstein_zeta(3.0, 2) - 9.0336216831009503057) < 1e-10);
  CHECK(std::abs(epstein_zeta(6.0, 4) - 14.829782627229720886) < 1e-10);
  // residue 2 pi at s = 2
  double h = 1e-6;
  cx r = 0.5 * h * (epstein_zeta(cx(2.0 + h), 2) - epstein_zeta(cx(2.0 - h), 2));
  CHECK(std::abs(r - 2 * kPi) < 1e-5);
  // Z_d(s) = pi^{s - d/2} Gamma((d-s)/2)/Gamma(s/2) Z_d(d - s)
  for (int d : {2, 3}) {
    cx s(0.3, 2.0);
    cx rhs = std::exp((s - 0.5 * d) * std::log(kPi)) * sal::gamma(0.5 * (double(d) - s)) * rgamma(0.5 * s) * epstein_zeta(double(d) - s, d);
    CHECK(close(epstein_zeta(s, d), rhs, 1e-10));
  }
  CHECK_THROWS_AS(epstein_zeta(3.0, 3), PoleError);
}

TEST_CASE("sum of squares counts") {
  auto r4 = sum_of_squares_counts(4, 10);
  CHECK(r4[1] == 8);
  CHECK(r4[2] == 24);
  CHECK(r4[4] == 24);
  auto r2 = sum_of_squares_counts(2, 25);
  CHECK(r2[25] == 12);
  CHECK(r2[3] == 0);
}

TEST_CASE("theta3") {
  CHECK(jacobi_theta3(0.0, 0.0) == cx(1.0));
  CHECK(std::abs(jacobi_theta3(0.0, 0.3) - 1.6162393746095136334) < 1e-15);
  CHECK(close(jacobi_theta3(cx(0.4, 0.1), cx(0.2, 0.1)), cx(1.3151760505990429950, 0.084791628520301651395), 1e-14));
  double direct = 0;
  for (int n = -10; n <= 10; ++n) direct += std::exp(-double(n * n));
  CHECK(std::abs(jacobi_theta3(0.0, std::exp(-1.0)).real() - direct) < 1e-14);
  double t = 1.0;
  cx lhs = std::sqrt(kPi / t) * jacobi_theta3(0.0, std::exp(-kPi * kPi / t));
  CHECK(std::abs(lhs - jacobi_theta3(0.0, std::exp(-t))) < 1e-14);
}

TEST_CASE("Bernoulli numbers") {
  CHECK(bernoulli_number(1) == Rational(-1, 2));
  CHECK(bernoulli_number(2) == Rational(1, 6));
  CHECK(bernoulli_number(4) == Rational(-1, 30));
  CHECK(bernoulli_number(6) == Rational(1, 42));
  CHECK(bernoulli_number(12) == Rational(-691, 2730));
  CHECK(bernoulli_number(7) == 0);
  // sum_j C(k+1, j) B_j = 0
  for (int k = 1; k <= 40; ++k) {
    Rational acc = 0;
    BigInt c = 1;
    for (int j = 0; j <= k; ++j) {
      acc += Rational(c) * bernoulli_number(j);
      c = c * (k + 1 - j) / (j + 1);
    }
    CHECK(acc == 0);
  }
  CHECK(bernoulli_poly(3, Rational(1, 2)) == 0);
  CHECK(std::abs(bernoulli_poly(2, 0.25) - (0.0625 - 0.25 + 1.0 / 6)) < 1e-15);
}

TEST_CASE("coth Laurent identity") {
  const double s = 0.5;
  double acc = 1 / s;
  for (int k = 1; k <= 10; ++k) acc += std::pow(4.0, k) * bernoulli_double(2 * k) / std::tgamma(2.0 * k + 1) * std::pow(s, 2 * k - 1);
  CHECK(std::abs(acc - 1 / std::tanh(s)) < 1e-12);
}

TEST_CASE("q-numbers") {
  CHECK(std::abs(q_number(1.0, 0.5) - 1.0) < 1e-15);
  CHECK(std::abs(q_number(3.0, 0.5) - 5.25) < 1e-14);
  CHECK(std::abs(std::log(q_number(700.0, 0.5)) - (700 * std::log(2.0) - std::log(1.5))) < 1e-12);
  CHECK(std::abs(q_number(4.0, 0.999999) - 4.0) < 1e-5);
}

TEST_CASE("rational conversions") {
  CHECK(to_rational(0.375) == Rational(3, 8));
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
}
