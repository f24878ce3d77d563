#include "thinsieve/sieve_constants.hpp"

#include <doctest.h>

#include <cmath>

using namespace thinsieve;

TEST_CASE("delta0 solves its quadratic and is monotone") {
  for (int D : {2, 4, 6}) {
    double prev = 0.0;
    for (double alpha = 0.01; alpha < 0.5; alpha += 0.01) {
      const double d = delta0(D, alpha);
      const double residual = 12 * d * d + 32 * d - 8 * D * alpha - 39;
      CHECK(std::abs(residual) <= 1e-12 * (8 * D * alpha + 39));
      CHECK(d > prev);
      prev = d;
    }
  }
  CHECK(delta0(4, 0.1) > delta0(2, 0.1));
  CHECK_THROWS_AS(delta0(2, 0.0), std::invalid_argument);
}

TEST_CASE("Greaves threshold") {
  const double g = greaves_threshold();
  CHECK(g > 0.2566);
  CHECK(g < 0.2567);
  CHECK(g < 5.0 / 16);
  CHECK(delta0(2, g) == doctest::Approx(0.983994188).epsilon(5e-6));
}

TEST_CASE("m_dhr against a separately arranged evaluation") {
  const auto oracle = [](long double alpha, long double k, long double b, long double z) {
    // (1 + z(1 - 1/b))/alpha - (1 + k) + (k + z)(log b - log z) + z k / b
    return (1.0L + z * (1.0L - 1.0L / b)) / alpha - (1.0L + k) + (k + z) * (std::log(b) - std::log(z)) + z * k / b;
  };
  for (double z : {0.01, 0.3, 1.0, 4.0, 9.0}) {
    CHECK(m_dhr(5.0 / 32, 4, z) == doctest::Approx(static_cast<double>(oracle(5.0L / 32, 4, 9.0722L, z))).epsilon(1e-12));
    CHECK(m_dhr(5.0 / 48, 5, z) == doctest::Approx(static_cast<double>(oracle(5.0L / 48, 5, 11.5347L, z))).epsilon(1e-12));
  }
  CHECK(std::abs(m_dhr(5.0 / 32, 4, 1.0) - 18.5613) < 1e-3);
  // At zeta -> beta the logarithm drops out.
  const double b = dhr_beta(4), z = b * (1 - 1e-12);
  CHECK(m_dhr(0.2, 4, z) == doctest::Approx((1.0 / 0.2) * (1 + z - z / b) - 1 - 4 + z * 4 / b));
  CHECK_THROWS_AS(m_dhr(0.2, 4, 0.0), std::domain_error);
  CHECK_THROWS_AS(m_dhr(0.2, 4, b), std::domain_error);
  CHECK_THROWS_AS(m_dhr(0.2, 3, 1.0), std::invalid_argument);
}

TEST_CASE("optimize_m matches a dense scan") {
  for (auto [alpha, kappa] : {std::pair{5.0 / 32, 4}, std::pair{5.0 / 48, 5}, std::pair{0.3, 4}}) {
    CHECK(m_dhr_unimodal(alpha, kappa));
    const double b = dhr_beta(kappa);
    double best = 1e300;
    for (int i = 1; i < 200000; ++i) best = std::min(best, m_dhr(alpha, kappa, b * i / 200000.0));
    const DhrOptimum opt = optimize_m(alpha, kappa);
    CHECK(opt.m <= best + 1e-9);
    CHECK(opt.m > best - 1e-6);
    CHECK(opt.R == static_cast<int>(std::floor(opt.m)) + 1);
  }
  CHECK(optimize_m(5.0 / 32, 4).R == 18);
  CHECK(optimize_m(5.0 / 48, 5).R == 26);
  CHECK(optimize_m(7.0 / 48, 4).R == 19);
  CHECK(optimize_m(7.0 / 72, 5).R == 27);
}

TEST_CASE("optimize_m decreases with the level") {
  for (int kappa : {4, 5}) {
    double prev = 1e300;
    for (double alpha = 0.05; alpha <= 0.5; alpha += 0.025) {
      const double m = optimize_m(alpha, kappa).m;
      CHECK(m < prev);
      prev = m;
    }
  }
}

TEST_CASE("alpha_min_for_R") {
  const double a18 = alpha_min_for_R(4, 18);
  CHECK(std::abs(a18 - 0.1483334) < 1e-4);
  CHECK(optimize_m(a18 + 1e-6, 4).m < 18);
  CHECK(optimize_m(a18 + 1e-6, 4).m > 18 - 1e-3);
  CHECK(optimize_m(a18 - 1e-6, 4).m >= 18);
  CHECK(std::abs(alpha_min_for_R(5, 26) - 0.0998099) < 1e-4);
  CHECK(alpha_min_for_R(4, 19) < a18);
  CHECK_THROWS_AS(alpha_min_for_R(4, 5), std::domain_error);
}

TEST_CASE("threshold table") {
  const auto rows = theorem4_table();
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].form == Form::Z);
  CHECK(rows[0].R == 4);
  CHECK(std::abs(rows[0].delta0 - 0.983994) < 5e-6);
  CHECK(rows[1].R == 18);
  CHECK(std::abs(rows[1].delta0 - 0.9954718) < 1e-5);
  CHECK(rows[2].R == 26);
  CHECK(std::abs(rows[2].delta0 - 0.99626261) < 1e-5);
}

TEST_CASE("exponent system") {
  SieveSpec s;
  s.D = 2;
  s.alpha = 0.3;
  s.delta = 1.0;
  s.x = 0.99;
  s.y = 0.01;
  s.alpha0 = 0.05;
  CHECK(exponent_system_check(s).feasible);

  s.theta = s.delta = 0.9;
  const auto degenerate = exponent_system_check(s);
  CHECK_FALSE(degenerate.feasible);
  CHECK(degenerate.slack[0] <= 0);
  CHECK(degenerate.slack[3] <= 0);

  // Hypotenuse point x = 6 delta - 5 - eps: the window in x is narrower than 1e-4.
  SieveSpec h;
  h.D = 2;
  h.alpha = greaves_threshold();
  h.delta = 0.984;
  for (double eps : {1e-4, 1e-5}) {
    h.x = 6 * h.delta - 5 - eps;
    h.y = 1 - h.x;
    h.alpha0 = 0.5 * (h.x * (1 - h.delta) + 2 * (h.delta - h.theta) * h.x / h.D);
    CHECK(exponent_system_check(h).feasible == (eps < 5e-5));
  }

  CHECK(find_feasible_point(2, 5.0 / 16 - 1e-4).has_value());
  CHECK_FALSE(find_feasible_point(2, 5.0 / 16 + 1e-4).has_value());
  for (const auto& row : theorem4_table()) {
    const auto p = find_feasible_point(row.D, row.alpha);
    REQUIRE(p.has_value());
    CHECK(exponent_system_check(*p).feasible);
    CHECK(p->x + p->y == doctest::Approx(1.0));
  }
}
