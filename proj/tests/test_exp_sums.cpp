#include "thinsieve/exp_sums.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace thinsieve;

namespace {

// Floating-point brute force of
//   (1/Q^2) sum_{(c,d) mod Q} W(c, d) e(-(ck + dl)/Q),
// with W a product of Xi factors computed from the integer coordinates.
struct Factor {
  u64 q;
  UnimodularMatrix omega;
};

double xi_oracle(u64 q, const Integer& n) {
  if (q == 1) return 1.0;  // empty product inside the oracle
  double w = 1.0;
  for (u64 p = 2; p <= q; ++p) {
    if (q % p != 0 || !is_prime(p)) continue;
    const double rho = (2.0 * p - 1.0) / (static_cast<double>(p) * p);
    w *= (n % p == 0 ? 1.0 : 0.0) - rho;
  }
  return w;
}

std::complex<double> oracle(u64 Q, Form f, i64 k, i64 l, const std::vector<Factor>& factors) {
  std::complex<double> total = 0;
  for (u64 c = 0; c < Q; ++c) {
    for (u64 d = 0; d < Q; ++d) {
      double w = 1.0;
      for (const auto& fac : factors) {
        const Integer c2 = Integer(c) * fac.omega.a() + Integer(d) * fac.omega.c();
        const Integer d2 = Integer(c) * fac.omega.b() + Integer(d) * fac.omega.d();
        const Integer x = d2 * d2 - c2 * c2, y = 2 * c2 * d2, z = c2 * c2 + d2 * d2;
        w *= xi_oracle(fac.q, f == Form::X ? x : f == Form::Y ? y : z);
      }
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((static_cast<i64>(c) * k + static_cast<i64>(d) * l)) / Q;
      total += w * std::polar(1.0, phase);
    }
  }
  return total / static_cast<double>(Q * Q);
}

bool close(const Rational& exact, std::complex<double> approx) {
  return std::abs(to_double(exact) - approx.real()) < 1e-9 && std::abs(approx.imag()) < 1e-9;
}

std::vector<u64> squarefree_odd(u64 limit) {
  std::vector<u64> out;
  for (u64 q : squarefree_up_to(limit))
    if (q % 2 == 1 && q > 1) out.push_back(q);
  return out;
}

}  // namespace

TEST_CASE("rho and Xi") {
  CHECK(rho(1) == 1);
  CHECK(rho(5) == Rational(9, 25));
  CHECK(rho(15) == Rational(5, 9) * Rational(9, 25));
  CHECK(xi(1, 17) == 0);
  CHECK(xi(5, 10) == Rational(16, 25));
  CHECK(xi(5, 11) == Rational(-9, 25));
  CHECK(xi(15, 30) == Rational(4, 9) * Rational(16, 25));
  CHECK(mutant_rho().rho_prime(5) == Rational(2, 5));
  CHECK_THROWS_AS(rho(12), std::invalid_argument);
}

TEST_CASE("S1 and S2 agree with the floating-point oracle") {
  const auto omegas = sample_omegas(3, 4);
  for (u64 q : squarefree_odd(36)) {
    for (Form f : {Form::X, Form::Y, Form::Z}) {
      const auto& w = omegas[q % omegas.size()];
      const auto& w2 = omegas[(q + 1) % omegas.size()];
      const auto expect1 = oracle(q, f, 0, 0, {{q, w}});
      CHECK(close(s1(q, f, w).value, expect1));
      CHECK(s1_direct(q, f, w) == s1(q, f, w).value);
      const auto expect2 = oracle(q, f, 0, 0, {{q, w}, {q, w2}});
      CHECK(close(s2(q, f, w, w2).value, expect2));
      CHECK(s2_direct(q, f, w, w2) == s2(q, f, w, w2).value);
    }
  }
}

TEST_CASE("S4 and S5 agree with the floating-point oracle") {
  std::mt19937_64 rng(5);
  const auto omegas = sample_omegas(9, 6);
  for (u64 q : squarefree_odd(40)) {
    for (int trial = 0; trial < 3; ++trial) {
      const i64 k = static_cast<i64>(rng() % (2 * q)) - static_cast<i64>(q);
      const i64 l = static_cast<i64>(rng() % (2 * q)) - static_cast<i64>(q);
      const auto& w = omegas[rng() % omegas.size()];
      const auto& w2 = omegas[rng() % omegas.size()];
      for (Form f : {Form::X, Form::Y, Form::Z}) {
        CHECK(close(s4(q, f, k, l, w).value, oracle(q, f, k, l, {{q, w}})));
        CHECK(s4_direct(q, f, k, l, w) == s4(q, f, k, l, w).value);
        CHECK(close(s5(q, f, k, l, w, w2).value, oracle(q, f, k, l, {{q, w}, {q, w2}})));
        CHECK(s5_direct(q, f, k, l, w, w2) == s5(q, f, k, l, w, w2).value);
      }
    }
  }
}

TEST_CASE("S3 factorizes through S4 and S5") {
  std::mt19937_64 rng(8);
  const auto omegas = sample_omegas(21, 6);
  const auto moduli = squarefree_odd(24);
  for (int trial = 0; trial < 60; ++trial) {
    const u64 q = moduli[rng() % moduli.size()], q2 = moduli[rng() % moduli.size()];
    const i64 k = static_cast<i64>(rng() % 50) - 25, l = static_cast<i64>(rng() % 50) - 25;
    const auto& w = omegas[rng() % omegas.size()];
    const auto& w2 = omegas[rng() % omegas.size()];
    const Form f = static_cast<Form>(trial % 3);
    CHECK(s3_factorization_check(q, q2, f, k, l, w, w2));
    const u64 lcm = q / std::gcd(q, q2) * q2;
    if (lcm <= 105) CHECK(close(s3(q, q2, f, k, l, w, w2).value, oracle(lcm, f, k, l, {{q, w}, {q2, w2}})));
  }
  const auto w = omegas[0], w2 = omegas[1];
  CHECK(s3(7, 7, Form::X, 2, 3, w, w2).value == s5(7, Form::X, 2, 3, w, w2).value);
  CHECK(s3(5, 7, Form::Y, 2, 3, w, w2).value == s4(5, Form::Y, 2, 3, w).value * s4(7, Form::Y, 2, 3, w2).value);
}

TEST_CASE("S1 vanishes exactly at primes, and fails under the mutant weight") {
  const auto omegas = sample_omegas(17, 5);
  for (u64 p : primes_up_to(61)) {
    if (p == 2) continue;
    for (const auto& w : omegas) {
      for (Form f : {Form::X, Form::Y, Form::Z}) {
        const Rational v = s1(p, f, w).value;
        if (f != Form::Z || p % 4 == 1) {
          CHECK(v == 0);
          CHECK(s1(p, f, w, mutant_rho()).value != 0);
        } else {
          CHECK(v == Rational(2 - 2 * static_cast<i64>(p), p * p));  // only the origin is a zero
        }
      }
    }
  }
  CHECK(s1(1, Form::X, UnimodularMatrix::identity()).value == 0);
  CHECK(s1(15, Form::X, UnimodularMatrix::identity()).value == 0);
}

TEST_CASE("S4 closed form and hypotenuse bound") {
  const auto omegas = sample_omegas(2, 5);
  for (u64 p : {3ULL, 5ULL, 7ULL, 13ULL}) {
    for (const auto& w : omegas) {
      for (i64 k = 0; k < static_cast<i64>(p); ++k) {
        for (i64 l = 0; l < static_cast<i64>(p); ++l) {
          if (k == 0 && l == 0) continue;
          for (Form f : {Form::X, Form::Y}) {
            const Rational closed = s4_closed_form(p, f, k, l, w);
            CHECK(s4_direct(p, f, k, l, w) == closed);
            CHECK(close(closed, oracle(p, f, k, l, {{p, w}})));
          }
          const Rational z = s4_direct(p, Form::Z, k, l, w);
          CHECK(abs(z) <= s4_bound(p, Form::Z, k, l, w));
          CHECK(z == s4_closed_form(p, Form::Z, k, l, w));
        }
      }
    }
  }
  CHECK_THROWS_AS(s4_closed_form(7, Form::X, 7, 14, UnimodularMatrix::identity()), std::invalid_argument);
}

TEST_CASE("untwisted closed form reads off the transposed coordinates") {
  // At omega = I the condition f(l, -k) = 0 is x: l = +-k, y: kl = 0.
  const auto I = UnimodularMatrix::identity();
  CHECK(s4_closed_form(11, Form::X, 3, 3, I) == Rational(10, 121));
  CHECK(s4_closed_form(11, Form::X, 3, 8, I) == Rational(10, 121));
  CHECK(s4_closed_form(11, Form::X, 3, 4, I) == Rational(-1, 121));
  CHECK(s4_closed_form(11, Form::Y, 0, 4, I) == Rational(10, 121));
  CHECK(s4_closed_form(11, Form::Y, 2, 4, I) == Rational(-1, 121));
}

TEST_CASE("zero loci and disjointness") {
  const auto omegas = sample_omegas(4, 3);
  for (u64 p : primes_up_to(97)) {
    if (p == 2) continue;
    CHECK(disjointness_check(p));
    for (const auto& w : omegas) {
      CHECK(count_zero_locus(Form::X, p, w) == 2 * p - 1);
      CHECK(count_zero_locus(Form::Y, p, w) == 2 * p - 1);
      CHECK(count_zero_locus(Form::Z, p, w) == (p % 4 == 1 ? 2 * p - 1 : 1));
    }
  }
}

TEST_CASE("the coordinate disjointness is a statement about primes") {
  // Mod 15 a row can have x = 0 mod 3 and y = 0 mod 5.
  const u64 q = 15;
  bool found = false;
  for (u64 c = 0; c < q && !found; ++c)
    for (u64 d = 0; d < q && !found; ++d)
      found = form_mod(Form::X, c, d, q) != 0 && form_mod(Form::Y, c, d, q) != 0 &&
              form_mod(Form::Area, c, d, q) == 0;
  CHECK(found);
}

TEST_CASE("orbit divisibility counts") {
  const OrbitBall ball = enumerate_ball(modular_group(), 80);
  const auto count = orbit_divisibility_count(ball, Form::Z, 5);
  std::size_t oracle_count = 0;
  for (const auto& e : ball.elements) oracle_count += (e.c * e.c + e.d * e.d) % 5 == 0;
  CHECK(count.count == oracle_count);
  REQUIRE(count.ratio.has_value());
  CHECK(*count.ratio == doctest::Approx(1.0).epsilon(0.1));
  CHECK_FALSE(orbit_divisibility_count(ball, Form::Z, 7).ratio.has_value());
  CHECK_THROWS_AS(orbit_divisibility_count(ball, Form::Area, 3), std::invalid_argument);
}

TEST_CASE("omega samples are seeded") {
  CHECK(sample_omegas(1, 10) == sample_omegas(1, 10));
  CHECK_FALSE(sample_omegas(1, 10) == sample_omegas(2, 10));
}
