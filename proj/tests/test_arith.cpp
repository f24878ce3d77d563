#include "thinsieve/arith.hpp"

#include <doctest.h>

#include <random>

using namespace thinsieve;

namespace {

bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
  for (u64 n = 0; n < 20000; ++n) CHECK_MESSAGE(is_prime(n) == trial_prime(n), n);
  const auto sieve = primes_up_to(20000);
  CHECK(sieve.size() == 2262);
  CHECK(sieve.back() == 19997);
  CHECK(primes_up_to(97).back() == 97);
}

TEST_CASE("primality on large known values") {
  CHECK(is_prime(2305843009213693951ULL));   // 2^61 - 1
  CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  CHECK_FALSE(is_prime(3215031751ULL));      // strong pseudoprime to bases 2, 3, 5, 7
  CHECK_FALSE(is_prime(4294967297ULL));      // 641 * 6700417
}

TEST_CASE("modular helpers") {
  CHECK(mod_floor(i64{-7}, 5) == 3);
  CHECK(mod_floor(Integer(-12), 5) == 3);
  CHECK(powmod(3, 96, 97) == 1);
  CHECK(mulmod(inverse_mod(17, 101), 17, 101) == 1);
  CHECK_THROWS_AS(inverse_mod(6, 9), std::domain_error);
  CHECK(crt_pair(2, 3, 3, 5) == 8);
}

TEST_CASE("squarefree and moebius") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(30) == -1);
  CHECK(moebius(12) == 0);
  CHECK(is_squarefree(105));
  CHECK_FALSE(is_squarefree(18));
  const auto sf = squarefree_up_to(11);
  CHECK(sf == std::vector<u64>{1, 2, 3, 5, 6, 7, 10});
  CHECK(distinct_prime_factors(360) == std::vector<u64>{2, 3, 5});
  CHECK(distinct_prime_factors(1).empty());
}

TEST_CASE("128-bit conversions round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const i128 v = (static_cast<i128>(rng() >> 3) << 64 | rng()) * (i % 2 ? -1 : 1);
    CHECK(to_i128(to_integer(v)) == v);
  }
  CHECK(to_string(static_cast<i128>(-42)) == "-42");
  CHECK_THROWS_AS(to_i128(Integer(1) << 127), std::overflow_error);
  CHECK(to_rational(0.75) == Rational(3, 4));
}
