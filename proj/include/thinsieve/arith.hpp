#pragma once

// Small-integer number theory shared by every module: modular arithmetic on
// 64-bit words, primality, squarefree moduli and exact big-number aliases.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace thinsieve {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m);

/// Least nonnegative residue of a modulo m (m > 0).
inline u64 mod_floor(i64 a, u64 m) {
  const i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

u64 mod_floor(const Integer& a, u64 m);

/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
u64 inverse_mod(u64 a, u64 m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Primes p <= limit.
std::vector<u64> primes_up_to(u64 limit);

/// Distinct prime divisors in increasing order (trial division; meant for moduli).
std::vector<u64> distinct_prime_factors(u64 n);

bool is_squarefree(u64 n);

/// Moebius function for small n.
int moebius(u64 n);

/// All squarefree integers in [1, limit) in increasing order.
std::vector<u64> squarefree_up_to(u64 limit);

/// Combine x = r1 (mod m1), x = r2 (mod m2) for coprime m1, m2.
u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2);

/// Exact conversion helpers.
Rational to_rational(double v);
double to_double(const Rational& r);
Integer to_integer(i128 v);
/// Throws std::overflow_error when v does not fit.
i128 to_i128(const Integer& v);
std::string to_string(i128 v);

}  // namespace thinsieve
