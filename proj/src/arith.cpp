#include "thinsieve/arith.hpp"

#include <cmath>
#include <stdexcept>

namespace thinsieve {

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

u64 mod_floor(const Integer& a, u64 m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r.convert_to<u64>();
}

u64 inverse_mod(u64 a, u64 m) {
  i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 quotient = old_r / r;
    i64 tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("inverse_mod: not invertible");
  return mod_floor(old_s, m);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kSmall) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These twelve bases are a proven witness set for n < 3.3 * 10^24.
  for (u64 a : kSmall) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_squarefree(u64 n) {
  if (n == 0) return false;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

int moebius(u64 n) {
  if (!is_squarefree(n)) return 0;
  return distinct_prime_factors(n).size() % 2 == 0 ? 1 : -1;
}

std::vector<u64> squarefree_up_to(u64 limit) {
  std::vector<bool> ok(limit, true);
  for (u64 p = 2; p * p < limit; ++p) {
    for (u64 j = p * p; j < limit; j += p * p) ok[j] = false;
  }
  std::vector<u64> out;
  for (u64 n = 1; n < limit; ++n) {
    if (ok[n]) out.push_back(n);
  }
  return out;
}

u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
  // x = r1 + m1 * t with t = (r2 - r1) / m1 (mod m2)
  const u64 inv = inverse_mod(m1 % m2, m2);
  const u64 diff = (r2 % m2 + m2 - r1 % m2) % m2;
  const u64 t = mulmod(diff, inv, m2);
  return r1 % m1 + m1 * t;
}

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("to_rational: non-finite value");
  return Rational(v);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Integer to_integer(i128 v) {
  const bool negative = v < 0;
  const u128 mag = negative ? -static_cast<u128>(v) : static_cast<u128>(v);
  Integer out = static_cast<u64>(mag >> 64);
  out <<= 64;
  out += static_cast<u64>(mag);
  return negative ? Integer(-out) : out;
}

i128 to_i128(const Integer& v) {
  static const Integer limit = Integer(1) << 126;
  if (abs(v) >= limit) throw std::overflow_error("to_i128: value out of range");
  const Integer mag = abs(v);
  const u128 hi = static_cast<u64>(mag >> 64);
  const u128 lo = static_cast<u64>(mag & Integer(~u64{0}));
  const i128 out = static_cast<i128>((hi << 64) | lo);
  return v < 0 ? -out : out;
}

std::string to_string(i128 v) { return to_integer(v).str(); }

}  // namespace thinsieve
