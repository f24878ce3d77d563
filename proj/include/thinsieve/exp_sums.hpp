#pragma once

// Exact evaluation of the local weights rho and Xi and of the complete
// character sums S1..S5 over (Z/qZ)^2 for the coordinate forms x, y, z
// twisted by a matrix omega: f_omega(c, d) = f((c, d) . omega).
//
// Two evaluation routes are provided. The factored route multiplies local
// factors over the primes of q; at a prime every summand depends only on
// the line through (c, d), so each line contributes a complete geometric
// sum p * [m = 0] - 1. The direct route visits every (c, d) mod q, buckets
// the summands by the exponent of e_q and collapses the buckets with
// Ramanujan sums. Both routes are exact.

#include "thinsieve/gl2.hpp"
#include "thinsieve/modular.hpp"
#include "thinsieve/thin_groups.hpp"

#include <optional>
#include <vector>

namespace thinsieve {

/// The prime-local weight rho(p). Swappable so that the lemma suite can be
/// run against a deliberately wrong weight.
struct RhoModel {
  const char* name;
  Rational (*rho_prime)(u64 p);
};

const RhoModel& standard_rho();  // (2p - 1) / p^2
const RhoModel& mutant_rho();    // 2p / p^2

/// rho(q) = prod_{p | q} rho(p); rho(1) = 1.
Rational rho(u64 q, const RhoModel& model = standard_rho());

/// Xi(q; n) = prod_{p | q} (1_{p | n} - rho(p)), with Xi(1; n) = 0.
Rational xi(u64 q, const Integer& n, const RhoModel& model = standard_rho());

struct SumValue {
  Rational value;
  u64 modulus;
};

/// Raw coordinate form of the row (c, d) mod p (area and product unnormalized).
u64 form_mod(Form f, u64 c, u64 d, u64 p);

/// f((c, d) . omega) mod p.
u64 form_omega_mod(Form f, u64 c, u64 d, const UnimodularMatrix& omega, u64 p);

SumValue s1(u64 q, Form f, const UnimodularMatrix& omega, const RhoModel& model = standard_rho());
SumValue s2(u64 q, Form f, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
            const RhoModel& model = standard_rho());
SumValue s4(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const RhoModel& model = standard_rho());
SumValue s5(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
            const RhoModel& model = standard_rho());

/// S3 through its factorization S4(q1) S4(q1') S5(q~) with q~ = gcd(q, q'),
/// q1 = q / q~, q1' = q' / q~.
SumValue s3(u64 q, u64 q2, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
            const RhoModel& model = standard_rho());

// Direct-route counterparts.
Rational s1_direct(u64 q, Form f, const UnimodularMatrix& omega, const RhoModel& model = standard_rho());
Rational s2_direct(u64 q, Form f, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
                   const RhoModel& model = standard_rho());
Rational s4_direct(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega,
                   const RhoModel& model = standard_rho());
Rational s5_direct(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
                   const RhoModel& model = standard_rho());
/// (1 / [q,q']^2) sum over (c, d) mod [q, q'] of Xi(q; f_omega) Xi(q'; f_omega') e(-ck - dl).
Rational s3_direct(u64 q, u64 q2, Form f, i64 k, i64 l, const UnimodularMatrix& omega,
                   const UnimodularMatrix& omega2, const RhoModel& model = standard_rho());

/// Recomputes S3 directly and compares with the factored product; also
/// requires |S5(q~)| <= 1.
bool s3_factorization_check(u64 q, u64 q2, Form f, i64 k, i64 l, const UnimodularMatrix& omega,
                            const UnimodularMatrix& omega2, const RhoModel& model = standard_rho());

/// Closed form of S4 at a prime for f in {x, y} (and z when p = 1 mod 4):
/// (p - 1)/p^2 when f_omega(l, -k) = 0 (mod p), -1/p^2 otherwise. Requires
/// (k, l) != (0, 0) mod p; throws std::invalid_argument otherwise.
Rational s4_closed_form(u64 p, Form f, i64 k, i64 l, const UnimodularMatrix& omega);

/// gcd(f_omega(l, -k), p) / p^2, the bound on |S4| for the hypotenuse.
Rational s4_bound(u64 p, Form f, i64 k, i64 l, const UnimodularMatrix& omega);

/// #{(c, d) mod p : f_omega(c, d) = 0 (mod p)}.
u64 count_zero_locus(Form f, u64 p, const UnimodularMatrix& omega);

/// True iff for every nonzero (c, d) mod p at most one of d^2 - c^2, 2cd,
/// c^2 + d^2 vanishes.
bool disjointness_check(u64 p);

struct DivisibilityCount {
  u64 count = 0;
  double predicted_main = 0.0;      // |ball| * beta_f(q)
  std::optional<double> ratio;      // count / predicted_main when the latter is nonzero
};

/// Counts ball elements whose bottom row has f = 0 (mod q).
DivisibilityCount orbit_divisibility_count(const OrbitBall& ball, Form f, u64 q);

/// Deterministic omega samples: words of length 1..4 in the modular
/// generators, drawn from mt19937_64 seeded with seed.
std::vector<UnimodularMatrix> sample_omegas(u64 seed, std::size_t count);

}  // namespace thinsieve
