#include "thinsieve/exp_sums.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace thinsieve {

namespace {

Rational rho_standard(u64 p) { return Rational(2 * p - 1, p * p); }
Rational rho_mutant(u64 p) { return Rational(2 * p, p * p); }

constexpr RhoModel kStandard{"standard", &rho_standard};
constexpr RhoModel kMutant{"mutant-2p", &rho_mutant};

void require_squarefree(u64 q, const char* what) {
  if (q == 0 || !is_squarefree(q)) throw std::invalid_argument(std::string(what) + ": modulus must be squarefree");
}

// omega reduced mod p as four residues
struct LocalOmega {
  u64 a, b, c, d;
  LocalOmega(const UnimodularMatrix& w, u64 p)
      : a(mod_floor(w.a(), p)), b(mod_floor(w.b(), p)), c(mod_floor(w.c(), p)), d(mod_floor(w.d(), p)) {}
};

u64 twisted_form(Form f, u64 c, u64 d, const LocalOmega& w, u64 p) {
  // (c, d) . omega = (c a + d c', c b + d d')
  const u64 c2 = (mulmod(c, w.a, p) + mulmod(d, w.c, p)) % p;
  const u64 d2 = (mulmod(c, w.b, p) + mulmod(d, w.d, p)) % p;
  return form_mod(f, c2, d2, p);
}

Rational xi_local(u64 p, bool divisible, const RhoModel& model) {
  return Rational(divisible ? 1 : 0) - model.rho_prime(p);
}

// (1/p^2) sum over (c, d) mod p of g(c, d) e_p(-ck - dl) for g constant on
// punctured lines through the origin.
template <class G>
Rational local_line_sum(u64 p, u64 k, u64 l, G&& g) {
  Rational total = g(0, 0);
  const auto add_line = [&](u64 c, u64 d) {
    const u64 m = (mulmod(c, k, p) + mulmod(d, l, p)) % p;
    total += g(c, d) * Rational((m == 0 ? static_cast<i64>(p) : 0) - 1);
  };
  add_line(0, 1);
  for (u64 t = 0; t < p; ++t) add_line(1, t);
  return total / Rational(p * p);
}

// Product of local factors over p | q; the empty product (q = 1) is 1.
Rational factored_s4(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const RhoModel& model) {
  Rational r = 1;
  for (u64 p : distinct_prime_factors(q)) {
    const LocalOmega w(omega, p);
    r *= local_line_sum(p, mod_floor(k, p), mod_floor(l, p), [&](u64 c, u64 d) {
      return xi_local(p, twisted_form(f, c, d, w, p) == 0, model);
    });
  }
  return r;
}

Rational factored_s5(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
                     const RhoModel& model) {
  Rational r = 1;
  for (u64 p : distinct_prime_factors(q)) {
    const LocalOmega w(omega, p), w2(omega2, p);
    r *= local_line_sum(p, mod_floor(k, p), mod_floor(l, p), [&](u64 c, u64 d) {
      return xi_local(p, twisted_form(f, c, d, w, p) == 0, model) *
             xi_local(p, twisted_form(f, c, d, w2, p) == 0, model);
    });
  }
  return r;
}

struct XiTerm {
  u64 q;
  const UnimodularMatrix* omega;
};

// Direct route over all (c, d) mod Q, Q squarefree and divisible by every term modulus.
Rational direct_sum(u64 Q, Form f, i64 k, i64 l, const std::vector<XiTerm>& terms, const RhoModel& model) {
  if (Q > 20000) throw std::invalid_argument("direct character sum: modulus too large");
  struct LocalTable {
    u64 p;
    i128 hit, miss;             // p^2 (1 - rho), -p^2 rho
    std::vector<char> zero;     // zero[c * p + d]
  };
  std::vector<std::vector<LocalTable>> tables;
  i128 denominator = 1;
  for (const auto& term : terms) {
    std::vector<LocalTable> local;
    for (u64 p : distinct_prime_factors(term.q)) {
      const Rational scaled = model.rho_prime(p) * Rational(p * p);
      if (boost::multiprecision::denominator(scaled) != 1) {
        throw std::invalid_argument("direct character sum: p^2 rho(p) must be integral");
      }
      const i128 r = static_cast<i128>(boost::multiprecision::numerator(scaled).convert_to<i64>());
      LocalTable t{p, static_cast<i128>(p * p) - r, -r, std::vector<char>(p * p)};
      const LocalOmega w(*term.omega, p);
      for (u64 c = 0; c < p; ++c)
        for (u64 d = 0; d < p; ++d) t.zero[c * p + d] = twisted_form(f, c, d, w, p) == 0;
      denominator *= static_cast<i128>(p * p);
      local.push_back(std::move(t));
    }
    tables.push_back(std::move(local));
  }

  std::vector<i128> bucket(Q, 0);
  const u64 kq = mod_floor(k, Q), lq = mod_floor(l, Q);
  for (u64 c = 0; c < Q; ++c) {
    for (u64 d = 0; d < Q; ++d) {
      i128 w = 1;
      for (const auto& local : tables) {
        for (const auto& t : local) {
          w *= t.zero[(c % t.p) * t.p + d % t.p] ? t.hit : t.miss;
        }
      }
      const u64 m = (Q - (mulmod(c, kq, Q) + mulmod(d, lq, Q)) % Q) % Q;
      bucket[m] += w;
    }
  }

  // A Galois-stable bucket vector is constant on gcd classes; each class
  // {m : gcd(m, Q) = g} sums to the Ramanujan value mu(Q / g).
  std::vector<std::optional<i128>> class_weight(Q + 1);
  for (u64 m = 0; m < Q; ++m) {
    const u64 g = std::gcd(m, Q);
    auto& slot = class_weight[g];
    if (!slot) {
      slot = bucket[m];
    } else if (*slot != bucket[m]) {
      throw std::logic_error("direct character sum: value is not rational");
    }
  }
  i128 total = 0;
  for (u64 g = 1; g <= Q; ++g) {
    if (class_weight[g]) total += *class_weight[g] * moebius(Q / g);
  }
  return Rational(to_integer(total), to_integer(denominator) * Integer(Q) * Integer(Q));
}

}  // namespace

const RhoModel& standard_rho() { return kStandard; }
const RhoModel& mutant_rho() { return kMutant; }

Rational rho(u64 q, const RhoModel& model) {
  require_squarefree(q, "rho");
  Rational r = 1;
  for (u64 p : distinct_prime_factors(q)) r *= model.rho_prime(p);
  return r;
}

Rational xi(u64 q, const Integer& n, const RhoModel& model) {
  require_squarefree(q, "xi");
  if (q == 1) return 0;
  Rational r = 1;
  for (u64 p : distinct_prime_factors(q)) r *= xi_local(p, n % p == 0, model);
  return r;
}

u64 form_mod(Form f, u64 c, u64 d, u64 p) {
  c %= p;
  d %= p;
  const u64 x = (mulmod(d, d, p) + p - mulmod(c, c, p)) % p;
  const u64 y = mulmod(2 % p, mulmod(c, d, p), p);
  const u64 z = (mulmod(c, c, p) + mulmod(d, d, p)) % p;
  switch (f) {
    case Form::X: return x;
    case Form::Y: return y;
    case Form::Z: return z;
    case Form::Area: return mulmod(x, y, p);
    case Form::Product: return mulmod(mulmod(x, y, p), z, p);
  }
  return 0;
}

u64 form_omega_mod(Form f, u64 c, u64 d, const UnimodularMatrix& omega, u64 p) {
  return twisted_form(f, c % p, d % p, LocalOmega(omega, p), p);
}

SumValue s1(u64 q, Form f, const UnimodularMatrix& omega, const RhoModel& model) {
  require_squarefree(q, "s1");
  if (q == 1) return {0, 1};
  return {factored_s4(q, f, 0, 0, omega, model), q};
}

SumValue s2(u64 q, Form f, const UnimodularMatrix& omega, const UnimodularMatrix& omega2, const RhoModel& model) {
  require_squarefree(q, "s2");
  if (q == 1) return {0, 1};
  return {factored_s5(q, f, 0, 0, omega, omega2, model), q};
}

SumValue s4(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const RhoModel& model) {
  require_squarefree(q, "s4");
  if (q == 1) return {0, 1};
  return {factored_s4(q, f, k, l, omega, model), q};
}

SumValue s5(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
            const RhoModel& model) {
  require_squarefree(q, "s5");
  if (q == 1) return {0, 1};
  return {factored_s5(q, f, k, l, omega, omega2, model), q};
}

SumValue s3(u64 q, u64 q2, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
            const RhoModel& model) {
  require_squarefree(q, "s3");
  require_squarefree(q2, "s3");
  const u64 common = std::gcd(q, q2);
  const u64 q1 = q / common, q1b = q2 / common;
  return {factored_s4(q1, f, k, l, omega, model) * factored_s4(q1b, f, k, l, omega2, model) *
              factored_s5(common, f, k, l, omega, omega2, model),
          q1 * q1b * common};
}

Rational s1_direct(u64 q, Form f, const UnimodularMatrix& omega, const RhoModel& model) {
  require_squarefree(q, "s1");
  if (q == 1) return 0;
  return direct_sum(q, f, 0, 0, {{q, &omega}}, model);
}

Rational s2_direct(u64 q, Form f, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
                   const RhoModel& model) {
  require_squarefree(q, "s2");
  if (q == 1) return 0;
  return direct_sum(q, f, 0, 0, {{q, &omega}, {q, &omega2}}, model);
}

Rational s4_direct(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const RhoModel& model) {
  require_squarefree(q, "s4");
  if (q == 1) return 0;
  return direct_sum(q, f, k, l, {{q, &omega}}, model);
}

Rational s5_direct(u64 q, Form f, i64 k, i64 l, const UnimodularMatrix& omega, const UnimodularMatrix& omega2,
                   const RhoModel& model) {
  require_squarefree(q, "s5");
  if (q == 1) return 0;
  return direct_sum(q, f, k, l, {{q, &omega}, {q, &omega2}}, model);
}

Rational s3_direct(u64 q, u64 q2, Form f, i64 k, i64 l, const UnimodularMatrix& omega,
                   const UnimodularMatrix& omega2, const RhoModel& model) {
  require_squarefree(q, "s3");
  require_squarefree(q2, "s3");
  const u64 lcm = q / std::gcd(q, q2) * q2;
  return direct_sum(lcm, f, k, l, {{q, &omega}, {q2, &omega2}}, model);
}

bool s3_factorization_check(u64 q, u64 q2, Form f, i64 k, i64 l, const UnimodularMatrix& omega,
                            const UnimodularMatrix& omega2, const RhoModel& model) {
  const Rational direct = s3_direct(q, q2, f, k, l, omega, omega2, model);
  const Rational product = s3(q, q2, f, k, l, omega, omega2, model).value;
  const Rational s5_value = factored_s5(std::gcd(q, q2), f, k, l, omega, omega2, model);
  return direct == product && abs(s5_value) <= 1;
}

Rational s4_closed_form(u64 p, Form f, i64 k, i64 l, const UnimodularMatrix& omega) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("s4_closed_form: p must be an odd prime");
  if (f == Form::Area || f == Form::Product) throw std::invalid_argument("s4_closed_form: coordinate forms only");
  const u64 kp = mod_floor(k, p), lp = mod_floor(l, p);
  if (kp == 0 && lp == 0) throw std::invalid_argument("s4_closed_form: requires (k, l, p) = 1");
  const Rational pp(p * p);
  if (f == Form::Z && p % 4 == 3) return Rational(1) / pp;  // zero locus is the origin alone
  const bool on_locus = form_omega_mod(f, lp, (p - kp) % p, omega, p) == 0;
  return on_locus ? Rational(p - 1) / pp : Rational(-1) / pp;
}

Rational s4_bound(u64 p, Form f, i64 k, i64 l, const UnimodularMatrix& omega) {
  if (!is_prime(p)) throw std::invalid_argument("s4_bound: p must be prime");
  const bool divisible = form_omega_mod(f, mod_floor(l, p), mod_floor(-k, p), omega, p) == 0;
  return Rational(divisible ? p : 1, p * p);
}

u64 count_zero_locus(Form f, u64 p, const UnimodularMatrix& omega) {
  if (!is_prime(p)) throw std::invalid_argument("count_zero_locus: p must be prime");
  const LocalOmega w(omega, p);
  u64 count = 0;
  for (u64 c = 0; c < p; ++c)
    for (u64 d = 0; d < p; ++d) count += twisted_form(f, c, d, w, p) == 0;
  return count;
}

bool disjointness_check(u64 p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("disjointness_check: p must be an odd prime");
  for (u64 c = 0; c < p; ++c) {
    for (u64 d = 0; d < p; ++d) {
      if (c == 0 && d == 0) continue;
      const int zeros = (form_mod(Form::X, c, d, p) == 0) + (form_mod(Form::Y, c, d, p) == 0) +
                        (form_mod(Form::Z, c, d, p) == 0);
      if (zeros > 1) return false;
    }
  }
  return true;
}

DivisibilityCount orbit_divisibility_count(const OrbitBall& ball, Form f, u64 q) {
  require_squarefree(q, "orbit_divisibility_count");
  if (std::gcd(q, static_cast<u64>(form_info(f).normalizer)) != 1) {
    throw std::invalid_argument("orbit_divisibility_count: q shares a factor with the form's normalizer");
  }
  DivisibilityCount out;
  for (const auto& e : ball.elements) {
    if (q == 1 || form_mod(f, mod_floor(e.c, q), mod_floor(e.d, q), q) == 0) ++out.count;
  }
  out.predicted_main = static_cast<double>(ball.size()) * to_double(beta(f, q));
  if (out.predicted_main > 0) out.ratio = static_cast<double>(out.count) / out.predicted_main;
  return out;
}

std::vector<UnimodularMatrix> sample_omegas(u64 seed, std::size_t count) {
  const auto letters = modular_group().symmetric();
  std::mt19937_64 rng(seed);
  std::vector<UnimodularMatrix> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const u64 length = rng() % 4 + 1;
    UnimodularMatrix w = UnimodularMatrix::identity();
    for (u64 j = 0; j < length; ++j) w = w * letters[rng() % letters.size()];
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace thinsieve
