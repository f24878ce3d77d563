#include "thinsieve/census.hpp"

#include "thinsieve/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace thinsieve {

namespace {

const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = primes_up_to(100000);
  return primes;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    const auto f = [n, c](u64 x) { return static_cast<u64>((static_cast<u128>(x) * x + c) % n); };
    const auto dist = [](u64 a, u64 b) { return a > b ? a - b : b - a; };
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    constexpr u64 m = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, dist(x, y), n);
        }
        g = std::gcd(q, n);
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(dist(x, ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_u64(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 f = pollard_brent(n);
  split_u64(f, out);
  split_u64(n / f, out);
}

bool fits_u64(const Integer& n) { return n <= Integer(~u64{0}); }

std::size_t pair_hash(i128 v) {
  const u128 u = static_cast<u128>(v);
  const u64 h = static_cast<u64>(u) ^ (static_cast<u64>(u >> 64) * 0x9e3779b97f4a7c15ULL);
  return std::hash<u64>{}(h * 0xbf58476d1ce4e5b9ULL);
}

struct I128Hash {
  std::size_t operator()(i128 v) const { return pair_hash(v); }
};

i128 abs128(i128 v) { return v < 0 ? -v : v; }

u64 mod_q(i128 n, u64 q) {
  const i128 r = n % static_cast<i128>(q);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(q) : r);
}

// Normalized form value in 128 bits; throws BudgetExceeded when it may not fit.
i128 form_value_128(Form f, i128 c, i128 d) {
  const int degree = form_info(f).degree;
  const i128 bound = i128{1} << (degree == 2 ? 60 : degree == 4 ? 30 : 20);
  if (abs128(c) >= bound || abs128(d) >= bound) throw BudgetExceeded("form value exceeds 128-bit range");
  const i128 x = d * d - c * c, y = 2 * c * d, z = c * c + d * d;
  switch (f) {
    case Form::X: return x;
    case Form::Y: return y;
    case Form::Z: return z;
    case Form::Area: return x * y / 12;
    case Form::Product: return x * y * z / 60;
  }
  return 0;
}

void check_good_modulus(const SieveSequence& seq, u64 q) {
  if (q == 0 || !is_squarefree(q)) throw std::invalid_argument("a_q: q must be squarefree");
  for (u64 p : excluded_primes(seq.form, seq.bad_primes)) {
    if (q % p == 0) throw std::invalid_argument("a_q: q is divisible by the excluded prime " + std::to_string(p));
  }
}

i128 divisible_mass(const SieveSequence& seq, u64 q) {
  i128 total = 0;
  for (const auto& [n, w] : seq.entries) {
    if (q == 1 || mod_q(n, q) == 0) total += w;
  }
  return total;
}

}  // namespace

std::vector<u64> factorize_u64(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be nonzero");
  std::vector<u64> out;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  split_u64(n, out);
  std::sort(out.begin(), out.end());
  return out;
}

Factorization factorize(const Integer& n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be nonzero");
  Integer m = abs(n);
  Factorization out;
  if (!fits_u64(m)) {
    for (u64 p : small_primes()) {
      while (m % p == 0) {
        out.primes.emplace_back(p);
        m /= p;
      }
      if (fits_u64(m)) break;
    }
  }
  if (fits_u64(m)) {
    for (u64 p : factorize_u64(m.convert_to<u64>())) out.primes.emplace_back(p);
  } else {
    out.cofactor = m;
    out.complete = false;
  }
  std::sort(out.primes.begin(), out.primes.end());
  return out;
}

std::optional<std::size_t> CensusRow::omega() const {
  if (value_class != ValueClass::Regular || !factors.complete) return std::nullopt;
  return factors.omega();
}

CensusRow census_row(i64 c, i64 d, Form f) {
  CensusRow row{c, d, f, abs(form_value(f, c, d)), {}, ValueClass::Regular, (c % 2 != 0) && (d % 2 != 0)};
  if (row.n == 0) {
    row.value_class = ValueClass::Zero;
  } else if (row.n == 1) {
    row.value_class = ValueClass::Unit;
  } else {
    row.factors = factorize(row.n);
  }
  return row;
}

Census census(const OrbitBall& ball, Form f, int R, unsigned threads) {
  if (R < 1) throw std::invalid_argument("census: R must be positive");
  Census out;
  out.rows.resize(ball.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out.rows[i] = census_row(ball.elements[i].c, ball.elements[i].d, f);
  };
  threads = std::max(1U, std::min<unsigned>(threads, 64));
  if (threads == 1 || ball.size() < 1024) {
    work(0, ball.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (ball.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(ball.size(), t * chunk), end = std::min(ball.size(), begin + chunk);
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  auto& s = out.summary;
  s.form = f;
  s.R = R;
  s.rows = out.rows.size();
  s.at_most.assign(static_cast<std::size_t>(R), 0);
  for (const auto& row : out.rows) {
    if (row.imprimitive) ++s.imprimitive;
    if (row.value_class == ValueClass::Zero) {
      ++s.zeros;
    } else if (row.value_class == ValueClass::Unit) {
      ++s.units;
    } else if (!row.factors.complete) {
      ++s.incomplete;
    } else {
      for (std::size_t r = row.factors.omega(); r <= static_cast<std::size_t>(R); ++r) ++s.at_most[r - 1];
    }
  }
  return out;
}

std::string grade_label(const CensusRow& row, int R) {
  switch (row.value_class) {
    case ValueClass::Zero: return "zero";
    case ValueClass::Unit: return "unit";
    case ValueClass::Regular: break;
  }
  if (!row.factors.complete) return "incomplete";
  const std::size_t omega = row.factors.omega();
  return omega <= static_cast<std::size_t>(R) ? "P" + std::to_string(omega) : "-";
}

void write_census_csv_header(std::ostream& out) { out << "c,d,form,n,factors,omega,grade,imprimitive_flag\n"; }

void write_census_csv_row(std::ostream& out, const CensusRow& row, int R) {
  out << row.c << ',' << row.d << ',' << to_string(row.form) << ',' << row.n << ',';
  bool first = true;
  for (const auto& p : row.factors.primes) {
    out << (first ? "" : "·") << p;
    first = false;
  }
  if (!row.factors.complete) out << (first ? "" : "·") << row.factors.cofactor << '?';
  out << ',';
  if (const auto omega = row.omega()) out << *omega;
  out << ',' << grade_label(row, R) << ',' << (row.imprimitive ? 1 : 0) << '\n';
}

std::vector<u64> primitivity_failures(const OrbitBall& ball, Form f, u64 p_max) {
  std::vector<u64> candidates = primes_up_to(p_max);
  for (const auto& e : ball.elements) {
    if (candidates.empty()) break;
    const Integer v = form_value(f, e.c, e.d);
    std::erase_if(candidates, [&](u64 p) { return v % p != 0; });
  }
  if (ball.size() == 0) return {};
  return candidates;
}

std::vector<TwoPathReport> two_path_check(const OrbitBall& ball, Form f, u64 p_max) {
  std::vector<TwoPathReport> out;
  const auto parts = constituents(f);
  for (u64 p : primes_up_to(p_max)) {
    if (p == 2 || form_info(f).normalizer % static_cast<int>(p) == 0) continue;
    TwoPathReport r{p};
    for (const auto& e : ball.elements) {
      const u64 c = mod_floor(e.c, p), d = mod_floor(e.d, p);
      if (form_mod(f, c, d, p) == 0) ++r.direct;
      for (Form g : parts) r.constituent += form_mod(g, c, d, p) == 0;
    }
    out.push_back(r);
  }
  return out;
}

Rational SieveSequence::a(const Integer& n) const {
  const i128 key = to_i128(n);
  const auto it = std::lower_bound(entries.begin(), entries.end(), key,
                                   [](const auto& e, i128 k) { return e.first < k; });
  if (it == entries.end() || it->first != key) return 0;
  return Rational(to_integer(it->second), to_integer(weight_denominator));
}

Rational SieveSequence::total_mass() const {
  i128 total = 0;
  for (const auto& e : entries) total += e.second;
  return Rational(to_integer(total), to_integer(weight_denominator));
}

SieveSequence build_sequence(const GeneratorSet& gens, double X, double Y, Form f, const EnumerationOptions& options,
                             u64 bad_prime_bound) {
  if (!(X >= 1.0) || !(Y >= 1.0)) throw std::invalid_argument("build_sequence: X and Y must be at least 1");
  SieveSequence seq{gens.label(), f, X, Y, bad_modulus_probe(gens, bad_prime_bound), {}, 1, 0};
  const SmoothingWindow window(X);
  // Slightly past 1.1 X so that rounding of the radius cannot drop a weighted element.
  const OrbitBall gammas = enumerate_ball(gens, 1.1 * X * (1.0 + 1e-12), options);
  const OrbitBall omegas = enumerate_ball(gens, Y, options);

  const Integer den = window.denominator();
  const Integer pairs = Integer(gammas.size()) * Integer(std::max<std::size_t>(omegas.size(), 1));
  if (den * pairs >= (Integer(1) << 125)) {
    throw BudgetExceeded("build_sequence: exact weights exceed 128 bits; choose X with a short binary expansion");
  }
  seq.weight_denominator = to_i128(den);
  seq.omega_count = omegas.size();

  std::unordered_map<i128, i128, I128Hash> mass;
  i128 weight_sum = 0;
  i128 max_abs = 0;
  for (const auto& g : gammas.elements) {
    const Integer num = window.numerator(g.sq_norm);
    if (num == 0) continue;
    const i128 w = to_i128(num);
    ++seq.gamma_count;
    weight_sum += w;
    for (const auto& o : omegas.elements) {
      const i128 c = static_cast<i128>(g.c) * o.a + static_cast<i128>(g.d) * o.c;
      const i128 d = static_cast<i128>(g.c) * o.b + static_cast<i128>(g.d) * o.d;
      const i128 n = form_value_128(f, c, d);
      mass[n] += w;
      max_abs = std::max(max_abs, abs128(n));
    }
  }
  seq.entries.assign(mass.begin(), mass.end());
  std::sort(seq.entries.begin(), seq.entries.end());
  seq.chi = Rational(to_integer(weight_sum) * Integer(omegas.size()), den);
  seq.max_abs_value = to_integer(max_abs);
  return seq;
}

CongruenceSum a_q(const SieveSequence& seq, u64 q) {
  check_good_modulus(seq, q);
  CongruenceSum out{q, Rational(to_integer(divisible_mass(seq, q)), to_integer(seq.weight_denominator)),
                    beta(seq.form, q) * seq.chi, 0};
  out.remainder = out.count - out.main;
  return out;
}

bool constituent_mass_check(const GeneratorSet& gens, const SieveSequence& seq, u64 q,
                            const EnumerationOptions& options) {
  const Rational direct = a_q(seq, q).count;
  Rational parts = 0;
  for (Form g : constituents(seq.form)) {
    if (g == seq.form) return true;
    parts += a_q(build_sequence(gens, seq.X, seq.Y, g, options), q).count;
  }
  return direct == parts;
}

DistributionProbe distribution_probe(const SieveSequence& seq, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("distribution_probe: alpha must lie in (0, 1/2)");
  DistributionProbe out{alpha, seq.max_abs_value, {}, 0, seq.chi};
  const double N = seq.max_abs_value.convert_to<double>();
  const double bound = N >= 1.0 ? std::pow(N, alpha) : 1.0;
  const auto excluded = excluded_primes(seq.form, seq.bad_primes);
  const u64 limit = static_cast<u64>(std::ceil(bound));
  for (u64 q : squarefree_up_to(limit)) {
    if (static_cast<double>(q) >= bound) break;
    if (std::any_of(excluded.begin(), excluded.end(), [q](u64 p) { return q % p == 0; })) continue;
    out.moduli.push_back(q);
    out.remainder_sum += abs(a_q(seq, q).remainder);
  }
  out.ratio = seq.chi == 0 ? 0.0 : to_double(out.remainder_sum / seq.chi);
  return out;
}

}  // namespace thinsieve
