#include "thinsieve/modular.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace thinsieve {

ResidueElement ResidueElement::make(u64 q, u64 a, u64 b, u64 c, u64 d) {
  if (q < 1 || !is_squarefree(q)) throw std::invalid_argument("ResidueElement: modulus must be squarefree");
  ResidueElement e{q, a % q, b % q, c % q, d % q};
  if ((mulmod(e.a, e.d, q) + q - mulmod(e.b, e.c, q)) % q != 1 % q) {
    throw std::invalid_argument("ResidueElement: determinant is not 1 mod q");
  }
  return e;
}

ResidueElement ResidueElement::reduce(const UnimodularMatrix& g, u64 q) {
  return make(q, mod_floor(g.a(), q), mod_floor(g.b(), q), mod_floor(g.c(), q), mod_floor(g.d(), q));
}

ResidueElement ResidueElement::identity(u64 q) { return make(q, 1, 0, 0, 1); }

ResidueElement ResidueElement::operator*(const ResidueElement& r) const {
  if (q != r.q) throw std::invalid_argument("ResidueElement: moduli differ");
  return {q, (mulmod(a, r.a, q) + mulmod(b, r.c, q)) % q, (mulmod(a, r.b, q) + mulmod(b, r.d, q)) % q,
          (mulmod(c, r.a, q) + mulmod(d, r.c, q)) % q, (mulmod(c, r.b, q) + mulmod(d, r.d, q)) % q};
}

u64 sl2_order(u64 q) {
  u64 order = q * q * q;
  for (u64 p : distinct_prime_factors(q)) order = order / (p * p) * (p * p - 1);
  return order;
}

std::vector<ResidueElement> project_group(const GeneratorSet& gens, u64 q, std::size_t element_cap) {
  if (q < 2 || !is_squarefree(q)) throw std::invalid_argument("project_group: q must be squarefree and >= 2");
  if (q >= (1U << 16)) throw std::invalid_argument("project_group: modulus too large");
  std::vector<ResidueElement> letters;
  for (const auto& g : gens.symmetric()) letters.push_back(ResidueElement::reduce(g, q));
  const auto key = [q](const ResidueElement& e) { return ((e.a * q + e.b) * q + e.c) * q + e.d; };

  std::vector<ResidueElement> elements{ResidueElement::identity(q)};
  std::unordered_set<u64> seen{key(elements.front())};
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& s : letters) {
      const ResidueElement h = elements[i] * s;
      if (seen.insert(key(h)).second) {
        if (seen.size() > element_cap) throw BudgetExceeded("project_group: element cap exceeded");
        elements.push_back(h);
      }
    }
  }
  std::sort(elements.begin(), elements.end());
  return elements;
}

bool strong_approx_check(const GeneratorSet& gens, u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("strong_approx_check: p must be prime");
  return project_group(gens, p).size() == sl2_order(p);
}

std::vector<u64> bad_modulus_probe(const GeneratorSet& gens, u64 p_max) {
  std::vector<u64> bad{2};
  for (u64 p : primes_up_to(p_max)) {
    if (p != 2 && !strong_approx_check(gens, p)) bad.push_back(p);
  }
  return bad;
}

u64 eta(u64 q) {
  if (q == 0 || !is_squarefree(q)) throw std::invalid_argument("eta: q must be squarefree");
  u64 r = 1;
  for (u64 p : distinct_prime_factors(q)) r *= p + 1;
  return r;
}

std::vector<u64> coset_label_components(u64 c, u64 d, u64 q) {
  if (q == 0 || !is_squarefree(q)) throw std::invalid_argument("coset_label: q must be squarefree");
  std::vector<u64> labels;
  for (u64 p : distinct_prime_factors(q)) {
    const u64 cp = c % p, dp = d % p;
    if (cp == 0) {
      if (dp == 0) throw std::invalid_argument("coset_label: row vanishes mod " + std::to_string(p));
      labels.push_back(0);
    } else {
      labels.push_back(1 + mulmod(dp, inverse_mod(cp, p), p));
    }
  }
  return labels;
}

u64 coset_label(u64 c, u64 d, u64 q) {
  const auto primes = distinct_prime_factors(q);
  const auto parts = coset_label_components(c, d, q);
  u64 label = 0, radix = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    label += parts[i] * radix;
    radix *= primes[i] + 1;
  }
  return label;
}

CosetTable coset_table(u64 q) {
  if (q == 0 || !is_squarefree(q)) throw std::invalid_argument("coset_table: q must be squarefree");
  const auto primes = distinct_prime_factors(q);
  CosetTable table{q, {}, eta(q)};
  table.representatives.reserve(table.index);
  for (u64 label = 0; label < table.index; ++label) {
    u64 rest = label, c = 0, d = 0, m = 1;
    for (u64 p : primes) {
      const u64 part = rest % (p + 1);
      rest /= p + 1;
      const u64 cp = part == 0 ? 0 : 1;
      const u64 dp = part == 0 ? 1 : part - 1;
      c = crt_pair(c, m, cp, p);
      d = crt_pair(d, m, dp, p);
      m *= p;
    }
    if (q == 1) {
      c = 0;
      d = 1;
    }
    table.representatives.emplace_back(c, d);
  }
  return table;
}

Rational predicted_density(Form f, u64 p) {
  switch (f) {
    case Form::X:
    case Form::Y: return Rational(2, p + 1);
    case Form::Z: return p % 4 == 1 ? Rational(2, p + 1) : Rational(0);
    case Form::Area: return predicted_density(Form::X, p) + predicted_density(Form::Y, p);
    case Form::Product:
      return predicted_density(Form::X, p) + predicted_density(Form::Y, p) + predicted_density(Form::Z, p);
  }
  return 0;
}

DensityReport local_density(Form f, u64 p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("local_density: p must be an odd prime");
  if (form_info(f).normalizer % static_cast<int>(p) == 0) {
    throw std::invalid_argument("local_density: p divides the form's normalizer");
  }
  u64 zeros = 0;
  for (const auto& [c, d] : coset_table(p).representatives) {
    const u64 x = (mulmod(d, d, p) + p - mulmod(c, c, p)) % p;
    const u64 y = mulmod(2 * c % p, d, p);
    const u64 z = (mulmod(c, c, p) + mulmod(d, d, p)) % p;
    u64 value = 0;
    switch (f) {
      case Form::X: value = x; break;
      case Form::Y: value = y; break;
      case Form::Z: value = z; break;
      case Form::Area: value = mulmod(x, y, p); break;
      case Form::Product: value = mulmod(mulmod(x, y, p), z, p); break;
    }
    if (value == 0) ++zeros;
  }
  DensityReport r{f, p, zeros, Rational(zeros, p + 1), predicted_density(f, p), false};
  r.match = r.measured == r.predicted;
  return r;
}

Rational beta(Form f, u64 q) {
  if (q == 0 || !is_squarefree(q)) throw std::invalid_argument("beta: q must be squarefree");
  Rational r = 1;
  for (u64 p : distinct_prime_factors(q)) r *= predicted_density(f, p);
  return r;
}

std::vector<u64> excluded_primes(Form f, const std::vector<u64>& bad_primes) {
  std::vector<u64> out = bad_primes;
  for (u64 p : distinct_prime_factors(static_cast<u64>(form_info(f).normalizer))) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace thinsieve
