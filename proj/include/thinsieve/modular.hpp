#pragma once

// Reduction of subgroups of SL(2, Z) modulo squarefree q: projected images,
// strong approximation probes, the cosets of the row stabilizer and the
// local densities of the coordinate forms.

#include "thinsieve/gl2.hpp"
#include "thinsieve/thin_groups.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace thinsieve {

/// A matrix over Z/qZ with determinant 1, q squarefree.
struct ResidueElement {
  u64 q;
  u64 a, b, c, d;

  /// Validates q squarefree and ad - bc = 1 (mod q); throws std::invalid_argument.
  static ResidueElement make(u64 q, u64 a, u64 b, u64 c, u64 d);
  static ResidueElement reduce(const UnimodularMatrix& g, u64 q);
  static ResidueElement identity(u64 q);

  ResidueElement operator*(const ResidueElement& rhs) const;
  friend bool operator==(const ResidueElement&, const ResidueElement&) = default;
  friend auto operator<=>(const ResidueElement&, const ResidueElement&) = default;
};

/// |SL(2, Z/qZ)| = q^3 prod_{p | q} (1 - p^-2).
u64 sl2_order(u64 q);

/// Closure of the reduced generators under multiplication, sorted.
/// Throws BudgetExceeded past element_cap.
std::vector<ResidueElement> project_group(const GeneratorSet& gens, u64 q,
                                          std::size_t element_cap = 50'000'000);

/// True iff the image mod p is all of SL(2, Z/pZ).
bool strong_approx_check(const GeneratorSet& gens, u64 p);

/// Primes up to p_max where the projection is not surjective; 2 always included.
std::vector<u64> bad_modulus_probe(const GeneratorSet& gens, u64 p_max);

/// eta(q) = prod_{p | q} (p + 1), the index of the row stabilizer.
u64 eta(u64 q);

/// Coset label of a bottom row mod q: mixed-radix combination over the
/// prime factors of q (increasing) of the per-prime labels, where (c : d)
/// gets 0 if c = 0 (mod p) and 1 + d c^-1 otherwise. Throws if the row
/// vanishes mod some p | q.
u64 coset_label(u64 c, u64 d, u64 q);

/// Per-prime labels of a row mod q, one per prime factor (increasing).
std::vector<u64> coset_label_components(u64 c, u64 d, u64 q);

struct CosetTable {
  u64 q;
  std::vector<std::pair<u64, u64>> representatives;  // bottom rows mod q, indexed by label
  u64 index;                                          // eta(q)
};

/// Representatives {(0,1)} u {(1,d)} per prime, combined by CRT.
CosetTable coset_table(u64 q);

struct DensityReport {
  Form form;
  u64 p;
  u64 zero_reps;   // representatives on which the form vanishes mod p
  Rational measured;
  Rational predicted;
  bool match;
};

/// Local density of f at an odd prime from the p + 1 coset representatives.
/// For area and product the vanishing of the coordinate product is counted;
/// p must not divide the normalizer (3 for the area, 3 and 5 for the product).
DensityReport local_density(Form f, u64 p);

/// The predicted density beta_f(p): 2/(p+1) for x and y, 2/(p+1) for z when
/// p = 1 (mod 4) and 0 otherwise; sums of these for area and product.
Rational predicted_density(Form f, u64 p);

/// beta_f(q) = prod_{p | q} beta_f(p); beta(1) = 1.
Rational beta(Form f, u64 q);

/// Primes that cannot enter the sieve for this form: the group's bad
/// primes plus the primes dividing the normalizer.
std::vector<u64> excluded_primes(Form f, const std::vector<u64>& bad_primes);

}  // namespace thinsieve
