#pragma once

// Factorization of form values over orbit balls, almost-prime census, and
// the weighted sieve sequence a(n) with its congruence sums |A_q|.

#include "thinsieve/gl2.hpp"
#include "thinsieve/modular.hpp"
#include "thinsieve/thin_groups.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace thinsieve {

struct Factorization {
  std::vector<Integer> primes;  // certified primes, nondecreasing, with multiplicity
  Integer cofactor = 1;         // unfactored remainder, 1 when complete
  bool complete = true;

  std::size_t omega() const { return primes.size(); }
};

/// Complete factorization of |n| for |n| < 2^64 (Miller-Rabin with a
/// deterministic base set and Pollard-Brent splitting). Larger inputs are
/// trial divided and then split while the remainder fits in 64 bits;
/// otherwise complete is false and the remainder is kept in cofactor.
/// Throws std::invalid_argument for n = 0.
Factorization factorize(const Integer& n);
std::vector<u64> factorize_u64(u64 n);

enum class ValueClass { Zero, Unit, Regular };

struct CensusRow {
  i64 c, d;
  Form form;
  Integer n;  // |f(c, d)|
  Factorization factors;
  ValueClass value_class;
  bool imprimitive;  // c and d both odd

  /// Omega(n) when n is regular and completely factored.
  std::optional<std::size_t> omega() const;
};

struct CensusSummary {
  Form form;
  int R;
  std::size_t rows = 0;
  std::size_t zeros = 0;
  std::size_t units = 0;
  std::size_t incomplete = 0;
  std::size_t imprimitive = 0;
  std::vector<std::size_t> at_most;  // at_most[r - 1] = #{regular rows with Omega <= r}, r = 1..R
};

struct Census {
  CensusSummary summary;
  std::vector<CensusRow> rows;  // ball order
};

CensusRow census_row(i64 c, i64 d, Form f);

/// Grades every element of the ball by the form value of its bottom row.
/// threads > 1 splits the factorization work; the result does not depend on it.
Census census(const OrbitBall& ball, Form f, int R, unsigned threads = 1);

/// CSV header and row: c,d,form,n,factors,omega,grade,imprimitive_flag.
void write_census_csv_header(std::ostream& out);
void write_census_csv_row(std::ostream& out, const CensusRow& row, int R);
std::string grade_label(const CensusRow& row, int R);

/// Primes p <= p_max dividing the normalized form value of every ball row:
/// local obstructions to primitivity of the orbit for f.
std::vector<u64> primitivity_failures(const OrbitBall& ball, Form f, u64 p_max);

struct TwoPathReport {
  u64 p;
  std::size_t direct = 0;       // rows with f = 0 (mod p), f the raw coordinate product
  std::size_t constituent = 0;  // sum over constituents of rows with that coordinate = 0 (mod p)
  bool match() const { return direct == constituent; }
};

/// For the area and product forms, compares at each odd prime p <= p_max
/// (skipping primes of the normalizer) the direct divisibility count with
/// the sum of the constituent counts. For coordinate forms both paths are
/// the same count.
std::vector<TwoPathReport> two_path_check(const OrbitBall& ball, Form f, u64 p_max);

/// The weighted multiset a(n) = sum over gamma, omega of Y_X(gamma)
/// [f(bottom row of gamma omega) = n], gamma ranging over Gamma with the
/// smoothed weight at scale X and omega over the hard ball of radius Y.
/// Weights are stored as integer numerators over weight_denominator.
struct SieveSequence {
  std::string group_label;
  Form form;
  double X, Y;
  std::vector<u64> bad_primes;
  std::vector<std::pair<i128, i128>> entries;  // (n, a(n) * weight_denominator), sorted by n
  i128 weight_denominator = 1;
  Rational chi;                                // |Omega_Y| * sum of weights
  std::size_t gamma_count = 0;                 // elements with nonzero weight
  std::size_t omega_count = 0;
  Integer max_abs_value = 0;

  Rational a(const Integer& n) const;
  Rational total_mass() const;  // sum of a(n)
};

/// Throws BudgetExceeded when the exact weights would not fit in 128 bits
/// (X^2 must have a short binary expansion).
SieveSequence build_sequence(const GeneratorSet& gens, double X, double Y, Form f,
                             const EnumerationOptions& options = {}, u64 bad_prime_bound = 50);

struct CongruenceSum {
  u64 q;
  Rational count;  // |A_q|
  Rational main;   // beta_f(q) chi
  Rational remainder;
};

/// |A_q| = sum of a(n) over q | n. Throws std::invalid_argument when q is
/// not squarefree or shares a prime with the excluded set of the form.
CongruenceSum a_q(const SieveSequence& seq, u64 q);

/// Two-path mass check for area and product: |A_q| computed from the form
/// value equals the sum of the constituent masses |A^x_q| + |A^y_q| (+ |A^z_q|)
/// at a good prime q.
bool constituent_mass_check(const GeneratorSet& gens, const SieveSequence& seq, u64 q,
                            const EnumerationOptions& options = {});

struct DistributionProbe {
  double alpha;
  Integer N;
  std::vector<u64> moduli;  // good squarefree q < N^alpha
  Rational remainder_sum;   // sum of |r(q)|
  Rational chi;
  double ratio = 0.0;
};

DistributionProbe distribution_probe(const SieveSequence& seq, double alpha);

}  // namespace thinsieve
