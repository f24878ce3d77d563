#pragma once

// Finitely generated subgroups of SL(2, Z): generator sets, norm-ball
// enumeration, smoothed counts and critical-exponent estimates.

#include "thinsieve/gl2.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinsieve {

/// Generators of a subgroup of SL(2, Z). Inverses are adjoined by symmetric().
class GeneratorSet {
 public:
  GeneratorSet(std::string label, std::vector<UnimodularMatrix> generators);

  const std::string& label() const { return label_; }
  const std::vector<UnimodularMatrix>& generators() const { return generators_; }

  /// Generators followed by their inverses, duplicates removed, order kept.
  std::vector<UnimodularMatrix> symmetric() const;

 private:
  std::string label_;
  std::vector<UnimodularMatrix> generators_;
};

/// [[1,1],[0,1]] and [[1,0],[1,1]]; generates all of SL(2, Z).
GeneratorSet modular_group();

/// [[2,3],[1,2]] and [[3,1],[5,2]]: four pairwise disjoint isometric circles,
/// so the group is free, thin and purely hyperbolic.
GeneratorSet schottky_group();

/// "modular" or "schottky"; throws std::invalid_argument otherwise.
GeneratorSet bundled_group(std::string_view name);

/// Plain-text generator format: one "a b c d" matrix per line, "label <name>"
/// header line, '#' comments. Throws std::invalid_argument on malformed input.
GeneratorSet parse_generator_set(std::istream& in, std::string default_label = "custom");
GeneratorSet load_generator_file(const std::string& path);
void write_generator_set(std::ostream& out, const GeneratorSet& gens);

struct ParabolicCertificate {
  bool passed = true;
  int max_length = 0;
  std::size_t words_checked = 0;
  std::optional<UnimodularMatrix> witness;  // first word with |trace| = 2
};

/// Checks every freely reduced word of length <= max_length. Words equal to
/// +-I are central and skipped.
ParabolicCertificate certify_no_parabolic(const GeneratorSet& gens, int max_length);

/// Compact ball entry. Entries fit in 64 bits because sq_norm < T^2 <= 2^62.
struct BallElement {
  i64 a, b, c, d;
  i64 sq_norm;
  int word_length;

  UnimodularMatrix matrix() const { return {a, b, c, d}; }
  friend bool operator==(const BallElement&, const BallElement&) = default;
};

/// {g in Gamma : sq_norm(g) < T^2}, in canonical order (sq_norm, a, b, c, d).
struct OrbitBall {
  double radius = 0.0;
  std::vector<BallElement> elements;
  std::size_t explored = 0;  // elements visited, including any slack shell

  std::size_t size() const { return elements.size(); }
  /// Number of elements with sq_norm < t^2 for t <= radius.
  std::size_t count_below(double t) const;
  bool contains(const UnimodularMatrix& g) const;
};

enum class Walk {
  /// Breadth-first search over words with a slack shell; needs no hypothesis.
  Breadth,
  /// Tree walk along strictly norm-decreasing generator steps. Exact when
  /// every element outside a core of norm below the largest generator norm
  /// has a generator step lowering its norm (true for the modular group by
  /// reduction of binary quadratic forms, and for the bundled Schottky
  /// group). Memory is proportional to the output only.
  Descent,
};

struct EnumerationOptions {
  std::size_t element_cap = 10'000'000;
  /// Words may leave the ball by this factor on the squared norm before being
  /// pruned. 0 selects max_s sq_norm(s): no single generator step from a
  /// pruned word returns to the ball.
  double slack = 0.0;
  Walk walk = Walk::Breadth;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Breadth-first search over words. Throws BudgetExceeded when more than
/// element_cap elements would be visited, std::invalid_argument for T < 1
/// or T^2 beyond the 64-bit range.
OrbitBall enumerate_ball(const GeneratorSet& gens, double T, const EnumerationOptions& options = {});

/// Sorted squared norms of the ball elements; lighter than enumerate_ball.
std::vector<i64> ball_norms(const GeneratorSet& gens, double T, const EnumerationOptions& options = {});

/// Largest integer strictly below T^2, computed exactly.
i64 sq_norm_bound(double T);

/// The smoothed indicator on squared norms: 1 below (0.9T)^2, 0 above
/// (1.1T)^2, cubic smoothstep 3u^2 - 2u^3 in between. All weights share the
/// denominator returned by denominator().
class SmoothingWindow {
 public:
  explicit SmoothingWindow(double T);

  double radius() const { return radius_; }
  /// Exact weight numerator; weight = numerator / denominator().
  Integer numerator(i64 sq_norm) const;
  const Integer& denominator() const { return denominator_; }
  Rational weight(i64 sq_norm) const;
  double weight_double(i64 sq_norm) const;
  bool is_inner(i64 sq_norm) const { return Integer(sq_norm) * 100 * q_ <= 81 * p_; }
  bool is_outer(i64 sq_norm) const { return Integer(sq_norm) * 100 * q_ >= 121 * p_; }

 private:
  double radius_;
  Integer p_, q_;  // T^2 = p_ / q_
  Integer span_;   // 40 p_, the annulus width in units of 1/(100 q_)
  Integer denominator_;
};

/// Sum of the smoothed weights over the ball. The ball must reach 1.1T.
Rational smoothed_sum_exact(const OrbitBall& ball, double T);
double smoothed_sum(const OrbitBall& ball, double T);

struct GrowthEstimate {
  double delta = 0.0;
  double std_error = 0.0;
  std::vector<std::pair<double, std::size_t>> samples;  // (T, hard count)
};

/// n points from t0 to t1 in geometric progression.
std::vector<double> geometric_grid(double t0, double t1, int n);

/// Least-squares slope of log count against log T, halved.
GrowthEstimate fit_growth(const std::vector<std::pair<double, std::size_t>>& samples);
GrowthEstimate estimate_delta(const GeneratorSet& gens, const std::vector<double>& T_grid,
                              const EnumerationOptions& options = {});

/// Sum of sq_norm(g)^(-s) over the ball elements with sq_norm < T^2.
double poincare_partial(const OrbitBall& ball, double s, double T);
double poincare_partial(const GeneratorSet& gens, double s, double T);

/// Ball elements with sq_norm < T^2 grouped by the coset of the row
/// stabilizer mod q (labels from coset_label). Throws std::invalid_argument
/// if strong approximation fails at a prime factor of q.
std::map<u64, std::size_t> coset_counts(const GeneratorSet& gens, const OrbitBall& ball, double T, u64 q);

}  // namespace thinsieve
