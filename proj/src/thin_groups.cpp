#include "thinsieve/thin_groups.hpp"

#include "thinsieve/modular.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace thinsieve {

GeneratorSet::GeneratorSet(std::string label, std::vector<UnimodularMatrix> generators)
    : label_(std::move(label)), generators_(std::move(generators)) {
  if (generators_.empty()) throw std::invalid_argument("GeneratorSet: no generators");
}

std::vector<UnimodularMatrix> GeneratorSet::symmetric() const {
  std::vector<UnimodularMatrix> out;
  auto push = [&out](const UnimodularMatrix& g) {
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  };
  for (const auto& g : generators_) push(g);
  for (const auto& g : generators_) push(g.inverse());
  return out;
}

GeneratorSet modular_group() {
  return {"modular", {UnimodularMatrix(1, 1, 0, 1), UnimodularMatrix(1, 0, 1, 1)}};
}

GeneratorSet schottky_group() {
  return {"schottky", {UnimodularMatrix(2, 3, 1, 2), UnimodularMatrix(3, 1, 5, 2)}};
}

GeneratorSet bundled_group(std::string_view name) {
  if (name == "modular") return modular_group();
  if (name == "schottky") return schottky_group();
  throw std::invalid_argument("unknown bundled group: " + std::string(name));
}

GeneratorSet parse_generator_set(std::istream& in, std::string default_label) {
  std::string label = std::move(default_label);
  std::vector<UnimodularMatrix> gens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line.substr(first));
    std::string head;
    ls >> head;
    if (head == "label") {
      std::string rest;
      std::getline(ls >> std::ws, rest);
      if (!rest.empty() && rest.back() == '\r') rest.pop_back();
      if (rest.empty()) throw std::invalid_argument("generator file: empty label on line " + std::to_string(line_no));
      label = rest;
      continue;
    }
    std::istringstream row(line.substr(first));
    Integer e[4];
    std::string tok;
    int n = 0;
    while (row >> tok) {
      if (n == 4) throw std::invalid_argument("generator file: more than four entries on line " + std::to_string(line_no));
      try {
        e[n++] = Integer(tok);
      } catch (const std::exception&) {
        throw std::invalid_argument("generator file: bad integer '" + tok + "' on line " + std::to_string(line_no));
      }
    }
    if (n != 4) throw std::invalid_argument("generator file: expected four integers on line " + std::to_string(line_no));
    gens.emplace_back(e[0], e[1], e[2], e[3]);
  }
  if (gens.empty()) throw std::invalid_argument("generator file: no matrices");
  return {label, std::move(gens)};
}

GeneratorSet load_generator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open generator file: " + path);
  return parse_generator_set(in);
}

void write_generator_set(std::ostream& out, const GeneratorSet& gens) {
  out << "label " << gens.label() << '\n';
  for (const auto& g : gens.generators()) {
    out << g.a() << ' ' << g.b() << ' ' << g.c() << ' ' << g.d() << '\n';
  }
}

ParabolicCertificate certify_no_parabolic(const GeneratorSet& gens, int max_length) {
  const auto& base = gens.generators();
  std::vector<UnimodularMatrix> letters;
  for (const auto& g : base) letters.push_back(g);
  for (const auto& g : base) letters.push_back(g.inverse());
  const std::size_t k = base.size();
  const auto inverse_letter = [k](std::size_t i) { return i < k ? i + k : i - k; };

  ParabolicCertificate cert;
  cert.max_length = max_length;
  struct Node {
    UnimodularMatrix word;
    std::size_t last;
  };
  std::vector<Node> frontier{{UnimodularMatrix::identity(), letters.size()}};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<Node> next;
    for (const auto& node : frontier) {
      for (std::size_t i = 0; i < letters.size(); ++i) {
        if (node.last < letters.size() && i == inverse_letter(node.last)) continue;
        UnimodularMatrix w = node.word * letters[i];
        ++cert.words_checked;
        const bool central = w.b() == 0 && w.c() == 0 && abs(w.a()) == 1;
        if (!central && abs(w.trace()) == 2) {
          cert.passed = false;
          cert.witness = w;
          return cert;
        }
        next.push_back({std::move(w), i});
      }
    }
    frontier = std::move(next);
  }
  return cert;
}

std::size_t OrbitBall::count_below(double t) const {
  const i64 bound = sq_norm_bound(t);
  const auto it = std::partition_point(elements.begin(), elements.end(),
                                       [bound](const BallElement& e) { return e.sq_norm <= bound; });
  return static_cast<std::size_t>(it - elements.begin());
}

bool OrbitBall::contains(const UnimodularMatrix& g) const {
  return std::any_of(elements.begin(), elements.end(), [&g](const BallElement& e) {
    return e.a == g.a() && e.b == g.b() && e.c == g.c() && e.d == g.d();
  });
}

i64 sq_norm_bound(double T) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("norm bound must be finite and nonnegative");
  const Rational t2 = to_rational(T) * to_rational(T);
  // largest integer strictly below t2
  Integer fl = boost::multiprecision::numerator(t2) / boost::multiprecision::denominator(t2);
  if (Rational(fl) == t2) fl -= 1;
  if (fl > Integer(std::numeric_limits<i64>::max() / 4)) throw std::invalid_argument("norm bound too large for 64-bit enumeration");
  return fl.convert_to<i64>();
}

namespace {

struct Key {
  i64 a, b, c, d;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    u64 h = 0x9E3779B97F4A7C15ULL;
    for (i64 v : {k.a, k.b, k.c, k.d}) {
      h ^= static_cast<u64>(v) + 0x9E3779B97F4A7C15ULL + (h << 6U) + (h >> 2U);
    }
    return static_cast<std::size_t>(h);
  }
};

i64 checked(i128 v) {
  if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min()) {
    throw std::overflow_error("ball enumeration: entry overflow");
  }
  return static_cast<i64>(v);
}

}  // namespace

namespace {

Key times(const Key& g, const Key& s) {
  return {checked(i128(g.a) * s.a + i128(g.b) * s.c), checked(i128(g.a) * s.b + i128(g.b) * s.d),
          checked(i128(g.c) * s.a + i128(g.d) * s.c), checked(i128(g.c) * s.b + i128(g.d) * s.d)};
}

i128 norm_of(const Key& h) { return i128(h.a) * h.a + i128(h.b) * h.b + i128(h.c) * h.c + i128(h.d) * h.d; }

struct Letters {
  std::vector<Key> keys;
  i64 max_norm = 0;
};

Letters letters_of(const GeneratorSet& gens) {
  Letters out;
  for (const auto& g : gens.symmetric()) {
    const Integer n = sq_norm(g);
    if (n > Integer(1) << 40) throw std::invalid_argument("enumerate_ball: generator entries too large");
    out.keys.push_back({g.a().convert_to<i64>(), g.b().convert_to<i64>(), g.c().convert_to<i64>(), g.d().convert_to<i64>()});
    out.max_norm = std::max(out.max_norm, n.convert_to<i64>());
  }
  return out;
}

[[noreturn]] void over_budget(std::size_t cap) {
  throw BudgetExceeded("enumerate_ball: element cap of " + std::to_string(cap) + " exceeded");
}

// Breadth-first search pruned at explore_bound; visits elements with norm <= bound.
template <class Visit>
std::size_t walk_breadth(const Letters& letters, i64 bound, i64 explore_bound, std::size_t cap, Visit&& visit) {
  std::unordered_map<Key, int, KeyHash> seen;
  std::deque<Key> queue;
  const Key id{1, 0, 0, 1};
  seen.emplace(id, 0);
  queue.push_back(id);
  while (!queue.empty()) {
    const Key g = queue.front();
    queue.pop_front();
    const int len = seen.at(g);
    for (const Key& s : letters.keys) {
      const Key h = times(g, s);
      if (norm_of(h) > explore_bound) continue;
      if (seen.emplace(h, len + 1).second) {
        if (seen.size() > cap) over_budget(cap);
        queue.push_back(h);
      }
    }
  }
  for (const auto& [k, len] : seen) {
    const i64 n = static_cast<i64>(norm_of(k));
    if (n <= bound) visit(k, n, len);
  }
  return seen.size();
}

// Tree walk along canonical parents. The parent of h is h s for the first
// letter s minimizing the norm, when that norm is strictly smaller; elements
// without a parent form the core, found by breadth-first search among the
// elements of norm below the largest generator norm.
template <class Visit>
std::size_t walk_descent(const Letters& letters, i64 bound, std::size_t cap, Visit&& visit) {
  std::vector<std::pair<Key, int>> stack;
  const i64 core_bound = std::min(bound, letters.max_norm - 1);
  walk_breadth(letters, core_bound, core_bound * letters.max_norm, cap, [&](const Key& k, i64 n, int len) {
    for (const Key& s : letters.keys) {
      if (norm_of(times(k, s)) < n) return;
    }
    stack.emplace_back(k, len);
  });
  std::sort(stack.begin(), stack.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first.a, x.first.b, x.first.c, x.first.d) < std::tie(y.first.a, y.first.b, y.first.c, y.first.d);
  });
  std::size_t visited = 0;
  while (!stack.empty()) {
    const auto [g, len] = stack.back();
    stack.pop_back();
    const i128 ng = norm_of(g);
    if (++visited > cap) over_budget(cap);
    visit(g, static_cast<i64>(ng), len);
    for (const Key& t : letters.keys) {
      const Key h = times(g, t);
      const i128 nh = norm_of(h);
      if (nh > bound || nh <= ng) continue;
      const Key* parent = nullptr;
      i128 best = nh;
      Key best_key{};
      for (const Key& s : letters.keys) {
        const Key c = times(h, s);
        const i128 nc = norm_of(c);
        if (nc < best) {
          best = nc;
          best_key = c;
          parent = &best_key;
        }
      }
      if (parent && *parent == g) stack.emplace_back(h, len + 1);
    }
  }
  return visited;
}

template <class Visit>
std::size_t walk(const GeneratorSet& gens, double T, const EnumerationOptions& options, Visit&& visit) {
  if (!(T >= 1.0)) throw std::invalid_argument("enumerate_ball: T must be >= 1");
  const Letters letters = letters_of(gens);
  const i64 bound = sq_norm_bound(T);
  if (options.walk == Walk::Descent) return walk_descent(letters, bound, options.element_cap, visit);
  const double slack = options.slack > 0.0 ? options.slack : static_cast<double>(letters.max_norm);
  const i64 explore_bound = sq_norm_bound(T * std::sqrt(std::max(1.0, slack)));
  return walk_breadth(letters, bound, explore_bound, options.element_cap, visit);
}

}  // namespace

OrbitBall enumerate_ball(const GeneratorSet& gens, double T, const EnumerationOptions& options) {
  OrbitBall ball;
  ball.radius = T;
  ball.explored = walk(gens, T, options, [&](const Key& k, i64 n, int len) {
    ball.elements.push_back({k.a, k.b, k.c, k.d, n, len});
  });
  std::sort(ball.elements.begin(), ball.elements.end(), [](const BallElement& x, const BallElement& y) {
    return std::tie(x.sq_norm, x.a, x.b, x.c, x.d) < std::tie(y.sq_norm, y.a, y.b, y.c, y.d);
  });
  return ball;
}

std::vector<i64> ball_norms(const GeneratorSet& gens, double T, const EnumerationOptions& options) {
  std::vector<i64> norms;
  walk(gens, T, options, [&](const Key&, i64 n, int) { norms.push_back(n); });
  std::sort(norms.begin(), norms.end());
  return norms;
}

SmoothingWindow::SmoothingWindow(double T) : radius_(T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("SmoothingWindow: T must be positive");
  const Rational t2 = to_rational(T) * to_rational(T);
  p_ = boost::multiprecision::numerator(t2);
  q_ = boost::multiprecision::denominator(t2);
  span_ = 40 * p_;
  denominator_ = span_ * span_ * span_;
}

Integer SmoothingWindow::numerator(i64 sq_norm) const {
  if (is_inner(sq_norm)) return denominator_;
  if (is_outer(sq_norm)) return 0;
  // u = (121 p - 100 s q) / (40 p); weight = 3u^2 - 2u^3
  const Integer u = 121 * p_ - 100 * Integer(sq_norm) * q_;
  return 3 * u * u * span_ - 2 * u * u * u;
}

Rational SmoothingWindow::weight(i64 sq_norm) const { return Rational(numerator(sq_norm), denominator_); }

double SmoothingWindow::weight_double(i64 sq_norm) const { return to_double(weight(sq_norm)); }

Rational smoothed_sum_exact(const OrbitBall& ball, double T) {
  if (ball.radius < 1.1 * T) throw std::invalid_argument("smoothed_sum: ball does not reach 1.1 T");
  const SmoothingWindow window(T);
  Integer inner = 0;
  Integer annulus = 0;
  for (const auto& e : ball.elements) {
    if (window.is_inner(e.sq_norm)) {
      ++inner;
    } else if (!window.is_outer(e.sq_norm)) {
      annulus += window.numerator(e.sq_norm);
    }
  }
  return Rational(inner) + Rational(annulus, window.denominator());
}

double smoothed_sum(const OrbitBall& ball, double T) { return to_double(smoothed_sum_exact(ball, T)); }

std::vector<double> geometric_grid(double t0, double t1, int n) {
  if (n < 2 || !(t0 > 0.0) || !(t1 > t0)) throw std::invalid_argument("geometric_grid: degenerate grid");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double ratio = std::log(t1 / t0) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = t0 * std::exp(ratio * i);
  grid.back() = t1;
  return grid;
}

GrowthEstimate fit_growth(const std::vector<std::pair<double, std::size_t>>& samples) {
  if (samples.size() < 4) throw std::invalid_argument("estimate_delta: need at least 4 grid points");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) throw std::invalid_argument("estimate_delta: grid must be strictly increasing");
  }
  double sx = 0, sy = 0;
  const double n = static_cast<double>(samples.size());
  for (const auto& [t, count] : samples) {
    if (count == 0) throw std::invalid_argument("estimate_delta: empty ball at T = " + std::to_string(t));
    sx += std::log(t);
    sy += std::log(static_cast<double>(count));
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [t, count] : samples) {
    const double dx = std::log(t) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(static_cast<double>(count)) - my);
  }
  if (sxx <= 0) throw std::invalid_argument("estimate_delta: degenerate grid");
  const double slope = sxy / sxx;
  double rss = 0;
  for (const auto& [t, count] : samples) {
    const double r = std::log(static_cast<double>(count)) - (my + slope * (std::log(t) - mx));
    rss += r * r;
  }
  GrowthEstimate est;
  est.delta = slope / 2.0;
  est.std_error = std::sqrt(rss / (n - 2) / sxx) / 2.0;
  est.samples = samples;
  return est;
}

GrowthEstimate estimate_delta(const GeneratorSet& gens, const std::vector<double>& T_grid,
                              const EnumerationOptions& options) {
  if (T_grid.size() < 4) throw std::invalid_argument("estimate_delta: need at least 4 grid points");
  const std::vector<i64> norms = ball_norms(gens, T_grid.back(), options);
  std::vector<std::pair<double, std::size_t>> samples;
  for (double t : T_grid) {
    const auto count = std::upper_bound(norms.begin(), norms.end(), sq_norm_bound(t)) - norms.begin();
    samples.emplace_back(t, static_cast<std::size_t>(count));
  }
  return fit_growth(samples);
}

double poincare_partial(const OrbitBall& ball, double s, double T) {
  if (!(s > 0.0)) throw std::invalid_argument("poincare_partial: s must be positive");
  if (T > ball.radius) throw std::invalid_argument("poincare_partial: T exceeds the enumerated radius");
  const i64 bound = sq_norm_bound(T);
  long double sum = 0;
  for (const auto& e : ball.elements) {
    if (e.sq_norm > bound) break;
    sum += std::pow(static_cast<long double>(e.sq_norm), -static_cast<long double>(s));
  }
  return static_cast<double>(sum);
}

double poincare_partial(const GeneratorSet& gens, double s, double T) {
  if (T < 1.0) return 0.0;
  return poincare_partial(enumerate_ball(gens, T), s, T);
}

std::map<u64, std::size_t> coset_counts(const GeneratorSet& gens, const OrbitBall& ball, double T, u64 q) {
  if (q == 0 || !is_squarefree(q)) throw std::invalid_argument("coset_counts: q must be squarefree");
  for (u64 p : distinct_prime_factors(q)) {
    if (!strong_approx_check(gens, p)) {
      throw std::invalid_argument("coset_counts: q shares the prime " + std::to_string(p) + " with the bad modulus");
    }
  }
  const i64 bound = sq_norm_bound(T);
  std::map<u64, std::size_t> counts;
  for (const auto& e : ball.elements) {
    if (e.sq_norm > bound) break;
    ++counts[q == 1 ? 0 : coset_label(mod_floor(e.c, q), mod_floor(e.d, q), q)];
  }
  return counts;
}

}  // namespace thinsieve
