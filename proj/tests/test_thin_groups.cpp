#include "thinsieve/modular.hpp"
#include "thinsieve/thin_groups.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <set>
#include <sstream>

using namespace thinsieve;

namespace {

using Quad = std::array<i64, 4>;

std::set<Quad> as_set(const OrbitBall& ball) {
  std::set<Quad> out;
  for (const auto& e : ball.elements) out.insert({e.a, e.b, e.c, e.d});
  return out;
}

// Every determinant-one matrix with squared norm below T^2, by scanning a box.
std::set<Quad> box_scan(int T) {
  std::set<Quad> out;
  for (i64 a = -T; a <= T; ++a)
    for (i64 b = -T; b <= T; ++b)
      for (i64 c = -T; c <= T; ++c)
        for (i64 d = -T; d <= T; ++d)
          if (a * d - b * c == 1 && a * a + b * b + c * c + d * d < T * T) out.insert({a, b, c, d});
  return out;
}

Quad mul(const Quad& x, const Quad& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

i64 norm(const Quad& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]; }

}  // namespace

TEST_CASE("modular ball matches a box scan") {
  for (int T : {3, 6, 10}) {
    const OrbitBall ball = enumerate_ball(modular_group(), T);
    CHECK(as_set(ball) == box_scan(T));
    CHECK(ball.size() == box_scan(T).size());
  }
}

TEST_CASE("small balls") {
  const OrbitBall modular = enumerate_ball(modular_group(), 1.5);
  CHECK(modular.size() == 4);  // +-I and +-[[0,-1],[1,0]]
  CHECK(modular.contains(UnimodularMatrix(-1, 0, 0, -1)));
  const OrbitBall schottky = enumerate_ball(schottky_group(), 1.5);
  CHECK(schottky.size() == 1);
  CHECK(schottky.contains(UnimodularMatrix::identity()));
  CHECK_THROWS_AS(enumerate_ball(modular_group(), 0.5), std::invalid_argument);
}

TEST_CASE("Schottky ball matches unpruned reduced words") {
  const double T = 60.0;
  const auto letters = schottky_group().symmetric();
  REQUIRE(letters.size() == 4);
  std::vector<Quad> q;
  for (const auto& g : letters) {
    q.push_back({g.a().convert_to<i64>(), g.b().convert_to<i64>(), g.c().convert_to<i64>(), g.d().convert_to<i64>()});
  }
  // letters are ordered generators then inverses: i and i + 2 cancel
  std::set<Quad> words{{1, 0, 0, 1}};
  std::vector<std::pair<Quad, int>> frontier{{{1, 0, 0, 1}, -1}};
  i64 min_norm_last = 0;
  for (int length = 1; length <= 8; ++length) {
    std::vector<std::pair<Quad, int>> next;
    min_norm_last = INT64_MAX;
    for (const auto& [w, last] : frontier) {
      for (int s = 0; s < 4; ++s) {
        if (last >= 0 && s == (last + 2) % 4) continue;
        const Quad v = mul(w, q[s]);
        next.push_back({v, s});
        min_norm_last = std::min(min_norm_last, norm(v));
        if (norm(v) < T * T) words.insert(v);
      }
    }
    frontier = std::move(next);
  }
  CHECK(min_norm_last > T * T);  // longer words cannot re-enter the ball
  CHECK(as_set(enumerate_ball(schottky_group(), T)) == words);
}

TEST_CASE("ball is independent of generator order") {
  const auto g = schottky_group().generators();
  const GeneratorSet swapped("swapped", {g[1], g[0]});
  CHECK(as_set(enumerate_ball(swapped, 200)) == as_set(enumerate_ball(schottky_group(), 200)));
  CHECK(enumerate_ball(swapped, 200).elements == enumerate_ball(schottky_group(), 200).elements);
}

TEST_CASE("count_below agrees with re-enumeration") {
  const OrbitBall ball = enumerate_ball(modular_group(), 40);
  for (double t : {5.0, 12.5, 20.0, 33.3}) CHECK(ball.count_below(t) == enumerate_ball(modular_group(), t).size());
  CHECK(sq_norm_bound(10.0) == 99);
  CHECK(sq_norm_bound(1.4142135) == 1);
  CHECK(sq_norm_bound(std::sqrt(2.0)) == 2);  // the double lies just above sqrt 2
}

TEST_CASE("descent walk agrees with breadth search") {
  EnumerationOptions descent;
  descent.walk = Walk::Descent;
  for (int T : {3, 6, 10}) CHECK(as_set(enumerate_ball(modular_group(), T, descent)) == box_scan(T));
  for (const auto& gens : {modular_group(), schottky_group()}) {
    for (double T : {1.5, 40.0, 250.0}) {
      const OrbitBall a = enumerate_ball(gens, T);
      const OrbitBall b = enumerate_ball(gens, T, descent);
      CHECK(as_set(a) == as_set(b));
      CHECK(b.explored == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.elements[i].word_length <= b.elements[i].word_length);
    }
    std::vector<i64> norms;
    for (const auto& e : enumerate_ball(gens, 250).elements) norms.push_back(e.sq_norm);
    CHECK(ball_norms(gens, 250, descent) == norms);
    CHECK(ball_norms(gens, 250) == norms);
  }
  descent.element_cap = 1000;
  CHECK_THROWS_AS(enumerate_ball(modular_group(), 300, descent), BudgetExceeded);
}

TEST_CASE("budget is enforced") {
  CHECK_THROWS_AS(enumerate_ball(modular_group(), 300, {1000, 0.0}), BudgetExceeded);
}

TEST_CASE("generator file format") {
  std::istringstream good("# comment\nlabel my group\n2 3 1 2\n  3 1 5 2\n\n");
  const GeneratorSet g = parse_generator_set(good);
  CHECK(g.label() == "my group");
  CHECK(g.generators().size() == 2);
  std::ostringstream out;
  write_generator_set(out, g);
  std::istringstream back(out.str());
  const GeneratorSet h = parse_generator_set(back);
  CHECK(h.label() == g.label());
  CHECK(h.generators() == g.generators());

  for (const char* bad : {"1 2 3\n", "1 2 3 4\n", "1 1 0 1 5\n", "a 1 0 1\n", "# only comments\n", "label\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_generator_set(in), std::invalid_argument);
  }
  CHECK_THROWS_AS(load_generator_file("/nonexistent/gens.txt"), std::invalid_argument);
  CHECK_THROWS_AS(bundled_group("apollonian"), std::invalid_argument);
}

TEST_CASE("parabolic certificate") {
  const auto modular = certify_no_parabolic(modular_group(), 3);
  CHECK_FALSE(modular.passed);
  REQUIRE(modular.witness.has_value());
  CHECK(abs(modular.witness->trace()) == 2);
  const auto schottky = certify_no_parabolic(schottky_group(), 8);
  CHECK(schottky.passed);
  CHECK(schottky.words_checked > 4000);
}

TEST_CASE("smoothing weights") {
  const SmoothingWindow w(40.0);
  CHECK(w.weight(100) == 1);
  CHECK(w.weight(1296) == 1);  // (0.9 T)^2
  CHECK(w.weight(1936) == 0);  // (1.1 T)^2
  CHECK(w.weight(1616) == Rational(1, 2));
  Rational prev = 1;
  for (i64 s = 1200; s <= 2000; s += 7) {
    const Rational v = w.weight(s);
    CHECK(v <= prev);
    CHECK(v >= 0);
    CHECK(std::abs(w.weight_double(s) - to_double(v)) < 1e-15);
    prev = v;
  }
  // Smoothstep oracle on the squared norm.
  for (i64 s = 1297; s < 1936; s += 13) {
    const double u = (1936.0 - s) / 640.0;
    CHECK(std::abs(to_double(w.weight(s)) - (3 * u * u - 2 * u * u * u)) < 1e-12);
  }
  const OrbitBall ball = enumerate_ball(modular_group(), 44.0);
  const Rational total = smoothed_sum_exact(ball, 40.0);
  CHECK(total > Rational(ball.count_below(36.0)));
  CHECK(total < Rational(ball.count_below(44.0)));
  CHECK_THROWS_AS(smoothed_sum_exact(ball, 41.0), std::invalid_argument);
}

TEST_CASE("growth fit recovers a synthetic exponent") {
  std::vector<std::pair<double, std::size_t>> samples;
  for (double t : geometric_grid(10, 1000, 6)) samples.emplace_back(t, static_cast<std::size_t>(3.0 * std::pow(t, 1.6)));
  const GrowthEstimate e = fit_growth(samples);
  CHECK(e.delta == doctest::Approx(0.8).epsilon(1e-3));
  CHECK_THROWS_AS(fit_growth({{1.0, 1}, {2.0, 2}}), std::invalid_argument);
  const auto grid = geometric_grid(2, 32, 5);
  CHECK(grid.front() == doctest::Approx(2));
  CHECK(grid[2] == doctest::Approx(8));
}

TEST_CASE("Poincare partial sums") {
  const OrbitBall ball = enumerate_ball(modular_group(), 30);
  double oracle = 0;
  for (const auto& e : ball.elements) oracle += std::pow(static_cast<double>(e.sq_norm), -1.5);
  CHECK(poincare_partial(ball, 1.5, 30) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(poincare_partial(ball, 1.0, 20) < poincare_partial(ball, 1.0, 30));
}

TEST_CASE("coset counts partition the ball") {
  const OrbitBall ball = enumerate_ball(modular_group(), 60);
  for (u64 q : {1ULL, 5ULL, 7ULL, 35ULL}) {
    const auto counts = coset_counts(modular_group(), ball, 60, q);
    std::size_t total = 0;
    for (const auto& [label, n] : counts) {
      CHECK(label < eta(q));
      total += n;
    }
    CHECK(total == ball.size());
    CHECK(counts.size() == eta(q));
  }
}
