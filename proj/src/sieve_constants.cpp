#include "thinsieve/sieve_constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thinsieve {

double dhr_beta(int kappa) {
  switch (kappa) {
    case 4: return 9.0722;
    case 5: return 11.5347;
    default: throw std::invalid_argument("dhr_beta: only kappa = 4 and 5 are tabulated");
  }
}

ExponentSystemReport exponent_system_check(const SieveSpec& s) {
  ExponentSystemReport r;
  const double D = s.D;
  r.slack[0] = 2.0 * (s.delta - s.theta) * s.x - D * s.alpha0;
  r.slack[1] = D * s.alpha0;
  r.slack[2] = s.alpha0 - s.x * (1.0 - s.delta);
  r.slack[3] = s.y * (s.delta - s.theta) - s.x * (1.0 - s.delta);
  r.slack[4] = (3.0 + 2.0 * s.delta) * s.x - (8.0 * D * s.alpha + 4.0 * s.y);
  r.feasible = std::all_of(r.slack.begin(), r.slack.end(), [](double v) { return v > 0.0; });
  return r;
}

std::optional<SieveSpec> find_feasible_point(int D, double alpha, double theta, double delta_max, int grid) {
  if (grid < 1 || !(delta_max > theta)) return std::nullopt;
  for (int i = grid; i >= 1; --i) {
    const double delta = theta + (delta_max - theta) * i / grid;
    // (5) with y = 1 - x bounds x from below, (4) from above.
    const double x_lo = (8.0 * D * alpha + 4.0) / (7.0 + 2.0 * delta);
    const double x_hi = std::min(1.0, (delta - theta) / (1.0 - theta));
    if (!(x_lo < x_hi)) continue;
    SieveSpec s;
    s.D = D;
    s.alpha = alpha;
    s.delta = delta;
    s.theta = theta;
    s.x = 0.5 * (x_lo + x_hi);
    s.y = 1.0 - s.x;
    const double a_lo = std::max(0.0, s.x * (1.0 - delta));
    const double a_hi = 2.0 * (delta - theta) * s.x / D;
    if (!(a_lo < a_hi)) continue;
    s.alpha0 = 0.5 * (a_lo + a_hi);
    if (exponent_system_check(s).feasible) return s;
  }
  return std::nullopt;
}

double delta0(int D, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("delta0: alpha must be positive");
  const double c = 8.0 * D * alpha + 39.0;
  return (-32.0 + std::sqrt(32.0 * 32.0 + 48.0 * c)) / 24.0;
}

double greaves_threshold() { return 1.0 / (4.0 - kGreavesConstant); }

double m_dhr(double alpha, int kappa, double zeta) {
  const double b = dhr_beta(kappa);
  if (!(zeta > 0.0 && zeta < b)) throw std::domain_error("m_dhr: zeta must lie in (0, beta_kappa)");
  if (!(alpha > 0.0)) throw std::domain_error("m_dhr: alpha must be positive");
  const double k = kappa;
  return (1.0 / alpha) * (1.0 + zeta - zeta / b) - 1.0 + (k + zeta) * std::log(b / zeta) - k + zeta * k / b;
}

namespace {

double grid_point(double b, int i, int points) { return b * (i + 0.5) / points; }

}  // namespace

DhrOptimum optimize_m(double alpha, int kappa) {
  const double b = dhr_beta(kappa);
  constexpr int points = 1000;
  int best = 0;
  double best_value = m_dhr(alpha, kappa, grid_point(b, 0, points));
  for (int i = 1; i < points; ++i) {
    const double v = m_dhr(alpha, kappa, grid_point(b, i, points));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = best == 0 ? b * 1e-12 : grid_point(b, best - 1, points);
  double hi = best == points - 1 ? b * (1.0 - 1e-12) : grid_point(b, best + 1, points);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = m_dhr(alpha, kappa, x1), f2 = m_dhr(alpha, kappa, x2);
  while (hi - lo > 1e-11) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = m_dhr(alpha, kappa, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = m_dhr(alpha, kappa, x2);
    }
  }
  DhrOptimum out;
  out.zeta = 0.5 * (lo + hi);
  out.m = std::min(m_dhr(alpha, kappa, out.zeta), best_value);
  out.R = static_cast<int>(std::floor(out.m)) + 1;
  return out;
}

bool m_dhr_unimodal(double alpha, int kappa, int points) {
  const double b = dhr_beta(kappa);
  bool rising = false;
  double prev = m_dhr(alpha, kappa, grid_point(b, 0, points));
  for (int i = 1; i < points; ++i) {
    const double v = m_dhr(alpha, kappa, grid_point(b, i, points));
    if (v > prev) {
      rising = true;
    } else if (rising && v < prev) {
      return false;
    }
    prev = v;
  }
  return true;
}

double alpha_min_for_R(int kappa, int R) {
  double hi = 0.5;
  if (!(optimize_m(hi, kappa).m < R)) throw std::domain_error("alpha_min_for_R: R is not attainable for alpha <= 1/2");
  double lo = 1e-3;
  if (optimize_m(lo, kappa).m < R) return lo;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (optimize_m(mid, kappa).m < R ? hi : lo) = mid;
  }
  return hi;
}

std::vector<Theorem4Row> theorem4_table() {
  std::vector<Theorem4Row> rows;
  const double a_z = greaves_threshold();
  rows.push_back({Form::Z, 4, 1, 2, a_z, delta0(2, a_z)});
  const double a_area = alpha_min_for_R(4, 18);
  rows.push_back({Form::Area, 18, 4, 4, a_area, delta0(4, a_area)});
  const double a_prod = alpha_min_for_R(5, 26);
  rows.push_back({Form::Product, 26, 5, 6, a_prod, delta0(6, a_prod)});
  return rows;
}

}  // namespace thinsieve
