#pragma once

// Threshold arithmetic for the sieve: the exponent system, the critical
// exponent threshold delta0, the Greaves level for the linear sieve and the
// Diamond-Halberstam-Richert optimization of m_{alpha,kappa}.

#include "thinsieve/gl2.hpp"

#include <array>
#include <optional>
#include <vector>

namespace thinsieve {

inline constexpr double kGreavesConstant = 0.103974;
inline constexpr double kDefaultTheta = 5.0 / 6.0;

/// Pinned sifting-limit constants beta_4 and beta_5; throws std::invalid_argument otherwise.
double dhr_beta(int kappa);

struct SieveSpec {
  Form form = Form::Z;
  int kappa = 1;
  int D = 2;
  double alpha = 0.0;
  double delta = 1.0;
  double theta = kDefaultTheta;
  double x = 1.0;
  double y = 0.0;
  double alpha0 = 0.0;
};

struct ExponentSystemReport {
  bool feasible = false;
  std::array<double, 5> slack{};  // right side minus left side; positive means satisfied
};

/// Evaluates
///   (1) D a0 < 2 (delta - theta) x     (2) D a0 > 0
///   (3) x (1 - delta) < a0             (4) x (1 - delta) < y (delta - theta)
///   (5) 8 D alpha + 4 y < (3 + 2 delta) x.
ExponentSystemReport exponent_system_check(const SieveSpec& spec);

/// Searches delta on a grid in (theta, delta_max] and places x and a0 in the
/// middle of their admissible windows (y = 1 - x). Returns the first
/// feasible point, or nothing.
std::optional<SieveSpec> find_feasible_point(int D, double alpha, double theta = kDefaultTheta,
                                             double delta_max = 1.0, int grid = 4000);

/// Positive root of 12 d^2 + 32 d - 8 D alpha - 39.
double delta0(int D, double alpha);

/// 1 / (4 - 0.103974).
double greaves_threshold();

/// (1/alpha)(1 + z - z/b) - 1 + (kappa + z) log(b/z) - kappa + z kappa / b with
/// b = beta_kappa. Throws std::domain_error unless 0 < zeta < beta_kappa.
double m_dhr(double alpha, int kappa, double zeta);

struct DhrOptimum {
  double zeta = 0.0;
  double m = 0.0;
  int R = 0;  // least integer strictly above m
};

/// Coarse 1000-point grid on (0, beta_kappa) refined by golden-section search.
DhrOptimum optimize_m(double alpha, int kappa);

/// True when m_dhr sampled on the 1000-point grid decreases then increases.
bool m_dhr_unimodal(double alpha, int kappa, int points = 1000);

/// Least alpha <= 1/2 with optimize_m(alpha, kappa).m < R, by bisection to
/// 1e-9. Throws std::domain_error when R is not attained at alpha = 1/2.
double alpha_min_for_R(int kappa, int R);

struct Theorem4Row {
  Form form;
  int R;
  int kappa;
  int D;
  double alpha;
  double delta0;
};

/// The hypotenuse, area and product rows (R = 4, 18, 26) with their alpha
/// and delta0.
std::vector<Theorem4Row> theorem4_table();

}  // namespace thinsieve
