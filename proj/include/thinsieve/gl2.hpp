#pragma once

// Exact SL(2, Z) arithmetic, the spin cover onto the orthogonal group of
// F = x^2 + y^2 - z^2, and the integer forms evaluated on orbit points.

#include "thinsieve/arith.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace thinsieve {

/// A determinant-one integer matrix [[a, b], [c, d]].
class UnimodularMatrix {
 public:
  /// Throws std::invalid_argument unless ad - bc = 1.
  UnimodularMatrix(Integer a, Integer b, Integer c, Integer d);

  static UnimodularMatrix identity();

  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& c() const { return c_; }
  const Integer& d() const { return d_; }

  UnimodularMatrix inverse() const;
  UnimodularMatrix transpose() const;
  Integer trace() const { return a_ + d_; }

  friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;

 private:
  struct Unchecked {};
  UnimodularMatrix(Unchecked, Integer a, Integer b, Integer c, Integer d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

  Integer a_, b_, c_, d_;

  friend UnimodularMatrix multiply(const UnimodularMatrix&, const UnimodularMatrix&);
};

UnimodularMatrix multiply(const UnimodularMatrix& g, const UnimodularMatrix& h);
inline UnimodularMatrix operator*(const UnimodularMatrix& g, const UnimodularMatrix& h) {
  return multiply(g, h);
}

/// a^2 + b^2 + c^2 + d^2, the squared Frobenius norm.
Integer sq_norm(const UnimodularMatrix& g);

std::ostream& operator<<(std::ostream& os, const UnimodularMatrix& g);

/// A point on the light cone x^2 + y^2 = z^2 with z >= 0.
class PythagoreanTriple {
 public:
  /// Throws std::invalid_argument if the triple is off the cone or z < 0.
  PythagoreanTriple(Integer x, Integer y, Integer z);

  const Integer& x() const { return x_; }
  const Integer& y() const { return y_; }
  const Integer& z() const { return z_; }

  friend bool operator==(const PythagoreanTriple&, const PythagoreanTriple&) = default;

 private:
  Integer x_, y_, z_;
};

/// (d^2 - c^2, 2cd, c^2 + d^2). The zero row is rejected.
PythagoreanTriple triple_from_row(const Integer& c, const Integer& d);

using RationalVector3 = std::array<Rational, 3>;

/// 3x3 rational matrix acting on row vectors.
struct RationalMatrix3 {
  std::array<std::array<Rational, 3>, 3> m;

  const Rational& operator()(int i, int j) const { return m[i][j]; }
  static RationalMatrix3 identity();
  RationalMatrix3 transpose() const;
  friend bool operator==(const RationalMatrix3&, const RationalMatrix3&) = default;
};

RationalMatrix3 operator*(const RationalMatrix3& lhs, const RationalMatrix3& rhs);
RationalVector3 operator*(const RationalVector3& row, const RationalMatrix3& m);

/// diag(1, 1, -1), the Gram matrix of F.
RationalMatrix3 form_gram();

/// True iff M^T diag(1,1,-1) M = diag(1,1,-1) exactly.
bool preserves_form(const RationalMatrix3& m);

/// Image of g under the spin double cover SL(2) -> SO_F.
RationalMatrix3 spin(const UnimodularMatrix& g);

/// Base point (1, 0, 1) on the cone; the image of the row (0, 1).
RationalVector3 cone_base_point();

enum class Form { X, Y, Z, Area, Product };

struct FormInfo {
  std::string_view name;
  int degree;          // degree in (c, d)
  int sieve_dimension; // number of irreducible factors
  int normalizer;      // divisor applied to the raw coordinate product
};

const FormInfo& form_info(Form f);
std::string_view to_string(Form f);
/// Accepts x, y, z, area, product (also xy, xyz); nullopt otherwise.
std::optional<Form> parse_form(std::string_view name);

/// The coordinate forms a composite form is built from: {x, y} for the
/// area, {x, y, z} for the product, the form itself otherwise.
std::vector<Form> constituents(Form f);

/// f evaluated on the triple of the row (c, d). Area and product divide by
/// 12 and 60; a non-exact division throws std::domain_error.
Integer form_value(Form f, const Integer& c, const Integer& d);

}  // namespace thinsieve
