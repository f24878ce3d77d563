#include "thinsieve/gl2.hpp"

#include <stdexcept>

namespace thinsieve {

UnimodularMatrix::UnimodularMatrix(Integer a, Integer b, Integer c, Integer d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_ * d_ - b_ * c_ != 1) {
    throw std::invalid_argument("UnimodularMatrix: determinant is not 1");
  }
}

UnimodularMatrix UnimodularMatrix::identity() { return {Unchecked{}, 1, 0, 0, 1}; }

UnimodularMatrix UnimodularMatrix::inverse() const { return {Unchecked{}, d_, -b_, -c_, a_}; }

UnimodularMatrix UnimodularMatrix::transpose() const { return {Unchecked{}, a_, c_, b_, d_}; }

UnimodularMatrix multiply(const UnimodularMatrix& g, const UnimodularMatrix& h) {
  return {UnimodularMatrix::Unchecked{}, g.a_ * h.a_ + g.b_ * h.c_, g.a_ * h.b_ + g.b_ * h.d_,
          g.c_ * h.a_ + g.d_ * h.c_, g.c_ * h.b_ + g.d_ * h.d_};
}

Integer sq_norm(const UnimodularMatrix& g) {
  return g.a() * g.a() + g.b() * g.b() + g.c() * g.c() + g.d() * g.d();
}

std::ostream& operator<<(std::ostream& os, const UnimodularMatrix& g) {
  return os << "[[" << g.a() << ", " << g.b() << "], [" << g.c() << ", " << g.d() << "]]";
}

PythagoreanTriple::PythagoreanTriple(Integer x, Integer y, Integer z)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  if (z_ < 0) throw std::invalid_argument("PythagoreanTriple: negative hypotenuse");
  if (x_ * x_ + y_ * y_ != z_ * z_) {
    throw std::invalid_argument("PythagoreanTriple: x^2 + y^2 != z^2");
  }
}

PythagoreanTriple triple_from_row(const Integer& c, const Integer& d) {
  if (c == 0 && d == 0) throw std::invalid_argument("triple_from_row: zero row");
  return {d * d - c * c, 2 * c * d, c * c + d * d};
}

RationalMatrix3 RationalMatrix3::identity() {
  RationalMatrix3 r{};
  for (int i = 0; i < 3; ++i) r.m[i][i] = 1;
  return r;
}

RationalMatrix3 RationalMatrix3::transpose() const {
  RationalMatrix3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
  return r;
}

RationalMatrix3 operator*(const RationalMatrix3& lhs, const RationalMatrix3& rhs) {
  RationalMatrix3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r.m[i][j] += lhs.m[i][k] * rhs.m[k][j];
  return r;
}

RationalVector3 operator*(const RationalVector3& row, const RationalMatrix3& m) {
  RationalVector3 r{};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) r[j] += row[k] * m.m[k][j];
  return r;
}

RationalMatrix3 form_gram() {
  RationalMatrix3 g = RationalMatrix3::identity();
  g.m[2][2] = -1;
  return g;
}

bool preserves_form(const RationalMatrix3& m) {
  return m.transpose() * form_gram() * m == form_gram();
}

RationalMatrix3 spin(const UnimodularMatrix& g) {
  const Rational a(g.a()), b(g.b()), c(g.c()), d(g.d());
  const Rational half(1, 2);
  RationalMatrix3 r{};
  r.m[0] = {half * (a * a - b * b - c * c + d * d), c * d - a * b,
            half * (-a * a - b * b + c * c + d * d)};
  r.m[1] = {b * d - a * c, b * c + a * d, a * c + b * d};
  r.m[2] = {half * (-a * a + b * b - c * c + d * d), a * b + c * d,
            half * (a * a + b * b + c * c + d * d)};
  return r;
}

RationalVector3 cone_base_point() { return {Rational(1), Rational(0), Rational(1)}; }

namespace {

constexpr FormInfo kForms[] = {
    {"x", 2, 1, 1}, {"y", 2, 1, 1}, {"z", 2, 1, 1}, {"area", 4, 4, 12}, {"product", 6, 5, 60},
};

}  // namespace

const FormInfo& form_info(Form f) { return kForms[static_cast<int>(f)]; }

std::string_view to_string(Form f) { return form_info(f).name; }

std::optional<Form> parse_form(std::string_view name) {
  if (name == "x" || name == "X") return Form::X;
  if (name == "y" || name == "Y") return Form::Y;
  if (name == "z" || name == "Z" || name == "hypotenuse") return Form::Z;
  if (name == "area" || name == "xy") return Form::Area;
  if (name == "product" || name == "xyz") return Form::Product;
  return std::nullopt;
}

std::vector<Form> constituents(Form f) {
  switch (f) {
    case Form::Area: return {Form::X, Form::Y};
    case Form::Product: return {Form::X, Form::Y, Form::Z};
    default: return {f};
  }
}

Integer form_value(Form f, const Integer& c, const Integer& d) {
  const Integer x = d * d - c * c;
  const Integer y = 2 * c * d;
  const Integer z = c * c + d * d;
  Integer raw;
  switch (f) {
    case Form::X: return x;
    case Form::Y: return y;
    case Form::Z: return z;
    case Form::Area: raw = x * y; break;
    case Form::Product: raw = x * y * z; break;
  }
  const int n = form_info(f).normalizer;
  if (raw % n != 0) throw std::domain_error("form_value: normalizer does not divide the form");
  return raw / n;
}

}  // namespace thinsieve
