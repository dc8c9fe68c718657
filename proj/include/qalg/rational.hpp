#ifndef QALG_RATIONAL_HPP
#define QALG_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <stdexcept>
#include <string>

namespace qalg {

/// Exact arbitrary-precision rational. All arithmetic in the engine is exact;
/// there is no floating point anywhere on a distance path.
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by parsers; carries a 1-based line number when one is known.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_ = 0;
};

Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

/// A rational constrained to [0,1]: the value type of every distance and
/// every epsilon in a quantitative equation. Stored in lowest terms
/// (boost normalizes), equality is exact.
class UnitValue {
public:
  UnitValue() : q_(0) {}
  UnitValue(const Rational& q) : q_(q) { check(q_); }
  UnitValue(int num, int den) : q_(Rational(num, den)) { check(q_); }

  static UnitValue zero() { return UnitValue(); }
  static UnitValue one() { return UnitValue(Rational(1)); }

  static UnitValue parse(const std::string& text) {
    return UnitValue(parse_rational(text));
  }

  const Rational& value() const { return q_; }
  bool is_zero() const { return q_ == 0; }
  bool is_one() const { return q_ == 1; }

  /// Addition clamped at 1; the form the triangle-rule relaxation needs.
  UnitValue plus_clamped(const UnitValue& other) const {
    Rational sum = q_ + other.q_;
    return sum > 1 ? one() : UnitValue(sum);
  }

  UnitValue operator*(const UnitValue& other) const {
    return UnitValue(q_ * other.q_);
  }

  friend UnitValue min(const UnitValue& a, const UnitValue& b) {
    return a.q_ <= b.q_ ? a : b;
  }
  friend UnitValue max(const UnitValue& a, const UnitValue& b) {
    return a.q_ >= b.q_ ? a : b;
  }

  bool operator==(const UnitValue& other) const { return q_ == other.q_; }
  bool operator!=(const UnitValue& other) const { return q_ != other.q_; }
  bool operator<(const UnitValue& other) const { return q_ < other.q_; }
  bool operator<=(const UnitValue& other) const { return q_ <= other.q_; }
  bool operator>(const UnitValue& other) const { return q_ > other.q_; }
  bool operator>=(const UnitValue& other) const { return q_ >= other.q_; }

  std::string str() const { return rational_to_string(q_); }

private:
  static void check(const Rational& q) {
    if (q < 0 || q > 1)
      throw Error("unit value out of [0,1]: " + rational_to_string(q));
  }

  Rational q_;
};

}  // namespace qalg

#endif
