#include "qalg/rational.hpp"

namespace qalg {

Rational parse_rational(const std::string& text) {
  auto bad = [&] { throw ParseError("malformed rational literal: '" + text + "'"); };
  if (text.empty()) bad();
  std::string::size_type slash = text.find('/');
  auto digits = [&](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  try {
    if (slash == std::string::npos) {
      if (!digits(text)) bad();
      return Rational(boost::multiprecision::cpp_int(text));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!digits(num) || !digits(den)) bad();
    boost::multiprecision::cpp_int d{den};
    if (d == 0) bad();
    return Rational(boost::multiprecision::cpp_int(num), d);
  } catch (const std::exception&) {
    bad();
  }
  return Rational(0);  // unreachable
}

std::string rational_to_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace qalg
