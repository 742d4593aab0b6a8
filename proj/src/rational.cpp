#include "freemetric/rational.hpp"

#include <charconv>

#include "freemetric/errors.hpp"

namespace fm {

std::string format_rational(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad rational '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(text.substr(0, slash), text);
    const auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) throw ParseError("too many decimals in '" + std::string(text) + "'");
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::int64_t ip = (whole.empty() || whole == "-") ? 0 : parse_int(whole, text);
    const std::int64_t fp = frac.empty() ? 0 : parse_int(frac, text);
    if (fp < 0) throw ParseError("bad rational '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational r(ip < 0 ? -ip : ip);
    r += Rational(fp, scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

}  // namespace fm
