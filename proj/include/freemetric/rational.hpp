#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace fm {

using Rational = boost::rational<std::int64_t>;

/// "7/2", "3", "-1/4".
std::string format_rational(const Rational& q);
/// Accepts "p/q", "p", or a terminating decimal such as "0.25".
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);

}  // namespace fm
