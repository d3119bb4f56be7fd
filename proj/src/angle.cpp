#include "nonrecip/cli/angle.hpp"

#include <charconv>
#include <numbers>
#include <regex>
#include <stdexcept>
#include <string>

namespace nonrecip::cli {

namespace {

double parse_number(const std::string &s) {
  double v = 0;
  const char *first = s.data();
  const char *last = s.data() + s.size();
  if (*first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

} // namespace

double parse_angle(std::string_view text) {
  static const std::regex pi_form(
      R"(^\s*([+-])?\s*((?:\d+(?:\.\d*)?|\.\d+))?\s*\*?\s*pi\s*(?:/\s*((?:\d+(?:\.\d*)?|\.\d+)))?\s*$)",
      std::regex::icase);
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    double v = std::numbers::pi;
    if (m[2].matched)
      v *= parse_number(m[2].str());
    if (m[3].matched) {
      const double den = parse_number(m[3].str());
      if (den == 0)
        throw std::invalid_argument("zero denominator in angle '" + s + "'");
      v /= den;
    }
    return m[1].matched && m[1].str() == "-" ? -v : v;
  }
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos)
    throw std::invalid_argument("empty angle");
  return parse_number(s.substr(b, e - b + 1));
}

} // namespace nonrecip::cli
