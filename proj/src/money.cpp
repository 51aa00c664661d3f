#include "itsmrules/money.hpp"

#include <cmath>
#include <regex>

namespace itsm {

std::optional<Money> Money::parse(std::string_view text) {
  static const std::regex pattern(R"((-?)([0-9]+)(?:\.([0-9]{1,2}))?)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(text.begin(), text.end(), m, pattern)) return std::nullopt;
  if (m[2].length() > 15) return std::nullopt;
  std::int64_t cents = std::stoll(m[2].str()) * 100;
  if (m[3].matched) {
    auto frac = m[3].str();
    if (frac.size() == 1) frac += '0';
    cents += std::stoll(frac);
  }
  return Money(m[1].length() ? -cents : cents);
}

std::optional<Money> Money::from_double(double value) {
  if (!std::isfinite(value) || std::fabs(value) > 1e13) return std::nullopt;
  const double scaled = value * 100.0;
  const double rounded = std::round(scaled);
  if (std::fabs(scaled - rounded) > 1e-6 * std::max(1.0, std::fabs(scaled))) return std::nullopt;
  return Money(static_cast<std::int64_t>(rounded));
}

std::string Money::str() const {
  const std::int64_t magnitude = cents_ < 0 ? -cents_ : cents_;
  std::string frac = std::to_string(magnitude % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (cents_ < 0 ? "-" : "") + std::to_string(magnitude / 100) + "." + frac;
}

}  // namespace itsm
