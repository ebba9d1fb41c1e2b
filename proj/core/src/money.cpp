#include "bargain/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace bargain {

namespace {

// Decimal inputs such as 0.85 or 1.005 are not exact in binary; snapping to a
// millionth of a cent first keeps exact half-cent ties rounding away from zero.
std::int64_t round_cents(double cents) {
  return std::llround(std::round(cents * 1e6) / 1e6);
}

}  // namespace

Money Money::from_double(double dollars) {
  return Money(round_cents(dollars * 100.0));
}

std::optional<Money> Money::parse(std::string_view text) {
  if (text.empty() || !std::isdigit(static_cast<unsigned char>(text.front()))) {
    return std::nullopt;
  }
  std::int64_t whole = 0;
  std::size_t i = 0;
  std::size_t group = 0;
  bool saw_comma = false;
  constexpr std::int64_t kLimit = 100'000'000'000'000;  // keeps cents well inside int64
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      whole = whole * 10 + (c - '0');
      if (whole > kLimit) return std::nullopt;
      ++group;
    } else if (c == ',') {
      // First group may be 1-3 digits, later groups exactly 3.
      if (group == 0 || group > 3 || (saw_comma && group != 3)) return std::nullopt;
      saw_comma = true;
      group = 0;
    } else {
      break;
    }
  }
  if (saw_comma && group != 3) return std::nullopt;

  std::int64_t frac = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::size_t digits = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      if (++digits > 2) return std::nullopt;
      frac = frac * 10 + (text[i] - '0');
    }
    if (digits == 0) return std::nullopt;
    if (digits == 1) frac *= 10;
  }
  if (i != text.size()) return std::nullopt;
  return Money(whole * 100 + frac);
}

std::string Money::to_string() const {
  const std::int64_t abs = std::llabs(cents_);
  std::string out = cents_ < 0 ? "-" : "";
  out += std::to_string(abs / 100);
  if (abs % 100 != 0) {
    const auto frac = abs % 100;
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
  }
  return out;
}

std::string Money::to_fixed() const {
  const std::int64_t abs = std::llabs(cents_);
  const auto frac = abs % 100;
  std::string out = cents_ < 0 ? "-" : "";
  out += std::to_string(abs / 100);
  out += '.';
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

Money Money::scaled(double ratio) const {
  return Money(round_cents(static_cast<double>(cents_) * ratio));
}

}  // namespace bargain
