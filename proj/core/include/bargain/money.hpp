#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bargain {

/// Monetary amount held as a signed count of cents.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }

  /// Rounds half away from zero to the nearest cent.
  static Money from_double(double dollars);

  /// Parses "12", "12.5", "12.50", "1,234.56". At most two decimals,
  /// comma groups must be exactly three digits. No sign.
  static std::optional<Money> parse(std::string_view text);

  constexpr std::int64_t cents() const { return cents_; }
  constexpr double dollars() const { return static_cast<double>(cents_) / 100.0; }

  /// "30" for whole dollars, "34.50" otherwise. Negative values get a leading '-'.
  std::string to_string() const;

  /// Always two decimals, e.g. "319.20".
  std::string to_fixed() const;

  /// Multiplies by a ratio and rounds half away from zero to cents.
  Money scaled(double ratio) const;

  friend constexpr Money operator+(Money a, Money b) { return Money(a.cents_ + b.cents_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.cents_ - b.cents_); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

}  // namespace bargain
