#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace itsm {

/// Fixed-point currency amount with two fraction digits.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
  /// `123`, `123.4`, `123.45`, optionally negative; anything else is rejected.
  static std::optional<Money> parse(std::string_view text);
  /// Accepts values with at most two significant fraction digits.
  static std::optional<Money> from_double(double value);

  constexpr std::int64_t cents() const { return cents_; }
  double to_double() const { return static_cast<double>(cents_) / 100.0; }
  std::string str() const;  // always two fraction digits

  constexpr Money& operator+=(Money o) {
    cents_ += o.cents_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return Money(a.cents_ + b.cents_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.cents_ - b.cents_); }
  friend constexpr Money operator*(Money a, std::int64_t n) { return Money(a.cents_ * n); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

}  // namespace itsm
