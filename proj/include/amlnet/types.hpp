#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace amlnet {

using PartyId = std::string;
using PersonId = std::string;
using Date = std::chrono::sys_days;

/// Euro amount held as integer cents so thresholds compare exactly.
struct Amount {
  std::int64_t cents = 0;

  static constexpr Amount from_euros(std::int64_t euros) {
    return Amount{euros * 100};
  }
  double euros() const { return static_cast<double>(cents) / 100.0; }

  friend constexpr auto operator<=>(Amount, Amount) = default;
  friend constexpr Amount operator+(Amount a, Amount b) {
    return Amount{a.cents + b.cents};
  }
  Amount& operator+=(Amount other) {
    cents += other.cents;
    return *this;
  }
};

/// Parses a plain decimal euro amount with at most two fractional digits.
/// An optional trailing "EUR" is accepted; any other currency code is
/// rejected. Throws ValidationError.
Amount parse_amount(std::string_view text);
std::string format_amount(Amount amount);

/// ISO-8601 calendar date (YYYY-MM-DD). Throws ValidationError.
Date parse_date(std::string_view text);
std::string format_date(Date date);

enum class RiskLabel : std::int8_t { Unknown = -1, Negative = 0, Positive = 1 };

}  // namespace amlnet
