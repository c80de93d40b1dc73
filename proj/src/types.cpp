#include "amlnet/types.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "amlnet/error.hpp"
#include "csv.hpp"

namespace amlnet {

Amount parse_amount(std::string_view text) {
  std::string s = csv::trim(text);
  // Trailing currency code, e.g. "1200.50 EUR" or "1200.50USD".
  std::size_t alpha = s.size();
  while (alpha > 0 && std::isalpha(static_cast<unsigned char>(s[alpha - 1]))) {
    --alpha;
  }
  if (alpha < s.size()) {
    std::string code = s.substr(alpha);
    for (auto& c : code) c = static_cast<char>(std::toupper(c));
    if (code != "EUR") {
      throw ValidationError("foreign currency amount '" + s +
                            "' (only EUR is accepted)");
    }
    s = csv::trim(s.substr(0, alpha));
  }
  if (s.empty()) throw ValidationError("empty amount");
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string_view body(s);
  body.remove_prefix(pos);
  auto dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  auto digits = [](std::string_view v) {
    for (char c : v) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  if (whole.empty() || !digits(whole) || !digits(frac) || frac.size() > 2 ||
      (dot != std::string_view::npos && frac.empty())) {
    throw ValidationError("malformed amount '" + s + "'");
  }
  std::int64_t euros = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(),
                                 euros);
  if (ec != std::errc{} || euros > 90'000'000'000'000LL) {
    throw ValidationError("amount out of range '" + s + "'");
  }
  std::int64_t cents = 0;
  if (!frac.empty()) {
    cents = (frac[0] - '0') * 10 + (frac.size() > 1 ? frac[1] - '0' : 0);
  }
  std::int64_t total = euros * 100 + cents;
  if (negative) total = -total;
  if (total <= 0) {
    throw ValidationError("amount must be positive, got '" + s + "'");
  }
  return Amount{total};
}

std::string format_amount(Amount amount) {
  const std::int64_t abs = amount.cents < 0 ? -amount.cents : amount.cents;
  return fmt::format("{}{}.{:02d}", amount.cents < 0 ? "-" : "", abs / 100,
                     abs % 100);
}

Date parse_date(std::string_view text) {
  std::string s = csv::trim(text);
  // Accept a full ISO timestamp by keeping its date part.
  if (s.size() > 10 && (s[10] == 'T' || s[10] == ' ')) s.resize(10);
  auto bad = [&] { return ValidationError("malformed date '" + s + "'"); };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw bad();
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto parse = [&](std::size_t off, std::size_t len, auto& out) {
    auto [p, ec] = std::from_chars(s.data() + off, s.data() + off + len, out);
    if (ec != std::errc{} || p != s.data() + off + len) throw bad();
  };
  parse(0, 4, y);
  parse(5, 2, m);
  parse(8, 2, d);
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) throw bad();
  return std::chrono::sys_days{ymd};
}

std::string format_date(Date date) {
  std::chrono::year_month_day ymd{date};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

}  // namespace amlnet
