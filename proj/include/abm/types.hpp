#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace abm {

class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Side : std::uint8_t { bid, ask };

inline constexpr Side opposite(Side s) noexcept { return s == Side::bid ? Side::ask : Side::bid; }
inline const char* to_string(Side s) noexcept { return s == Side::bid ? "bid" : "ask"; }

using OrderId = std::uint64_t;
using AgentId = std::uint32_t;
using Quantity = std::int64_t;
// Cash is held in tick units (currency / tick size) so that every trade cash
// flow price_ticks * quantity is an exact integer.
using CashTicks = std::int64_t;

// A price on the tick grid, as an integer count of ticks.
struct TickPrice {
  std::int64_t ticks{0};

  constexpr auto operator<=>(const TickPrice&) const = default;
  double currency(double tick_size) const noexcept;
};

// ticks * tick_size, computed as a division when the tick divides one unit
// so that e.g. 9949 ticks of 0.1 print as 994.9.
inline double ticks_to_currency(double ticks, double tick_size) noexcept {
  const double per_unit = std::round(1.0 / tick_size);
  if (per_unit >= 1.0 && std::abs(per_unit * tick_size - 1.0) < 1e-12) return ticks / per_unit;
  return ticks * tick_size;
}

inline double TickPrice::currency(double tick_size) const noexcept {
  return ticks_to_currency(static_cast<double>(ticks), tick_size);
}

// Round half away from zero, the convention used for prices, share counts
// and quote sizes throughout.
inline std::int64_t round_half_away(double x) noexcept { return static_cast<std::int64_t>(std::llround(x)); }

// Nearest grid price; ties go away from zero; non-positive results are
// floored at one tick.
inline TickPrice snap_to_grid(double raw_price, double tick_size) {
  if (!(tick_size > 0.0)) throw ValidationError("tick size must be positive");
  if (!std::isfinite(raw_price)) throw ValidationError("price must be finite");
  // Relative nudge away from zero absorbs representation error so that
  // 1000.05 / 0.1 is treated as the tie it is meant to be.
  const double scaled = raw_price / tick_size;
  const double nudged = scaled + std::copysign(1e-9 * std::max(1.0, std::abs(scaled)), scaled);
  std::int64_t ticks = round_half_away(nudged);
  if (ticks < 1) ticks = 1;
  return TickPrice{ticks};
}

}  // namespace abm
