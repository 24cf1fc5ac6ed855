#pragma once

#include <optional>
#include <span>

#include "abm/types.hpp"

namespace abm {

enum class AgentKind : std::uint8_t { fundamentalist, chartist, noise };

const char* to_string(AgentKind kind) noexcept;

struct StylisedAgent {
  AgentKind kind{AgentKind::noise};
  double risk_aversion{10.0};
  // Chartist lookback in steps; unused for other kinds.
  int lookback{1};
  double sigma_eta{0.0005};
  Quantity stock{0};
  CashTicks cash{0};
  bool bankrupt{false};
};

// Market value of stock plus cash.
double wealth(const StylisedAgent& agent, double price, double tick_size) noexcept;

// Mean of the most recent `lookback` log returns in `prices` (oldest first).
// Uses whatever history is available when shorter; fewer than two prices
// give 0.
double average_return(std::span<const double> prices, int lookback);

// Per-kind return forecast. eta is the forecast noise, epsilon the
// noise-trader draw; both already scaled by their standard deviations.
double forecast_return(const StylisedAgent& agent, double price, double fundamental,
                       std::span<const double> prices, double eta, double epsilon);

inline double forecast_price(double price, double forecast) { return price * std::exp(forecast); }

inline constexpr double kVarianceFloor = 1e-12;
inline constexpr double kMaxInvestmentFraction = 1.0;

// CRRA investment fraction ln(p_hat/p) / (gamma * var), clamped to
// [-1, +1]. The variance is floored at kVarianceFloor.
double crra_allocation(double forecast_price, double price, double risk_aversion, double variance);
double crra_allocation_unclamped(double forecast_price, double price, double risk_aversion, double variance);

struct OrderIntent {
  Side side{Side::bid};
  Quantity quantity{0};
};

// Shares needed to move from the current holding to the target value Z*W.
// Returns nothing when the rounded delta is zero or the agent is bankrupt
// (W <= 0).
std::optional<OrderIntent> target_order(const StylisedAgent& agent, double fraction, double price, double tick_size);

// Median of a log-normal with the given scale (scipy convention: the
// median equals the scale regardless of shape).
inline constexpr double lognormal_median(double scale) noexcept { return scale; }

// Limit price offset from the own-side best quote by (zeta - median): a
// bid goes below the best bid, an ask above the best ask. A missing best
// quote is replaced by the reference price.
TickPrice order_price(Side side, std::optional<double> best_bid, std::optional<double> best_ask, double reference,
                      double zeta, double median, double tick_size);

}  // namespace abm
