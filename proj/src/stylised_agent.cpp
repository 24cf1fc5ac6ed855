#include "abm/stylised_agent.hpp"

#include <algorithm>
#include <cmath>

namespace abm {

const char* to_string(AgentKind kind) noexcept {
  switch (kind) {
    case AgentKind::fundamentalist: return "fundamentalist";
    case AgentKind::chartist: return "chartist";
    case AgentKind::noise: return "noise";
  }
  return "unknown";
}

double wealth(const StylisedAgent& agent, double price, double tick_size) noexcept {
  return static_cast<double>(agent.stock) * price + static_cast<double>(agent.cash) * tick_size;
}

double average_return(std::span<const double> prices, int lookback) {
  if (prices.size() < 2 || lookback < 1) return 0.0;
  const std::size_t available = prices.size() - 1;
  const std::size_t n = std::min<std::size_t>(available, static_cast<std::size_t>(lookback));
  double sum = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t hi = prices.size() - j;
    sum += std::log(prices[hi] / prices[hi - 1]);
  }
  return sum / static_cast<double>(n);
}

double forecast_return(const StylisedAgent& agent, double price, double fundamental,
                       std::span<const double> prices, double eta, double epsilon) {
  switch (agent.kind) {
    case AgentKind::fundamentalist: return (fundamental - price) / price + eta;
    case AgentKind::chartist: return average_return(prices, agent.lookback) + eta;
    case AgentKind::noise: return epsilon + eta;
  }
  return eta;
}

double crra_allocation_unclamped(double forecast_price, double price, double risk_aversion, double variance) {
  const double var = std::max(variance, kVarianceFloor);
  return std::log(forecast_price / price) / (risk_aversion * var);
}

double crra_allocation(double forecast_price, double price, double risk_aversion, double variance) {
  return std::clamp(crra_allocation_unclamped(forecast_price, price, risk_aversion, variance),
                    -kMaxInvestmentFraction, kMaxInvestmentFraction);
}

std::optional<OrderIntent> target_order(const StylisedAgent& agent, double fraction, double price, double tick_size) {
  if (agent.bankrupt) return std::nullopt;
  const double w = wealth(agent, price, tick_size);
  if (!(w > 0.0)) return std::nullopt;
  const double z = std::clamp(fraction, -kMaxInvestmentFraction, kMaxInvestmentFraction);
  const double current_value = static_cast<double>(agent.stock) * price;
  const Quantity delta = round_half_away((z * w - current_value) / price);
  if (delta == 0) return std::nullopt;
  return OrderIntent{delta > 0 ? Side::bid : Side::ask, delta > 0 ? delta : -delta};
}

TickPrice order_price(Side side, std::optional<double> best_bid, std::optional<double> best_ask, double reference,
                      double zeta, double median, double tick_size) {
  const double offset = zeta - median;
  if (side == Side::bid) return snap_to_grid(best_bid.value_or(reference) - offset, tick_size);
  return snap_to_grid(best_ask.value_or(reference) + offset, tick_size);
}

}  // namespace abm
