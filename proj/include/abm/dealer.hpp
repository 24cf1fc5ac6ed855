#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "abm/types.hpp"

namespace abm {

enum class DealerKind : std::uint8_t { as, ir, naive };

const char* to_string(DealerKind kind) noexcept;
DealerKind parse_dealer_kind(const std::string& text);

// Default inventory skew that makes the quote size reach one share at an
// inventory of phi_max: ln(1/phi)/phi.
inline double default_skew(double phi_max) { return std::log(1.0 / phi_max) / phi_max; }

struct DealerParams {
  DealerKind kind{DealerKind::as};
  double gamma{0.1};
  double kappa{0.6};
  double variance_scale{24.0 * 60.0};
  double phi_max_bid{5000.0};
  double phi_max_ask{5000.0};
  // Inventory skews (non-positive). Empty means default_skew(phi_max) of
  // the respective side.
  std::optional<double> eta_bid;
  std::optional<double> eta_ask;
  // Constant size quoted by the naive dealer.
  double naive_size{5000.0};
  // Reprice a quote that would cross the opposite best to one tick inside it,
  // so the dealer only ever provides liquidity.
  bool post_only{true};

  double skew_bid() const { return eta_bid.value_or(default_skew(phi_max_bid)); }
  double skew_ask() const { return eta_ask.value_or(default_skew(phi_max_ask)); }
  void validate() const;
};

struct DealerFill {
  std::int64_t at{0};
  Side side{Side::bid};  // bid: dealer bought
  TickPrice price{};
  Quantity quantity{0};
};

struct DealerState {
  Quantity inventory{0};
  CashTicks cash{0};
  std::vector<DealerFill> fills;

  void apply(const DealerFill& fill);
  double wealth(double price, double tick_size) const noexcept {
    return static_cast<double>(cash) * tick_size + static_cast<double>(inventory) * price;
  }
};

// Replays a fill log from a starting cash balance; used to check that the
// state is exactly reproducible from its history.
DealerState replay(CashTicks initial_cash, const std::vector<DealerFill>& fills);

// Inventory-adjusted indifference price p - q*gamma*var.
inline double reservation_price(double price, double inventory, double gamma, double scaled_variance) {
  return price - inventory * gamma * scaled_variance;
}

// Total quoted spread gamma*var + (2/gamma) ln(1 + gamma/kappa).
inline double optimal_spread(double gamma, double scaled_variance, double kappa) {
  return gamma * scaled_variance + (2.0 / gamma) * std::log1p(gamma / kappa);
}

struct Quote {
  TickPrice bid_price{};
  Quantity bid_size{0};
  TickPrice ask_price{};
  Quantity ask_size{0};

  bool has_bid() const noexcept { return bid_size > 0; }
  bool has_ask() const noexcept { return ask_size > 0; }
};

struct QuoteSizes {
  double bid{0.0};
  double ask{0.0};
};

// Unrounded inventory-rule sizes.
QuoteSizes ir_raw_sizes(double inventory, const DealerParams& params);
// Sizes rounded half away from zero; zero means the side is withdrawn.
std::pair<Quantity, Quantity> ir_quote_sizes(double inventory, const DealerParams& params);

// Snapped prices for a spread centred on `centre`; the ask is pushed one
// tick up if both sides land on the same tick.
std::pair<TickPrice, TickPrice> place_quotes(double centre, double spread, double tick_size);

Quote as_quotes(double price, Quantity inventory, const DealerParams& params, double raw_variance, double tick_size);
Quote ir_quotes(double price, Quantity inventory, const DealerParams& params, double raw_variance, double tick_size);
Quote naive_quotes(double price, const DealerParams& params, double raw_variance, double tick_size);

Quote dealer_quotes(double price, Quantity inventory, const DealerParams& params, double raw_variance,
                    double tick_size);

}  // namespace abm
