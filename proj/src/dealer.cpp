#include "abm/dealer.hpp"

#include <cmath>

namespace abm {

const char* to_string(DealerKind kind) noexcept {
  switch (kind) {
    case DealerKind::as: return "as";
    case DealerKind::ir: return "ir";
    case DealerKind::naive: return "naive";
  }
  return "unknown";
}

DealerKind parse_dealer_kind(const std::string& text) {
  if (text == "as") return DealerKind::as;
  if (text == "ir") return DealerKind::ir;
  if (text == "naive") return DealerKind::naive;
  throw ValidationError("unknown dealer kind '" + text + "' (expected as, ir or naive)");
}

void DealerParams::validate() const {
  if (!(gamma > 0.0)) throw ValidationError("dealer.gamma must be positive");
  if (!(kappa > 0.0)) throw ValidationError("dealer.kappa must be positive");
  if (!(variance_scale >= 0.0)) throw ValidationError("dealer.variance_scale must be non-negative");
  if (!(phi_max_bid >= 1.0) || !(phi_max_ask >= 1.0)) throw ValidationError("dealer.phi_max must be at least 1");
  if (skew_bid() > 0.0 || skew_ask() > 0.0) throw ValidationError("dealer.eta must be non-positive");
  if (!(naive_size >= 1.0)) throw ValidationError("dealer.naive_size must be at least 1");
}

void DealerState::apply(const DealerFill& fill) {
  const CashTicks notional = fill.price.ticks * fill.quantity;
  if (fill.side == Side::bid) {
    inventory += fill.quantity;
    cash -= notional;
  } else {
    inventory -= fill.quantity;
    cash += notional;
  }
  fills.push_back(fill);
}

DealerState replay(CashTicks initial_cash, const std::vector<DealerFill>& fills) {
  DealerState state;
  state.cash = initial_cash;
  for (const auto& f : fills) state.apply(f);
  return state;
}

QuoteSizes ir_raw_sizes(double inventory, const DealerParams& params) {
  QuoteSizes sizes{params.phi_max_bid, params.phi_max_ask};
  if (inventory > 0.0) sizes.bid = params.phi_max_bid * std::exp(params.skew_bid() * inventory);
  if (inventory < 0.0) sizes.ask = params.phi_max_ask * std::exp(-params.skew_ask() * inventory);
  return sizes;
}

std::pair<Quantity, Quantity> ir_quote_sizes(double inventory, const DealerParams& params) {
  const QuoteSizes raw = ir_raw_sizes(inventory, params);
  return {round_half_away(raw.bid), round_half_away(raw.ask)};
}

std::pair<TickPrice, TickPrice> place_quotes(double centre, double spread, double tick_size) {
  TickPrice bid = snap_to_grid(centre - spread / 2.0, tick_size);
  TickPrice ask = snap_to_grid(centre + spread / 2.0, tick_size);
  if (bid >= ask) ask = TickPrice{bid.ticks + 1};
  return {bid, ask};
}

Quote as_quotes(double price, Quantity inventory, const DealerParams& params, double raw_variance, double tick_size) {
  const double var = raw_variance * params.variance_scale;
  const double centre = reservation_price(price, static_cast<double>(inventory), params.gamma, var);
  const auto [bid, ask] = place_quotes(centre, optimal_spread(params.gamma, var, params.kappa), tick_size);
  return Quote{bid, round_half_away(params.phi_max_bid), ask, round_half_away(params.phi_max_ask)};
}

Quote ir_quotes(double price, Quantity inventory, const DealerParams& params, double raw_variance, double tick_size) {
  const double var = raw_variance * params.variance_scale;
  const auto [bid, ask] = place_quotes(price, optimal_spread(params.gamma, var, params.kappa), tick_size);
  const auto [bid_size, ask_size] = ir_quote_sizes(static_cast<double>(inventory), params);
  return Quote{bid, bid_size, ask, ask_size};
}

Quote naive_quotes(double price, const DealerParams& params, double raw_variance, double tick_size) {
  const double var = raw_variance * params.variance_scale;
  const auto [bid, ask] = place_quotes(price, optimal_spread(params.gamma, var, params.kappa), tick_size);
  const Quantity size = round_half_away(params.naive_size);
  return Quote{bid, size, ask, size};
}

Quote dealer_quotes(double price, Quantity inventory, const DealerParams& params, double raw_variance,
                    double tick_size) {
  switch (params.kind) {
    case DealerKind::as: return as_quotes(price, inventory, params, raw_variance, tick_size);
    case DealerKind::ir: return ir_quotes(price, inventory, params, raw_variance, tick_size);
    case DealerKind::naive: return naive_quotes(price, params, raw_variance, tick_size);
  }
  return {};
}

}  // namespace abm
