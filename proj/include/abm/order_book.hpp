#pragma once

#include <cstddef>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abm/types.hpp"

namespace abm {

struct Order {
  OrderId id{0};
  AgentId agent_id{0};
  Side side{Side::bid};
  TickPrice price{};
  Quantity quantity{0};
  std::int64_t submitted_at{0};
};

struct Trade {
  TickPrice price{};
  Quantity quantity{0};
  AgentId buyer_id{0};
  AgentId seller_id{0};
  OrderId resting_order_id{0};
  OrderId incoming_order_id{0};
  std::int64_t at{0};

  bool operator==(const Trade&) const = default;
};

struct BookLevel {
  TickPrice price{};
  Quantity quantity{0};
  std::size_t orders{0};
};

// Price-time priority limit order book on a fixed tick grid.
//
// Bids are kept in descending price order, asks ascending; inside a level
// orders are FIFO by id. Incoming orders match against the opposite side at
// the resting price until they no longer cross, and the remainder rests under
// its original id. Every order id is also indexed globally so the expiry
// mechanism can find the oldest orders across both sides.
class OrderBook {
public:
  explicit OrderBook(double tick_size = 0.1, double initial_price = 1000.0);

  double tick_size() const noexcept { return tick_size_; }

  // Assigns the next id; throws ValidationError for a non-positive
  // quantity or price.
  std::vector<Trade> submit_limit_order(AgentId agent, Side side, TickPrice price, Quantity quantity,
                                        std::int64_t at);

  // Lower-level entry point used by tests that hand-assign ids. Ids must be
  // strictly increasing.
  std::vector<Trade> submit_limit_order(const Order& order);

  bool cancel(OrderId id);
  std::size_t cancel_all(AgentId agent);

  // Removes the tau oldest orders (smallest ids over both sides) when
  // u < omega. Returns the removed orders, oldest first.
  std::vector<Order> expire_orders(double u, double omega, std::size_t tau);

  // Price rule: last trade price if traded_this_step, otherwise the mid when
  // both sides are present, otherwise the previous price. The result becomes
  // the new previous price. Midpoints may fall on a half tick.
  double current_price(bool traded_this_step);
  double prev_price() const noexcept { return prev_price_; }
  std::optional<TickPrice> last_trade_price() const noexcept { return last_trade_price_; }

  std::optional<TickPrice> best_bid() const;
  std::optional<TickPrice> best_ask() const;

  std::size_t size() const noexcept { return index_.size(); }
  bool empty() const noexcept { return index_.empty(); }
  std::size_t orders_of(AgentId agent) const;

  // Resting orders in execution priority order for one side.
  std::vector<Order> resting(Side side) const;
  std::vector<BookLevel> depth(Side side, std::size_t levels) const;

  const Order* find(OrderId id) const;

private:
  using Queue = std::list<Order>;
  using BidMap = std::map<std::int64_t, Queue, std::greater<>>;
  using AskMap = std::map<std::int64_t, Queue, std::less<>>;

  struct Locator {
    Side side;
    std::int64_t price_ticks;
    Queue::iterator it;
  };

  template <typename Map>
  void match_against(Map& opposite, Order& incoming, std::vector<Trade>& trades);
  void rest(const Order& order);
  void erase(std::map<OrderId, Locator>::iterator where);

  double tick_size_;
  double prev_price_;
  std::optional<TickPrice> last_trade_price_;
  OrderId next_id_{1};
  BidMap bids_;
  AskMap asks_;
  std::map<OrderId, Locator> index_;
};

}  // namespace abm
