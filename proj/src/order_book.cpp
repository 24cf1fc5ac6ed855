#include "abm/order_book.hpp"

#include <algorithm>

namespace abm {

OrderBook::OrderBook(double tick_size, double initial_price)
    : tick_size_(tick_size), prev_price_(initial_price) {
  if (!(tick_size > 0.0)) throw ValidationError("tick size must be positive");
  if (!(initial_price > 0.0)) throw ValidationError("initial price must be positive");
}

std::vector<Trade> OrderBook::submit_limit_order(AgentId agent, Side side, TickPrice price, Quantity quantity,
                                                 std::int64_t at) {
  Order order{next_id_, agent, side, price, quantity, at};
  return submit_limit_order(order);
}

std::vector<Trade> OrderBook::submit_limit_order(const Order& order) {
  if (order.quantity <= 0) throw ValidationError("order quantity must be positive");
  if (order.price.ticks <= 0) throw ValidationError("order price must be a positive number of ticks");
  if (order.id < next_id_) throw ValidationError("order ids must be strictly increasing");
  next_id_ = order.id + 1;

  Order incoming = order;
  std::vector<Trade> trades;
  if (incoming.side == Side::bid) {
    match_against(asks_, incoming, trades);
  } else {
    match_against(bids_, incoming, trades);
  }
  if (incoming.quantity > 0) rest(incoming);
  if (!trades.empty()) last_trade_price_ = trades.back().price;
  return trades;
}

template <typename Map>
void OrderBook::match_against(Map& opposite, Order& incoming, std::vector<Trade>& trades) {
  const auto crosses = [&](std::int64_t level_price) {
    return incoming.side == Side::bid ? incoming.price.ticks >= level_price : incoming.price.ticks <= level_price;
  };
  while (incoming.quantity > 0 && !opposite.empty()) {
    auto level = opposite.begin();
    if (!crosses(level->first)) break;
    Queue& queue = level->second;
    while (incoming.quantity > 0 && !queue.empty()) {
      Order& resting = queue.front();
      const Quantity fill = std::min(incoming.quantity, resting.quantity);
      Trade trade;
      trade.price = resting.price;
      trade.quantity = fill;
      trade.buyer_id = incoming.side == Side::bid ? incoming.agent_id : resting.agent_id;
      trade.seller_id = incoming.side == Side::bid ? resting.agent_id : incoming.agent_id;
      trade.resting_order_id = resting.id;
      trade.incoming_order_id = incoming.id;
      trade.at = incoming.submitted_at;
      trades.push_back(trade);
      incoming.quantity -= fill;
      resting.quantity -= fill;
      if (resting.quantity == 0) {
        index_.erase(resting.id);
        queue.pop_front();
      }
    }
    if (queue.empty()) opposite.erase(level);
  }
}

void OrderBook::rest(const Order& order) {
  Queue* queue = order.side == Side::bid ? &bids_[order.price.ticks] : &asks_[order.price.ticks];
  queue->push_back(order);
  index_.emplace(order.id, Locator{order.side, order.price.ticks, std::prev(queue->end())});
}

void OrderBook::erase(std::map<OrderId, Locator>::iterator where) {
  const Locator loc = where->second;
  if (loc.side == Side::bid) {
    auto level = bids_.find(loc.price_ticks);
    level->second.erase(loc.it);
    if (level->second.empty()) bids_.erase(level);
  } else {
    auto level = asks_.find(loc.price_ticks);
    level->second.erase(loc.it);
    if (level->second.empty()) asks_.erase(level);
  }
  index_.erase(where);
}

bool OrderBook::cancel(OrderId id) {
  auto where = index_.find(id);
  if (where == index_.end()) return false;
  erase(where);
  return true;
}

std::size_t OrderBook::cancel_all(AgentId agent) {
  std::size_t removed = 0;
  for (auto it = index_.begin(); it != index_.end();) {
    auto next = std::next(it);
    if (it->second.it->agent_id == agent) {
      erase(it);
      ++removed;
    }
    it = next;
  }
  return removed;
}

std::vector<Order> OrderBook::expire_orders(double u, double omega, std::size_t tau) {
  std::vector<Order> removed;
  if (!(u < omega)) return removed;
  while (removed.size() < tau && !index_.empty()) {
    auto oldest = index_.begin();
    removed.push_back(*oldest->second.it);
    erase(oldest);
  }
  return removed;
}

double OrderBook::current_price(bool traded_this_step) {
  if (traded_this_step && last_trade_price_) {
    prev_price_ = last_trade_price_->currency(tick_size_);
  } else if (!bids_.empty() && !asks_.empty()) {
    // Integer tick sum keeps half-tick midpoints exact up to one division.
    prev_price_ = ticks_to_currency(static_cast<double>(bids_.begin()->first + asks_.begin()->first) / 2.0, tick_size_);
  }
  return prev_price_;
}

std::optional<TickPrice> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return TickPrice{bids_.begin()->first};
}

std::optional<TickPrice> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return TickPrice{asks_.begin()->first};
}

std::size_t OrderBook::orders_of(AgentId agent) const {
  return static_cast<std::size_t>(std::count_if(index_.begin(), index_.end(),
                                                [&](const auto& kv) { return kv.second.it->agent_id == agent; }));
}

std::vector<Order> OrderBook::resting(Side side) const {
  std::vector<Order> out;
  const auto collect = [&](const auto& map) {
    for (const auto& [price, queue] : map) out.insert(out.end(), queue.begin(), queue.end());
  };
  if (side == Side::bid) {
    collect(bids_);
  } else {
    collect(asks_);
  }
  return out;
}

std::vector<BookLevel> OrderBook::depth(Side side, std::size_t levels) const {
  std::vector<BookLevel> out;
  const auto collect = [&](const auto& map) {
    for (const auto& [price, queue] : map) {
      if (out.size() >= levels) break;
      BookLevel level{TickPrice{price}, 0, queue.size()};
      for (const auto& o : queue) level.quantity += o.quantity;
      out.push_back(level);
    }
  };
  if (side == Side::bid) {
    collect(bids_);
  } else {
    collect(asks_);
  }
  return out;
}

const Order* OrderBook::find(OrderId id) const {
  auto where = index_.find(id);
  return where == index_.end() ? nullptr : &*where->second.it;
}

}  // namespace abm
