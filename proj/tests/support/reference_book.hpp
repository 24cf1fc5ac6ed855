#pragma once

// Deliberately naive order book used as an oracle: a flat vector scanned in
// full for every match. Quadratic, but obviously correct.

#include <algorithm>
#include <vector>

#include "abm/order_book.hpp"

namespace abm::testing {

class ReferenceBook {
public:
  std::vector<Trade> submit(const Order& incoming) {
    Order o = incoming;
    std::vector<Trade> trades;
    while (o.quantity > 0) {
      int best = -1;
      for (int i = 0; i < static_cast<int>(orders_.size()); ++i) {
        const Order& r = orders_[i];
        if (r.side == o.side) continue;
        const bool crosses = o.side == Side::bid ? r.price.ticks <= o.price.ticks : r.price.ticks >= o.price.ticks;
        if (!crosses) continue;
        if (best < 0) {
          best = i;
          continue;
        }
        const Order& b = orders_[best];
        const bool better = o.side == Side::bid ? r.price.ticks < b.price.ticks : r.price.ticks > b.price.ticks;
        if (better || (r.price.ticks == b.price.ticks && r.id < b.id)) best = i;
      }
      if (best < 0) break;
      Order& r = orders_[best];
      const Quantity q = std::min(r.quantity, o.quantity);
      Trade t;
      t.price = r.price;
      t.quantity = q;
      t.buyer_id = o.side == Side::bid ? o.agent_id : r.agent_id;
      t.seller_id = o.side == Side::bid ? r.agent_id : o.agent_id;
      t.resting_order_id = r.id;
      t.incoming_order_id = o.id;
      t.at = o.submitted_at;
      trades.push_back(t);
      r.quantity -= q;
      o.quantity -= q;
      if (r.quantity == 0) orders_.erase(orders_.begin() + best);
    }
    if (o.quantity > 0) orders_.push_back(o);
    return trades;
  }

  std::vector<OrderId> expire(double u, double omega, std::size_t tau) {
    std::vector<OrderId> removed;
    if (!(u < omega)) return removed;
    for (std::size_t k = 0; k < tau && !orders_.empty(); ++k) {
      auto it = std::min_element(orders_.begin(), orders_.end(),
                                 [](const Order& a, const Order& b) { return a.id < b.id; });
      removed.push_back(it->id);
      orders_.erase(it);
    }
    return removed;
  }

  std::size_t size() const { return orders_.size(); }

private:
  std::vector<Order> orders_;
};

}  // namespace abm::testing
