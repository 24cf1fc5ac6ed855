#include "doctest.h"

#include <map>
#include <random>

#include "abm/order_book.hpp"
#include "support/reference_book.hpp"

using namespace abm;

namespace {

Order make(OrderId id, Side side, double price, Quantity qty, AgentId agent = 1) {
  return Order{id, agent, side, snap_to_grid(price, 0.1), qty, 0};
}

}  // namespace

TEST_CASE("resting on an empty book produces no trades") {
  OrderBook book;
  CHECK(book.submit_limit_order(make(1, Side::bid, 999.9, 10)).empty());
  REQUIRE(book.best_bid());
  CHECK(book.best_bid()->ticks == 9999);
  CHECK(book.size() == 1);
}

TEST_CASE("price-time priority within a level") {
  OrderBook book;
  book.submit_limit_order(make(1, Side::ask, 1000.0, 5, 11));
  book.submit_limit_order(make(2, Side::ask, 1000.0, 7, 12));
  const auto trades = book.submit_limit_order(make(3, Side::bid, 1000.0, 8, 13));
  REQUIRE(trades.size() == 2);
  CHECK(trades[0].price.ticks == 10000);
  CHECK(trades[0].quantity == 5);
  CHECK(trades[0].resting_order_id == 1);
  CHECK(trades[0].seller_id == 11);
  CHECK(trades[0].buyer_id == 13);
  CHECK(trades[1].quantity == 3);
  CHECK(trades[1].resting_order_id == 2);
  const Order* left = book.find(2);
  REQUIRE(left);
  CHECK(left->quantity == 4);
  CHECK(book.find(1) == nullptr);
  CHECK_FALSE(book.best_bid());
}

TEST_CASE("non-crossing orders both rest") {
  OrderBook book;
  book.submit_limit_order(make(1, Side::ask, 1000.1, 5));
  CHECK(book.submit_limit_order(make(2, Side::bid, 1000.0, 5)).empty());
  CHECK(book.size() == 2);
}

TEST_CASE("trades execute at the resting price, best level first") {
  OrderBook book;
  book.submit_limit_order(make(1, Side::bid, 999.0, 5));
  book.submit_limit_order(make(2, Side::bid, 1000.0, 5));
  const auto trades = book.submit_limit_order(make(3, Side::ask, 990.0, 8));
  REQUIRE(trades.size() == 2);
  CHECK(trades[0].price.ticks == 10000);
  CHECK(trades[1].price.ticks == 9990);
  CHECK(trades[1].quantity == 3);
}

TEST_CASE("remainder keeps its id and rests") {
  OrderBook book;
  book.submit_limit_order(make(1, Side::ask, 1000.0, 5));
  book.submit_limit_order(make(2, Side::bid, 1000.5, 9));
  const Order* rest = book.find(2);
  REQUIRE(rest);
  CHECK(rest->quantity == 4);
  CHECK(book.best_bid()->ticks == 10005);
}

TEST_CASE("invalid orders are rejected") {
  OrderBook book;
  CHECK_THROWS_AS(book.submit_limit_order(make(1, Side::bid, 1000.0, 0)), ValidationError);
  CHECK_THROWS_AS(book.submit_limit_order(Order{1, 1, Side::bid, TickPrice{0}, 5, 0}), ValidationError);
  book.submit_limit_order(make(5, Side::bid, 1000.0, 1));
  CHECK_THROWS_AS(book.submit_limit_order(make(5, Side::bid, 1000.0, 1)), ValidationError);
}

TEST_CASE("price rule") {
  OrderBook book(0.1, 1000.0);
  SUBCASE("mid when both sides exist and nothing traded") {
    book.submit_limit_order(make(1, Side::bid, 999.9, 1));
    book.submit_limit_order(make(2, Side::ask, 1000.1, 1));
    CHECK(book.current_price(false) == 1000.0);
  }
  SUBCASE("last trade price after a trade") {
    book.submit_limit_order(make(1, Side::ask, 1000.3, 1));
    book.submit_limit_order(make(2, Side::bid, 1000.5, 1));
    CHECK(book.current_price(true) == 1000.3);
  }
  SUBCASE("previous price when a side is empty") {
    book.submit_limit_order(make(1, Side::bid, 990.0, 1));
    CHECK(book.current_price(false) == 1000.0);
  }
  SUBCASE("half-tick midpoints are kept") {
    book.submit_limit_order(make(1, Side::bid, 999.9, 1));
    book.submit_limit_order(make(2, Side::ask, 1000.0, 1));
    CHECK(book.current_price(false) == doctest::Approx(999.95).epsilon(1e-15));
  }
}

TEST_CASE("expiry") {
  OrderBook book;
  SUBCASE("threshold not met") {
    book.submit_limit_order(make(1, Side::bid, 990.0, 1));
    CHECK(book.expire_orders(0.5, 0.1, 50).empty());
    CHECK(book.size() == 1);
  }
  SUBCASE("fewer orders than tau removes everything") {
    for (OrderId i = 1; i <= 30; ++i) book.submit_limit_order(make(i, i % 2 ? Side::bid : Side::ask, i % 2 ? 990.0 : 1010.0, 1));
    CHECK(book.expire_orders(0.05, 0.1, 50).size() == 30);
    CHECK(book.empty());
  }
  SUBCASE("oldest ids go first across both sides") {
    book.submit_limit_order(make(3, Side::bid, 990.0, 1));
    book.submit_limit_order(make(7, Side::ask, 1010.0, 1));
    book.submit_limit_order(make(9, Side::bid, 995.0, 1));
    const auto removed = book.expire_orders(0.05, 0.1, 2);
    REQUIRE(removed.size() == 2);
    CHECK(removed[0].id == 3);
    CHECK(removed[1].id == 7);
    CHECK(book.find(9));
  }
}

TEST_CASE("cancel_all removes one agent's orders only") {
  OrderBook book;
  book.submit_limit_order(make(1, Side::bid, 990.0, 1, 0));
  book.submit_limit_order(make(2, Side::ask, 1010.0, 1, 0));
  book.submit_limit_order(make(3, Side::ask, 1011.0, 1, 4));
  CHECK(book.cancel_all(0) == 2);
  CHECK(book.size() == 1);
  CHECK(book.orders_of(4) == 1);
  CHECK_FALSE(book.cancel(1));
  CHECK(book.cancel(3));
}

TEST_CASE("property: engine matches the reference matcher and never rests crossed") {
  std::mt19937_64 rng(7);
  for (int stream = 0; stream < 500; ++stream) {
    OrderBook book;
    testing::ReferenceBook ref;
    std::uniform_int_distribution<int> n_law(1, 50), px(9980, 10020), qty(1, 20), side(0, 1);
    const int n = n_law(rng);
    std::map<AgentId, std::pair<Quantity, CashTicks>> ledger;
    for (int i = 0; i < n; ++i) {
      if (i % 7 == 6) {
        const double u = std::uniform_real_distribution<double>(0, 1)(rng);
        const auto a = book.expire_orders(u, 0.5, 3);
        const auto b = ref.expire(u, 0.5, 3);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].id == b[k]);
      }
      Order o{static_cast<OrderId>(i + 1), static_cast<AgentId>(i % 5), side(rng) ? Side::bid : Side::ask,
              TickPrice{px(rng)}, qty(rng), i};
      const auto got = book.submit_limit_order(o);
      const auto want = ref.submit(o);
      REQUIRE(got == want);
      for (const auto& t : got) {
        ledger[t.buyer_id].first += t.quantity;
        ledger[t.buyer_id].second -= t.price.ticks * t.quantity;
        ledger[t.seller_id].first -= t.quantity;
        ledger[t.seller_id].second += t.price.ticks * t.quantity;
        const Order* resting = book.find(t.resting_order_id);
        if (resting) CHECK(resting->quantity > 0);
      }
      if (book.best_bid() && book.best_ask()) CHECK(*book.best_bid() < *book.best_ask());
      CHECK(book.size() == ref.size());
    }
    Quantity stock = 0;
    CashTicks cash = 0;
    for (const auto& [id, v] : ledger) {
      stock += v.first;
      cash += v.second;
    }
    CHECK(stock == 0);
    CHECK(cash == 0);
  }
}

TEST_CASE("property: equal-price orders fill in id order") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    OrderBook book;
    std::uniform_int_distribution<int> qty(1, 10);
    const int k = 2 + rep % 6;
    for (int i = 1; i <= k; ++i) book.submit_limit_order(make(i, Side::ask, 1000.0, qty(rng)));
    const auto trades = book.submit_limit_order(make(100, Side::bid, 1000.0, 1000));
    for (std::size_t i = 1; i < trades.size(); ++i) CHECK(trades[i - 1].resting_order_id < trades[i].resting_order_id);
  }
}
