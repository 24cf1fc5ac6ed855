#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "abm/stylised_agent.hpp"

using namespace abm;

namespace {

StylisedAgent agent_with(AgentKind kind, Quantity stock, double cash, double tick = 0.1) {
  StylisedAgent a;
  a.kind = kind;
  a.stock = stock;
  a.cash = round_half_away(cash / tick);
  return a;
}

}  // namespace

TEST_CASE("average_return") {
  const std::vector<double> flat{100, 100, 100, 100};
  CHECK(average_return(flat, 3) == 0.0);
  const std::vector<double> growth{100, 110, 121};
  CHECK(average_return(growth, 2) == doctest::Approx(std::log(1.1)).epsilon(1e-14));
  const std::vector<double> single{100};
  CHECK(average_return(single, 5) == 0.0);
  // A longer lookback than the history uses what is available.
  CHECK(average_return(growth, 50) == doctest::Approx(std::log(1.1)).epsilon(1e-14));
  // Only the most recent returns enter.
  const std::vector<double> tail{50, 100, 110};
  CHECK(average_return(tail, 1) == doctest::Approx(std::log(1.1)).epsilon(1e-14));
}

TEST_CASE("forecast_return per kind") {
  const std::vector<double> none;
  CHECK(forecast_return(agent_with(AgentKind::fundamentalist, 0, 0), 1000, 1000, none, 0, 0) == 0.0);
  CHECK(forecast_return(agent_with(AgentKind::fundamentalist, 0, 0), 1000, 1010, none, 0, 0) ==
        doctest::Approx(0.01).epsilon(1e-14));
  CHECK(forecast_return(agent_with(AgentKind::noise, 0, 0), 1000, 1000, none, -0.0001, 0.0003) ==
        doctest::Approx(0.0002).epsilon(1e-12));
  const std::vector<double> growth{100, 110, 121};
  StylisedAgent c = agent_with(AgentKind::chartist, 0, 0);
  c.lookback = 2;
  CHECK(forecast_return(c, 121, 1000, growth, 0.001, 0.5) == doctest::Approx(std::log(1.1) + 0.001).epsilon(1e-14));
}

TEST_CASE("forecast_price") {
  CHECK(forecast_price(1000, 0) == 1000);
  CHECK(forecast_price(1000, 0.01) == doctest::Approx(1000 * std::exp(0.01)).epsilon(1e-15));
  CHECK(forecast_price(1000, 0.01) == doctest::Approx(1010.05).epsilon(1e-6));
  CHECK(forecast_price(1000, -0.01) == doctest::Approx(990.05).epsilon(1e-6));
}

TEST_CASE("crra_allocation") {
  CHECK(crra_allocation(1000, 1000, 10, 0.0005) == 0.0);
  const double up = 1000 * std::exp(0.01);
  CHECK(crra_allocation_unclamped(up, 1000, 10, 0.0005) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(crra_allocation(up, 1000, 10, 0.0005) == 1.0);
  CHECK(crra_allocation(1000 * std::exp(-0.02), 1000, 10, 0.01) == doctest::Approx(-0.2).epsilon(1e-12));
  // Zero variance falls back to the floor rather than dividing by zero.
  CHECK(std::isfinite(crra_allocation_unclamped(1001, 1000, 10, 0.0)));
  CHECK(crra_allocation(1001, 1000, 10, 0.0) == 1.0);
}

TEST_CASE("property: allocation symmetry and monotonicity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(-0.05, 0.05), g(0.5, 20), v(1e-6, 1e-2);
  for (int i = 0; i < 1000; ++i) {
    const double lr = r(rng), gamma = g(rng), var = v(rng);
    const double z = crra_allocation_unclamped(1000 * std::exp(lr), 1000, gamma, var);
    const double mirrored = crra_allocation_unclamped(1000 * std::exp(-lr), 1000, gamma, var);
    CHECK(z == doctest::Approx(-mirrored).epsilon(1e-9));
    CHECK(std::abs(crra_allocation_unclamped(1000 * std::exp(lr), 1000, gamma * 2, var)) <= std::abs(z));
    CHECK(std::abs(crra_allocation_unclamped(1000 * std::exp(lr), 1000, gamma, var * 2)) <= std::abs(z));
    const double clamped = crra_allocation(1000 * std::exp(lr), 1000, gamma, var);
    CHECK(clamped >= -1.0);
    CHECK(clamped <= 1.0);
  }
}

TEST_CASE("property: fundamentalist forecast sign follows the mispricing") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> px(900, 1100);
  const std::vector<double> none;
  const auto a = agent_with(AgentKind::fundamentalist, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const double p = px(rng), pf = px(rng);
    const double r = forecast_return(a, p, pf, none, 0, 0);
    CHECK((r > 0) == (pf > p));
  }
}

TEST_CASE("target_order") {
  SUBCASE("buy toward the target fraction") {
    const auto o = target_order(agent_with(AgentKind::noise, 0, 10000), 0.5, 1000, 0.1);
    REQUIRE(o);
    CHECK(o->side == Side::bid);
    CHECK(o->quantity == 5);
  }
  SUBCASE("no order when already at the target") {
    CHECK_FALSE(target_order(agent_with(AgentKind::noise, 5, 5000), 0.5, 1000, 0.1));
  }
  SUBCASE("an over-extended short is cut back to the bound") {
    const auto o = target_order(agent_with(AgentKind::noise, -12, 22000), -1.0, 1000, 0.1);
    REQUIRE(o);
    CHECK(o->side == Side::bid);
    CHECK(o->quantity == 2);
  }
  SUBCASE("insolvent agents do nothing") {
    CHECK_FALSE(target_order(agent_with(AgentKind::noise, -20, 10000), 1.0, 1000, 0.1));
  }
}

TEST_CASE("property: executed targets respect the position bound") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<Quantity> s(-2000, 2000);
  std::uniform_real_distribution<double> c(0, 1e7), z(-3, 3), px(500, 1500);
  for (int i = 0; i < 2000; ++i) {
    StylisedAgent a = agent_with(AgentKind::noise, s(rng), c(rng));
    const double p = px(rng);
    const double w = wealth(a, p, 0.1);
    const auto o = target_order(a, z(rng), p, 0.1);
    if (!(w > 0)) {
      CHECK_FALSE(o);
      continue;
    }
    if (o) a.stock += o->side == Side::bid ? o->quantity : -o->quantity;
    // Half a share of rounding slack.
    CHECK(std::abs(static_cast<double>(a.stock) * p) <= w + 0.5 * p + 1e-6);
  }
}

TEST_CASE("order_price") {
  CHECK(order_price(Side::bid, 999.9, 1000.1, 1000, 10.0, 10.0, 0.1).ticks == 9999);
  CHECK(order_price(Side::bid, 999.9, 1000.1, 1000, 12.5, 10.0, 0.1).ticks == 9974);
  CHECK(order_price(Side::ask, 999.9, 1000.1, 1000, 7.0, 10.0, 0.1).ticks == 9971);
  // Missing best quote falls back to the reference price.
  CHECK(order_price(Side::ask, 999.9, std::nullopt, 1000, 11.0, 10.0, 0.1).ticks == 10010);
  CHECK(lognormal_median(10.0) == 10.0);
}

TEST_CASE("zeta draws have the configured median") {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> zeta(std::log(10.0), 0.5);
  int below = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) below += zeta(rng) < lognormal_median(10.0) ? 1 : 0;
  CHECK(std::abs(below / static_cast<double>(n) - 0.5) < 0.01);
}
