#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "abm/market_sim.hpp"

using namespace abm;

namespace {

SimConfig small(DealerKind kind = DealerKind::as, std::size_t steps = 3000, double dealer_prob = 0.05) {
  SimConfig c;
  c.steps = steps;
  c.dealer_prob = dealer_prob;
  c.dealer.kind = kind;
  return c;
}

}  // namespace

TEST_CASE("EWMA update") {
  CHECK(update_ewma(0.0, 0.01, 0.25) == doctest::Approx(2.5e-5).epsilon(1e-14));
  double v = 1.0;
  for (int i = 0; i < 200; ++i) v = update_ewma(v, 0.0, 0.25);
  CHECK(v < 1e-24);
  v = 0.0;
  for (int i = 0; i < 500; ++i) v = update_ewma(v, 0.02, 0.25);
  CHECK(v == doctest::Approx(0.0004).epsilon(1e-12));
}

TEST_CASE("zero steps returns the initial state") {
  const RunOutput out = run_simulation(small(DealerKind::as, 0), 1);
  CHECK(out.size() == 0);
  CHECK(out.trades.empty());
  CHECK(out.initial_price == 1000.0);
  CHECK(out.initial_total_cash == out.final_total_cash);
}

TEST_CASE("series lengths match the step budget and time advances by one") {
  for (DealerKind k : {DealerKind::as, DealerKind::ir, DealerKind::naive}) {
    const RunOutput out = run_simulation(small(k, 1500, 0.3), 4);
    REQUIRE(out.size() == 1500);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.t[i] == static_cast<std::int64_t>(i));
    CHECK(out.price.size() == out.size());
    CHECK(out.class_wealth[2].size() == out.size());
    CHECK(out.fundamental.front() > 0);
  }
}

TEST_CASE("dealer turns consume two timestamps and are followed by a stylised turn") {
  const RunOutput out = run_simulation(small(DealerKind::ir, 4000, 0.4), 8);
  std::size_t i = 0;
  std::size_t turns = 0;
  while (i < out.size()) {
    if (out.actor[i] == kDealerActor) {
      ++turns;
      if (i + 1 < out.size()) CHECK(out.actor[i + 1] == kDealerActor);
      if (i + 2 < out.size()) CHECK(out.actor[i + 2] != kDealerActor);
      i += 2;
    } else {
      ++i;
    }
  }
  CHECK(turns == out.dealer_turns);
  CHECK(turns > 100);
}

TEST_CASE("property: cash and stock are conserved exactly") {
  for (DealerKind k : {DealerKind::as, DealerKind::ir, DealerKind::naive}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const RunOutput out = run_simulation(small(k, 3000, 0.2), seed);
      CHECK(out.initial_total_cash == out.final_total_cash);
      CHECK(out.initial_total_stock == out.final_total_stock);
      CHECK_FALSE(out.trades.empty());
    }
  }
}

TEST_CASE("property: the dealer rests at most one bid and one ask") {
  for (DealerKind k : {DealerKind::as, DealerKind::ir, DealerKind::naive}) {
    std::size_t max_bids = 0, max_asks = 0;
    run_simulation(small(k, 3000, 0.3), 6, [&](const StepView& v) {
      std::size_t bids = 0, asks = 0;
      for (const auto& o : v.book.resting(Side::bid)) bids += o.agent_id == kDealerId;
      for (const auto& o : v.book.resting(Side::ask)) asks += o.agent_id == kDealerId;
      max_bids = std::max(max_bids, bids);
      max_asks = std::max(max_asks, asks);
      if (auto bb = v.book.best_bid(), ba = v.book.best_ask(); bb && ba) CHECK(*bb < *ba);
    });
    CHECK(max_bids <= 1);
    CHECK(max_asks <= 1);
  }
}

TEST_CASE("property: the dealer state replays from its fills") {
  SimConfig c = small(DealerKind::naive, 3000, 0.2);
  const RunOutput out = run_simulation(c, 12);
  const DealerState r = replay(round_half_away(c.dealer_cash / c.tick_size), out.dealer_fills);
  CHECK(r.inventory == out.final_dealer_inventory);
  CHECK(r.cash == out.final_dealer_cash);
  CHECK(out.dealer_wealth.back() ==
        doctest::Approx(static_cast<double>(r.cash) * c.tick_size + r.inventory * out.price.back()));
}

TEST_CASE("property: EWMA variance is non-negative and bounded by the largest squared return") {
  const RunOutput out = run_simulation(small(DealerKind::as, 3000, 0.05), 9);
  double prev = out.initial_price;
  double max_r2 = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = std::log(out.price[i] / prev);
    max_r2 = std::max(max_r2, r * r);
    CHECK(out.ewma_var[i] >= 0.0);
    CHECK(out.ewma_var[i] <= max_r2 * (1 + 1e-12));
    prev = out.price[i];
  }
}

TEST_CASE("determinism and seed sensitivity") {
  const SimConfig c = small(DealerKind::ir, 2000, 0.1);
  const RunOutput a = run_simulation(c, 42);
  const RunOutput b = run_simulation(c, 42);
  CHECK(a.trades == b.trades);
  CHECK(a.price == b.price);
  CHECK(a.dealer_wealth == b.dealer_wealth);
  const RunOutput d = run_simulation(c, 43);
  CHECK_FALSE(a.trades == d.trades);
}

TEST_CASE("property: dealer kinds see common random numbers") {
  const RunOutput as = run_simulation(small(DealerKind::as, 3000, 0.1), 77);
  const RunOutput ir = run_simulation(small(DealerKind::ir, 3000, 0.1), 77);
  const RunOutput nv = run_simulation(small(DealerKind::naive, 3000, 0.1), 77);
  CHECK(as.actor == ir.actor);
  CHECK(as.actor == nv.actor);
  CHECK(as.fundamental == ir.fundamental);
  CHECK(as.initial_class_wealth == nv.initial_class_wealth);
}

TEST_CASE("no fundamentalist trades when noise is off and the price sits at the fundamental") {
  SimConfig c = small(DealerKind::as, 2000, 0.0);
  c.population = {50, 0, 0};
  c.stylised.sigma_fundamentalist = 0.0;
  c.fundamental.jump_prob = 0.0;
  // A zero forecast targets a flat position, so start flat.
  c.stylised.stock_min = c.stylised.stock_max = 0;
  const RunOutput out = run_simulation(c, 3);
  CHECK(out.trades.empty());
  for (double p : out.price) CHECK(p == 1000.0);
}

TEST_CASE("the default endowment leaves every stylised agent solvent") {
  World w(SimConfig{}, 1);
  for (const auto& a : w.agents()) CHECK(wealth(a, 1000.0, 0.1) > 0.0);
  CHECK(w.agents().size() == 999);
  const auto n_f = std::count_if(w.agents().begin(), w.agents().end(),
                                 [](const StylisedAgent& a) { return a.kind == AgentKind::fundamentalist; });
  CHECK(n_f == 450);
}

TEST_CASE("config validation") {
  SimConfig c;
  c.dealer_prob = 1.5;
  CHECK_THROWS_AS(run_simulation(c, 1), ValidationError);
  c = SimConfig{};
  c.population = {0, 0, 0};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK(SimConfig::full_scale().steps == 40000);
  CHECK(SimConfig::full_scale().runs == 100);
}
