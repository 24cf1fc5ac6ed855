#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "abm/dealer.hpp"
#include "abm/fundamental.hpp"
#include "abm/order_book.hpp"
#include "abm/rng.hpp"
#include "abm/stylised_agent.hpp"

namespace abm {

struct PopulationConfig {
  std::size_t fundamentalists{450};
  std::size_t chartists{450};
  std::size_t noise{99};

  std::size_t stylised() const noexcept { return fundamentalists + chartists + noise; }
  // Stylised agents plus the single dealer.
  std::size_t total() const noexcept { return stylised() + 1; }
};

struct StylisedConfig {
  double risk_aversion{10.0};
  double sigma_fundamentalist{0.0005};
  double sigma_chartist{0.001};
  double sigma_noise{0.0005};
  // Standard deviation of the noise trader's own return draw.
  double sigma_epsilon{0.0005};
  int lookback_max{100};
  std::int64_t stock_min{-2000};
  std::int64_t stock_max{2000};
  double cash_min{2000.0};
  double cash_max{10000.0};
  // Currency per unit of the cash endowment draw.
  double cash_unit{1000.0};
  double lognormal_shape{0.5};
  double lognormal_scale{10.0};
};

struct SimConfig {
  std::size_t steps{10000};
  std::size_t runs{20};
  std::uint64_t seed{20231210};
  double tick_size{0.1};
  std::size_t expiry_count{50};
  double expiry_prob{0.1};
  double ewma_alpha{0.25};
  // Probability that a decision point goes to the dealer. A dealer turn is
  // always followed by a stylised turn.
  double dealer_prob{0.001};
  double dealer_cash{5'000'000.0};
  PopulationConfig population;
  StylisedConfig stylised;
  FundamentalParams fundamental;
  DealerParams dealer;
  std::size_t book_log_depth{0};

  void validate() const;
  static SimConfig full_scale();
};

class EwmaVariance {
public:
  explicit EwmaVariance(double alpha, double initial = 0.0);
  double update(double log_return);
  double value() const noexcept { return value_; }

private:
  double alpha_;
  double value_;
};

inline double update_ewma(double variance, double log_return, double alpha) {
  return alpha * log_return * log_return + (1.0 - alpha) * variance;
}

inline constexpr AgentId kDealerId = 0;
inline constexpr std::int32_t kDealerActor = -1;

struct RunOutput {
  std::uint64_t seed{0};
  double initial_price{0.0};
  double initial_dealer_wealth{0.0};
  std::array<double, 3> initial_class_wealth{};

  // One entry per executed timestamp.
  std::vector<std::int64_t> t;
  std::vector<double> price;
  std::vector<double> fundamental;
  std::vector<double> ewma_var;
  std::vector<Quantity> dealer_inventory;
  std::vector<double> dealer_wealth;
  // Signed notional the dealer traded during the timestamp (positive = bought).
  std::vector<double> dealer_trade_value;
  // Aggregate wealth per stylised class, over agents solvent at start.
  std::array<std::vector<double>, 3> class_wealth;
  // Index into the stylised population, or kDealerActor.
  std::vector<std::int32_t> actor;

  std::vector<Trade> trades;
  std::vector<DealerFill> dealer_fills;

  CashTicks initial_total_cash{0};
  CashTicks final_total_cash{0};
  Quantity initial_total_stock{0};
  Quantity final_total_stock{0};
  Quantity final_dealer_inventory{0};
  CashTicks final_dealer_cash{0};
  std::size_t bankrupt_agents{0};
  std::size_t dealer_turns{0};

  std::size_t size() const noexcept { return t.size(); }
};

struct StepView {
  std::int64_t t;
  const OrderBook& book;
  const DealerState& dealer;
  double price;
};

using StepObserver = std::function<void(const StepView&)>;

// The agent-based market. One instance owns its book, agents, dealer and
// random stream; runs never share state.
class World {
public:
  World(const SimConfig& config, std::uint64_t seed);

  // Executes one decision point (one stylised timestamp or two dealer
  // timestamps, fewer if the step budget ends). Returns false when done.
  bool step();
  void run(const StepObserver& observer = {});

  const RunOutput& output() const noexcept { return out_; }
  RunOutput take_output();
  const OrderBook& book() const noexcept { return book_; }
  const DealerState& dealer() const noexcept { return dealer_; }
  const std::vector<StylisedAgent>& agents() const noexcept { return agents_; }
  double price() const noexcept { return book_.prev_price(); }
  std::int64_t now() const noexcept { return now_; }

private:
  void begin_timestamp();
  void end_timestamp();
  void settle(const std::vector<Trade>& trades);
  void stylised_turn();
  void dealer_turn();
  CashTicks total_cash() const;
  Quantity total_stock() const;

  SimConfig config_;
  Rng rng_;
  OrderBook book_;
  FundamentalProcess fundamental_;
  EwmaVariance variance_;
  DealerState dealer_;
  std::vector<StylisedAgent> agents_;
  std::vector<std::uint8_t> tracked_;
  std::array<Quantity, 3> class_stock_{};
  std::array<CashTicks, 3> class_cash_{};
  std::vector<double> history_;
  std::normal_distribution<double> std_normal_{0.0, 1.0};
  std::lognormal_distribution<double> zeta_;
  std::int64_t now_{0};
  bool traded_this_step_{false};
  bool last_turn_dealer_{false};
  std::int32_t current_actor_{0};
  double dealer_trade_value_{0.0};
  StepObserver observer_;
  RunOutput out_;
};

RunOutput run_simulation(const SimConfig& config, std::uint64_t seed, const StepObserver& observer = {});

}  // namespace abm
