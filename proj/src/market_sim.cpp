#include "abm/market_sim.hpp"

#include <algorithm>
#include <cmath>

namespace abm {

void SimConfig::validate() const {
  if (!(tick_size > 0.0)) throw ValidationError("market.tick_size must be positive");
  if (expiry_prob < 0.0 || expiry_prob > 1.0) throw ValidationError("market.expiry_prob must lie in [0,1]");
  if (!(ewma_alpha > 0.0) || ewma_alpha > 1.0) throw ValidationError("market.ewma_alpha must lie in (0,1]");
  if (dealer_prob < 0.0 || dealer_prob > 1.0) throw ValidationError("market.dealer_prob must lie in [0,1]");
  if (!(dealer_cash >= 0.0)) throw ValidationError("dealer.cash must be non-negative");
  if (population.stylised() == 0) throw ValidationError("population needs at least one stylised agent");
  if (stylised.lookback_max < 1) throw ValidationError("agents.lookback_max must be at least 1");
  if (stylised.stock_min > stylised.stock_max) throw ValidationError("agents.stock_min exceeds agents.stock_max");
  if (stylised.cash_min > stylised.cash_max) throw ValidationError("agents.cash_min exceeds agents.cash_max");
  if (!(stylised.cash_unit > 0.0)) throw ValidationError("agents.cash_unit must be positive");
  if (!(stylised.risk_aversion > 0.0)) throw ValidationError("agents.risk_aversion must be positive");
  if (!(stylised.lognormal_shape > 0.0) || !(stylised.lognormal_scale > 0.0)) {
    throw ValidationError("agents.lognormal parameters must be positive");
  }
  if (stylised.sigma_fundamentalist < 0.0 || stylised.sigma_chartist < 0.0 || stylised.sigma_noise < 0.0 ||
      stylised.sigma_epsilon < 0.0) {
    throw ValidationError("agent noise standard deviations must be non-negative");
  }
  if (!(fundamental.initial > 0.0)) throw ValidationError("fundamental.initial must be positive");
  dealer.validate();
}

SimConfig SimConfig::full_scale() {
  SimConfig c;
  c.steps = 40000;
  c.runs = 100;
  return c;
}

EwmaVariance::EwmaVariance(double alpha, double initial) : alpha_(alpha), value_(initial) {}

double EwmaVariance::update(double log_return) {
  value_ = update_ewma(value_, log_return, alpha_);
  return value_;
}

namespace {

double sigma_for(const StylisedConfig& c, AgentKind kind) {
  switch (kind) {
    case AgentKind::fundamentalist: return c.sigma_fundamentalist;
    case AgentKind::chartist: return c.sigma_chartist;
    case AgentKind::noise: return c.sigma_noise;
  }
  return 0.0;
}

std::size_t class_index(AgentKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

World::World(const SimConfig& config, std::uint64_t seed)
    : config_(config),
      rng_(seed),
      book_(config.tick_size, config.fundamental.initial),
      fundamental_(config.fundamental),
      variance_(config.ewma_alpha),
      zeta_(std::log(config.stylised.lognormal_scale), config.stylised.lognormal_shape) {
  config_.validate();
  const double tick = config_.tick_size;
  const double p0 = config_.fundamental.initial;

  dealer_.cash = round_half_away(config_.dealer_cash / tick);

  const auto& sc = config_.stylised;
  std::uniform_int_distribution<std::int64_t> stock_law(sc.stock_min, sc.stock_max);
  std::uniform_real_distribution<double> cash_law(sc.cash_min, sc.cash_max);
  std::uniform_int_distribution<int> lookback_law(1, sc.lookback_max);

  const auto& pop = config_.population;
  agents_.reserve(pop.stylised());
  tracked_.reserve(pop.stylised());
  for (std::size_t i = 0; i < pop.stylised(); ++i) {
    StylisedAgent a;
    a.kind = i < pop.fundamentalists                   ? AgentKind::fundamentalist
             : i < pop.fundamentalists + pop.chartists ? AgentKind::chartist
                                                       : AgentKind::noise;
    a.risk_aversion = sc.risk_aversion;
    a.sigma_eta = sigma_for(sc, a.kind);
    a.stock = stock_law(rng_);
    a.cash = round_half_away(cash_law(rng_) * sc.cash_unit / tick);
    a.lookback = lookback_law(rng_);
    const bool solvent = wealth(a, p0, tick) > 0.0;
    tracked_.push_back(solvent ? 1 : 0);
    if (solvent) {
      class_stock_[class_index(a.kind)] += a.stock;
      class_cash_[class_index(a.kind)] += a.cash;
    }
    agents_.push_back(a);
  }

  history_.reserve(config_.steps + 1);
  history_.push_back(p0);

  out_.seed = seed;
  out_.initial_price = p0;
  out_.initial_dealer_wealth = dealer_.wealth(p0, tick);
  for (std::size_t k = 0; k < 3; ++k) {
    out_.initial_class_wealth[k] =
        static_cast<double>(class_stock_[k]) * p0 + static_cast<double>(class_cash_[k]) * tick;
    out_.class_wealth[k].reserve(config_.steps);
  }
  out_.initial_total_cash = total_cash();
  out_.initial_total_stock = total_stock();
  out_.t.reserve(config_.steps);
  out_.price.reserve(config_.steps);
  out_.fundamental.reserve(config_.steps);
  out_.ewma_var.reserve(config_.steps);
  out_.dealer_inventory.reserve(config_.steps);
  out_.dealer_wealth.reserve(config_.steps);
  out_.dealer_trade_value.reserve(config_.steps);
  out_.actor.reserve(config_.steps);
}

CashTicks World::total_cash() const {
  CashTicks total = dealer_.cash;
  for (const auto& a : agents_) total += a.cash;
  return total;
}

Quantity World::total_stock() const {
  Quantity total = dealer_.inventory;
  for (const auto& a : agents_) total += a.stock;
  return total;
}

void World::begin_timestamp() {
  const double u = uniform01(rng_);
  book_.expire_orders(u, config_.expiry_prob, config_.expiry_count);
  fundamental_.step(rng_);
}

void World::end_timestamp() {
  const double previous = history_.back();
  const double p = book_.current_price(traded_this_step_);
  variance_.update(std::log(p / previous));
  history_.push_back(p);

  const double tick = config_.tick_size;
  out_.t.push_back(now_);
  out_.price.push_back(p);
  out_.fundamental.push_back(fundamental_.value());
  out_.ewma_var.push_back(variance_.value());
  out_.dealer_inventory.push_back(dealer_.inventory);
  out_.dealer_wealth.push_back(dealer_.wealth(p, tick));
  out_.dealer_trade_value.push_back(dealer_trade_value_);
  for (std::size_t k = 0; k < 3; ++k) {
    out_.class_wealth[k].push_back(static_cast<double>(class_stock_[k]) * p +
                                   static_cast<double>(class_cash_[k]) * tick);
  }
  out_.actor.push_back(current_actor_);

  if (observer_) observer_(StepView{now_, book_, dealer_, p});

  ++now_;
  traded_this_step_ = false;
  dealer_trade_value_ = 0.0;
}

void World::settle(const std::vector<Trade>& trades) {
  const double tick = config_.tick_size;
  for (const Trade& tr : trades) {
    const CashTicks notional = tr.price.ticks * tr.quantity;
    const auto credit = [&](AgentId id, Quantity dq, CashTicks dc, Side dealer_side) {
      if (id == kDealerId) {
        dealer_.apply(DealerFill{tr.at, dealer_side, tr.price, tr.quantity});
        return;
      }
      const std::size_t i = id - 1;
      StylisedAgent& a = agents_[i];
      a.stock += dq;
      a.cash += dc;
      if (tracked_[i]) {
        class_stock_[class_index(a.kind)] += dq;
        class_cash_[class_index(a.kind)] += dc;
      }
    };
    credit(tr.buyer_id, tr.quantity, -notional, Side::bid);
    credit(tr.seller_id, -tr.quantity, notional, Side::ask);
    if (tr.buyer_id == kDealerId) dealer_trade_value_ += static_cast<double>(notional) * tick;
    if (tr.seller_id == kDealerId) dealer_trade_value_ -= static_cast<double>(notional) * tick;
    out_.trades.push_back(tr);
  }
  if (!trades.empty()) traded_this_step_ = true;
}

void World::stylised_turn() {
  std::uniform_int_distribution<std::size_t> pick(0, agents_.size() - 1);
  const std::size_t idx = pick(rng_);
  // Draws are taken unconditionally so that the stream advances identically
  // whatever the agent ends up doing.
  const double eta = std_normal_(rng_);
  const double eps = std_normal_(rng_);
  const double zeta = zeta_(rng_);
  current_actor_ = static_cast<std::int32_t>(idx);

  StylisedAgent& agent = agents_[idx];
  const double tick = config_.tick_size;
  const double p = price();
  if (!agent.bankrupt && !(wealth(agent, p, tick) > 0.0)) agent.bankrupt = true;
  if (agent.bankrupt) return;

  const double forecast = forecast_return(agent, p, fundamental_.value(), history_, agent.sigma_eta * eta,
                                          config_.stylised.sigma_epsilon * eps);
  const double fraction =
      crra_allocation(forecast_price(p, forecast), p, agent.risk_aversion, variance_.value());
  const auto intent = target_order(agent, fraction, p, tick);
  if (!intent) return;

  const auto bb = book_.best_bid();
  const auto ba = book_.best_ask();
  const std::optional<double> best_bid = bb ? std::optional<double>(bb->currency(tick)) : std::nullopt;
  const std::optional<double> best_ask = ba ? std::optional<double>(ba->currency(tick)) : std::nullopt;
  const TickPrice limit = order_price(intent->side, best_bid, best_ask, p, zeta,
                                      lognormal_median(config_.stylised.lognormal_scale), tick);
  settle(book_.submit_limit_order(static_cast<AgentId>(idx + 1), intent->side, limit, intent->quantity, now_));
}

void World::dealer_turn() {
  current_actor_ = kDealerActor;
  ++out_.dealer_turns;
  book_.cancel_all(kDealerId);
  const Quote q = dealer_quotes(price(), dealer_.inventory, config_.dealer, variance_.value(), config_.tick_size);
  if (q.has_bid()) {
    TickPrice bid = q.bid_price;
    if (config_.dealer.post_only) {
      if (const auto ba = book_.best_ask(); ba && bid >= *ba) bid = TickPrice{std::max<std::int64_t>(1, ba->ticks - 1)};
    }
    settle(book_.submit_limit_order(kDealerId, Side::bid, bid, q.bid_size, now_));
  }
  end_timestamp();
  if (now_ >= static_cast<std::int64_t>(config_.steps)) return;
  begin_timestamp();
  if (q.has_ask()) {
    TickPrice ask = q.ask_price;
    if (config_.dealer.post_only) {
      if (const auto bb = book_.best_bid(); bb && ask <= *bb) ask = TickPrice{bb->ticks + 1};
    }
    settle(book_.submit_limit_order(kDealerId, Side::ask, ask, q.ask_size, now_));
  }
  end_timestamp();
}

bool World::step() {
  if (now_ >= static_cast<std::int64_t>(config_.steps)) return false;
  begin_timestamp();
  const double u = uniform01(rng_);
  const bool dealer = !last_turn_dealer_ && u < config_.dealer_prob;
  last_turn_dealer_ = dealer;
  if (dealer) {
    dealer_turn();
  } else {
    stylised_turn();
    end_timestamp();
  }
  return now_ < static_cast<std::int64_t>(config_.steps);
}

void World::run(const StepObserver& observer) {
  observer_ = observer;
  while (step()) {
  }
  observer_ = {};
}

RunOutput World::take_output() {
  out_.final_total_cash = total_cash();
  out_.final_total_stock = total_stock();
  out_.final_dealer_inventory = dealer_.inventory;
  out_.final_dealer_cash = dealer_.cash;
  out_.dealer_fills = dealer_.fills;
  out_.bankrupt_agents = 0;
  for (const auto& a : agents_) out_.bankrupt_agents += a.bankrupt ? 1 : 0;
  return std::move(out_);
}

RunOutput run_simulation(const SimConfig& config, std::uint64_t seed, const StepObserver& observer) {
  config.validate();
  World world(config, seed);
  world.run(observer);
  return world.take_output();
}

}  // namespace abm
