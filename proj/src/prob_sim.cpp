#include "abm/prob_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "abm/dealer.hpp"
#include "abm/rng.hpp"
#include "abm/stats.hpp"
#include "abm/types.hpp"

namespace abm::prob {

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::as_unit: return "as_unit";
    case Variant::as_gamma: return "as_gamma";
    case Variant::naive15: return "naive15";
    case Variant::ir: return "ir";
  }
  return "unknown";
}

Variant parse_variant(const std::string& text) {
  for (Variant v : kAllVariants) {
    if (text == to_string(v)) return v;
  }
  throw ValidationError("unknown probsim variant '" + text + "'");
}

std::size_t Params::steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

double Params::eta() const { return ir_eta_set ? ir_eta : default_skew(ir_phi_max); }

void Params::validate() const {
  if (!(dt > 0.0)) throw ValidationError("probsim.dt must be positive");
  if (!(horizon >= 0.0)) throw ValidationError("probsim.horizon must be non-negative");
  if (!(sigma >= 0.0)) throw ValidationError("probsim.sigma must be non-negative");
  if (!(intensity >= 0.0)) throw ValidationError("probsim.intensity must be non-negative");
  if (intensity * dt > 1.0) throw ValidationError("probsim intensity * dt must not exceed 1");
  if (!(kappa > 0.0)) throw ValidationError("probsim.kappa must be positive");
  if (!(gamma > 0.0)) throw ValidationError("probsim.gamma must be positive");
  if (!(initial_price > 0.0)) throw ValidationError("probsim.initial_price must be positive");
  if (!(gamma_shape > 0.0) || !(gamma_scale > 0.0)) throw ValidationError("probsim gamma size law must be positive");
  if (!(naive_size >= 1.0) || !(ir_phi_max >= 1.0)) throw ValidationError("probsim sizes must be at least 1");
  if (eta() > 0.0) throw ValidationError("probsim.ir_eta must be non-positive");
}

double fill_probability(double delta, double intensity, double kappa, double dt) {
  return std::min(1.0, intensity * std::exp(-kappa * delta) * dt);
}

namespace {

struct QuotePrices {
  double bid;
  double ask;
};

QuotePrices quote(const Params& p, double mid, double inventory, double time_left) {
  const double var = p.sigma * p.sigma * time_left;
  const double spread = optimal_spread(p.gamma, var, p.kappa);
  double centre = mid;
  if (p.variant == Variant::as_unit || p.variant == Variant::as_gamma) {
    centre = reservation_price(mid, inventory, p.gamma, var);
  }
  return {centre - spread / 2.0, centre + spread / 2.0};
}

}  // namespace

RunResult simulate_run(const Params& params, std::uint64_t seed, bool keep_path) {
  params.validate();
  Rng rng(seed);
  std::gamma_distribution<double> size_law(params.gamma_shape, params.gamma_scale);

  DealerParams ir;
  ir.phi_max_bid = ir.phi_max_ask = params.ir_phi_max;
  ir.eta_bid = ir.eta_ask = params.eta();

  const std::size_t n = params.steps();
  const double step = params.sigma * std::sqrt(params.dt);
  double mid = params.initial_price;
  double inventory = 0.0;
  double cash = params.initial_cash;

  RunResult out;
  if (keep_path) out.path.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * params.dt;
    const QuotePrices q = quote(params, mid, inventory, params.horizon - t);

    // Fixed draw count per step keeps variants on common random numbers.
    const double u_bid = uniform01(rng);
    const double u_ask = uniform01(rng);
    const double x_bid = std::max(1.0, std::round(size_law(rng)));
    const double x_ask = std::max(1.0, std::round(size_law(rng)));
    const double u_move = uniform01(rng);

    double bid_size = 0.0;
    double ask_size = 0.0;
    switch (params.variant) {
      case Variant::as_unit:
        bid_size = ask_size = 1.0;
        break;
      case Variant::as_gamma:
        bid_size = x_bid;
        ask_size = x_ask;
        break;
      case Variant::naive15:
        bid_size = ask_size = std::round(params.naive_size);
        break;
      case Variant::ir: {
        const auto [b, a] = ir_quote_sizes(inventory, ir);
        bid_size = std::min(x_bid, static_cast<double>(b));
        ask_size = std::min(x_ask, static_cast<double>(a));
        break;
      }
    }

    PathPoint point{t, mid, q.bid, q.ask, 0.0, 0.0, 0.0, 0.0};
    if (bid_size > 0.0 && u_bid < fill_probability(mid - q.bid, params.intensity, params.kappa, params.dt)) {
      inventory += bid_size;
      cash -= q.bid * bid_size;
      point.bought = bid_size;
    }
    if (ask_size > 0.0 && u_ask < fill_probability(q.ask - mid, params.intensity, params.kappa, params.dt)) {
      inventory -= ask_size;
      cash += q.ask * ask_size;
      point.sold = ask_size;
    }
    point.inventory = inventory;
    point.cash = cash;
    if (keep_path) out.path.push_back(point);

    mid += u_move < 0.5 ? step : -step;
  }
  out.terminal_inventory = inventory;
  out.terminal_cash = cash;
  out.terminal_wealth = cash + inventory * mid;
  return out;
}

Histogram histogram(const std::vector<double>& samples, std::size_t bins) {
  Histogram h;
  if (samples.empty() || bins == 0) return h;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  h.lo = *lo;
  h.hi = *hi;
  h.counts.assign(bins, 0);
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (double x : samples) {
    std::size_t k = width > 0.0 ? static_cast<std::size_t>((x - h.lo) / width) : 0;
    h.counts[std::min(k, bins - 1)] += 1;
  }
  return h;
}

VariantSummary wealth_histogram(Params params, std::size_t n_runs, std::uint64_t master_seed, std::size_t bins) {
  if (n_runs == 0) throw ValidationError("probsim needs at least one run");
  params.validate();
  VariantSummary s;
  s.variant = params.variant;
  s.terminal_wealth.reserve(n_runs);
  s.terminal_inventory.reserve(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) {
    const RunResult r = simulate_run(params, run_seed(master_seed, i));
    s.terminal_wealth.push_back(r.terminal_wealth);
    s.terminal_inventory.push_back(r.terminal_inventory);
  }
  s.wealth_mean = stats::mean(s.terminal_wealth);
  s.wealth_std = n_runs > 1 ? stats::sample_std(s.terminal_wealth) : 0.0;
  s.inventory_mean = stats::mean(s.terminal_inventory);
  s.inventory_std = n_runs > 1 ? stats::sample_std(s.terminal_inventory) : 0.0;
  s.histogram = histogram(s.terminal_wealth, bins);
  return s;
}

}  // namespace abm::prob
