#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abm/types.hpp"

namespace abm::prob {

enum class Variant : std::uint8_t { as_unit, as_gamma, naive15, ir };

const char* to_string(Variant v) noexcept;
Variant parse_variant(const std::string& text);
inline constexpr Variant kAllVariants[] = {Variant::as_unit, Variant::as_gamma, Variant::naive15, Variant::ir};

// Defaults are the classic Avellaneda-Stoikov test-bed values.
struct Params {
  double horizon{1.0};
  double dt{0.005};
  double sigma{2.0};
  double intensity{140.0};  // A
  double kappa{1.5};
  double gamma{0.1};
  double initial_price{100.0};
  double initial_cash{0.0};
  double gamma_shape{2.0};
  double gamma_scale{15.0};
  double naive_size{15.0};
  double ir_phi_max{15.0};
  // Non-positive; zero-initialised value means ln(1/phi)/phi.
  double ir_eta{0.0};
  bool ir_eta_set{false};
  Variant variant{Variant::as_unit};

  std::size_t steps() const;
  double eta() const;
  void validate() const;
};

// Execution probability per step for a quote at distance delta from the
// mid: min(1, A exp(-kappa delta) dt).
double fill_probability(double delta, double intensity, double kappa, double dt);

struct PathPoint {
  double t{0.0};
  double mid{0.0};
  double bid{0.0};
  double ask{0.0};
  double inventory{0.0};
  double cash{0.0};
  double bought{0.0};
  double sold{0.0};
};

struct RunResult {
  double terminal_wealth{0.0};
  double terminal_inventory{0.0};
  double terminal_cash{0.0};
  std::vector<PathPoint> path;
};

RunResult simulate_run(const Params& params, std::uint64_t seed, bool keep_path = false);

struct Histogram {
  double lo{0.0};
  double hi{0.0};
  std::vector<std::size_t> counts;
};

struct VariantSummary {
  Variant variant{Variant::as_unit};
  std::vector<double> terminal_wealth;
  std::vector<double> terminal_inventory;
  double wealth_mean{0.0};
  double wealth_std{0.0};
  double inventory_mean{0.0};
  double inventory_std{0.0};
  Histogram histogram;
};

Histogram histogram(const std::vector<double>& samples, std::size_t bins);

// Runs n_runs paths for params.variant, seeding run i with run_seed(master, i)
// so that variants share their random streams.
VariantSummary wealth_histogram(Params params, std::size_t n_runs, std::uint64_t master_seed, std::size_t bins = 40);

}  // namespace abm::prob
