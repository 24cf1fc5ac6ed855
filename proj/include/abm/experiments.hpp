#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abm/market_sim.hpp"
#include "abm/stats.hpp"

namespace abm {

// Per-run statistics extracted from a RunOutput.
struct RunMetrics {
  std::uint64_t seed{0};
  stats::SeriesSummary dealer;
  stats::SeriesSummary market;
  std::array<stats::SeriesSummary, 3> classes;
  // Dealer wealth log returns against price log returns.
  std::optional<double> corr_wealth_underlying;
  // Dealer wealth change against signed traded notional, at timestamps
  // where the dealer traded.
  std::optional<double> corr_wealth_trade;
  double mean_inventory{0.0};
  double mean_abs_inventory{0.0};
  Quantity final_inventory{0};
  std::size_t trades{0};
  std::size_t dealer_fills{0};
  std::size_t bankrupt_agents{0};
  bool conserved{false};
};

RunMetrics compute_metrics(const RunOutput& run);

// Names and accessors of every scalar metric, in output order.
struct MetricDef {
  std::string name;
  std::function<std::optional<double>(const RunMetrics&)> get;
};
const std::vector<MetricDef>& metric_defs();

// Runs `runs` simulations with seeds run_seed(master, i) on up to `workers`
// threads. Results are ordered by run index regardless of scheduling.
std::vector<RunMetrics> run_batch(const SimConfig& config, std::size_t runs, std::uint64_t master_seed,
                                  std::size_t workers);

// Generic deterministic parallel map over [0, n).
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

enum class SweepAxis : std::uint8_t {
  risk_aversion_2_over_gamma,
  phi_max_symmetric,
  phi_max_asymmetric,
  inventory_skew_symmetric,
  inventory_skew_asymmetric,
};

const char* to_string(SweepAxis axis) noexcept;
SweepAxis parse_sweep_axis(const std::string& text);

// One grid point. `value` is the primary coordinate; `value2` carries the
// ask-side coordinate of the asymmetric axes.
struct GridPoint {
  double value{0.0};
  std::optional<double> value2;
};

struct SweepSpec {
  SweepAxis axis{SweepAxis::risk_aversion_2_over_gamma};
  std::vector<GridPoint> grid;
  std::vector<DealerKind> kinds{DealerKind::as, DealerKind::ir};
  std::size_t runs{20};
  std::uint64_t seed{20231210};
  SimConfig base;

  void validate() const;
  static std::vector<GridPoint> default_grid(SweepAxis axis);
};

// Config for one (kind, point) cell. Skew axes multiply the base skew, and
// phi_max axes re-derive the default skew for the new size.
SimConfig apply_grid_point(const SimConfig& base, SweepAxis axis, DealerKind kind, const GridPoint& point);

struct SweepCell {
  DealerKind kind{DealerKind::as};
  GridPoint point;
  std::vector<RunMetrics> runs;
  std::vector<std::string> errors;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;
  bool ok() const;
};

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers);

// Mean over runs of one metric (runs where it is absent are skipped).
std::optional<double> mean_metric(const std::vector<RunMetrics>& runs, const std::string& metric);

struct BaselineRow {
  DealerKind kind{DealerKind::as};
  std::vector<RunMetrics> runs;
};

std::vector<BaselineRow> compare_baselines(const SimConfig& config, std::size_t runs, std::uint64_t master_seed,
                                           std::size_t workers);

struct SkewCurvePoint {
  Quantity inventory{0};
  double size_low{0.0};
  double size_high{0.0};
};

// Quote size phi_max * exp(eta * q) for both skews (given as positive
// magnitudes) across q in [q_min, q_max].
std::vector<SkewCurvePoint> emit_skew_curve(double phi_max, double skew_low, double skew_high, Quantity q_min,
                                            Quantity q_max, Quantity q_step = 1);

// Writers.
void write_moments_csv(const std::vector<RunMetrics>& runs, std::ostream& out);
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);
void write_baselines(const std::vector<BaselineRow>& rows, const std::filesystem::path& dir);

}  // namespace abm
