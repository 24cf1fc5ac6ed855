#include "abm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "abm/config.hpp"
#include "abm/output.hpp"

namespace abm {

namespace {

std::vector<double> with_initial(double initial, const std::vector<double>& series) {
  std::vector<double> out;
  out.reserve(series.size() + 1);
  out.push_back(initial);
  out.insert(out.end(), series.begin(), series.end());
  return out;
}

const char* kClassNames[3] = {"fundamentalist", "chartist", "noise"};

std::optional<double> opt(double v) { return v; }

}  // namespace

RunMetrics compute_metrics(const RunOutput& run) {
  RunMetrics m;
  m.seed = run.seed;
  const auto wealth = with_initial(run.initial_dealer_wealth, run.dealer_wealth);
  const auto price = with_initial(run.initial_price, run.price);
  m.dealer = stats::summarise_levels(wealth);
  m.market = stats::summarise_levels(price);
  for (std::size_t c = 0; c < 3; ++c) {
    m.classes[c] = stats::summarise_levels(with_initial(run.initial_class_wealth[c], run.class_wealth[c]));
  }

  const auto wr = stats::log_returns(wealth);
  const auto pr = stats::log_returns(price);
  if (wr && pr) m.corr_wealth_underlying = stats::correlation(*wr, *pr);

  std::vector<double> dw, tv;
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (run.dealer_trade_value[i] == 0.0) continue;
    dw.push_back(wealth[i + 1] - wealth[i]);
    tv.push_back(run.dealer_trade_value[i]);
  }
  m.corr_wealth_trade = stats::correlation(dw, tv);

  if (run.size() > 0) {
    double sum = 0.0, abs_sum = 0.0;
    for (Quantity q : run.dealer_inventory) {
      sum += static_cast<double>(q);
      abs_sum += std::abs(static_cast<double>(q));
    }
    m.mean_inventory = sum / static_cast<double>(run.size());
    m.mean_abs_inventory = abs_sum / static_cast<double>(run.size());
  }
  m.final_inventory = run.final_dealer_inventory;
  m.trades = run.trades.size();
  m.dealer_fills = run.dealer_fills.size();
  m.bankrupt_agents = run.bankrupt_agents;
  m.conserved = run.initial_total_cash == run.final_total_cash && run.initial_total_stock == run.final_total_stock;
  return m;
}

const std::vector<MetricDef>& metric_defs() {
  static const std::vector<MetricDef> defs = [] {
    std::vector<MetricDef> d;
    auto add_summary = [&d](const std::string& prefix, std::function<const stats::SeriesSummary&(const RunMetrics&)> pick,
                            bool full) {
      auto name = [&](const char* suffix) { return prefix + "_" + suffix; };
      d.push_back({name("total_return"), [pick](const RunMetrics& m) { return pick(m).total_return; }});
      d.push_back({name("volatility"), [pick](const RunMetrics& m) { return pick(m).volatility; }});
      if (full) {
        d.push_back({name("skew"), [pick](const RunMetrics& m) { return pick(m).skew; }});
        d.push_back({name("kurtosis"), [pick](const RunMetrics& m) { return pick(m).kurtosis; }});
      }
      d.push_back({name("sharpe"), [pick](const RunMetrics& m) { return pick(m).sharpe; }});
    };
    add_summary("dealer", [](const RunMetrics& m) -> const stats::SeriesSummary& { return m.dealer; }, true);
    add_summary("market", [](const RunMetrics& m) -> const stats::SeriesSummary& { return m.market; }, true);
    for (std::size_t c = 0; c < 3; ++c) {
      add_summary(kClassNames[c], [c](const RunMetrics& m) -> const stats::SeriesSummary& { return m.classes[c]; },
                  false);
    }
    d.push_back({"corr_wealth_underlying", [](const RunMetrics& m) { return m.corr_wealth_underlying; }});
    d.push_back({"corr_wealth_trade", [](const RunMetrics& m) { return m.corr_wealth_trade; }});
    d.push_back({"mean_inventory", [](const RunMetrics& m) { return opt(m.mean_inventory); }});
    d.push_back({"mean_abs_inventory", [](const RunMetrics& m) { return opt(m.mean_abs_inventory); }});
    d.push_back({"final_inventory", [](const RunMetrics& m) { return opt(static_cast<double>(m.final_inventory)); }});
    d.push_back({"trades", [](const RunMetrics& m) { return opt(static_cast<double>(m.trades)); }});
    d.push_back({"dealer_fills", [](const RunMetrics& m) { return opt(static_cast<double>(m.dealer_fills)); }});
    d.push_back({"bankrupt_agents", [](const RunMetrics& m) { return opt(static_cast<double>(m.bankrupt_agents)); }});
    return d;
  }();
  return defs;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<RunMetrics> run_batch(const SimConfig& config, std::size_t runs, std::uint64_t master_seed,
                                  std::size_t workers) {
  config.validate();
  std::vector<RunMetrics> out(runs);
  parallel_for(runs, workers,
               [&](std::size_t i) { out[i] = compute_metrics(run_simulation(config, run_seed(master_seed, i))); });
  return out;
}

const char* to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::risk_aversion_2_over_gamma: return "risk_aversion_2_over_gamma";
    case SweepAxis::phi_max_symmetric: return "phi_max_symmetric";
    case SweepAxis::phi_max_asymmetric: return "phi_max_asymmetric";
    case SweepAxis::inventory_skew_symmetric: return "inventory_skew_symmetric";
    case SweepAxis::inventory_skew_asymmetric: return "inventory_skew_asymmetric";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& text) {
  for (auto a : {SweepAxis::risk_aversion_2_over_gamma, SweepAxis::phi_max_symmetric, SweepAxis::phi_max_asymmetric,
                 SweepAxis::inventory_skew_symmetric, SweepAxis::inventory_skew_asymmetric}) {
    if (text == to_string(a)) return a;
  }
  throw ValidationError("unknown sweep axis '" + text + "'");
}

namespace {

bool is_skew_axis(SweepAxis axis) {
  return axis == SweepAxis::inventory_skew_symmetric || axis == SweepAxis::inventory_skew_asymmetric;
}

bool is_pair_axis(SweepAxis axis) {
  return axis == SweepAxis::phi_max_asymmetric || axis == SweepAxis::inventory_skew_asymmetric;
}

}  // namespace

std::vector<GridPoint> SweepSpec::default_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::risk_aversion_2_over_gamma: return {{5, {}}, {10, {}}, {20, {}}, {40, {}}, {80, {}}};
    case SweepAxis::phi_max_symmetric: return {{1000, {}}, {2500, {}}, {5000, {}}, {7500, {}}, {10000, {}}};
    case SweepAxis::phi_max_asymmetric:
      return {{10000, 1000}, {7500, 2500}, {5000, 5000}, {2500, 7500}, {1000, 10000}};
    case SweepAxis::inventory_skew_symmetric: return {{0.25, {}}, {0.5, {}}, {1, {}}, {2, {}}, {4, {}}};
    case SweepAxis::inventory_skew_asymmetric: return {{0.25, 4}, {0.5, 2}, {1, 1}, {2, 0.5}, {4, 0.25}};
  }
  return {};
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  if (kinds.empty()) throw ValidationError("sweep needs at least one dealer kind");
  if (runs == 0) throw ValidationError("sweep needs at least one run per point");
  for (const auto& p : grid) {
    if (!std::isfinite(p.value) || !(p.value > 0.0)) throw ValidationError("sweep grid values must be positive");
    if (is_pair_axis(axis) && !p.value2) throw ValidationError("asymmetric axes need bid:ask grid pairs");
    if (p.value2 && !(*p.value2 > 0.0)) throw ValidationError("sweep grid values must be positive");
  }
  if (is_skew_axis(axis)) {
    for (DealerKind k : kinds) {
      if (k != DealerKind::ir) throw ValidationError("inventory skew sweeps apply to the ir dealer only");
    }
  }
  base.validate();
}

SimConfig apply_grid_point(const SimConfig& base, SweepAxis axis, DealerKind kind, const GridPoint& point) {
  SimConfig c = base;
  c.dealer.kind = kind;
  const double second = point.value2.value_or(point.value);
  switch (axis) {
    case SweepAxis::risk_aversion_2_over_gamma:
      c.dealer.gamma = 2.0 / point.value;
      break;
    case SweepAxis::phi_max_symmetric:
    case SweepAxis::phi_max_asymmetric:
      c.dealer.phi_max_bid = point.value;
      c.dealer.phi_max_ask = second;
      c.dealer.eta_bid.reset();
      c.dealer.eta_ask.reset();
      if (kind == DealerKind::naive) c.dealer.naive_size = point.value;
      break;
    case SweepAxis::inventory_skew_symmetric:
    case SweepAxis::inventory_skew_asymmetric:
      c.dealer.eta_bid = base.dealer.skew_bid() * point.value;
      c.dealer.eta_ask = base.dealer.skew_ask() * second;
      break;
  }
  c.dealer.validate();
  return c;
}

bool SweepResult::ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const SweepCell& c) { return c.errors.empty(); });
}

SweepResult run_sweep(const SweepSpec& spec, std::size_t workers) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  std::vector<SimConfig> configs;
  for (DealerKind kind : spec.kinds) {
    for (const auto& point : spec.grid) {
      SweepCell cell;
      cell.kind = kind;
      cell.point = point;
      cell.runs.resize(spec.runs);
      result.cells.push_back(std::move(cell));
      configs.push_back(apply_grid_point(spec.base, spec.axis, kind, point));
    }
  }
  // Every run is keyed by (cell, run), so scheduling order never shows up in
  // the results. A failing run is recorded and the sweep carries on.
  std::vector<std::string> failures(result.cells.size() * spec.runs);
  parallel_for(failures.size(), workers, [&](std::size_t job) {
    const std::size_t cell = job / spec.runs;
    const std::size_t run = job % spec.runs;
    try {
      result.cells[cell].runs[run] = compute_metrics(run_simulation(configs[cell], run_seed(spec.seed, run)));
    } catch (const std::exception& e) {
      failures[job] = std::string("run ") + std::to_string(run) + ": " + e.what();
    }
  });
  for (std::size_t job = 0; job < failures.size(); ++job) {
    if (!failures[job].empty()) result.cells[job / spec.runs].errors.push_back(failures[job]);
  }
  return result;
}

std::optional<double> mean_metric(const std::vector<RunMetrics>& runs, const std::string& metric) {
  const auto& defs = metric_defs();
  auto it = std::find_if(defs.begin(), defs.end(), [&](const MetricDef& d) { return metric == d.name; });
  if (it == defs.end()) throw ValidationError("unknown metric '" + metric + "'");
  std::vector<double> xs;
  for (const auto& r : runs) {
    if (auto v = it->get(r); v && std::isfinite(*v)) xs.push_back(*v);
  }
  if (xs.empty()) return std::nullopt;
  return stats::mean(xs);
}

std::vector<BaselineRow> compare_baselines(const SimConfig& config, std::size_t runs, std::uint64_t master_seed,
                                           std::size_t workers) {
  std::vector<BaselineRow> rows;
  for (DealerKind kind : {DealerKind::as, DealerKind::ir, DealerKind::naive}) {
    SimConfig c = config;
    c.dealer.kind = kind;
    rows.push_back({kind, run_batch(c, runs, master_seed, workers)});
  }
  return rows;
}

std::vector<SkewCurvePoint> emit_skew_curve(double phi_max, double skew_low, double skew_high, Quantity q_min,
                                            Quantity q_max, Quantity q_step) {
  if (!(phi_max >= 1.0)) throw ValidationError("phi_max must be at least 1");
  if (!(skew_low >= 0.0) || !(skew_high >= 0.0)) throw ValidationError("skews are given as non-negative magnitudes");
  if (q_step <= 0 || q_max < q_min) throw ValidationError("invalid inventory range");
  DealerParams low, high;
  low.phi_max_bid = low.phi_max_ask = high.phi_max_bid = high.phi_max_ask = phi_max;
  low.eta_bid = low.eta_ask = -skew_low;
  high.eta_bid = high.eta_ask = -skew_high;
  std::vector<SkewCurvePoint> out;
  for (Quantity q = q_min; q <= q_max; q += q_step) {
    const double qd = static_cast<double>(q);
    // The curve is the size on the side of the excess inventory.
    const auto lo = ir_raw_sizes(qd, low);
    const auto hi = ir_raw_sizes(qd, high);
    out.push_back({q, q >= 0 ? lo.bid : lo.ask, q >= 0 ? hi.bid : hi.ask});
  }
  return out;
}

namespace {

void moments_header(std::vector<std::string>& header) {
  for (const auto& d : metric_defs()) header.emplace_back(d.name);
}

void write_optional(io::CsvWriter& csv, const std::optional<double>& v) {
  if (v && std::isfinite(*v)) {
    csv.cell(*v);
  } else {
    csv.empty();
  }
}

nlohmann::ordered_json means_json(const std::vector<RunMetrics>& runs) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& d : metric_defs()) {
    const auto v = mean_metric(runs, d.name);
    doc[d.name] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  }
  return doc;
}

std::string point_label(const GridPoint& p) {
  std::string s = format_number(p.value);
  if (p.value2) s += "_" + format_number(*p.value2);
  return s;
}

}  // namespace

void write_moments_csv(const std::vector<RunMetrics>& runs, std::ostream& out) {
  std::vector<std::string> header{"run", "seed"};
  moments_header(header);
  io::CsvWriter csv(out, header);
  const auto& defs = metric_defs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    csv.cell(std::to_string(i)).cell(runs[i].seed);
    for (const auto& d : defs) write_optional(csv, d.get(runs[i]));
    csv.end_row();
  }
  // Aggregates across runs: the mean and the sample std of per-run values.
  for (const char* label : {"mean", "std"}) {
    csv.cell(label).empty();
    for (const auto& d : defs) {
      std::vector<double> xs;
      for (const auto& r : runs) {
        if (auto v = d.get(r); v && std::isfinite(*v)) xs.push_back(*v);
      }
      if (std::string(label) == "mean" && !xs.empty()) {
        csv.cell(stats::mean(xs));
      } else if (std::string(label) == "std" && xs.size() >= 2) {
        csv.cell(stats::sample_std(xs));
      } else {
        csv.empty();
      }
    }
    csv.end_row();
  }
}

void write_sweep(const SweepResult& result, const std::filesystem::path& dir) {
  const auto& spec = result.spec;
  std::filesystem::create_directories(dir);
  std::ostringstream long_csv;
  {
    io::CsvWriter csv(long_csv,
                      {"dealer", "axis_value", "axis_value2", "display_value", "run", "seed", "metric", "value"});
    for (const auto& cell : result.cells) {
      const SimConfig cfg = apply_grid_point(spec.base, spec.axis, cell.kind, cell.point);
      const double shown = is_skew_axis(spec.axis) ? -cfg.dealer.skew_bid() * 100.0 : cell.point.value;
      for (std::size_t r = 0; r < cell.runs.size(); ++r) {
        for (const auto& d : metric_defs()) {
          const auto v = d.get(cell.runs[r]);
          csv.cell(to_string(cell.kind)).cell(cell.point.value);
          if (cell.point.value2) {
            csv.cell(*cell.point.value2);
          } else {
            csv.empty();
          }
          csv.cell(shown).cell(std::to_string(r)).cell(cell.runs[r].seed).cell(d.name);
          write_optional(csv, v);
          csv.end_row();
        }
      }
    }
  }
  io::write_file(dir / "sweep.csv", long_csv.str());

  nlohmann::ordered_json summary;
  summary["version"] = io::version_string();
  summary["axis"] = to_string(spec.axis);
  summary["axis_label"] = spec.axis == SweepAxis::risk_aversion_2_over_gamma ? "2/gamma"
                          : is_skew_axis(spec.axis)                          ? "inventory skew x100"
                                                                             : "phi_max";
  summary["axis_scale"] = is_skew_axis(spec.axis) ? "log" : "linear";
  summary["runs"] = spec.runs;
  summary["seed"] = spec.seed;
  summary["config"] = io::config_json(describe(spec.base));
  summary["ok"] = result.ok();
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& cell : result.cells) {
    const auto sub = dir / to_string(cell.kind) / point_label(cell.point);
    std::ostringstream m;
    write_moments_csv(cell.runs, m);
    io::write_file(sub / "moments.csv", m.str());
    nlohmann::ordered_json c;
    c["dealer"] = to_string(cell.kind);
    c["value"] = cell.point.value;
    if (cell.point.value2) c["value2"] = *cell.point.value2;
    c["errors"] = cell.errors;
    c["means"] = means_json(cell.runs);
    cells.push_back(std::move(c));
  }
  summary["cells"] = std::move(cells);
  io::write_json(dir / "summary.json", summary);
}

void write_baselines(const std::vector<BaselineRow>& rows, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream table;
  {
    std::vector<std::string> header{"dealer"};
    moments_header(header);
    io::CsvWriter csv(table, header);
    for (const auto& row : rows) {
      csv.cell(to_string(row.kind));
      for (const auto& d : metric_defs()) write_optional(csv, mean_metric(row.runs, d.name));
      csv.end_row();
    }
  }
  io::write_file(dir / "baselines.csv", table.str());
  nlohmann::ordered_json doc;
  doc["version"] = io::version_string();
  for (const auto& row : rows) {
    std::ostringstream m;
    write_moments_csv(row.runs, m);
    io::write_file(dir / to_string(row.kind) / "moments.csv", m.str());
    doc["dealers"][to_string(row.kind)] = means_json(row.runs);
  }
  io::write_json(dir / "summary.json", doc);
}

}  // namespace abm
