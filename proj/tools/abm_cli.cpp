#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "abm/config.hpp"
#include "abm/experiments.hpp"
#include "abm/output.hpp"
#include "abm/prob_sim.hpp"

namespace {

using abm::ConfigMap;

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> steps;
  std::string out{"out"};
  std::size_t workers{std::max(1u, std::thread::hardware_concurrency())};
  bool full_scale{false};
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_runs = true) {
  cmd->add_option("--config", o.config_file, "INI config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a config key, section.key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "Master seed");
  if (with_runs) cmd->add_option("--runs", o.runs, "Runs (per dealer and grid point)");
  cmd->add_option("--steps", o.steps, "Timestamps per run");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--full-scale", o.full_scale, "Use 100 runs x 40000 steps");
}

ConfigMap gather(const CommonOptions& o) {
  ConfigMap values;
  if (!o.config_file.empty()) values = abm::read_config_file(o.config_file);
  for (const auto& text : o.overrides) {
    auto [k, v] = abm::parse_override(text);
    values[k] = v;
  }
  return values;
}

abm::SimConfig sim_config(const CommonOptions& o, const ConfigMap& values) {
  abm::SimConfig c = o.full_scale ? abm::SimConfig::full_scale() : abm::SimConfig{};
  abm::apply_sim_config(c, values);
  if (o.seed) c.seed = *o.seed;
  if (o.runs) c.runs = *o.runs;
  if (o.steps) c.steps = *o.steps;
  c.validate();
  return c;
}

nlohmann::ordered_json meta(const std::string& command, std::uint64_t seed,
                            const std::vector<std::pair<std::string, std::string>>& config) {
  nlohmann::ordered_json doc;
  doc["version"] = abm::io::version_string();
  doc["command"] = command;
  doc["seed"] = seed;
  doc["config"] = abm::io::config_json(config);
  return doc;
}

std::string render(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

int cmd_run(const CommonOptions& o, std::size_t run_index, bool book_log) {
  const auto c = sim_config(o, gather(o));
  const std::filesystem::path dir = o.out;
  const std::uint64_t seed = abm::run_seed(c.seed, run_index);
  std::ostringstream book;
  abm::StepObserver observer;
  if (book_log) {
    const std::size_t depth = c.book_log_depth > 0 ? c.book_log_depth : 5;
    observer = [&](const abm::StepView& v) { book << abm::io::book_snapshot(v.t, v.book, depth).dump() << '\n'; };
  }
  const abm::RunOutput run = abm::run_simulation(c, seed, observer);
  abm::io::write_file(dir / "series.csv", render([&](std::ostream& s) { abm::io::write_series_csv(run, s); }));
  abm::io::write_file(dir / "trades.csv", render([&](std::ostream& s) { abm::io::write_trades_csv(run, s); }));
  const std::vector<abm::RunMetrics> metrics{abm::compute_metrics(run)};
  abm::io::write_file(dir / "moments.csv", render([&](std::ostream& s) { abm::write_moments_csv(metrics, s); }));
  if (book_log) abm::io::write_file(dir / "book.jsonl", book.str());
  auto doc = meta("run", c.seed, abm::describe(c));
  doc["run_index"] = run_index;
  doc["run_seed"] = seed;
  doc["timestamps"] = run.size();
  doc["trades"] = run.trades.size();
  doc["dealer_turns"] = run.dealer_turns;
  doc["conserved"] = metrics[0].conserved;
  abm::io::write_json(dir / "meta.json", doc);
  std::cout << "run: " << run.size() << " timestamps, " << run.trades.size() << " trades, final price "
            << abm::format_number(run.price.empty() ? run.initial_price : run.price.back()) << " -> " << dir.string()
            << "\n";
  return 0;
}

abm::GridPoint parse_point(const std::string& text) {
  abm::GridPoint p;
  const auto colon = text.find(':');
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw abm::ValidationError("bad grid value '" + text + "'");
    }
  };
  p.value = number(text.substr(0, colon));
  if (colon != std::string::npos) p.value2 = number(text.substr(colon + 1));
  return p;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis_flag, const std::string& grid_flag,
              const std::string& kinds_flag) {
  const ConfigMap values = gather(o);
  ConfigMap sim_values;
  for (const auto& [k, v] : values) {
    if (k.rfind("sweep.", 0) != 0) sim_values[k] = v;
  }
  auto lookup = [&](const std::string& flag, const std::string& key, const std::string& fallback) {
    if (!flag.empty()) return flag;
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  };
  abm::SweepSpec spec;
  spec.base = sim_config(o, sim_values);
  spec.axis = abm::parse_sweep_axis(lookup(axis_flag, "sweep.axis", "risk_aversion_2_over_gamma"));
  const std::string grid = lookup(grid_flag, "sweep.grid", "");
  if (grid.empty()) {
    spec.grid = abm::SweepSpec::default_grid(spec.axis);
  } else {
    for (const auto& item : abm::split_list(grid)) spec.grid.push_back(parse_point(item));
  }
  const bool skew = spec.axis == abm::SweepAxis::inventory_skew_symmetric ||
                    spec.axis == abm::SweepAxis::inventory_skew_asymmetric;
  spec.kinds.clear();
  for (const auto& k : abm::split_list(lookup(kinds_flag, "sweep.kinds", skew ? "ir" : "as,ir"))) {
    spec.kinds.push_back(abm::parse_dealer_kind(k));
  }
  spec.runs = spec.base.runs;
  spec.seed = spec.base.seed;
  const auto result = abm::run_sweep(spec, o.workers);
  abm::write_sweep(result, o.out);
  std::cout << "sweep " << abm::to_string(spec.axis) << ": " << result.cells.size() << " cells x " << spec.runs
            << " runs -> " << o.out << "\n";
  for (const auto& cell : result.cells) {
    for (const auto& e : cell.errors) std::cerr << "  " << abm::to_string(cell.kind) << " failed " << e << "\n";
  }
  return result.ok() ? 0 : 1;
}

int cmd_baselines(const CommonOptions& o) {
  const auto c = sim_config(o, gather(o));
  const auto rows = abm::compare_baselines(c, c.runs, c.seed, o.workers);
  abm::write_baselines(rows, o.out);
  abm::io::write_json(std::filesystem::path(o.out) / "meta.json", meta("baselines", c.seed, abm::describe(c)));
  std::cout << "dealer  total_return  volatility  sharpe  corr_underlying  corr_trade  mean_abs_q\n";
  for (const auto& row : rows) {
    auto f = [&](const char* m) {
      const auto v = abm::mean_metric(row.runs, m);
      return v ? abm::format_number(*v) : std::string("-");
    };
    std::cout << abm::to_string(row.kind) << "  " << f("dealer_total_return") << "  " << f("dealer_volatility") << "  "
              << f("dealer_sharpe") << "  " << f("corr_wealth_underlying") << "  " << f("corr_wealth_trade") << "  "
              << f("mean_abs_inventory") << "\n";
  }
  return 0;
}

int cmd_probsim(const CommonOptions& o) {
  const ConfigMap values = gather(o);
  abm::ProbSimSettings s;
  abm::apply_probsim_config(s, values);
  if (o.seed) s.seed = *o.seed;
  if (o.runs) s.runs = *o.runs;
  if (o.steps) s.params.dt = s.params.horizon / static_cast<double>(*o.steps);
  s.params.validate();
  const std::filesystem::path dir = o.out;
  std::vector<abm::prob::VariantSummary> summaries(std::size(abm::prob::kAllVariants));
  abm::parallel_for(summaries.size(), o.workers, [&](std::size_t i) {
    auto p = s.params;
    p.variant = abm::prob::kAllVariants[i];
    summaries[i] = abm::prob::wealth_histogram(p, s.runs, s.seed, s.bins);
  });
  std::ostringstream csv_text;
  abm::io::CsvWriter csv(csv_text, {"variant", "run", "terminal_wealth", "terminal_inventory"});
  auto doc = meta("probsim", s.seed, abm::describe(s));
  for (const auto& v : summaries) {
    for (std::size_t r = 0; r < v.terminal_wealth.size(); ++r) {
      csv.cell(abm::prob::to_string(v.variant)).cell(std::to_string(r)).cell(v.terminal_wealth[r]);
      csv.cell(v.terminal_inventory[r]).end_row();
    }
    nlohmann::ordered_json j;
    j["wealth_mean"] = v.wealth_mean;
    j["wealth_std"] = v.wealth_std;
    j["inventory_mean"] = v.inventory_mean;
    j["inventory_std"] = v.inventory_std;
    j["histogram"] = {{"lo", v.histogram.lo}, {"hi", v.histogram.hi}, {"counts", v.histogram.counts}};
    doc["variants"][abm::prob::to_string(v.variant)] = std::move(j);
    std::cout << abm::prob::to_string(v.variant) << ": wealth " << abm::format_number(v.wealth_mean) << " +- "
              << abm::format_number(v.wealth_std) << ", inventory std " << abm::format_number(v.inventory_std)
              << "\n";
  }
  abm::io::write_file(dir / "probsim.csv", csv_text.str());
  abm::io::write_json(dir / "probsim.json", doc);
  return 0;
}

int cmd_skew_curve(const std::string& out, double phi, double low, double high, std::int64_t q_min,
                   std::int64_t q_max, std::int64_t q_step) {
  const auto curve = abm::emit_skew_curve(phi, low, high, q_min, q_max, q_step);
  std::ostringstream text;
  abm::io::CsvWriter csv(text, {"inventory", "size_low_skew", "size_high_skew"});
  for (const auto& p : curve) csv.cell(p.inventory).cell(p.size_low).cell(p.size_high).end_row();
  const std::filesystem::path dir = out;
  abm::io::write_file(dir / "skew_curve.csv", text.str());
  nlohmann::ordered_json doc;
  doc["version"] = abm::io::version_string();
  doc["phi_max"] = phi;
  doc["skew_low"] = low;
  doc["skew_high"] = high;
  doc["points"] = curve.size();
  abm::io::write_json(dir / "skew_curve.json", doc);
  std::cout << "skew-curve: " << curve.size() << " points -> " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based limit order book market with a monopolistic dealer"};
  app.set_version_flag("--version", abm::io::version_string());
  app.require_subcommand(1);

  CommonOptions run_o, sweep_o, base_o, prob_o;
  std::size_t run_index = 0;
  bool book_log = false;
  auto* run = app.add_subcommand("run", "Single agent-based run");
  add_common(run, run_o, false);
  run->add_option("--run-index", run_index, "Run index combined with the master seed");
  run->add_flag("--book-log", book_log, "Write top-of-book snapshots to book.jsonl");

  std::string axis, grid, kinds;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over one dealer axis");
  add_common(sweep, sweep_o);
  sweep->add_option("--axis", axis, "Sweep axis");
  sweep->add_option("--grid", grid, "Comma separated grid, bid:ask pairs for asymmetric axes");
  sweep->add_option("--kinds", kinds, "Comma separated dealer kinds");

  auto* baselines = app.add_subcommand("baselines", "Compare the three dealers on common random numbers");
  add_common(baselines, base_o);

  auto* probsim = app.add_subcommand("probsim", "Probabilistic dealer simulation");
  add_common(probsim, prob_o);

  std::string curve_out{"out"};
  double phi = 5000.0, low = 0.001, high = 0.004;
  std::int64_t q_min = 0, q_max = 10000, q_step = 50;
  auto* curve = app.add_subcommand("skew-curve", "Quote size against inventory for two skews");
  curve->add_option("--out", curve_out, "Output directory");
  curve->add_option("--phi-max", phi, "Maximum order size");
  curve->add_option("--low", low, "Low skew magnitude");
  curve->add_option("--high", high, "High skew magnitude");
  curve->add_option("--q-min", q_min, "Smallest inventory");
  curve->add_option("--q-max", q_max, "Largest inventory");
  curve->add_option("--q-step", q_step, "Inventory step");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_o, run_index, book_log);
    if (*sweep) return cmd_sweep(sweep_o, axis, grid, kinds);
    if (*baselines) return cmd_baselines(base_o);
    if (*probsim) return cmd_probsim(prob_o);
    if (*curve) return cmd_skew_curve(curve_out, phi, low, high, q_min, q_max, q_step);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
