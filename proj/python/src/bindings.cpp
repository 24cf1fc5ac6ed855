// Python bindings. Configuration crosses the boundary as a flat
// {"section.key": value} dict, the same keys the CLI and config files use.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "abm/config.hpp"
#include "abm/experiments.hpp"
#include "abm/market_sim.hpp"
#include "abm/order_book.hpp"
#include "abm/prob_sim.hpp"
#include "abm/rng.hpp"
#include "abm/stats.hpp"

namespace py = pybind11;
using namespace abm;

namespace {

std::string as_text(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) return v.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::float_>(v)) return format_number(v.cast<double>());
  if (v.is_none()) return "default";
  return py::str(v).cast<std::string>();
}

ConfigMap to_map(const py::dict& overrides) {
  ConfigMap out;
  for (const auto& [k, v] : overrides) out[py::str(k).cast<std::string>()] = as_text(v);
  return out;
}

SimConfig sim_config(const py::dict& overrides) {
  SimConfig c;
  apply_sim_config(c, to_map(overrides));
  c.validate();
  return c;
}

py::dict metrics_dict(const RunMetrics& m) {
  py::dict d;
  d["seed"] = m.seed;
  for (const auto& def : metric_defs()) {
    const auto v = def.get(m);
    d[py::str(def.name)] = v ? py::cast(*v) : py::none();
  }
  d["conserved"] = m.conserved;
  return d;
}

py::list metrics_list(const std::vector<RunMetrics>& runs) {
  py::list out;
  for (const auto& r : runs) out.append(metrics_dict(r));
  return out;
}

py::dict run_dict(const RunOutput& r) {
  py::dict d;
  d["seed"] = r.seed;
  d["t"] = r.t;
  d["price"] = r.price;
  d["fundamental"] = r.fundamental;
  d["ewma_var"] = r.ewma_var;
  d["dealer_inventory"] = r.dealer_inventory;
  d["dealer_wealth"] = r.dealer_wealth;
  d["dealer_trade_value"] = r.dealer_trade_value;
  d["wealth_fundamentalist"] = r.class_wealth[0];
  d["wealth_chartist"] = r.class_wealth[1];
  d["wealth_noise"] = r.class_wealth[2];
  d["actor"] = r.actor;
  d["trades"] = r.trades.size();
  d["dealer_fills"] = r.dealer_fills.size();
  d["bankrupt_agents"] = r.bankrupt_agents;
  d["conserved"] = r.initial_total_cash == r.final_total_cash && r.initial_total_stock == r.final_total_stock;
  d["metrics"] = metrics_dict(compute_metrics(r));
  return d;
}

py::dict trade_dict(const Trade& t) {
  py::dict d;
  d["price_ticks"] = t.price.ticks;
  d["quantity"] = t.quantity;
  d["buyer"] = t.buyer_id;
  d["seller"] = t.seller_id;
  d["resting_order"] = t.resting_order_id;
  d["incoming_order"] = t.incoming_order_id;
  d["at"] = t.at;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Agent-based limit order book market with a quoting dealer";
  m.attr("__version__") = ABM_VERSION;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::enum_<Side>(m, "Side").value("bid", Side::bid).value("ask", Side::ask);

  py::class_<OrderBook>(m, "OrderBook")
      .def(py::init<double, double>(), py::arg("tick_size") = 0.1, py::arg("initial_price") = 1000.0)
      .def(
          "submit",
          [](OrderBook& b, AgentId agent, Side side, std::int64_t price_ticks, Quantity qty, std::int64_t at) {
            py::list out;
            for (const auto& t : b.submit_limit_order(agent, side, TickPrice{price_ticks}, qty, at)) {
              out.append(trade_dict(t));
            }
            return out;
          },
          py::arg("agent"), py::arg("side"), py::arg("price_ticks"), py::arg("quantity"), py::arg("at") = 0,
          "Submit a limit order at an integer tick price; returns the trades it caused.")
      .def("cancel", &OrderBook::cancel)
      .def(
          "expire",
          [](OrderBook& b, double u, double omega, std::size_t tau) {
            std::vector<OrderId> ids;
            for (const auto& o : b.expire_orders(u, omega, tau)) ids.push_back(o.id);
            return ids;
          },
          py::arg("u"), py::arg("omega"), py::arg("tau"))
      .def("current_price", &OrderBook::current_price, py::arg("traded_this_step"))
      .def("best_bid", [](const OrderBook& b) -> std::optional<std::int64_t> {
        if (auto p = b.best_bid()) return p->ticks;
        return std::nullopt;
      })
      .def("best_ask", [](const OrderBook& b) -> std::optional<std::int64_t> {
        if (auto p = b.best_ask()) return p->ticks;
        return std::nullopt;
      })
      .def(
          "depth",
          [](const OrderBook& b, Side side, std::size_t levels) {
            py::list out;
            for (const auto& l : b.depth(side, levels)) out.append(py::make_tuple(l.price.ticks, l.quantity, l.orders));
            return out;
          },
          py::arg("side"), py::arg("levels") = 5)
      .def_property_readonly("prev_price", &OrderBook::prev_price)
      .def("__len__", &OrderBook::size);

  m.def("reservation_price", &reservation_price, py::arg("price"), py::arg("inventory"), py::arg("gamma"),
        py::arg("scaled_variance"));
  m.def("optimal_spread", &optimal_spread, py::arg("gamma"), py::arg("scaled_variance"), py::arg("kappa"));
  m.def("default_skew", &default_skew, py::arg("phi_max"));
  m.def(
      "ir_sizes",
      [](double inventory, double phi_bid, double phi_ask, std::optional<double> eta_bid,
         std::optional<double> eta_ask) {
        DealerParams p;
        p.phi_max_bid = phi_bid;
        p.phi_max_ask = phi_ask;
        p.eta_bid = eta_bid;
        p.eta_ask = eta_ask;
        p.validate();
        const auto s = ir_raw_sizes(inventory, p);
        return py::make_tuple(s.bid, s.ask);
      },
      py::arg("inventory"), py::arg("phi_max_bid") = 5000.0, py::arg("phi_max_ask") = 5000.0,
      py::arg("eta_bid") = py::none(), py::arg("eta_ask") = py::none(),
      "Unrounded (bid, ask) inventory-rule quote sizes.");

  m.def("run_seed", &run_seed, py::arg("master_seed"), py::arg("run_index"));

  m.def(
      "config",
      [](const py::dict& overrides) {
        py::dict d;
        for (const auto& [k, v] : describe(sim_config(overrides))) d[py::str(k)] = v;
        return d;
      },
      py::arg("overrides") = py::dict(), "Effective simulation config after applying overrides.");

  m.def(
      "run",
      [](const py::dict& overrides, std::optional<std::uint64_t> seed) {
        const SimConfig c = sim_config(overrides);
        RunOutput out;
        {
          py::gil_scoped_release release;
          out = run_simulation(c, seed.value_or(c.seed));
        }
        return run_dict(out);
      },
      py::arg("overrides") = py::dict(), py::arg("seed") = py::none(),
      "One agent-based run; returns its series and summary metrics.");

  m.def(
      "run_batch",
      [](const py::dict& overrides, std::optional<std::size_t> runs, std::optional<std::uint64_t> seed,
         std::size_t workers) {
        const SimConfig c = sim_config(overrides);
        std::vector<RunMetrics> out;
        {
          py::gil_scoped_release release;
          out = run_batch(c, runs.value_or(c.runs), seed.value_or(c.seed), workers);
        }
        return metrics_list(out);
      },
      py::arg("overrides") = py::dict(), py::arg("runs") = py::none(), py::arg("seed") = py::none(),
      py::arg("workers") = 1);

  m.def(
      "baselines",
      [](const py::dict& overrides, std::optional<std::size_t> runs, std::optional<std::uint64_t> seed,
         std::size_t workers) {
        const SimConfig c = sim_config(overrides);
        std::vector<BaselineRow> rows;
        {
          py::gil_scoped_release release;
          rows = compare_baselines(c, runs.value_or(c.runs), seed.value_or(c.seed), workers);
        }
        py::dict out;
        for (const auto& r : rows) out[to_string(r.kind)] = metrics_list(r.runs);
        return out;
      },
      py::arg("overrides") = py::dict(), py::arg("runs") = py::none(), py::arg("seed") = py::none(),
      py::arg("workers") = 1, "AS, IR and naive dealers on common random numbers.");

  m.def(
      "sweep",
      [](const std::string& axis, const std::vector<std::vector<double>>& grid, const std::vector<std::string>& kinds,
         const py::dict& overrides, std::optional<std::size_t> runs, std::optional<std::uint64_t> seed,
         std::size_t workers) {
        SweepSpec s;
        s.axis = parse_sweep_axis(axis);
        s.base = sim_config(overrides);
        s.runs = runs.value_or(s.base.runs);
        s.seed = seed.value_or(s.base.seed);
        if (grid.empty()) {
          s.grid = SweepSpec::default_grid(s.axis);
        } else {
          for (const auto& g : grid) {
            if (g.empty() || g.size() > 2) throw ValidationError("grid points are (value) or (bid, ask)");
            s.grid.push_back({g[0], g.size() == 2 ? std::optional<double>(g[1]) : std::nullopt});
          }
        }
        if (!kinds.empty()) {
          s.kinds.clear();
          for (const auto& k : kinds) s.kinds.push_back(parse_dealer_kind(k));
        }
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = run_sweep(s, workers);
        }
        py::list cells;
        for (const auto& c : r.cells) {
          py::dict d;
          d["dealer"] = to_string(c.kind);
          d["value"] = c.point.value;
          d["value2"] = c.point.value2 ? py::cast(*c.point.value2) : py::none();
          d["runs"] = metrics_list(c.runs);
          d["errors"] = c.errors;
          cells.append(d);
        }
        return cells;
      },
      py::arg("axis"), py::arg("grid") = std::vector<std::vector<double>>{},
      py::arg("kinds") = std::vector<std::string>{}, py::arg("overrides") = py::dict(), py::arg("runs") = py::none(),
      py::arg("seed") = py::none(), py::arg("workers") = 1);

  m.def(
      "probsim",
      [](const std::string& variant, const py::dict& overrides, std::size_t runs, std::uint64_t seed,
         std::size_t bins) {
        ProbSimSettings s;
        apply_probsim_config(s, to_map(overrides));
        s.params.variant = prob::parse_variant(variant);
        s.params.validate();
        prob::VariantSummary v;
        {
          py::gil_scoped_release release;
          v = prob::wealth_histogram(s.params, runs, seed, bins);
        }
        py::dict d;
        d["variant"] = prob::to_string(v.variant);
        d["terminal_wealth"] = v.terminal_wealth;
        d["terminal_inventory"] = v.terminal_inventory;
        d["wealth_mean"] = v.wealth_mean;
        d["wealth_std"] = v.wealth_std;
        d["inventory_mean"] = v.inventory_mean;
        d["inventory_std"] = v.inventory_std;
        d["histogram"] = py::make_tuple(v.histogram.lo, v.histogram.hi, v.histogram.counts);
        return d;
      },
      py::arg("variant"), py::arg("overrides") = py::dict(), py::arg("runs") = 1000, py::arg("seed") = 20231210,
      py::arg("bins") = 40, "Terminal wealth distribution of one probabilistic-simulator variant.");

  m.def(
      "skew_curve",
      [](double phi_max, double low, double high, Quantity q_min, Quantity q_max, Quantity q_step) {
        py::list out;
        for (const auto& p : emit_skew_curve(phi_max, low, high, q_min, q_max, q_step)) {
          out.append(py::make_tuple(p.inventory, p.size_low, p.size_high));
        }
        return out;
      },
      py::arg("phi_max") = 5000.0, py::arg("low") = 0.001, py::arg("high") = 0.004, py::arg("q_min") = 0,
      py::arg("q_max") = 10000, py::arg("q_step") = 50, "Rows of (q, size at low skew, size at high skew).");

  m.def(
      "moments",
      [](const std::vector<double>& returns) -> py::object {
        const auto mo = stats::moments(returns);
        if (!mo) return py::none();
        py::dict d;
        d["n"] = mo->n;
        d["mean"] = mo->mean;
        d["std"] = mo->std;
        d["skew"] = mo->skew ? py::cast(*mo->skew) : py::none();
        d["kurtosis"] = mo->kurtosis ? py::cast(*mo->kurtosis) : py::none();
        d["sharpe"] = mo->sharpe ? py::cast(*mo->sharpe) : py::none();
        return d;
      },
      py::arg("returns"));
  m.def("correlation", [](const std::vector<double>& x, const std::vector<double>& y) {
    return stats::correlation(x, y);
  });
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return stats::spearman(x, y); });
}
