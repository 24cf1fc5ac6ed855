import math

import pytest

import dealer_abm as abm


def test_version():
    assert abm.__version__


def test_book_matches_at_resting_price():
    book = abm.OrderBook(tick_size=0.1, initial_price=1000.0)
    assert book.submit(1, abm.Side.ask, 10001, 5) == []
    assert book.submit(2, abm.Side.ask, 10002, 5) == []
    trades = book.submit(3, abm.Side.bid, 10005, 7)
    assert [(t["price_ticks"], t["quantity"]) for t in trades] == [(10001, 5), (10002, 2)]
    assert all(t["buyer"] == 3 for t in trades)
    assert book.best_ask() == 10002
    assert book.best_bid() is None
    assert len(book) == 1
    assert book.current_price(True) == pytest.approx(1000.2)


def test_book_rejects_bad_orders():
    book = abm.OrderBook()
    with pytest.raises(ValueError):
        book.submit(1, abm.Side.bid, 10000, 0)


def test_spread_closed_form():
    got = abm.optimal_spread(0.1, 1.44, 0.6)
    assert abs(got - (0.144 + 20 * math.log(7 / 6))) < 1e-12


def test_reservation_tilts_against_inventory():
    assert abm.reservation_price(1000.0, 10.0, 0.1, 1.0) < 1000.0
    assert abm.reservation_price(1000.0, -10.0, 0.1, 1.0) > 1000.0


def test_ir_size_is_one_at_phi_max():
    bid, ask = abm.ir_sizes(5000.0)
    assert bid == pytest.approx(1.0, rel=1e-9)
    assert ask == pytest.approx(5000.0)
    bid, ask = abm.ir_sizes(-5000.0)
    assert ask == pytest.approx(1.0, rel=1e-9)


def test_run_is_deterministic_and_conserves():
    cfg = {"market.steps": 1500, "dealer.kind": "ir"}
    a = abm.run(cfg, seed=7)
    b = abm.run(cfg, seed=7)
    assert a["conserved"]
    assert a["price"] == b["price"]
    assert len(a["price"]) == 1500
    assert set(a["metrics"]) >= {"dealer_total_return", "market_volatility", "corr_wealth_underlying"}


def test_unknown_config_key_is_rejected():
    with pytest.raises(ValueError):
        abm.run({"market.nonsense": 1})


def test_baselines_share_seeds():
    out = abm.baselines({"market.steps": 800}, runs=2, seed=11)
    assert set(out) == {"as", "ir", "naive"}
    seeds = {kind: [r["seed"] for r in runs] for kind, runs in out.items()}
    assert seeds["as"] == seeds["ir"] == seeds["naive"]


def test_sweep_cells():
    cells = abm.sweep("risk_aversion_2_over_gamma", grid=[[5.0], [20.0]], kinds=["as"],
                      overrides={"market.steps": 500}, runs=2, seed=3)
    assert [(c["dealer"], c["value"]) for c in cells] == [("as", 5.0), ("as", 20.0)]
    assert all(len(c["runs"]) == 2 and not c["errors"] for c in cells)


def test_probsim_variant():
    s = abm.probsim("as_unit", runs=50, seed=1)
    assert len(s["terminal_wealth"]) == 50
    assert s["wealth_std"] > 0


def test_skew_curve_and_stats():
    rows = abm.skew_curve(q_max=1000, q_step=500)
    assert [r[0] for r in rows] == [0, 500, 1000]
    assert all(high <= low for _, low, high in rows)
    m = abm.moments([0.01, -0.02, 0.03, 0.0, 0.01])
    assert m["n"] == 5 and m["std"] > 0
    assert abm.spearman([1, 2, 3], [10, 20, 15]) == pytest.approx(0.5)
