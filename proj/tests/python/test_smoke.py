"""Smoke tests for the python module: import, price the shipped sheet, basic
error surfacing. The numerical depth lives in the C++ suites; these only prove
the bindings hold together."""

import math
import os

import pytest

import cbtree


def data_sheet():
    root = os.environ.get("CBTREE_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))
    return os.path.join(root, "example_convertible.terms")


def test_termsheet_round_trip():
    terms = cbtree.load_termsheet(data_sheet())
    assert terms.face == 100.0
    assert terms.coupon_rate == 0.08
    assert len(terms.coupon_dates) == 10
    assert terms.convertible()

    text = cbtree.write_termsheet(terms)
    again = cbtree.parse_termsheet(text)
    assert cbtree.write_termsheet(again) == text


def test_price_and_profile():
    terms = cbtree.load_termsheet(data_sheet())
    market = cbtree.MarketState(rate=0.05, sigma=0.25)
    spec = cbtree.DefaultSpec(eta=1.0, hazard=cbtree.HazardModel.constant(0.062))
    config = cbtree.PricingConfig(
        n_steps=400,
        model=cbtree.ModelKind.ConstantIntensity,
        spot=50.0,
        valuation_date=terms.issue_date,
    )

    result = cbtree.price(terms, market, spec, config)
    assert 80.0 < result.value < 160.0
    assert 0.0 < result.delta < 1.0
    assert result.floor is None
    assert not result.floor_extended

    points = cbtree.price_profile(terms, market, spec, config, [30.0, 50.0, 70.0])
    values = [p.result.value for p in points]
    assert values == sorted(values)
    assert math.isclose(values[1], result.value, rel_tol=0.0, abs_tol=0.0)


def test_step_params_match_tree_identity():
    market = cbtree.MarketState(rate=0.05, sigma=0.2)
    step = cbtree.build_step_params(market, eta=1.0, lambda_=0.02, dt=0.01)
    assert step.valid()
    assert math.isclose(step.p_up + step.p_down + step.p_default, 1.0, abs_tol=1e-15)
    assert step.down == 1.0 / step.up

    bound = cbtree.max_hazard_step(market, 1.0, 0.01)
    assert bound > 0.02 * 0.01  # this step fits with room to spare


def test_error_tokens():
    market = cbtree.MarketState(rate=0.05, sigma=0.2)

    with pytest.raises(cbtree.PricingError, match="STEP_TOO_COARSE"):
        cbtree.build_step_params(market, eta=1.0, lambda_=5.0, dt=1.0)

    with pytest.raises(cbtree.PricingError, match="DEGENERATE_VOL"):
        cbtree.hull_step_params(market, lambda_=0.20, dt=0.01)

    with pytest.raises(cbtree.TermSheetError, match="line 1"):
        cbtree.parse_termsheet("not a key value line")


def test_synthesis_floor_surfaces():
    market = cbtree.MarketState(rate=0.05, sigma=0.25)
    model = cbtree.HazardModel.synthesis(lambda0=0.3, alpha=-1.0, s0=50.0)
    floor = cbtree.stock_floor(model, market, 1.0, 5.0 / 50)
    assert floor is not None and floor > 0.0

    terms = cbtree.load_termsheet(data_sheet())
    spec = cbtree.DefaultSpec(eta=1.0, hazard=model)
    config = cbtree.PricingConfig(
        n_steps=50,
        model=cbtree.ModelKind.Synthesis,
        spot=floor / 2.0,
        valuation_date=terms.issue_date,
    )
    with pytest.raises(cbtree.PricingError, match="FLOOR_UNREACHABLE"):
        cbtree.price(terms, market, spec, config)

    points = cbtree.price_profile(terms, market, spec, config, [floor / 2.0, 2.0 * floor])
    assert points[0].result.floor_extended
    assert not points[1].result.floor_extended


def test_fd_oracle_close_to_tree():
    terms = cbtree.load_termsheet(data_sheet())
    market = cbtree.MarketState(rate=0.05, sigma=0.25)
    spec = cbtree.DefaultSpec(eta=1.0, hazard=cbtree.HazardModel.constant(0.062))

    grid = cbtree.FdGrid(n_space=300, n_time=300, scheme=cbtree.FdScheme.CrankNicolson)
    fd = cbtree.solve_afv(terms, market, spec, cbtree.ModelKind.ConstantIntensity,
                          terms.issue_date, grid)

    config = cbtree.PricingConfig(
        n_steps=1000,
        model=cbtree.ModelKind.ConstantIntensity,
        spot=50.0,
        valuation_date=terms.issue_date,
    )
    tree = cbtree.price(terms, market, spec, config)
    assert abs(fd.value_at(50.0) - tree.value) < 0.5
