"""
The growth sensitivity matrix: for each freight growth rate, the volume after the horizon,
the present value of the railway effect balance (PV of EVA) and its share of projected GDP.

Two effect engines are available. The reduced engine is the affine line ``a + b * g`` fitted to
a published matrix; the structural engine discounts an EVA stream built from a volume path.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
# pylint: disable=redefined-builtin
from builtins import object

import numpy as np
from scipy import optimize

from freightecon.errors import CalibrationError, DomainError
from freightecon.regress import ols_fit
from freightecon.valuation import (PER_TON, EvaParams, GdpProjection, eva_stream, gdp_pv,
                                   implied_discount, npv)

log = logging.getLogger(__name__)

SIMPLE = "simple"
COMPOUND = "compound"
GROWTH_MODES = (SIMPLE, COMPOUND)

REDUCED = "reduced"
STRUCTURAL = "structural"
ENGINES = (REDUCED, STRUCTURAL)

USD_PER_MILLION = 1e6


class VolumePath(object):
    """Per-year volumes in million tons for t = 1..horizon."""

    def __init__(self, volumes, mode):
        self.volumes = tuple(float(v) for v in volumes)
        self.mode = mode

    @property
    def final(self):
        return self.volumes[-1]

    @property
    def horizon(self):
        return len(self.volumes)

    def __repr__(self):
        return "VolumePath(final=%r, horizon=%r, mode=%r)" % (self.final, self.horizon, self.mode)


def volume_path(v0, g, horizon, mode=SIMPLE):
    """
    ``v0 * (1 + g * t)`` in simple mode, ``v0 * (1 + g) ** t`` in compound mode.

    :raises DomainError: non-positive ``v0`` or any non-positive volume along the path.
    """
    if mode not in GROWTH_MODES:
        raise DomainError("Unknown growth mode %r" % mode)
    if not v0 > 0:
        raise DomainError("v0 must be positive", {"v0": v0})
    if isinstance(horizon, bool) or int(horizon) != horizon or horizon < 1:
        raise DomainError("horizon must be an integer >= 1", {"horizon": horizon})
    t = np.arange(1, int(horizon) + 1, dtype=float)
    if mode == SIMPLE:
        volumes = v0 * (1.0 + g * t)
    else:
        volumes = v0 * np.power(1.0 + g, t)
    if not np.all(volumes > 0):
        raise DomainError("Growth rate drives the volume path to zero or below",
                          {"g": g, "mode": mode})
    return VolumePath(volumes, mode)


def effect_pv_reduced(g, a, b):
    """Effect balance PV, million USD, on the reduced line."""
    return a + b * g


def effect_pv_structural(params, v0, g, horizon, mode=SIMPLE):
    """Effect balance PV, million USD: the discounted EVA of the volume path."""
    path = volume_path(v0, g, horizon, mode)
    return npv(eva_stream(params, path, horizon), params.discount) / USD_PER_MILLION


def share_of_gdp(effect_pv, gdp_pv_value):
    """``effect_pv / gdp_pv``; the two are divided as published, with no exchange rate."""
    if not gdp_pv_value > 0:
        raise DomainError("GDP present value must be positive", {"gdp_pv": gdp_pv_value})
    return effect_pv / gdp_pv_value


# region Configuration and rows

class ScenarioConfig(object):
    """
    Everything :any:`build_matrix` needs. Exactly one of ``reduced`` (``(a, b)``) and
    ``eva`` (:any:`EvaParams`) is set.
    """

    # pylint: disable=too-many-arguments, too-many-instance-attributes
    def __init__(self, v0, growth_grid, horizon, gdp, growth_mode=SIMPLE, cost_adjustment=0.01,
                 eva=None, reduced=None, capacity_mt=None):
        if not v0 > 0:
            raise DomainError("v0 must be positive", {"v0": v0})
        grid = tuple(float(g) for g in growth_grid)
        if not grid:
            raise DomainError("growth_grid must not be empty")
        if any(not (np.isfinite(g) and g > -1) for g in grid):
            raise DomainError("Every growth rate must be finite and > -1", {"growth_grid": grid})
        if growth_mode not in GROWTH_MODES:
            raise DomainError("Unknown growth mode %r" % growth_mode)
        if (eva is None) == (reduced is None):
            raise DomainError("Supply exactly one of reduced-form or structural parameters")
        if not isinstance(gdp, GdpProjection):
            raise DomainError("gdp must be a GdpProjection")
        self.v0 = v0
        self.growth_grid = tuple(sorted(grid))
        self.horizon = gdp.horizon if horizon is None else int(horizon)
        self.growth_mode = growth_mode
        self.cost_adjustment = cost_adjustment
        self.gdp = gdp
        self.eva = eva
        self.reduced = tuple(reduced) if reduced is not None else None
        self.capacity_mt = capacity_mt

    @property
    def engine(self):
        return REDUCED if self.reduced is not None else STRUCTURAL

    @property
    def discount(self):
        return self.eva.discount if self.eva is not None else self.gdp.discount

    def effect_pv(self, g):
        if self.reduced is not None:
            return effect_pv_reduced(g, *self.reduced)
        return effect_pv_structural(self.eva, self.v0, g, self.horizon, self.growth_mode)

    def to_json(self):
        return {"v0": self.v0, "growth_grid": list(self.growth_grid), "horizon": self.horizon,
                "growth_mode": self.growth_mode, "cost_adjustment": self.cost_adjustment,
                "gdp": self.gdp, "eva": self.eva,
                "reduced": list(self.reduced) if self.reduced else None,
                "capacity_mt": self.capacity_mt, "engine": self.engine}


class ScenarioRow(object):
    """One row of the matrix. ``effect_pv`` is million USD, ``gdp_pv`` million GEL."""

    # pylint: disable=too-many-arguments
    def __init__(self, g, volume_h, cost_adjustment, gdp_pv_value, effect_pv):
        self.g = g
        self.volume_h = volume_h
        self.cost_adjustment = cost_adjustment
        self.gdp_pv = gdp_pv_value
        self.effect_pv = effect_pv
        self.share = share_of_gdp(effect_pv, gdp_pv_value)

    def to_json(self):
        return {"g": self.g, "volume_h": self.volume_h, "cost_adjustment": self.cost_adjustment,
                "gdp_pv": self.gdp_pv, "effect_pv": self.effect_pv, "share": self.share}

    def __repr__(self):
        return "ScenarioRow(g=%r, volume_h=%r, effect_pv=%r, share=%r)" % \
               (self.g, self.volume_h, self.effect_pv, self.share)

    def __eq__(self, other):
        return isinstance(other, ScenarioRow) and self.to_json() == other.to_json()

    def __ne__(self, other):
        # pylint: disable=unneeded-not
        return not self == other


def build_matrix(cfg, workers=None):
    """
    One :any:`ScenarioRow` per grid rate, ascending by ``g``.
    With ``workers > 1`` rows are computed on a thread pool; ordering is unchanged.
    """
    gdp_value = gdp_pv(cfg.gdp)

    def row(g):
        path = volume_path(cfg.v0, g, cfg.horizon, cfg.growth_mode)
        return ScenarioRow(g, path.final, cfg.cost_adjustment, gdp_value, cfg.effect_pv(g))

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(row, cfg.growth_grid))
    return [row(g) for g in cfg.growth_grid]


def break_even_growth(cfg):
    """
    Growth rate at which the effect balance is zero, or None when it does not cross zero
    (on the grid's span, for the structural engine).
    """
    if cfg.reduced is not None:
        a, b = cfg.reduced
        return -a / b if b != 0 else None
    low, high = cfg.growth_grid[0], cfg.growth_grid[-1]
    f_low, f_high = cfg.effect_pv(low), cfg.effect_pv(high)
    if f_low == 0:
        return low
    if f_high == 0:
        return high
    if f_low * f_high > 0:
        return None
    return optimize.brentq(cfg.effect_pv, low, high, xtol=1e-14)


def over_capacity(rows, capacity_mt):
    """Rows whose volume after the horizon exceeds ``capacity_mt``."""
    if capacity_mt is None:
        return []
    return [r for r in rows if r.volume_h > capacity_mt]

# endregion

# region Calibration


class CalibrationResult(object):
    """
    Output of the calibration routines. Fields that a routine does not estimate are None.
    """

    # pylint: disable=too-many-arguments, too-many-instance-attributes
    def __init__(self, reduced_a=None, reduced_b=None, fit_r2=None, implied_discount=None,
                 cost0=None, asset_base=None, residual_max=None, cost_basis=None, n=None):
        self.reduced_a = reduced_a
        """Effect PV at g = 0, million USD."""
        self.reduced_b = reduced_b
        """Million USD per unit growth rate."""
        self.fit_r2 = fit_r2
        self.implied_discount = implied_discount
        self.cost0 = cost0
        self.asset_base = asset_base
        self.residual_max = residual_max
        """Worst absolute deviation from the target rows."""
        self.cost_basis = cost_basis
        self.n = n

    def to_json(self):
        return {"reduced_a": self.reduced_a, "reduced_b": self.reduced_b,
                "fit_r2": self.fit_r2, "implied_discount": self.implied_discount,
                "cost0": self.cost0, "asset_base": self.asset_base,
                "residual_max": self.residual_max, "cost_basis": self.cost_basis, "n": self.n}

    def __repr__(self):
        fields = ", ".join("%s=%r" % (k, v) for k, v in sorted(self.to_json().items())
                           if v is not None)
        return "CalibrationResult(%s)" % fields


def calibrate_discount(gdp0, growth, horizon, target_pv):
    """Wraps :any:`implied_discount`; ``residual_max`` is the miss in million GEL."""
    rate = implied_discount(gdp0, growth, horizon, target_pv)
    miss = abs(gdp_pv(GdpProjection(gdp0, growth, horizon, rate)) - target_pv)
    return CalibrationResult(implied_discount=rate, residual_max=miss, n=1)


def calibrate_reduced(rows):
    """
    Least-squares line through ``(g, effect_pv)`` pairs.

    :raises CalibrationError: fewer than two distinct growth rates.
    """
    rows = list(rows)
    if len(set(g for g, _ in rows)) < 2:
        raise CalibrationError("Reduced calibration needs at least two distinct growth rates",
                               {"rows": len(rows)})
    fit = ols_fit([g for g, _ in rows], [e for _, e in rows])
    return CalibrationResult(reduced_a=fit.intercept, reduced_b=fit.slope, fit_r2=fit.r2,
                             residual_max=fit.residual_max, n=fit.n)


def _unit_params(template, tariff, cost0, asset_base):
    return template.replace(tariff=tariff, cost0=cost0, asset_base=asset_base)


# pylint: disable=too-many-arguments, too-many-locals
def calibrate_structural(anchor_rows, tariff, discount, cost_adjustment, v0, horizon,
                         mode=SIMPLE, cost_basis=PER_TON, rows=None):
    """
    Solves for ``(cost0, asset_base)`` so the structural engine reproduces the anchors.

    The effect PV is affine in both unknowns, so each anchor contributes one linear equation;
    the system is solved in least squares. ``residual_max`` is measured on ``rows``
    (default: the anchors).

    :raises CalibrationError: fewer than two distinct anchors, a design that cannot separate
      the unknowns (always the case on the ``fixed`` cost basis, where neither term depends
      on ``g``), or fitted parameters below zero.
    """
    anchors = [(float(g), float(e)) for g, e in anchor_rows]
    if len(set(g for g, _ in anchors)) < 2:
        raise CalibrationError("Structural calibration needs at least two distinct growth rates",
                               {"anchors": len(anchors)})
    template = EvaParams(tariff, 0.0, cost_adjustment, 0.0, discount, cost_basis)

    def effect(params, g):
        return effect_pv_structural(params, v0, g, horizon, mode)

    income = _unit_params(template, tariff, 0.0, 0.0)
    unit_cost = _unit_params(template, 0.0, 1.0, 0.0)
    unit_asset = _unit_params(template, 0.0, 0.0, 1.0)
    design = np.array([[effect(unit_cost, g), effect(unit_asset, g)] for g, _ in anchors])
    rhs = np.array([e - effect(income, g) for g, e in anchors])

    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0) or np.linalg.matrix_rank(design / norms) < 2:
        raise CalibrationError(
            "Anchors do not separate cost0 from asset_base on the %s cost basis" % cost_basis,
            {"cost_basis": cost_basis})
    # columns differ by ~8 orders of magnitude
    solution = np.linalg.lstsq(design / norms, rhs, rcond=None)[0] / norms
    cost0, asset_base = float(solution[0]), float(solution[1])
    log.debug("structural calibration: cost0=%r asset_base=%r", cost0, asset_base)
    if cost0 < 0 or asset_base < 0:
        raise CalibrationError("Calibrated parameters are negative",
                               {"cost0": cost0, "asset_base": asset_base})

    fitted = _unit_params(template, tariff, cost0, asset_base)
    targets = anchors if rows is None else [(float(g), float(e)) for g, e in rows]
    predicted = np.array([effect(fitted, g) for g, _ in targets])
    observed = np.array([e for _, e in targets])
    residuals = observed - predicted
    ss_res = float(np.dot(residuals, residuals))
    ss_tot = float(np.sum((observed - observed.mean()) ** 2))
    if ss_tot > 0:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    else:
        r2 = 1.0 if ss_res == 0 else 0.0
    return CalibrationResult(fit_r2=r2, implied_discount=discount, cost0=cost0,
                             asset_base=asset_base, residual_max=float(np.max(np.abs(residuals))),
                             cost_basis=cost_basis, n=len(targets))

# endregion
