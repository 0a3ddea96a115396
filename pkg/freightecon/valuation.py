"""
Financial primitives: CAPM discount rate, NPV, present value of projected GDP,
the implied discount rate, and the per-period EVA stream.

Discounting is end-of-period: period ``t`` (1..horizon) is divided by ``(1 + rate) ** t``;
the base period is excluded.
"""
import logging
import math
# pylint: disable=redefined-builtin
from builtins import object

import numpy as np
from scipy import optimize

from freightecon.errors import CalibrationError, DomainError

log = logging.getLogger(__name__)

USD = "USD"
MLN_GEL = "mln GEL"
TONS_PER_MILLION = 1e6

FIXED = "fixed"
PER_TON = "per_ton"
COST_BASES = (FIXED, PER_TON)


def _check_rate(rate, name="rate"):
    if not math.isfinite(rate) or rate <= -1:
        raise DomainError("%s must be finite and > -1" % name, {name: rate})


def _check_horizon(horizon):
    if isinstance(horizon, bool) or int(horizon) != horizon or horizon < 1:
        raise DomainError("horizon must be an integer >= 1", {"horizon": horizon})
    return int(horizon)


def discount_factors(rate, horizon):
    """``(1 + rate) ** -t`` for t = 1..horizon."""
    _check_rate(rate)
    t = np.arange(1, _check_horizon(horizon) + 1, dtype=float)
    return np.power(1.0 + rate, -t)


# region CAPM

class CapmParams(object):
    """Inputs of ``risk_free + beta * market_premium``."""

    def __init__(self, risk_free, beta, market_premium):
        _check_rate(risk_free, "risk_free")
        if not (math.isfinite(beta) and math.isfinite(market_premium)):
            raise DomainError("beta and market_premium must be finite",
                              {"beta": beta, "market_premium": market_premium})
        self.risk_free = risk_free
        self.beta = beta
        self.market_premium = market_premium
        _check_rate(capm_rate(self), "capm_rate")

    def to_json(self):
        return {"risk_free": self.risk_free, "beta": self.beta,
                "market_premium": self.market_premium}


def capm_rate(p):
    return p.risk_free + p.beta * p.market_premium

# endregion

# region NPV


class CashflowStream(object):
    """Values for periods 1..horizon, tagged with a currency unit."""

    def __init__(self, values, currency=USD):
        self.values = tuple(float(v) for v in values)
        if not self.values:
            raise DomainError("A cashflow stream needs at least one period")
        self.currency = currency

    @property
    def horizon(self):
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, index):
        return self.values[index]

    def __iter__(self):
        return iter(self.values)

    def __add__(self, other):
        if self.currency != other.currency or self.horizon != other.horizon:
            raise DomainError("Streams must share currency and horizon")
        return CashflowStream([a + b for a, b in zip(self.values, other.values)], self.currency)

    def __mul__(self, scalar):
        return CashflowStream([scalar * v for v in self.values], self.currency)

    __rmul__ = __mul__

    def to_json(self):
        return {"currency": self.currency, "values": list(self.values)}

    def __repr__(self):
        return "CashflowStream(%r, currency=%r)" % (list(self.values), self.currency)

    def __eq__(self, other):
        return isinstance(other, CashflowStream) and \
            self.values == other.values and self.currency == other.currency

    def __ne__(self, other):
        # pylint: disable=unneeded-not
        return not self == other


def npv(s, rate):
    """
    Present value of ``s`` at ``rate``: sum of ``s[t] / (1 + rate) ** t``.

    :raises DomainError: ``rate <= -1``.
    """
    _check_rate(rate)
    return float(np.dot(np.asarray(s.values), discount_factors(rate, s.horizon)))

# endregion

# region GDP projection


class GdpProjection(object):
    """Base-year GDP growing at ``growth`` for ``horizon`` years, discounted at ``discount``."""

    def __init__(self, gdp0, growth, horizon, discount):
        if not (math.isfinite(gdp0) and gdp0 > 0):
            raise DomainError("gdp0 must be positive", {"gdp0": gdp0})
        _check_rate(growth, "growth")
        _check_rate(discount, "discount")
        self.gdp0 = gdp0
        self.growth = growth
        self.horizon = _check_horizon(horizon)
        self.discount = discount

    def with_discount(self, discount):
        return GdpProjection(self.gdp0, self.growth, self.horizon, discount)

    def stream(self):
        t = np.arange(1, self.horizon + 1, dtype=float)
        return CashflowStream(self.gdp0 * np.power(1.0 + self.growth, t), MLN_GEL)

    def to_json(self):
        return {"gdp0": self.gdp0, "growth": self.growth,
                "horizon": self.horizon, "discount": self.discount}


def gdp_pv(g):
    """Present value of the projected GDP stream, million GEL."""
    return npv(g.stream(), g.discount)


def implied_discount(gdp0, growth, horizon, target_pv, bracket=None):
    """
    Discount rate at which :any:`gdp_pv` equals ``target_pv``, found by bisection.
    ``gdp_pv`` is strictly decreasing in the rate, so a bracketed root is unique.

    :param bracket: ``(low, high)`` search interval; default ``(growth - 0.5, growth + 1.0)``.
    :raises CalibrationError: the target is outside what the bracket can reach.
    """
    low, high = bracket if bracket is not None else (growth - 0.5, growth + 1.0)
    low = max(low, -1.0 + 1e-9)
    if not low < high:
        raise CalibrationError("Empty search bracket", {"low": low, "high": high})
    projection = GdpProjection(gdp0, growth, horizon, high)

    def excess(rate):
        return gdp_pv(projection.with_discount(rate)) - target_pv

    pv_high, pv_low = gdp_pv(projection.with_discount(high)), gdp_pv(projection.with_discount(low))
    if not (target_pv > 0 and pv_high <= target_pv <= pv_low):
        raise CalibrationError("Target present value is not reachable in the search bracket",
                               {"target": target_pv, "low": pv_high, "high": pv_low})

    rate = optimize.bisect(excess, low, high, xtol=1e-15, maxiter=500)
    miss = abs(excess(rate)) / target_pv
    log.debug("implied discount %.12f after bisection (relative miss %.3g)", rate, miss)
    if miss >= 1e-10:
        raise CalibrationError("Bisection did not reach the target", {"rate": rate, "miss": miss})
    return rate

# endregion

# region EVA


class EvaParams(object):
    """
    Economic parameters of the EVA engine.

    ``cost_basis`` is ``fixed`` (``cost0`` per period) or ``per_ton`` (``cost0`` per ton shipped).
    """

    # pylint: disable=too-many-arguments
    def __init__(self, tariff, cost0, cost_adjustment, asset_base, discount, cost_basis=FIXED):
        if not (math.isfinite(tariff) and tariff >= 0):
            raise DomainError("tariff must be >= 0", {"tariff": tariff})
        if not 0 <= cost_adjustment < 1:
            raise DomainError("cost_adjustment must be in [0, 1)", {"cost_adjustment": cost_adjustment})
        if not (cost0 >= 0 and asset_base >= 0):
            raise DomainError("cost0 and asset_base must be >= 0",
                              {"cost0": cost0, "asset_base": asset_base})
        if cost_basis not in COST_BASES:
            raise DomainError("Unknown cost basis %r" % cost_basis)
        _check_rate(discount, "discount")
        self.tariff = tariff
        """USD per ton shipped."""
        self.cost0 = cost0
        self.cost_adjustment = cost_adjustment
        """Per-period fractional cost reduction."""
        self.asset_base = asset_base
        """Capital employed, USD."""
        self.discount = discount
        self.cost_basis = cost_basis

    def replace(self, **changes):
        fields = self.to_json()
        fields.update(changes)
        return EvaParams(**fields)

    def to_json(self):
        return {"tariff": self.tariff, "cost0": self.cost0,
                "cost_adjustment": self.cost_adjustment, "asset_base": self.asset_base,
                "discount": self.discount, "cost_basis": self.cost_basis}

    def __repr__(self):
        return "EvaParams(%s)" % ", ".join("%s=%r" % kv for kv in sorted(self.to_json().items()))


def eva_stream(p, volumes, horizon=None):
    """
    ``income - cost - capital charge`` per period, USD.

    income is ``tariff * tons``; cost is ``cost0 * (1 - cost_adjustment) ** t``, times tons on
    the ``per_ton`` basis; the capital charge is ``asset_base * discount``.

    :param volumes: per-period volumes in million tons (a sequence or a ``VolumePath``).
    :raises DomainError: ``len(volumes) != horizon``.
    """
    volumes = np.asarray(getattr(volumes, "volumes", volumes), dtype=float)
    if horizon is None:
        horizon = len(volumes)
    if len(volumes) != _check_horizon(horizon):
        raise DomainError("volumes must have one entry per period",
                          {"volumes": len(volumes), "horizon": horizon})
    tons = volumes * TONS_PER_MILLION
    t = np.arange(1, horizon + 1, dtype=float)
    decay = np.power(1.0 - p.cost_adjustment, t)
    cost = p.cost0 * decay * (tons if p.cost_basis == PER_TON else 1.0)
    return CashflowStream(p.tariff * tons - cost - p.asset_base * p.discount, USD)

# endregion
