"""
``key = value`` configuration files.

``#`` at the start of a line or after whitespace starts a comment; blank lines are ignored.
``include = other.conf`` reads another file first and ``calibration_target`` names a CSV, both
relative to the including file; keys in the including file win. Precedence
overall is: command line flag > config file > included files > :any:`DEFAULTS`.
"""
import logging
import re
from collections import OrderedDict
from os import path

from freightecon.data_model import TABLE3_FILE, bundled_path, parse_column_table
from freightecon.errors import ConfigError
from freightecon.scenario import (ENGINES, GROWTH_MODES, REDUCED, ScenarioConfig,
                                  calibrate_reduced, calibrate_structural)
from freightecon.valuation import (COST_BASES, CapmParams, EvaParams, GdpProjection, capm_rate,
                                   implied_discount)

log = logging.getLogger(__name__)

TABLE3 = "table3"
CAPM_KEYS = ("capm.risk_free", "capm.beta", "capm.premium")

# `#` starts a comment at the start of a line or after whitespace.
_COMMENT = re.compile(r"(^|\s)#.*$")

# Canonical values; a missing config file reproduces the published matrix.
DEFAULTS = OrderedDict([
    ("gdp0", 37847.0),
    ("gdp_growth", 0.04),
    ("horizon", 16),
    ("discount_rate", None),
    ("capm.risk_free", None),
    ("capm.beta", None),
    ("capm.premium", None),
    ("gdp_pv_target", 530161.0),
    ("tariff_usd_per_ton", 10.0),
    ("cost_adjustment", 0.01),
    ("cost0", None),
    ("asset_base", None),
    ("cost_basis", "per_ton"),
    ("v0", 10.7),
    ("growth_grid", tuple(round(0.01 * i, 2) for i in range(1, 16))),
    ("growth_mode", "simple"),
    ("engine", "reduced"),
    ("reduced_a", None),
    ("reduced_b", None),
    ("capacity_mt", None),
    ("calibration_target", TABLE3),
    ("anchor_growth", (0.01, 0.15)),
])


def _float(text):
    return float(text)


def _int(text):
    return int(text)


def _rates(text):
    """``0.01, 0.02`` or ``start:stop:step`` (inclusive)."""
    if ":" in text:
        start, stop, step = (float(p) for p in text.split(":"))
        if step <= 0 or stop < start:
            raise ValueError("bad range %r" % text)
        count = int(round((stop - start) / step)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    return tuple(float(p) for p in text.split(",") if p.strip())


def _choice(options):
    def convert(text):
        if text not in options:
            raise ValueError("expected one of %s" % ", ".join(options))
        return text
    return convert


def _text(text):
    return text


CONVERTERS = {
    "gdp0": _float, "gdp_growth": _float, "horizon": _int, "discount_rate": _float,
    "capm.risk_free": _float, "capm.beta": _float, "capm.premium": _float,
    "gdp_pv_target": _float, "tariff_usd_per_ton": _float, "cost_adjustment": _float,
    "cost0": _float, "asset_base": _float, "cost_basis": _choice(COST_BASES), "v0": _float,
    "growth_grid": _rates, "growth_mode": _choice(GROWTH_MODES), "engine": _choice(ENGINES),
    "reduced_a": _float, "reduced_b": _float, "capacity_mt": _float,
    "calibration_target": _text, "anchor_growth": _rates,
}


def convert(key, text):
    """Typed value of ``key`` parsed from ``text``."""
    if key not in CONVERTERS:
        raise ConfigError("Unknown configuration key %r" % key, {"key": key})
    try:
        return CONVERTERS[key](text.strip())
    except ValueError as e:
        raise ConfigError("Bad value for %s: %s" % (key, e), {"key": key, "value": text})


def parse_config(text, source="<config>"):
    """
    Parses config text into an ordered dict of typed values. ``include`` keys are returned as
    raw strings under ``"include"``.
    """
    settings = OrderedDict()
    for number, line in enumerate(text.splitlines(), 1):
        stripped = _COMMENT.sub("", line).strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError("Expected key = value", {"source": source, "line": number})
        key, value = (p.strip() for p in stripped.split("=", 1))
        if key == "include":
            settings.setdefault("include", []).append(value)
            continue
        try:
            settings[key] = convert(key, value)
        except ConfigError as e:
            raise e.with_context(source=source, line=number)
    return settings


def load_config(config_path, _seen=None):
    """Reads ``config_path`` and its includes; returns ``(settings, files_read)``."""
    seen = _seen if _seen is not None else []
    real = path.realpath(config_path)
    if real in seen:
        raise ConfigError("Include cycle", {"path": config_path})
    seen.append(real)
    try:
        with open(config_path, encoding="utf-8") as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise ConfigError("Cannot read config: %s" % e.strerror, {"path": config_path})
    except UnicodeDecodeError as e:
        raise ConfigError("Config is not UTF-8 (byte %d)" % e.start, {"path": config_path})
    own = parse_config(text, config_path)
    target = own.get("calibration_target")
    if target is not None and target != TABLE3:
        own["calibration_target"] = path.join(path.dirname(config_path), target)
    merged = OrderedDict()
    for include in own.pop("include", []):
        included, _ = load_config(path.join(path.dirname(config_path), include), seen)
        _overlay(merged, included)
    _overlay(merged, own)
    return merged, list(seen)


def _overlay(merged, layer):
    """
    Applies ``layer`` over ``merged``, skipping ``None`` values. A discount source set in
    ``layer`` replaces the other source from lower layers.
    """
    values = dict((k, v) for k, v in layer.items() if v is not None)
    if "discount_rate" in values:
        for key in CAPM_KEYS:
            merged[key] = None
    if any(key in values for key in CAPM_KEYS):
        merged["discount_rate"] = None
    merged.update(values)
    return merged


def merge(*layers):
    """
    Later layers win; ``None`` values in a layer do not override. ``discount_rate`` and the
    ``capm.*`` keys conflict only within one layer.
    """
    merged = OrderedDict(DEFAULTS)
    for layer in layers:
        _overlay(merged, layer or {})
    return merged


def resolve_discount(settings):
    """``discount_rate``, else the CAPM rate, else the rate implied by ``gdp_pv_target``."""
    capm = [settings.get(k) for k in CAPM_KEYS]
    if settings.get("discount_rate") is not None:
        if any(v is not None for v in capm):
            raise ConfigError("Set discount_rate or capm.*, not both")
        return settings["discount_rate"]
    if any(v is not None for v in capm):
        if not all(v is not None for v in capm):
            raise ConfigError("capm.risk_free, capm.beta and capm.premium go together")
        return capm_rate(CapmParams(*capm))
    if settings.get("gdp_pv_target") is not None:
        return implied_discount(settings["gdp0"], settings["gdp_growth"], settings["horizon"],
                                settings["gdp_pv_target"])
    raise ConfigError("No discount rate: set discount_rate, capm.* or gdp_pv_target")


def load_target(name=TABLE3):
    """
    Published matrix rows ``(g, effect_pv)`` from ``name``: ``table3`` for the bundled file,
    otherwise a path to a CSV with ``g`` and ``effect_pv`` columns.
    """
    target_path = bundled_path("data", TABLE3_FILE) if name == TABLE3 else name
    try:
        with open(target_path, encoding="utf-8") as f:
            table = parse_column_table(f.read())
    except (IOError, OSError) as e:
        raise ConfigError("Cannot read calibration target: %s" % e.strerror, {"path": target_path})
    except UnicodeDecodeError as e:
        raise ConfigError("Calibration target is not UTF-8 (byte %d)" % e.start,
                          {"path": target_path})
    for column in ("g", "effect_pv"):
        if column not in table.columns:
            raise ConfigError("Calibration target lacks column %r" % column, {"path": target_path})
    return list(zip(table.column("g"), table.column("effect_pv"))), target_path


def anchors_from(rows, anchor_growth):
    picked = [(g, e) for g, e in rows if any(abs(g - a) < 1e-9 for a in anchor_growth)]
    if len(picked) != len(anchor_growth):
        raise ConfigError("anchor_growth rates are missing from the calibration target",
                          {"anchor_growth": list(anchor_growth)})
    return picked


def scenario_config(settings, on_target=None):
    """
    Builds a :any:`ScenarioConfig` from merged settings. Missing reduced or structural
    parameters are calibrated against ``calibration_target``.

    :param on_target: Callback given the path of the calibration target when one is read.
    """
    def target_rows():
        rows, target_path = load_target(settings["calibration_target"])
        if on_target is not None:
            on_target(target_path)
        return rows

    try:
        discount = resolve_discount(settings)
        gdp = GdpProjection(settings["gdp0"], settings["gdp_growth"], settings["horizon"], discount)
        common = dict(v0=settings["v0"], growth_grid=settings["growth_grid"],
                      horizon=settings["horizon"], gdp=gdp, growth_mode=settings["growth_mode"],
                      cost_adjustment=settings["cost_adjustment"],
                      capacity_mt=settings["capacity_mt"])
        if settings["engine"] == REDUCED:
            a, b = settings["reduced_a"], settings["reduced_b"]
            if a is None or b is None:
                fit = calibrate_reduced(target_rows())
                a, b = fit.reduced_a, fit.reduced_b
                log.debug("reduced line calibrated: a=%r b=%r", a, b)
            return ScenarioConfig(reduced=(a, b), **common)

        cost0, asset_base = settings["cost0"], settings["asset_base"]
        if cost0 is None or asset_base is None:
            rows = target_rows()
            fit = calibrate_structural(
                anchors_from(rows, settings["anchor_growth"]), settings["tariff_usd_per_ton"],
                discount, settings["cost_adjustment"], settings["v0"], settings["horizon"],
                settings["growth_mode"], settings["cost_basis"], rows)
            cost0, asset_base = fit.cost0, fit.asset_base
            log.debug("structural parameters calibrated: cost0=%r asset_base=%r", cost0, asset_base)
        eva = EvaParams(settings["tariff_usd_per_ton"], cost0, settings["cost_adjustment"],
                        asset_base, discount, settings["cost_basis"])
        return ScenarioConfig(eva=eva, **common)
    except KeyError as e:
        raise ConfigError("Missing configuration key %s" % e)
