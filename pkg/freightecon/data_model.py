"""
Canonical datasets and their plain-text table format.

Freight tables have a header row of years and one row per category; revenue rows carry a
``revenue.`` prefix. GDP tables have one row per year. Lines starting with ``#`` are metadata.
"""
import io
import math
import re
import sys
from collections import OrderedDict, namedtuple
from os import path
from types import MappingProxyType
# pylint: disable=redefined-builtin
from builtins import object

import numpy as np
import pandas as pd

from freightecon.errors import DomainError, Finding, ParseError, StructuralError, ValidationError

VOLUMES = "volumes"
REVENUES = "revenues"
REVENUE_PREFIX = "revenue."

TOTAL = "total"
COMPONENTS = ("local", "import", "export", "transit")
COMMODITIES = (
    "oil_and_related_products", "crude_oil", "dry_goods", "aluminum_oxide", "boxit",
    "black_metal", "black_metal_scrap", "industrial_raw_materials",
    "construction_materials", "wheat_and_wheat_products", "sugar",
)
CATEGORIES = (TOTAL,) + COMPONENTS + COMMODITIES

FREIGHT_FILE = "freight_2003_2017.csv"
GDP_FILE = "gdp_2006_2017.csv"
TABLE3_FILE = "table3_matrix.csv"

_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def bundled_path(*parts):
    """
    Path of a file shipped with the package, e.g. ``bundled_path("data", FREIGHT_FILE)``.
    Looks next to the source tree first, then under ``<prefix>/share/freightecon``.
    """
    local = path.join(path.dirname(path.dirname(path.abspath(__file__))), *parts)
    if path.exists(local):
        return local
    return path.join(sys.prefix, "share", "freightecon", *parts)


def format_number(value):
    """Shortest text that parses back to the same float; no exponent, no trailing ``.0``."""
    return np.format_float_positional(float(value), trim="-")


def parse_number(cell, row, column):
    text = cell.strip() if isinstance(cell, str) else ""
    if not text:
        raise StructuralError("Missing cell", {"row": row, "column": column})
    if not _NUMBER.match(text):
        raise ParseError("Non-numeric cell %r" % text, row, column, text)
    return float(text)


def _split_table(text, delimiter):
    """Returns ``(metadata, rows)``: comment lines without the ``#`` and the cell grid as strings."""
    metadata = []
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            metadata.append(stripped.lstrip("#").strip())
        elif stripped:
            body.append(line)
    if not body:
        raise StructuralError("Table has no rows")
    try:
        frame = pd.read_csv(io.StringIO("\n".join(body)), sep=delimiter, header=None,
                            dtype=str, keep_default_na=False, skip_blank_lines=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise StructuralError("Ragged or unreadable table: %s" % e)
    rows = [[cell if isinstance(cell, str) else None for cell in row]
            for row in frame.values.tolist()]
    return tuple(metadata), rows


def _parse_year(cell, row, column):
    text = cell.strip() if isinstance(cell, str) else ""
    if not re.match(r"^\d{4}$", text):
        raise ParseError("Invalid year %r" % text, row, column, text)
    return int(text)


def _check_years(years, contiguous):
    for prev, cur in zip(years, years[1:]):
        if cur == prev:
            raise StructuralError("Duplicate year", {"year": cur})
        if cur < prev:
            raise StructuralError("Years are not increasing", {"year": cur})
        if contiguous and cur != prev + 1:
            raise StructuralError("Gap in years", {"after": prev, "before": cur})


def _check_value(value, where):
    if not math.isfinite(value) or value < 0:
        raise ValidationError("Values must be finite and non-negative", dict(where, value=value))


class FreightDataset(object):
    """
    Year-indexed freight volumes (thousand tons) and revenues (thousand GEL) by category.
    Immutable; ``volumes`` and ``revenues`` are read-only mappings of category -> tuple.
    """

    def __init__(self, years, volumes, revenues=None, metadata=()):
        self._years = tuple(int(y) for y in years)
        if not self._years:
            raise StructuralError("Dataset has no years")
        _check_years(self._years, contiguous=True)
        self._volumes = self._freeze(volumes or {}, VOLUMES)
        self._revenues = self._freeze(revenues or {}, REVENUES)
        self.metadata = tuple(metadata)
        """Comment lines of the source file (units, source)."""

    def _freeze(self, series, kind):
        frozen = OrderedDict()
        for category, values in series.items():
            values = tuple(float(v) for v in values)
            if len(values) != len(self._years):
                raise StructuralError("Series length does not match years",
                                      {"series": kind, "category": category})
            for year, value in zip(self._years, values):
                _check_value(value, {"series": kind, "category": category, "year": year})
            frozen[category] = values
        return MappingProxyType(frozen)

    @property
    def years(self):
        return self._years

    @property
    def volumes(self):
        return self._volumes

    @property
    def revenues(self):
        return self._revenues

    @property
    def first_year(self):
        return self._years[0]

    @property
    def last_year(self):
        return self._years[-1]

    def series(self, kind):
        """The ``volumes`` or ``revenues`` mapping."""
        if kind == VOLUMES:
            return self._volumes
        elif kind == REVENUES:
            return self._revenues
        raise DomainError("Unknown series %r" % kind)

    def value(self, kind, category, year):
        return self.series(kind)[category][self._years.index(year)]

    def to_json(self):
        return {"years": list(self._years),
                "volumes": {k: list(v) for k, v in self._volumes.items()},
                "revenues": {k: list(v) for k, v in self._revenues.items()}}

    def __repr__(self):
        return "FreightDataset(years=%s-%s, volumes=%s, revenues=%s)" % \
               (self.first_year, self.last_year, list(self._volumes), list(self._revenues))

    def __eq__(self, other):
        return isinstance(other, FreightDataset) and \
            self._years == other._years and \
            dict(self._volumes) == dict(other._volumes) and \
            dict(self._revenues) == dict(other._revenues)

    def __ne__(self, other):
        # pylint: disable=unneeded-not
        return not self == other


GdpRow = namedtuple("GdpRow", ["year", "railway_value_added", "gdp_market_prices"])


class GdpSeries(object):
    """Railway value added and GDP at market prices, million GEL, one row per year."""

    def __init__(self, rows, metadata=()):
        self._rows = tuple(GdpRow(int(r[0]), float(r[1]), float(r[2])) for r in rows)
        if not self._rows:
            raise StructuralError("GDP series has no rows")
        _check_years([r.year for r in self._rows], contiguous=False)
        for row in self._rows:
            _check_value(row.railway_value_added, {"year": row.year, "column": "railway_value_added"})
            if not math.isfinite(row.gdp_market_prices) or row.gdp_market_prices <= 0:
                raise ValidationError("GDP must be positive",
                                      {"year": row.year, "value": row.gdp_market_prices})
        self.metadata = tuple(metadata)

    @property
    def rows(self):
        return self._rows

    @property
    def years(self):
        return tuple(r.year for r in self._rows)

    def row(self, year):
        for r in self._rows:
            if r.year == year:
                return r
        raise KeyError(year)

    def __len__(self):
        return len(self._rows)

    def __iter__(self):
        return iter(self._rows)

    def to_json(self):
        return [r._asdict() for r in self._rows]

    def __repr__(self):
        return "GdpSeries(%s)" % list(self._rows)

    def __eq__(self, other):
        return isinstance(other, GdpSeries) and self._rows == other._rows

    def __ne__(self, other):
        # pylint: disable=unneeded-not
        return not self == other


class ColumnTable(object):
    """
    A generic numeric table with named columns, as emitted by the reports or bundled as targets.
    The first row is the header.
    """

    def __init__(self, headers, columns, metadata=()):
        self.headers = tuple(headers)
        self.columns = MappingProxyType(OrderedDict(
            (h, tuple(columns[h])) for h in self.headers))
        self.metadata = tuple(metadata)

    def column(self, header):
        return self.columns[header]

    def __len__(self):
        return len(self.columns[self.headers[0]]) if self.headers else 0


# region Parsing

def parse_freight_table(text, delimiter=","):
    """
    Parses a freight table into a :any:`FreightDataset`.

    :raises ParseError: non-numeric cell; ``row``/``column`` name its location.
    :raises StructuralError: duplicate or missing category, year or cell.
    """
    metadata, rows = _split_table(text, delimiter)
    header = rows[0]
    years = [_parse_year(cell, "header", i + 1) for i, cell in enumerate(header[1:])]
    if not years:
        raise StructuralError("Header has no year columns")
    _check_years(years, contiguous=True)

    volumes = OrderedDict()
    revenues = OrderedDict()
    for row in rows[1:]:
        label = (row[0] or "").strip()
        if not label:
            raise StructuralError("Row without a category label")
        if label.startswith(REVENUE_PREFIX):
            target, category = revenues, label[len(REVENUE_PREFIX):]
        else:
            target, category = volumes, label
        if category in target:
            raise StructuralError("Duplicate category", {"row": label})
        target[category] = [parse_number(cell, label, year) for year, cell in zip(years, row[1:])]
    return FreightDataset(years, volumes, revenues, metadata)


def parse_gdp_table(text, delimiter=","):
    """
    Parses a GDP table (``year, railway_value_added, gdp_market_prices``) into a :any:`GdpSeries`.
    The header row is optional.
    """
    metadata, rows = _split_table(text, delimiter)
    if rows and not re.match(r"^\s*\d", rows[0][0] or ""):
        rows = rows[1:]
    if not rows or len(rows[0]) != 3:
        raise StructuralError("GDP table needs exactly three columns")
    parsed = []
    for row in rows:
        year = _parse_year(row[0], "body", "year")
        parsed.append((year,
                       parse_number(row[1], year, "railway_value_added"),
                       parse_number(row[2], year, "gdp_market_prices")))
    return GdpSeries(parsed, metadata)


def parse_column_table(text, delimiter=","):
    """Parses a header-plus-numeric-rows table into a :any:`ColumnTable`."""
    metadata, rows = _split_table(text, delimiter)
    headers = [(h or "").strip() for h in rows[0]]
    if len(set(headers)) != len(headers) or not all(headers):
        raise StructuralError("Column headers must be unique and non-empty")
    columns = OrderedDict((h, []) for h in headers)
    for i, row in enumerate(rows[1:]):
        for header, cell in zip(headers, row):
            columns[header].append(parse_number(cell, i + 1, header))
    return ColumnTable(headers, columns, metadata)


def freight_columns(ds, kind=VOLUMES):
    """Transposes a dataset into a :any:`ColumnTable` with ``year`` plus one column per category."""
    columns = OrderedDict([("year", [float(y) for y in ds.years])])
    for category, values in ds.series(kind).items():
        columns[category] = values
    return ColumnTable(list(columns), columns, ds.metadata)


def gdp_columns(gs):
    columns = OrderedDict((field, [float(getattr(r, field)) for r in gs.rows])
                          for field in GdpRow._fields)
    return ColumnTable(list(columns), columns, gs.metadata)

# endregion

# region Serialization


def serialize_freight_table(ds, delimiter=","):
    """Opposite of :any:`parse_freight_table`."""
    lines = ["# " + m for m in ds.metadata]
    lines.append(delimiter.join(["category"] + [str(y) for y in ds.years]))
    for prefix, series in (("", ds.volumes), (REVENUE_PREFIX, ds.revenues)):
        for category, values in series.items():
            lines.append(delimiter.join([prefix + category] + [format_number(v) for v in values]))
    return "\n".join(lines) + "\n"


def serialize_gdp_table(gs, delimiter=","):
    """Opposite of :any:`parse_gdp_table`."""
    lines = ["# " + m for m in gs.metadata]
    lines.append(delimiter.join(GdpRow._fields))
    for r in gs.rows:
        lines.append(delimiter.join([str(r.year), format_number(r.railway_value_added),
                                     format_number(r.gdp_market_prices)]))
    return "\n".join(lines) + "\n"

# endregion

# region Validation


class ValidationReport(object):
    """Findings of :any:`validate_components`. Empty means every row is consistent."""

    def __init__(self, findings, tolerance):
        self.findings = tuple(findings)
        self.tolerance = tolerance

    @property
    def warnings(self):
        return tuple(f for f in self.findings if f.severity == Finding.WARNING)

    @property
    def errors(self):
        return tuple(f for f in self.findings if f.severity == Finding.ERROR)

    def for_check(self, check):
        return tuple(f for f in self.findings if f.check == check)

    def __len__(self):
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)

    def to_json(self):
        return {"tolerance": self.tolerance, "findings": list(self.findings)}

    def __repr__(self):
        return "ValidationReport(tolerance=%r, findings=%r)" % (self.tolerance, list(self.findings))


def validate_components(ds, tolerance=0.5):
    """
    Checks ``local + import + export + transit`` against ``total`` for every year,
    for volumes and revenues. Series lacking any of the five rows are skipped.
    """
    if not tolerance > 0:
        raise DomainError("Tolerance must be positive", {"tolerance": tolerance})
    findings = []
    for i, year in enumerate(ds.years):
        for kind in (VOLUMES, REVENUES):
            series = ds.series(kind)
            if not all(c in series for c in (TOTAL,) + COMPONENTS):
                continue
            actual = math.fsum(series[c][i] for c in COMPONENTS)
            expected = series[TOTAL][i]
            if abs(expected - actual) > tolerance:
                findings.append(Finding(year, kind, expected, actual, Finding.WARNING))
    return ValidationReport(findings, tolerance)

# endregion
