"""
Tabular reports and their CSV, Markdown and JSON renderings.

Values are rounded once, in :any:`display_value`; every renderer formats the rounded value,
so the three formats always carry the same numbers.
"""
import io
# pylint: disable=redefined-builtin
from builtins import object

import pandas as pd

from freightecon._json import to_json
from freightecon.data_model import format_number
from freightecon.errors import FreightError

CSV = "csv"
MARKDOWN = "markdown"
JSON = "json"
FORMATS = (CSV, MARKDOWN, JSON)

YEAR = "year"
TEXT = "text"
COUNT = "count"
RATE = "rate"
SHARE = "share"
MONEY = "money"
AMOUNT = "amount"
VOLUME = "volume"
PERCENT = "percent"
NUMBER = "number"

_DECIMALS = {RATE: 4, SHARE: 5, MONEY: 2, AMOUNT: 0, VOLUME: 2, PERCENT: 6}

# Matrix column keys and their published headers.
MATRIX_HEADERS = (
    ("g", "Growth in Freight Transportation (CAGR %)"),
    ("volume", "The total volume of transportation after 16 years"),
    ("cost_adjustment", "Cost adjustment %"),
    ("gdp", "GDP in current prices, mln. Gel"),
    ("effect", "The current value of the effect balance"),
    ("share", "The economic share of railway in GDP"),
)


class Column(object):

    def __init__(self, key, header=None, kind=NUMBER):
        self.key = key
        self.header = header if header is not None else key
        self.kind = kind

    def to_json(self):
        return {"key": self.key, "header": self.header, "kind": self.kind}

    def __repr__(self):
        return "Column(%r, %r, %r)" % (self.key, self.header, self.kind)


class Report(object):
    """
    A titled table. ``rows`` are dicts of raw values keyed by column key; ``notes`` are
    annotations and caveats; ``manifest`` is the :any:`RunManifest` that produced it.
    """

    # pylint: disable=too-many-arguments
    def __init__(self, title, columns, rows, notes=(), manifest=None, money_parens=True):
        self.title = title
        self.columns = tuple(columns)
        self.rows = [dict(r) for r in rows]
        self.notes = list(notes)
        self.manifest = manifest
        self.money_parens = money_parens
        """Markdown shows negative money as ``($59.66)`` rather than ``-$59.66``."""

    def column(self, key):
        for c in self.columns:
            if c.key == key or c.header == key:
                return c
        raise KeyError(key)

    def displayed_rows(self):
        return [[display_value(row.get(c.key), c.kind) for c in self.columns] for row in self.rows]

    def __len__(self):
        return len(self.rows)


def display_value(value, kind):
    """``value`` rounded for display, in its own unit (rates and shares stay fractions)."""
    if value is None:
        return None
    if kind == TEXT:
        return str(value)
    if kind in (YEAR, COUNT):
        return int(value)
    value = float(value)
    if kind == NUMBER:
        value = float("%.10g" % value)
    else:
        value = round(value, _DECIMALS[kind])
    # no "-0.00" in output
    return 0.0 if value == 0 else value


def _markdown_cell(value, kind, money_parens):
    # pylint: disable=too-many-return-statements
    if value is None:
        return "n/a"
    if kind in (TEXT, YEAR, COUNT):
        return str(value)
    if kind == RATE:
        return "%.2f%%" % (value * 100)
    if kind == SHARE:
        return "%.3f%%" % (value * 100)
    if kind == PERCENT:
        return "%s%%" % format_number(round(value * 100, 4))
    if kind == MONEY:
        text = "$%s" % "{:,.2f}".format(abs(value))
        if value < 0:
            return "(%s)" % text if money_parens else "-" + text
        return text
    if kind == AMOUNT:
        return "{:,.0f}".format(value)
    if kind == VOLUME:
        return "%.2f" % value
    return format_number(value)


def _csv_cell(value, kind):
    if value is None:
        return ""
    if kind in (TEXT, YEAR, COUNT):
        return str(value)
    return format_number(value)


def render_csv(report):
    """Machine-readable CSV: a ``# manifest:`` line, ``# note:`` lines, then keyed columns."""
    out = io.StringIO()
    if report.manifest is not None:
        out.write("# manifest: %s\n" % to_json(report.manifest, sort_keys=True))
    for note in report.notes:
        out.write("# note: %s\n" % note)
    frame = pd.DataFrame(
        [[_csv_cell(v, c.kind) for v, c in zip(row, report.columns)]
         for row in report.displayed_rows()],
        columns=[c.key for c in report.columns], dtype=object)
    frame.to_csv(out, index=False, lineterminator="\n")
    return out.getvalue()


def render_markdown(report):
    lines = ["## %s" % report.title, ""]
    lines.append("| %s |" % " | ".join(c.header for c in report.columns))
    lines.append("|%s|" % "|".join(" --- " for _ in report.columns))
    for row in report.displayed_rows():
        cells = [_markdown_cell(v, c.kind, report.money_parens) for v, c in zip(row, report.columns)]
        lines.append("| %s |" % " | ".join(cells))
    if report.notes:
        lines.append("")
        lines.extend("- %s" % note for note in report.notes)
    if report.manifest is not None:
        lines.append("")
        lines.append("<!-- manifest: %s -->" % to_json(report.manifest, sort_keys=True))
    return "\n".join(lines) + "\n"


def render_json(report):
    rows = [dict((c.key, v) for c, v in zip(report.columns, row))
            for row in report.displayed_rows()]
    return to_json({"manifest": report.manifest, "title": report.title,
                    "columns": list(report.columns), "rows": rows,
                    "notes": report.notes}, pretty=True) + "\n"


RENDERERS = {CSV: render_csv, MARKDOWN: render_markdown, JSON: render_json}


def render(report, output_format=MARKDOWN):
    if output_format not in RENDERERS:
        raise FreightError("Unknown output format %r" % output_format)
    return RENDERERS[output_format](report)
