"""
Compound annual growth rates per freight category and the railway share of GDP.
"""
import math
import numbers
# pylint: disable=redefined-builtin
from builtins import object

from freightecon.data_model import REVENUES, VOLUMES
from freightecon.errors import DomainError

# Figures printed in the published conclusions, as fractions. Used only to annotate reports.
PUBLISHED_CONCLUSIONS = {
    (VOLUMES, "total"): -0.0309,
    (VOLUMES, "local"): -0.0157,
    (VOLUMES, "import"): 0.0682,
    (VOLUMES, "export"): 0.0245,
    (VOLUMES, "transit"): -0.0626,
    (REVENUES, "total"): 0.0111,
    (REVENUES, "local"): -0.0142,
    (REVENUES, "import"): 0.1228,
    (REVENUES, "export"): 0.0600,
    (REVENUES, "transit"): -0.0063,
}

# Published "% in GDP" column, in percent.
PUBLISHED_SHARES = {
    2006: 0.476, 2007: 0.338, 2008: 0.283, 2009: 0.272, 2010: 0.303, 2011: 0.292,
    2012: 0.268, 2013: 0.261, 2014: 0.243, 2015: 0.240, 2016: 0.173, 2017: 0.145,
}


class CagrResult(object):
    """Constant per-period rate taking ``begin_value`` to ``end_value`` in ``periods`` steps."""

    def __init__(self, begin_value, end_value, periods, rate):
        self.begin_value = begin_value
        self.end_value = end_value
        self.periods = periods
        self.rate = rate
        """Dimensionless, e.g. 0.0682 for 6.82%."""

    @property
    def percent(self):
        return self.rate * 100.0

    def to_json(self):
        return {"begin_value": self.begin_value, "end_value": self.end_value,
                "periods": self.periods, "rate": self.rate}

    def __repr__(self):
        return "CagrResult(begin_value=%r, end_value=%r, periods=%r, rate=%r)" % \
               (self.begin_value, self.end_value, self.periods, self.rate)

    def __eq__(self, other):
        return isinstance(other, CagrResult) and self.to_json() == other.to_json()

    def __ne__(self, other):
        # pylint: disable=unneeded-not
        return not self == other


def cagr(begin, end, periods):
    """
    ``(end / begin) ** (1 / periods) - 1``.

    :raises DomainError: ``begin`` or ``end`` not positive, or ``periods`` not an integer >= 1.
    """
    if isinstance(periods, bool) or not isinstance(periods, numbers.Integral) or periods < 1:
        raise DomainError("periods must be an integer >= 1", {"periods": periods})
    if not (begin > 0 and end > 0) or not (math.isfinite(begin) and math.isfinite(end)):
        raise DomainError("CAGR needs positive, finite endpoints", {"begin": begin, "end": end})
    rate = math.expm1(math.log(end / begin) / periods)
    return CagrResult(begin, end, int(periods), rate)


class CagrRow(object):
    """One line of :any:`cagr_report`. ``result`` is None when the rate is undefined."""

    def __init__(self, kind, category, begin_value, end_value, periods,
                 result=None, reason=None, published=None):
        self.kind = kind
        self.category = category
        self.begin_value = begin_value
        self.end_value = end_value
        self.periods = periods
        self.result = result
        self.reason = reason
        """Why the rate is undefined, e.g. ``end value is 0``."""
        self.published = published
        """Published conclusion figure for this line, if any."""

    @property
    def defined(self):
        return self.result is not None

    @property
    def rate(self):
        return self.result.rate if self.result is not None else None

    @property
    def disagrees(self):
        """True when the published figure differs from ours at 2-decimal percent rounding."""
        if self.published is None or self.result is None:
            return False
        return round(self.result.rate * 100, 2) != round(self.published * 100, 2)

    def to_json(self):
        return {"series": self.kind, "category": self.category,
                "begin_value": self.begin_value, "end_value": self.end_value,
                "periods": self.periods, "rate": self.rate, "reason": self.reason,
                "published": self.published}


class CagrReport(object):

    def __init__(self, first_year, last_year, rows):
        self.first_year = first_year
        self.last_year = last_year
        self.rows = tuple(rows)

    @property
    def periods(self):
        return self.last_year - self.first_year

    def row(self, kind, category):
        for r in self.rows:
            if r.kind == kind and r.category == category:
                return r
        raise KeyError((kind, category))

    def annotations(self):
        """Notes for every line whose figure disagrees with the published one."""
        notes = []
        for r in self.rows:
            if r.disagrees:
                notes.append("%s %s: computed %.2f%%, published %.2f%% (%s-%s, %d periods)" % (
                    r.category, r.kind, r.result.percent, r.published * 100,
                    self.first_year, self.last_year, self.periods))
        return notes

    def to_json(self):
        return {"first_year": self.first_year, "last_year": self.last_year,
                "periods": self.periods, "rows": list(self.rows)}


def cagr_report(ds, published=None):
    """
    CAGR of every volume and revenue series between the first and last year of ``ds``.
    Series with a zero endpoint are reported as undefined instead of failing the report.
    """
    if len(ds.years) < 2:
        raise DomainError("CAGR report needs at least two years", {"years": len(ds.years)})
    published = PUBLISHED_CONCLUSIONS if published is None else published
    periods = ds.last_year - ds.first_year
    rows = []
    for kind in (VOLUMES, REVENUES):
        for category, values in ds.series(kind).items():
            begin, end = values[0], values[-1]
            result, reason = None, None
            if begin <= 0:
                reason = "begin value is 0"
            elif end <= 0:
                reason = "end value is 0"
            else:
                result = cagr(begin, end, periods)
            rows.append(CagrRow(kind, category, begin, end, periods, result, reason,
                                published.get((kind, category))))
    return CagrReport(ds.first_year, ds.last_year, rows)


class ShareRow(object):
    """Railway value added over GDP for one year."""

    def __init__(self, year, railway_value_added, gdp):
        self.year = year
        self.railway_value_added = railway_value_added
        self.gdp = gdp
        self.share = railway_value_added / gdp

    def to_json(self):
        return {"year": self.year, "railway_value_added": self.railway_value_added,
                "gdp": self.gdp, "share": self.share}

    def __repr__(self):
        return "ShareRow(year=%r, share=%r)" % (self.year, self.share)


def gdp_share_table(gs):
    return [ShareRow(r.year, r.railway_value_added, r.gdp_market_prices) for r in gs.rows]


def share_annotations(rows, published=None):
    published = PUBLISHED_SHARES if published is None else published
    notes = []
    for r in rows:
        if r.year in published and round(r.share * 100, 3) != round(published[r.year], 3):
            notes.append("%d: computed %.3f%%, published %.3f%%" % (
                r.year, r.share * 100, published[r.year]))
    return notes


class ShareTrend(object):

    def __init__(self, first, last, result):
        self.first = first
        self.last = last
        self.result = result
        """:any:`CagrResult` of the share series, or None when a share is 0."""

    def describe(self):
        text = "share moved from %.3f%% (%d) to %.3f%% (%d)" % (
            self.first.share * 100, self.first.year, self.last.share * 100, self.last.year)
        if self.result is not None:
            text += ", %.2f%% per year" % self.result.percent
        return text


def share_trend(rows):
    """First and last share of a :any:`gdp_share_table` and the CAGR between them."""
    if len(rows) < 2:
        raise DomainError("Share trend needs at least two rows")
    first, last = rows[0], rows[-1]
    result = None
    if first.share > 0 and last.share > 0:
        result = cagr(first.share, last.share, last.year - first.year)
    return ShareTrend(first, last, result)
