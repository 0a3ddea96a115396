import math

import numpy as np

from freightecon.data_model import REVENUES, VOLUMES
from freightecon.errors import DomainError
from freightecon.growth import (PUBLISHED_SHARES, CagrResult, cagr, cagr_report, gdp_share_table,
                                share_annotations, share_trend)

from tests.helpers import FreightTestCase

# Figures that match the published conclusions at 2-decimal percent rounding.
MATCHING = [
  (VOLUMES, "local", -1.57), (VOLUMES, "import", 6.82), (VOLUMES, "export", 2.45),
  (VOLUMES, "transit", -6.26), (REVENUES, "total", 1.11), (REVENUES, "local", -1.42),
  (REVENUES, "import", 12.28), (REVENUES, "export", 6.00), (REVENUES, "transit", -0.63),
]


class CagrTest(FreightTestCase):
  def test_examples(self):
    self.assert_close(cagr(100, 121, 2).rate, 0.1, rel=1e-12)
    self.assertEqual(cagr(5, 5, 7).rate, 0.0)
    self.assert_close(cagr(16358.6, 10672.6, 14).percent, -3.0045, abs_tol=5e-4)

  def test_result(self):
    result = cagr(100, 121, 2)
    self.assertEqual((result.begin_value, result.end_value, result.periods), (100, 121, 2))
    self.assertEqual(result, CagrResult(100, 121, 2, result.rate))
    self.assertNotEqual(result, cagr(100, 144, 2))

  def test_domain(self):
    self.assertRaises(DomainError, lambda: cagr(0, 10, 3))
    self.assertRaises(DomainError, lambda: cagr(10, 0, 3))
    self.assertRaises(DomainError, lambda: cagr(-1, 10, 3))
    self.assertRaises(DomainError, lambda: cagr(1, 10, 0))
    self.assertRaises(DomainError, lambda: cagr(1, 10, 1.5))
    self.assertRaises(DomainError, lambda: cagr(1, float("inf"), 2))

  def test_scale_invariance(self):
    rng = np.random.default_rng(20170101)
    for _ in range(1000):
      begin, end = rng.uniform(0.1, 1e6, 2)
      scale = rng.uniform(1e-3, 1e3)
      periods = int(rng.integers(1, 40))
      self.assert_close(cagr(scale * begin, scale * end, periods).rate,
                        cagr(begin, end, periods).rate, rel=1e-9, abs_tol=1e-12)

  def test_composition(self):
    rng = np.random.default_rng(20032017)
    for _ in range(1000):
      a, b, c = rng.uniform(0.1, 1e5, 3)
      n, m = int(rng.integers(1, 20)), int(rng.integers(1, 20))
      first, second = cagr(a, b, n).rate, cagr(b, c, m).rate
      whole = cagr(a, c, n + m).rate
      combined = math.expm1((n * math.log1p(first) + m * math.log1p(second)) / (n + m))
      self.assert_close(whole, combined, rel=1e-9, abs_tol=1e-12)


  def test_sign_and_monotone_in_end(self):
    rng = np.random.default_rng(20142017)
    for _ in range(1000):
      begin, end = (float(v) for v in rng.uniform(0.1, 1e6, 2))
      periods = int(rng.integers(1, 40))
      rate = cagr(begin, end, periods).rate
      self.assertEqual(rate > 0, end > begin)
      self.assertEqual(rate < 0, end < begin)
      larger = end * (1 + float(rng.uniform(1e-6, 1.0)))
      self.assertGreater(cagr(begin, larger, periods).rate, rate)

class CagrReportTest(FreightTestCase):
  def test_published_figures(self):
    report = cagr_report(self.freight)
    self.assertEqual(report.periods, 14)
    for kind, category, percent in MATCHING:
      row = report.row(kind, category)
      self.assertEqual(round(row.result.percent, 2), percent, (kind, category))
      self.assertFalse(row.disagrees)

  def test_total_volume_annotation(self):
    report = cagr_report(self.freight)
    total = report.row(VOLUMES, "total")
    self.assertEqual(round(total.result.percent, 2), -3.00)
    self.assertTrue(total.disagrees)
    notes = report.annotations()
    self.assertEqual(len(notes), 1)
    self.assertIn("computed -3.00%, published -3.09%", notes[0])

  def test_zero_endpoint(self):
    row = cagr_report(self.freight).row(VOLUMES, "boxit")
    self.assertFalse(row.defined)
    self.assertIsNone(row.rate)
    self.assertEqual(row.reason, "end value is 0")

  def test_commodities_are_reported(self):
    report = cagr_report(self.freight)
    self.assertEqual(len(report.rows), 21)
    self.assertTrue(report.row(VOLUMES, "dry_goods").defined)
    self.assertRaises(KeyError, lambda: report.row(VOLUMES, "coal"))


class GdpShareTest(FreightTestCase):
  def test_published_shares(self):
    rows = gdp_share_table(self.gdp)
    self.assertEqual(len(rows), 12)
    self.assertEqual(round(rows[0].share * 100, 3), 0.476)
    matched = [r.year for r in rows if round(r.share * 100, 3) == PUBLISHED_SHARES[r.year]]
    self.assertEqual(len(matched), 11)
    self.assertNotIn(2014, matched)

  def test_share_times_gdp(self):
    for r in gdp_share_table(self.gdp):
      self.assert_close(r.share * r.gdp, r.railway_value_added, rel=1e-12)

  def test_annotations(self):
    notes = share_annotations(gdp_share_table(self.gdp))
    self.assertEqual(notes, ["2014: computed 0.244%, published 0.243%"])

  def test_trend(self):
    trend = share_trend(gdp_share_table(self.gdp))
    self.assertEqual((trend.first.year, trend.last.year), (2006, 2017))
    self.assertLess(trend.result.rate, 0)
    self.assertTrue(trend.describe().startswith("share moved from 0.476% (2006) to 0.145% (2017), -"))
    self.assertRaises(DomainError, lambda: share_trend(gdp_share_table(self.gdp)[:1]))
