import re
from os import path
from tempfile import TemporaryDirectory

from freightecon._json import parse_json
from freightecon.data_model import bundled_path, parse_column_table
from freightecon.errors import EXIT_DOMAIN, EXIT_INPUT, EXIT_OK, EXIT_USAGE

from tests.helpers import FreightTestCase, TABLE3_CONF, read_text


def write(directory, name, text):
  file_path = path.join(directory, name)
  with open(file_path, "w", encoding="utf-8") as f:
    f.write(text)
  return file_path


def write_bytes(directory, name, data):
  file_path = path.join(directory, name)
  with open(file_path, "wb") as f:
    f.write(data)
  return file_path


class CliTest(FreightTestCase):

  #region matrix
  def test_matrix_markdown(self):
    status, out, err = self.run_cli("matrix", "--config", TABLE3_CONF, "--format", "markdown")
    self.assertEqual((status, err), (EXIT_OK, ""))
    rows = [line for line in out.splitlines() if re.match(r"^\| \d+% \|", line)]
    self.assertEqual(len(rows), 15)
    self.assertEqual(rows[0], "| 1% | 12.41 | 1% | 530,161 | ($59.66) | -0.011% |")
    self.assertEqual(rows[2], "| 3% | 15.84 | 1% | 530,161 | $20.30 | 0.004% |")
    self.assertEqual(rows[9], "| 10% | 27.82 | 1% | 530,161 | $300.17 | 0.057% |")
    self.assertEqual(rows[14], "| 15% | 36.38 | 1% | 530,161 | $500.08 | 0.094% |")
    self.assertIn("| Growth in Freight Transportation (CAGR %) |", out)
    self.assertIn("breaks even at g = 2.49%", out)
    self.assertIn("no exchange rate", out)

  def test_matrix_defaults_match_config(self):
    _, with_config, _ = self.run_cli("matrix", "--config", TABLE3_CONF, "--format", "csv")
    _, without, _ = self.run_cli("matrix", "--format", "csv")
    strip = lambda text: [l for l in text.splitlines() if not l.startswith("# manifest")]
    self.assertEqual(strip(with_config), strip(without))

  def test_matrix_reproducible(self):
    runs = [self.run_cli("matrix", "--config", TABLE3_CONF, "--format", "csv")[1] for _ in range(2)]
    self.assertEqual(runs[0], runs[1])
    _, threaded, _ = self.run_cli("matrix", "--config", TABLE3_CONF, "--format", "csv",
                                  "--workers", "4")
    self.assertEqual(runs[0], threaded)

  def test_matrix_format_parity(self):
    _, csv_out, _ = self.run_cli("matrix", "--format", "csv")
    _, json_out, _ = self.run_cli("matrix", "--format", "json")
    from_csv = parse_column_table(csv_out)
    document = parse_json(json_out)
    for key in ("g", "volume", "gdp", "effect", "share"):
      self.assertEqual(list(from_csv.column(key)), [r[key] for r in document["rows"]])
    self.assertEqual(document["manifest"]["config"]["engine"], "reduced")

  def test_matrix_flags(self):
    _, out, _ = self.run_cli("matrix", "--no-parens", "--grid", "0.01,0.02")
    self.assertIn("| 1% | 12.41 | 1% | 530,161 | -$59.66 | -0.011% |", out)
    _, out, _ = self.run_cli("matrix", "--mode", "compound", "--grid", "0.15", "--format", "json")
    row = parse_json(out)["rows"][0]
    self.assertEqual(row["volume"], round(10.7 * 1.15 ** 16, 2))
    self.assertIn("Volumes compound", " ".join(parse_json(out)["notes"]))

  def test_matrix_structural(self):
    status, out, _ = self.run_cli("matrix", "--engine", "structural", "--format", "json")
    self.assertEqual(status, EXIT_OK)
    document = parse_json(out)
    published = parse_column_table(read_text(bundled_path("data", "table3_matrix.csv")))
    for row, effect in zip(document["rows"], published.column("effect_pv")):
      self.assertLessEqual(abs(row["effect"] - effect), 0.05 + 1e-9)

  def test_preset(self):
    preset = bundled_path("config", "presets", "anaklia_port.conf")
    status, out, _ = self.run_cli("matrix", "--config", preset, "--format", "json")
    self.assertEqual(status, EXIT_OK)
    document = parse_json(out)
    self.assertEqual(document["manifest"]["config"]["v0"], 13.7)
    self.assertEqual(len(document["manifest"]["inputs"]), 3)
    self.assertIn("data/table3_matrix.csv", document["manifest"]["inputs"])
    self.assertIn("exceeds the 45.055 mln ton capacity at g = 15%", " ".join(document["notes"]))
  def test_discount_flag_over_config(self):
    with TemporaryDirectory() as directory:
      conf = write(directory, "capm.conf",
                   "capm.risk_free = 0.03\ncapm.beta = 1.2\ncapm.premium = 0.05\n")
      status, out, err = self.run_cli("matrix", "--config", conf, "--discount-rate", "0.07",
                                      "--format", "json")
      self.assertEqual((status, err), (EXIT_OK, ""))
      document = parse_json(out)
      self.assertEqual(document["manifest"]["config"]["discount_rate"], 0.07)
      self.assertIsNone(document["manifest"]["config"]["capm.beta"])
      self.assertIn("Discount rate 7.000000%; GDP PV over 16 years.", document["notes"])
      _, out, _ = self.run_cli("matrix", "--config", conf, "--format", "json")
      self.assertIn("Discount rate 9.000000%; GDP PV over 16 years.", parse_json(out)["notes"])

  def test_matrix_custom_target(self):
    with TemporaryDirectory() as directory:
      target = write(directory, "t.csv", "g,effect_pv\n0.01,1\n0.02,2\n0.03,3\n")
      conf = write(directory, "run.conf", "calibration_target = t.csv\n")
      status, out, _ = self.run_cli("matrix", "--config", conf, "--grid", "0.01", "--format", "json")
    self.assertEqual(status, EXIT_OK)
    document = parse_json(out)
    self.assertEqual(document["rows"][0]["effect"], 1.0)
    self.assertIn(target, document["manifest"]["inputs"])
  #endregion

  #region other subcommands
  def test_gdp_share(self):
    status, out, _ = self.run_cli("gdp-share", bundled_path("data", "gdp_2006_2017.csv"))
    self.assertEqual(status, EXIT_OK)
    self.assertIn("| 2006 | 65.6 | 13790 | 0.476% |", out)
    self.assertIn("| 2017 | 55 | 37847 | 0.145% |", out)
    self.assertIn("2014: computed 0.244%, published 0.243%", out)

  def test_cagr(self):
    status, out, _ = self.run_cli("cagr", "--format", "json")
    self.assertEqual(status, EXIT_OK)
    document = parse_json(out)
    rows = dict(((r["series"], r["category"]), r) for r in document["rows"])
    self.assertEqual(rows[("volumes", "import")]["rate"], 0.0682)
    self.assertEqual(rows[("revenues", "import")]["rate"], 0.1228)
    self.assertIsNone(rows[("volumes", "boxit")]["rate"])
    self.assertEqual(rows[("volumes", "boxit")]["note"], "end value is 0")
    self.assertTrue(any("published -3.09%" in note for note in document["notes"]))

  def test_validate(self):
    status, out, _ = self.run_cli("validate", "--format", "json")
    self.assertEqual(status, EXIT_OK)
    document = parse_json(out)
    self.assertEqual([(r["year"], r["check"]) for r in document["rows"]],
                     [(2003, "volumes"), (2005, "volumes")])
    self.assertEqual(document["rows"][0]["discrepancy"], 200.1)
    self.assertIn("0 revenues warning(s) at tolerance 0.5", document["notes"])
    _, out, _ = self.run_cli("validate", "--tolerance", "1.5", "--format", "json")
    self.assertEqual(len(parse_json(out)["rows"]), 1)

  def test_calibrate(self):
    status, out, _ = self.run_cli("calibrate", "--format", "json")
    self.assertEqual(status, EXIT_OK)
    rows = dict((r["what"], r) for r in parse_json(out)["rows"])
    self.assertEqual(sorted(rows), ["discount", "reduced", "structural"])
    self.assertTrue(0.05 < rows["discount"]["implied_discount"] < 0.06)
    self.assertLessEqual(rows["discount"]["residual_max"], 1.0)
    self.assertGreater(rows["reduced"]["fit_r2"], 0.999999)
    self.assertLessEqual(rows["structural"]["residual_max"], 0.05)
    self.assertEqual(rows["structural"]["cost_basis"], "per_ton")

  def test_calibrate_one(self):
    _, out, _ = self.run_cli("calibrate", "--what", "reduced", "--target", "table3", "--format", "json")
    rows = parse_json(out)["rows"]
    self.assertEqual([r["what"] for r in rows], ["reduced"])
    self.assertAlmostEqual(rows[0]["reduced_b"], 3998.114286, places=5)
    self.assertIsNone(rows[0]["cost0"])

  def test_regress_on_report(self):
    with TemporaryDirectory() as directory:
      _, csv_out, _ = self.run_cli("matrix", "--format", "csv")
      matrix = write(directory, "matrix.csv", csv_out)
      status, out, _ = self.run_cli("regress", "--x", "g", "--y", "effect", matrix, "--format", "json")
      self.assertEqual(status, EXIT_OK)
      fit = parse_json(out)["rows"][0]
      self.assertAlmostEqual(fit["slope"], 3998.1, delta=0.5)
      _, out, _ = self.run_cli("regress", "--x", "g", "--y", "The current value of the effect balance",
                               matrix, "--format", "json")
      self.assertEqual(parse_json(out)["rows"][0]["y"], "effect")

  def test_regress_on_freight(self):
    freight = bundled_path("data", "freight_2003_2017.csv")
    status, out, _ = self.run_cli("regress", "--x", "year", "--y", "revenue.import", freight,
                                  "--format", "json")
    self.assertEqual(status, EXIT_OK)
    fit = parse_json(out)["rows"][0]
    self.assertEqual(fit["n"], 15)
    self.assertGreater(fit["slope"], 0)
  #endregion

  #region errors
  def test_usage_errors(self):
    for argv in ([], ["plot"], ["matrix", "--colour"], ["matrix", "--mode", "linear"],
                 ["regress", "--x", "g", "--y", "nope", bundled_path("data", "table3_matrix.csv")]):
      status, out, err = self.run_cli(*argv)
      self.assertEqual(status, EXIT_USAGE, argv)
      self.assertEqual(out, "")
      self.assertIn("freightecon: error:", err)

  def test_input_errors(self):
    status, _, err = self.run_cli("cagr", "/nonexistent/freight.csv")
    self.assertEqual(status, EXIT_INPUT)
    self.assertIn("path=/nonexistent/freight.csv", err)
    with TemporaryDirectory() as directory:
      bad = write(directory, "bad.csv", "category,2003,2004\ntotal,10,12a.5\n")
      status, _, err = self.run_cli("validate", bad)
      conf = write(directory, "bad.conf", "tarif = 10\n")
      conf_status, _, _ = self.run_cli("matrix", "--config", conf)
    self.assertEqual(status, EXIT_INPUT)
    self.assertIn("row=total", err)
    self.assertIn("column=2004", err)
    self.assertEqual(conf_status, EXIT_INPUT)

  def test_not_utf8(self):
    with TemporaryDirectory() as directory:
      freight = write_bytes(directory, "latin.csv",
                            b"# units: tonnes \xe9\ncategory,2003,2004\ntotal,10,12\n")
      status, out, err = self.run_cli("cagr", freight)
      self.assertEqual((status, out), (EXIT_INPUT, ""))
      self.assertIn("not UTF-8", err)
      self.assertIn("path=%s" % freight, err)
      conf = write_bytes(directory, "latin.conf", b"# r\xe9seau\nv0 = 10\n")
      status, _, err = self.run_cli("matrix", "--config", conf)
      self.assertEqual(status, EXIT_INPUT)
      self.assertIn("path=%s" % conf, err)

  def test_domain_errors(self):
    status, _, _ = self.run_cli("matrix", "--discount-rate", "-2")
    self.assertEqual(status, EXIT_DOMAIN)
    status, out, _ = self.run_cli("matrix", "--grid", "0.01,inf", "--format", "json")
    self.assertEqual((status, out), (EXIT_DOMAIN, ""))
    with TemporaryDirectory() as directory:
      conf = write(directory, "fixed.conf", "cost_basis = fixed\n")
      status, _, err = self.run_cli("calibrate", "--what", "structural", "--config", conf)
    self.assertEqual(status, EXIT_DOMAIN)
    self.assertIn("fixed cost basis", err)
  #endregion

  def test_verbose(self):
    status, out, err = self.run_cli("gdp-share", "--verbose", "--format", "csv")
    self.assertEqual(status, EXIT_OK)
    self.assertTrue(out.startswith("# manifest: "))
    self.assertTrue(err.startswith("freightecon gdp-share --verbose --format csv\n"))
    self.assertRegexCompat(err, r"  Exit \(0\): \d+ms\n$")
