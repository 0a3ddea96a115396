from io import StringIO

from freightecon.errors import UsageError
from freightecon.run_logger import logger, show_run_result
from freightecon.run_result import RunManifest, RunResult, file_digest

from tests.helpers import FreightTestCase, GDP_PATH


class RunLoggerTest(FreightTestCase):
  def test_show_run_result(self):
    manifest = RunManifest("matrix", {"v0": 10.698}, {"a.csv": "ab12"}, "csv", "1.0.0")
    result = RunResult("matrix", ["matrix", "--format", "csv"], manifest, 0, None, 10.0, 10.25)
    read_line = StringIO(show_run_result(result)).readline
    self.assertEqual(read_line(), "freightecon matrix --format csv\n")
    self.assertEqual(read_line(), "  Manifest: {\n")
    self.assertEqual(read_line(), '    "config": {\n')
    self.assertEqual(read_line(), '      "v0": 10.698\n')
    self.assertEqual(read_line(), '    }, \n')
    self.assertEqual(read_line(), '    "format": "csv", \n')
    self.assertEqual(read_line(), '    "inputs": {\n')
    self.assertEqual(read_line(), '      "a.csv": "ab12"\n')
    self.assertEqual(read_line(), '    }, \n')
    self.assertEqual(read_line(), '    "subcommand": "matrix", \n')
    self.assertEqual(read_line(), '    "version": "1.0.0"\n')
    self.assertEqual(read_line(), "  }\n")
    self.assertEqual(read_line(), "  Exit (0): 250ms\n")

  def test_failed_run(self):
    result = RunResult(None, ["nope"], None, 1, UsageError("invalid choice"), 1.0, 1.0)
    logged = show_run_result(result)
    self.assertEqual(logged, "freightecon nope\n  Error: UsageError: invalid choice\n  Exit (1): 0ms\n")

  def test_logger(self):
    logged = []
    observer = logger(logged.append)
    observer(RunResult("cagr", ["cagr"], None, 0, None, 0.0, 0.0))
    self.assertEqual(logged, ["freightecon cagr\n  Exit (0): 0ms\n"])

  def test_from_run(self):
    logged = []
    status, _, _ = self.run_cli("gdp-share", "--format", "csv", observer=logger(logged.append))
    self.assertEqual(status, 0)
    self.assertEqual(len(logged), 1)
    self.assertTrue(logged[0].startswith("freightecon gdp-share --format csv\n  Manifest: {\n"))
    self.assertIn('"data/gdp_2006_2017.csv": "%s"' % file_digest(GDP_PATH), logged[0])

  def test_time_taken(self):
    self.assertEqual(RunResult("cagr", [], None, 0, None, 1.5, 4.0).time_taken, 2.5)

  def test_add_input(self):
    manifest = RunManifest("gdp-share").add_input(GDP_PATH, "data/gdp_2006_2017.csv")
    self.assertEqual(manifest.inputs, {"data/gdp_2006_2017.csv": file_digest(GDP_PATH)})
    self.assertEqual(len(file_digest(GDP_PATH)), 64)
    self.assertEqual(RunManifest("cagr").add_input(GDP_PATH).inputs, {GDP_PATH: file_digest(GDP_PATH)})
