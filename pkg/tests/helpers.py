import math
import warnings
from io import StringIO
from unittest import TestCase

from freightecon._json import to_json, parse_json
from freightecon.cli import run
from freightecon.data_model import (FREIGHT_FILE, GDP_FILE, bundled_path, parse_freight_table,
                                    parse_gdp_table)

FREIGHT_PATH = bundled_path("data", FREIGHT_FILE)
GDP_PATH = bundled_path("data", GDP_FILE)
TABLE3_CONF = bundled_path("config", "table3.conf")


def read_text(file_path):
  with open(file_path, encoding="utf-8") as f:
    return f.read()


class FreightTestCase(TestCase):
  @classmethod
  def setUpClass(cls):
    super(FreightTestCase, cls).setUpClass()
    cls.freight = parse_freight_table(read_text(FREIGHT_PATH))
    cls.gdp = parse_gdp_table(read_text(GDP_PATH))

  def assertJson(self, obj, json):
    self.assertToJson(obj, json)
    self.assertParseJson(to_json(obj), json)

  def assertToJson(self, obj, json):
    self.assertEqual(to_json(obj, sort_keys=True), json)

  def assertParseJson(self, text, json):
    self.assertEqual(parse_json(text), parse_json(json))

  def assertRegexCompat(self, text, regex, msg=None):
    # pylint: disable=deprecated-method
    with warnings.catch_warnings():
      warnings.filterwarnings("ignore", category=DeprecationWarning)
      self.assertRegex(text, regex, msg=msg)

  def assert_close(self, actual, expected, rel=1e-9, abs_tol=0.0, msg=None):
    """``math.isclose`` with a readable failure."""
    if not math.isclose(actual, expected, rel_tol=rel, abs_tol=abs_tol):
      self.fail(msg or "%r != %r (rel=%g, abs=%g)" % (actual, expected, rel, abs_tol))

  def assert_raises(self, exception_class, action):
    """Like self.assertRaises and returns the exception too."""
    with self.assertRaises(exception_class) as cm:
      action()
    return cm.exception

  def run_cli(self, *argv, **kwargs):
    """Runs the command line; returns ``(status, stdout, stderr)``."""
    out, err = StringIO(), StringIO()
    status = run(list(argv), stdout=out, stderr=err, observer=kwargs.get("observer"))
    return status, out.getvalue(), err.getvalue()
