from freightecon._json import to_json


def logger(logger_func):
  """
  Function that can be the ``observer`` of :any:`freightecon.cli.run`.
  Will call ``logger_func`` on a string representation of each :any:`RunResult`.

  Use it like::

    def log(logged):
      print(logged)
    run(["matrix"], observer=logger(log))

  :param logger_func: Callback taking a string to be logged.
  """
  return lambda run_result: logger_func(show_run_result(run_result))


def show_run_result(run_result):
  """Translates a :any:`RunResult` to a string suitable for logging."""
  rr = run_result
  parts = []
  log = parts.append

  def _indent(s):
    indent_str = "  "
    return ("\n" + indent_str).join(s.split("\n"))

  log("freightecon %s\n" % " ".join(rr.argv))
  if rr.manifest is not None:
    log("  Manifest: %s\n" % _indent(to_json(rr.manifest, pretty=True)))
  if rr.error is not None:
    log("  Error: %s: %s\n" % (type(rr.error).__name__, rr.error))
  log("  Exit (%i): %ims\n" % (rr.exit_status, int(rr.time_taken * 1000)))

  return u"".join(parts)
