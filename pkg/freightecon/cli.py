"""
``freightecon`` command line: ``cagr``, ``gdp-share``, ``validate``, ``matrix``, ``calibrate``
and ``regress``. Reports go to standard output, diagnostics to standard error.
"""
import argparse
import logging
import sys
import time
from collections import OrderedDict
from os import path

from freightecon import __version__
from freightecon.config import (TABLE3, anchors_from, load_config, load_target, merge,
                                resolve_discount, scenario_config)
from freightecon.data_model import (FREIGHT_FILE, GDP_FILE, REVENUE_PREFIX, REVENUES, VOLUMES,
                                    ColumnTable, bundled_path, freight_columns,
                                    parse_column_table, parse_freight_table, parse_gdp_table,
                                    validate_components)
from freightecon.errors import EXIT_OK, FreightError, InputError, UsageError
from freightecon.growth import (cagr_report, gdp_share_table, share_annotations, share_trend)
from freightecon.regress import ols_fit
from freightecon.report import (AMOUNT, COUNT, FORMATS, MARKDOWN, MATRIX_HEADERS, MONEY, NUMBER,
                                PERCENT, RATE, SHARE, TEXT, VOLUME, YEAR, Column, Report, render)
from freightecon.run_logger import logger
from freightecon.run_result import RunManifest, RunResult
from freightecon.scenario import (ENGINES, GROWTH_MODES, REDUCED, SIMPLE,
                                  break_even_growth, build_matrix, calibrate_discount,
                                  calibrate_reduced, calibrate_structural, over_capacity)

PROG = "freightecon"
WHAT = ("discount", "reduced", "structural", "all")


class _Parser(argparse.ArgumentParser):
    """Raises :any:`UsageError` instead of exiting, so :any:`run` owns the exit status."""

    def error(self, message):
        raise UsageError(message)


def _rate_list(text):
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated rates, got %r" % text)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=MARKDOWN)
    common.add_argument("--verbose", action="store_true",
                        help="log the run and calibration details to standard error")

    parser = _Parser(prog=PROG, description="Freight growth, GDP share and valuation reports.")
    parser.add_argument("--version", action="version", version="%s %s" % (PROG, __version__))
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    cagr = commands.add_parser("cagr", parents=[common], help="growth rate of every category")
    cagr.add_argument("file", nargs="?", help="freight table (default: bundled 2003-2017)")

    share = commands.add_parser("gdp-share", parents=[common], help="railway share of GDP")
    share.add_argument("file", nargs="?", help="GDP table (default: bundled 2006-2017)")

    validate = commands.add_parser("validate", parents=[common], help="component sums vs totals")
    validate.add_argument("file", nargs="?")
    validate.add_argument("--tolerance", type=float, default=0.5)

    matrix = commands.add_parser("matrix", parents=[common], help="growth sensitivity matrix")
    matrix.add_argument("--config")
    matrix.add_argument("--mode", choices=GROWTH_MODES)
    matrix.add_argument("--engine", choices=ENGINES)
    matrix.add_argument("--v0", type=float)
    matrix.add_argument("--grid", type=_rate_list, help="comma separated growth rates")
    matrix.add_argument("--discount-rate", type=float)
    matrix.add_argument("--capacity", type=float, help="capacity in million tons")
    matrix.add_argument("--workers", type=int)
    matrix.add_argument("--no-parens", action="store_true",
                        help="show negative money as -$x instead of ($x)")

    calibrate = commands.add_parser("calibrate", parents=[common], help="fit model parameters")
    calibrate.add_argument("--config")
    calibrate.add_argument("--target", help="'table3' or a CSV with g and effect_pv columns")
    calibrate.add_argument("--what", choices=WHAT, default="all")
    calibrate.add_argument("--anchors", type=_rate_list, help="growth rates to solve at exactly")

    regress = commands.add_parser("regress", parents=[common], help="least squares of two columns")
    regress.add_argument("--x", required=True)
    regress.add_argument("--y", required=True)
    regress.add_argument("file")
    return parser


# region Inputs

def _input(file_arg, default_file):
    """``(display name, path)`` of an input; bundled files are named relative to the repo."""
    if file_arg is None:
        return path.join("data", default_file), bundled_path("data", default_file)
    return file_arg, file_arg


def _read(name, file_path, manifest):
    try:
        with open(file_path, encoding="utf-8") as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise InputError("Cannot read input: %s" % e.strerror, {"path": name})
    except UnicodeDecodeError as e:
        raise InputError("Input is not UTF-8 (byte %d)" % e.start, {"path": name})
    manifest.add_input(file_path, name)
    return text


def _parse(parser, text, name):
    try:
        return parser(text)
    except FreightError as e:
        raise e.with_context(path=name)

# endregion

# region Subcommands


def cmd_cagr(args, manifest):
    name, file_path = _input(args.file, FREIGHT_FILE)
    ds = _parse(parse_freight_table, _read(name, file_path, manifest), name)
    report = cagr_report(ds)
    rows = [{"series": r.kind, "category": r.category, "begin": r.begin_value,
             "end": r.end_value, "periods": r.periods, "rate": r.rate,
             "published": r.published, "note": r.reason} for r in report.rows]
    columns = [Column("series", "Series", TEXT), Column("category", "Category", TEXT),
               Column("begin", str(report.first_year), NUMBER),
               Column("end", str(report.last_year), NUMBER),
               Column("periods", "Periods", COUNT), Column("rate", "CAGR", RATE),
               Column("published", "Published", RATE), Column("note", "Note", TEXT)]
    notes = ["Rates over %d periods (%d-%d)" % (report.periods, report.first_year,
                                                report.last_year)]
    notes.extend(report.annotations())
    return Report("Compound annual growth rates", columns, rows, notes, manifest)


def cmd_gdp_share(args, manifest):
    name, file_path = _input(args.file, GDP_FILE)
    gs = _parse(parse_gdp_table, _read(name, file_path, manifest), name)
    table = gdp_share_table(gs)
    rows = [{"year": r.year, "railway_value_added": r.railway_value_added, "gdp": r.gdp,
             "share": r.share} for r in table]
    columns = [Column("year", "Year", YEAR),
               Column("railway_value_added", "Railway value added, mln. Gel", NUMBER),
               Column("gdp", "GDP at market prices, mln. Gel", NUMBER),
               Column("share", "% in GDP", SHARE)]
    notes = share_annotations(table)
    if len(table) >= 2:
        notes.append(share_trend(table).describe())
    return Report("Railway share of GDP", columns, rows, notes, manifest)


def cmd_validate(args, manifest):
    name, file_path = _input(args.file, FREIGHT_FILE)
    ds = _parse(parse_freight_table, _read(name, file_path, manifest), name)
    manifest.config["tolerance"] = args.tolerance
    result = validate_components(ds, args.tolerance)
    rows = [f.to_json() for f in result]
    columns = [Column("year", "Year", YEAR), Column("check", "Check", TEXT),
               Column("expected", "Total", NUMBER), Column("actual", "Sum of components", NUMBER),
               Column("discrepancy", "Discrepancy", NUMBER),
               Column("severity", "Severity", TEXT)]
    notes = ["%d %s warning(s) at tolerance %s" % (len(result.for_check(kind)), kind,
                                                   args.tolerance)
             for kind in (VOLUMES, REVENUES)]
    return Report("Component sums against totals", columns, rows, notes, manifest)


def _settings(args, flags, manifest):
    file_settings = {}
    if args.config:
        file_settings, files = load_config(args.config)
        base = path.dirname(path.realpath(args.config))
        for file_path in files:
            # named as reached from the config given on the command line
            name = path.normpath(path.join(path.dirname(args.config),
                                           path.relpath(file_path, base)))
            manifest.add_input(file_path, name)
    settings = merge(file_settings, flags)
    manifest.config.update(settings)
    return settings


def _target_name(settings, target_path):
    """Bundled targets are named relative to the repo, like bundled inputs."""
    if settings["calibration_target"] == TABLE3:
        return path.join("data", path.basename(target_path))
    return target_path


def _matrix_notes(cfg, rows, settings):
    notes = ["Effect PV is in million USD and GDP PV in million GEL; the share divides them "
             "as published, with no exchange rate."]
    if cfg.growth_mode == SIMPLE:
        notes.append("Volumes grow linearly, v0 * (1 + g * t), which matches the published "
                     "volume column although it is labelled CAGR.")
    else:
        notes.append("Volumes compound, v0 * (1 + g) ** t; the published matrix grows "
                     "linearly, so rows will not match it.")
    notes.append("Discount rate %.6f%%; GDP PV over %d years." % (cfg.gdp.discount * 100,
                                                                 cfg.horizon))
    if cfg.engine == REDUCED:
        notes.append("Effect engine: reduced, effect = %.4f + %.4f * g." % cfg.reduced)
    else:
        notes.append("Effect engine: structural, tariff $%s/t, cost0 %.6g, asset base %.6g, "
                     "%s cost basis." % (settings["tariff_usd_per_ton"], cfg.eva.cost0,
                                         cfg.eva.asset_base, cfg.eva.cost_basis))
    breakeven = break_even_growth(cfg)
    if breakeven is None:
        notes.append("The effect balance does not cross zero on this grid.")
    else:
        notes.append("The effect balance breaks even at g = %.2f%%." % (breakeven * 100))
    if cfg.capacity_mt is not None:
        over = over_capacity(rows, cfg.capacity_mt)
        if over:
            notes.append("Volume after %d years exceeds the %s mln ton capacity at g = %s." % (
                cfg.horizon, cfg.capacity_mt, ", ".join("%g%%" % (r.g * 100) for r in over)))
        else:
            notes.append("Every row stays within the %s mln ton capacity." % cfg.capacity_mt)
    return notes


def cmd_matrix(args, manifest):
    flags = {"growth_mode": args.mode, "engine": args.engine, "v0": args.v0,
             "growth_grid": args.grid, "discount_rate": args.discount_rate,
             "capacity_mt": args.capacity}
    settings = _settings(args, flags, manifest)
    cfg = scenario_config(
        settings, lambda target_path: manifest.add_input(target_path,
                                                         _target_name(settings, target_path)))
    rows = build_matrix(cfg, args.workers)
    keys = dict(MATRIX_HEADERS)
    kinds = {"g": PERCENT, "volume": VOLUME, "cost_adjustment": PERCENT, "gdp": AMOUNT,
             "effect": MONEY, "share": SHARE}
    columns = [Column(key, keys[key], kinds[key]) for key, _ in MATRIX_HEADERS]
    keys_to_rows = [{"g": r.g, "volume": r.volume_h, "cost_adjustment": r.cost_adjustment,
                     "gdp": r.gdp_pv, "effect": r.effect_pv, "share": r.share} for r in rows]
    return Report("Railway effect balance by freight growth rate", columns, keys_to_rows,
                  _matrix_notes(cfg, rows, settings), manifest, money_parens=not args.no_parens)


def cmd_calibrate(args, manifest):
    flags = {"calibration_target": args.target, "anchor_growth": args.anchors}
    settings = _settings(args, flags, manifest)
    what = ("discount", "reduced", "structural") if args.what == "all" else (args.what,)
    results = OrderedDict()
    if "discount" in what:
        results["discount"] = calibrate_discount(settings["gdp0"], settings["gdp_growth"],
                                                 settings["horizon"], settings["gdp_pv_target"])
    if "reduced" in what or "structural" in what:
        rows, target_path = load_target(settings["calibration_target"])
        manifest.add_input(target_path, _target_name(settings, target_path))
        if "reduced" in what:
            results["reduced"] = calibrate_reduced(rows)
        if "structural" in what:
            results["structural"] = calibrate_structural(
                anchors_from(rows, settings["anchor_growth"]), settings["tariff_usd_per_ton"],
                resolve_discount(settings), settings["cost_adjustment"], settings["v0"],
                settings["horizon"], settings["growth_mode"], settings["cost_basis"], rows)
    report_rows = []
    for name, result in results.items():
        row = result.to_json()
        row["what"] = name
        report_rows.append(row)
    columns = [Column("what", "Calibration", TEXT), Column("reduced_a", "a", NUMBER),
               Column("reduced_b", "b", NUMBER), Column("fit_r2", "R2", NUMBER),
               Column("implied_discount", "Discount rate", NUMBER),
               Column("cost0", "cost0", NUMBER), Column("asset_base", "Asset base", NUMBER),
               Column("residual_max", "Max residual", NUMBER),
               Column("cost_basis", "Cost basis", TEXT), Column("n", "Rows", COUNT)]
    notes = ["Residuals are in million GEL for the discount rate and million USD otherwise."]
    return Report("Calibration", columns, report_rows, notes, manifest)


def _regression_table(text, name):
    body = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if body and body[0].split(",")[0].strip() == "category":
        ds = _parse(parse_freight_table, text, name)
        volumes = freight_columns(ds, VOLUMES)
        columns = OrderedDict(volumes.columns)
        for category, values in freight_columns(ds, REVENUES).columns.items():
            if category != "year":
                columns[REVENUE_PREFIX + category] = values
        return ColumnTable(list(columns), columns, ds.metadata)
    return _parse(parse_column_table, text, name)


def _select(table, selector):
    if selector in table.columns:
        return selector
    for key, header in MATRIX_HEADERS:
        if selector in (key, header) and key in table.columns:
            return key
        if selector == key and header in table.columns:
            return header
    raise UsageError("Unknown column %r; available: %s" % (selector, ", ".join(table.headers)))


def cmd_regress(args, manifest):
    table = _regression_table(_read(args.file, args.file, manifest), args.file)
    x, y = _select(table, args.x), _select(table, args.y)
    manifest.config.update({"x": x, "y": y})
    fit = ols_fit(table.column(x), table.column(y))
    rows = [{"x": x, "y": y, "slope": fit.slope, "intercept": fit.intercept, "r2": fit.r2,
             "n": fit.n, "residual_max": fit.residual_max}]
    columns = [Column("x", "x", TEXT), Column("y", "y", TEXT), Column("slope", "Slope", NUMBER),
               Column("intercept", "Intercept", NUMBER), Column("r2", "R2", NUMBER),
               Column("n", "n", COUNT), Column("residual_max", "Max residual", NUMBER)]
    return Report("Least squares fit", columns, rows, (), manifest)


COMMANDS = {
    "cagr": cmd_cagr,
    "gdp-share": cmd_gdp_share,
    "validate": cmd_validate,
    "matrix": cmd_matrix,
    "calibrate": cmd_calibrate,
    "regress": cmd_regress,
}

# endregion


def run(argv, stdout=None, stderr=None, observer=None):
    """
    Runs one subcommand and returns the exit status: 0 ok, 1 usage, 2 input, 3 domain.

    :param observer: Callback given the :any:`RunResult` once the run is over.
    """
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    argv = list(argv)
    start_time = time.time()
    manifest, error, status, command = None, None, EXIT_OK, None
    package_log = logging.getLogger("freightecon")
    handler = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.verbose:
            handler = logging.StreamHandler(stderr)
            package_log.addHandler(handler)
            package_log.setLevel(logging.DEBUG)
            if observer is None:
                observer = logger(stderr.write)
        manifest = RunManifest(command, output_format=args.format)
        stdout.write(render(COMMANDS[command](args, manifest), args.format))
    except SystemExit as e:
        # --help and --version
        status = e.code if isinstance(e.code, int) else EXIT_OK
    except (FreightError, IOError, OSError) as e:
        error = e
        status = FreightError.exit_status_for(e)
        if isinstance(e, UsageError):
            stderr.write("usage: %s <command> [options]; see %s --help\n" % (PROG, PROG))
        stderr.write("%s: error: %s\n" % (PROG, e))
    finally:
        if handler is not None:
            package_log.removeHandler(handler)
            package_log.setLevel(logging.WARNING)
    if observer is not None:
        observer(RunResult(command, argv, manifest, status, error, start_time, time.time()))
    return status


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
