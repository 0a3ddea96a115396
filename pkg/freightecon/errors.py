"""Error types that freightecon functions throw."""
# pylint: disable=redefined-builtin
from builtins import object

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_DOMAIN = 3

# region FreightError


class FreightError(Exception):
    """
    Base error for every failure raised by freightecon.
    ``context`` holds whatever locates the failure (path, row, column, interval...).
    """

    @staticmethod
    def exit_status_for(error):
        """Maps an exception to the command line exit status."""
        # pylint: disable=too-many-return-statements
        if error is None:
            return EXIT_OK
        elif isinstance(error, UsageError):
            return EXIT_USAGE
        elif isinstance(error, InputError):
            return EXIT_INPUT
        elif isinstance(error, DomainError):
            return EXIT_DOMAIN
        elif isinstance(error, (IOError, OSError)):
            return EXIT_INPUT
        else:
            return EXIT_DOMAIN

    def __init__(self, description, context=None):
        super(FreightError, self).__init__(description)
        self.description = description
        """Human readable description."""
        self.context = dict(context or {})
        """Dict locating the failure. May be empty."""

    def with_context(self, **extra):
        """Adds keys to ``context`` (e.g. the file path) and returns self for re-raising."""
        self.context.update(extra)
        return self

    def __str__(self):
        if not self.context:
            return self.description
        where = ", ".join("%s=%s" % (k, self.context[k]) for k in sorted(self.context))
        return "%s (%s)" % (self.description, where)


class UsageError(FreightError):
    """Unknown subcommand, flag or column selector."""
    pass


class InputError(FreightError):
    """Input file or configuration could not be read into a valid object."""
    pass


class ParseError(InputError):
    def __init__(self, description, row, column, value):
        super(ParseError, self).__init__(
            description, {"row": row, "column": column, "value": value})
        self.row = row
        """Row label (category or year) of the offending cell."""
        self.column = column
        """Column label of the offending cell."""
        self.value = value
        """Raw cell text."""


class StructuralError(InputError):
    """Duplicate, missing or out-of-order rows and columns."""
    pass


class ValidationError(InputError):
    """Values that break a dataset invariant, e.g. negative tonnage or zero GDP."""
    pass


class ConfigError(InputError):
    """Unknown key, malformed value or conflicting keys in a configuration."""
    pass


class DomainError(FreightError, ValueError):
    """Arguments outside the mathematical domain of an operation."""
    pass


class CalibrationError(DomainError):
    """A calibration target is unreachable or the design cannot identify the unknowns."""
    pass


# endregion

class Finding(object):
    """
    One inconsistency reported by :any:`validate_components`.
    Findings are data, not errors: published tables are always ingested.
    """

    WARNING = "warning"
    ERROR = "error"

    def __init__(self, year, check, expected, actual, severity=WARNING):
        self.year = year
        """Year of the checked row."""
        self.check = check
        """Name of the check, e.g. ``volumes`` or ``revenues``."""
        self.expected = expected
        """Published total."""
        self.actual = actual
        """Sum of the components."""
        self.discrepancy = abs(expected - actual)
        """``|expected - actual|``."""
        self.severity = severity
        """``warning`` or ``error``."""

    def to_json(self):
        return {"year": self.year, "check": self.check, "expected": self.expected,
                "actual": self.actual, "discrepancy": self.discrepancy,
                "severity": self.severity}

    def __repr__(self):
        return "Finding(year=%s, check=%s, expected=%r, actual=%r, discrepancy=%r, severity=%s)" % \
               (self.year, repr(self.check), self.expected, self.actual,
                self.discrepancy, repr(self.severity))

    def __eq__(self, other):
        return self.__class__ == other.__class__ and \
            self.year == other.year and \
            self.check == other.check and \
            self.expected == other.expected and \
            self.actual == other.actual and \
            self.severity == other.severity

    def __ne__(self, other):
        # pylint: disable=unneeded-not
        return not self == other
