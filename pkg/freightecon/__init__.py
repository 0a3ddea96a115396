__title__ = "freightecon"
__version__ = "1.0.0"
__author__ = "freightecon contributors"
__license__ = "MPL 2.0"
__copyright__ = "2026 freightecon contributors"
