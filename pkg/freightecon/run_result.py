import hashlib
# pylint: disable=redefined-builtin
from builtins import object

from freightecon import __version__


def file_digest(file_path):
  """sha256 hex digest of a file's bytes."""
  digest = hashlib.sha256()
  with open(file_path, "rb") as f:
    for chunk in iter(lambda: f.read(65536), b""):
      digest.update(chunk)
  return digest.hexdigest()


class RunManifest(object):
  """What produced a report: enough to reproduce it byte for byte."""

  def __init__(self, subcommand, config=None, inputs=None, output_format=None, version=__version__):
    self.subcommand = subcommand
    self.config = dict(config or {})
    """Resolved settings the run used."""
    self.inputs = dict(inputs or {})
    """Input path to sha256 digest."""
    self.output_format = output_format
    self.version = version

  def add_input(self, file_path, name=None):
    """Records the digest of ``file_path`` under ``name`` (default: the path itself)."""
    self.inputs[name if name is not None else file_path] = file_digest(file_path)
    return self

  def to_json(self):
    return {"subcommand": self.subcommand, "config": self.config, "inputs": self.inputs,
            "format": self.output_format, "version": self.version}


class RunResult(object):
  """Stores information about a single command line run."""
  # pylint: disable=too-many-instance-attributes

  def __init__(self, subcommand, argv, manifest, exit_status, error, start_time, end_time):
    self.subcommand = subcommand
    """e.g. ``matrix``."""
    self.argv = list(argv)
    """Arguments after the program name."""
    self.manifest = manifest
    """:any:`RunManifest`, or None when the run failed before producing one."""
    self.exit_status = exit_status
    self.error = error
    """Exception that ended the run, if any."""
    self.start_time = start_time
    self.end_time = end_time

  @property
  def time_taken(self):
    """``end_time - start_time``"""
    return self.end_time - self.start_time
