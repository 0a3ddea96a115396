from json import JSONEncoder, dumps, loads

import numpy as np

from freightecon.errors import FreightError


def parse_json(json_string):
    """Parses a JSON string into python values. Used to read reports back."""
    return loads(json_string)


def parse_json_or_none(json_string):
    try:
        return parse_json(json_string)
    except ValueError:
        return None


def to_json(dct, pretty=False, sort_keys=False):
    """
    Opposite of parse_json.
    Converts domain objects through their ``to_json`` method.
    """
    if pretty:
        return dumps(dct, cls=_FreightJSONEncoder, sort_keys=True, indent=2, separators=(", ", ": "))
    return dumps(dct, cls=_FreightJSONEncoder, sort_keys=sort_keys, separators=(",", ":"))


class _FreightJSONEncoder(JSONEncoder):
    """Converts objects with ``to_json``, numpy scalars and numpy arrays to JSON."""
    # pylint: disable=method-hidden,arguments-differ

    def default(self, obj):
        if hasattr(obj, "to_json"):
            return obj.to_json()
        elif isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        elif isinstance(obj, (set, frozenset)):
            return sorted(obj)
        else:
            raise FreightError(
                "Unserializable object {} of type {}".format(obj, type(obj)))
