import json
import logging
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

logger = logging.getLogger(__name__)


def format_float(x) -> str:
    """Shortest text that round-trips a double: 17 significant digits"""
    return f"{float(x):.17g}"


def numpy_to_json(obj, indent=None):
    class NumpyArrayEncoder(json.JSONEncoder):
        def default(self, o):
            if isinstance(o, np.integer):
                return int(o)
            if isinstance(o, np.floating):
                return float(o)
            if isinstance(o, np.ndarray):
                return o.tolist()
            if isinstance(o, Fraction):
                return str(o)
            if hasattr(o, "to_dict"):
                return o.to_dict()

            return super(NumpyArrayEncoder, self).default(o)

    return json.dumps(obj, cls=NumpyArrayEncoder, indent=indent)


def wrap_to_zone(x):
    """Reduce angles into (-pi, pi]"""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)


def periodic_distance(a, b) -> float:
    """Euclidean distance between two quasimomenta on the torus"""
    return float(np.linalg.norm(wrap_to_zone(np.asarray(a) - np.asarray(b))))


def parallel_map(func, items, workers=1):
    """map() over independent work items, results in input order.

    With workers > 1 the items run on a thread pool; numpy releases the GIL
    inside the LAPACK calls that dominate the work.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def chunks(array, size):
    n = max(1, math.ceil(len(array) / size))
    return np.array_split(array, n)


class Timer:
    def __init__(self, activity, name="", level=logging.INFO):
        self.activity = activity
        self.name = name
        self.level = level
        self.info = ""
        self.start = time.time()

    def __enter__(self):
        self.start = time.time()
        return self

    def __exit__(self, exc_type, exc_value, exc_traceback):
        name = f'"{self.name}"' if self.name else ""
        logger.log(
            self.level,
            "%8.3f sec: %s %s %s",
            time.time() - self.start,
            self.activity,
            name,
            self.info,
        )


def warn(message, warning=RuntimeWarning, when="always"):
    def warning_on_one_line(
        message, category, filename, lineno, file=None, line=None
    ):  # pylint: disable=unused-argument
        return "%s: %s\n" % (category.__name__, message)

    warn_format = warnings.formatwarning
    warnings.formatwarning = warning_on_one_line
    with warnings.catch_warnings():
        warnings.simplefilter(when, warning)
        warnings.warn(message, warning, stacklevel=3)
    warnings.formatwarning = warn_format
