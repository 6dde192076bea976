# Classes to load and save graphs, level sets and run configurations

import json
from pathlib import Path

from .errors import ParseError
from .graph import FundamentalGraph
from .iso import LevelSets
from .runconfig import RunConfig
from .utils import numpy_to_json

DATA_DIR = Path(__file__).parent / "data"


class ReaderWriter:
    def read(self, filename):
        """Read a file and build an object from it"""

        raise NotImplementedError

    def write(self, obj, filename):
        """Write out file for an object"""

        raise NotImplementedError


class JSONReaderWriter(ReaderWriter):
    """Reads and writes classes that provide to_dict() and from_dict()"""

    kind = None

    def read(self, filename):
        text = Path(filename).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON in {filename}: {e.msg}", line=e.lineno)
        if not isinstance(data, dict):
            raise ParseError(f"expected a JSON object in {filename}")
        return self.kind.from_dict(data)

    def write(self, obj, filename):
        Path(filename).write_text(numpy_to_json(obj.to_dict(), indent=4) + "\n")


class GraphReaderWriter(JSONReaderWriter):
    kind = FundamentalGraph


class LevelSetReaderWriter(JSONReaderWriter):
    kind = LevelSets


class ConfigReaderWriter(JSONReaderWriter):
    kind = RunConfig


def resolve(name) -> Path:
    """`name` as a path when it exists, else a shipped data file"""
    path = Path(name)
    if path.exists():
        return path
    for candidate in (DATA_DIR / name, DATA_DIR / f"{name}.json"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no such file or shipped asset: {name}")


def builtin_names():
    return sorted(
        p.stem for p in DATA_DIR.glob("*.json") if not p.stem.endswith("_levels")
    )


def builtin_graph(name) -> FundamentalGraph:
    return GraphReaderWriter().read(resolve(name))


def builtin_level_sets(name) -> LevelSets:
    return LevelSetReaderWriter().read(resolve(f"{name}_levels"))
