import logging
import os

from .errors import ConfigError

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("text", "csv", "json")
WORKERS_ENV = "CHIRALBAND_WORKERS"


class RunConfig:
    """Numerical settings shared by the CLI subcommands"""

    FIELDS = {
        "grid": 64,
        "refine": 1e-10,
        "flat_tol": 1e-8,
        "fd_step": 1e-3,
        "gap_tol": 1e-6,
        "output_format": "text",
        "workers": 1,
        "seed": 0,
        "max_cells": 10**7,
        "max_levels": 40,
        "tie_radius": 1e-3,
        "max_candidates": 40,
    }

    def __init__(self, **kwargs):
        unknown = set(kwargs) - set(self.FIELDS)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        for name, default in self.FIELDS.items():
            setattr(self, name, kwargs.get(name, default))

    def validate(self):
        for name in ("refine", "flat_tol", "fd_step", "gap_tol", "tie_radius"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"{name} must be a positive number, got {value!r}")
        grid = [self.grid] if isinstance(self.grid, int) else self.grid
        if not grid or any(not isinstance(n, int) or n < 2 for n in grid):
            raise ConfigError(f"grid counts must be integers >= 2, got {self.grid!r}")
        for name in ("workers", "max_cells", "max_levels", "max_candidates"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"output format must be one of {OUTPUT_FORMATS}, "
                f"got {self.output_format!r}"
            )
        return self

    def update(self, **overrides):
        """Copy with every non-None override applied"""
        d = self.to_dict()
        d.update({k: v for k, v in overrides.items() if v is not None})
        d.pop("type")
        return RunConfig(**d)

    def with_environment(self, environ=None):
        environ = os.environ if environ is None else environ
        value = environ.get(WORKERS_ENV)
        if value is None:
            return self
        try:
            workers = int(value)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {value!r}")
        logger.debug("worker count %d from %s", workers, WORKERS_ENV)
        return self.update(workers=workers)

    def to_dict(self):
        d = {"type": "RunConfig"}
        d.update({name: getattr(self, name) for name in self.FIELDS})
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        if d.get("type", "RunConfig") != "RunConfig":
            raise ValueError(f"Expecting type RunConfig, got {d['type']}")
        return cls(**{k: v for k, v in d.items() if k != "type"}).validate()

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.to_dict() == other.to_dict()
