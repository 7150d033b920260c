"""Pipeline configuration and environment handling

Environment variables (optionally from a .env file):
    SGM_LOG: log level for the CLI (default WARNING)
    SGM_WORKERS: default worker count (default: available cores)
"""

import logging
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional, Tuple

from dotenv import load_dotenv

from .errors import InvalidConfig
from .types import Method

logger = logging.getLogger(__name__)

DEFAULT_EPS_GRID: Tuple[float, ...] = (10.0, 1.0, 1e-1, 1e-2, 1e-3, 1e-4)
DEFAULT_RHO_GRID: Tuple[float, ...] = (0.02, 0.03, 0.04, 0.05, 0.06, 0.07)
FAILED_PAIR_POLICIES = ("keep", "drop")


def load_environment() -> None:
    """Load variables from a .env file into the process environment"""
    load_dotenv()


def default_workers() -> int:
    """Worker count from SGM_WORKERS, else the number of available cores"""
    value = os.environ.get("SGM_WORKERS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning(f"Ignoring non-integer SGM_WORKERS={value!r}")
    return os.cpu_count() or 1


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging from an explicit level or SGM_LOG"""
    name = (level or os.environ.get("SGM_LOG") or "WARNING").upper()
    numeric = getattr(logging, name, None)
    if not isinstance(numeric, int):
        logger.warning(f"Unknown log level {name!r}, using WARNING")
        numeric = logging.WARNING
    logging.basicConfig(
        level=numeric,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@dataclass
class PipelineConfig:
    """Configuration for a graph estimation run

    Attributes:
        d: Dimension of the sufficient predictor for every pair
        method: Edge scoring method
        eps_grid: GCV grid for the Tikhonov regularizers, descending
        rho_grid: GCV grid for the threshold, ascending
        eps_pair: Fixed regularizer for the pair Gram (None selects by GCV)
        eps_minus: Fixed regularizer for the complement Gram (None selects by GCV)
        eps_u: Fixed regularizer for the predictor Gram (None selects by GCV)
        rho: Fixed threshold (None selects by GCV)
        relative_eps: Scale each regularizer by the largest eigenvalue of its Gram
        failed_pair_policy: "keep" gives failed pairs the max score, "drop" gives 0
        seed: Seed for the bandwidth subsampling of large samples
        workers: Bounded worker pool size
        fallback_eps: Regularizer used when GCV degenerates
        fallback_rho: Threshold used when GCV degenerates
    """
    d: int = 2
    method: Method = Method.SGM
    eps_grid: Tuple[float, ...] = DEFAULT_EPS_GRID
    rho_grid: Tuple[float, ...] = DEFAULT_RHO_GRID
    eps_pair: Optional[float] = None
    eps_minus: Optional[float] = None
    eps_u: Optional[float] = None
    rho: Optional[float] = None
    relative_eps: bool = True
    failed_pair_policy: str = "keep"
    seed: int = 0
    workers: int = field(default_factory=default_workers)
    fallback_eps: float = 1e-2
    fallback_rho: float = 0.04

    def __post_init__(self):
        self.method = Method(self.method)
        self.eps_grid = tuple(float(v) for v in self.eps_grid)
        self.rho_grid = tuple(float(v) for v in self.rho_grid)

        if self.d < 1:
            raise InvalidConfig(f"d must be >= 1, got {self.d}")
        if self.workers < 1:
            raise InvalidConfig(f"workers must be >= 1, got {self.workers}")
        if self.failed_pair_policy not in FAILED_PAIR_POLICIES:
            raise InvalidConfig(
                f"failed_pair_policy must be one of {FAILED_PAIR_POLICIES}, got {self.failed_pair_policy!r}"
            )
        _check_grid("eps_grid", self.eps_grid, descending=True)
        _check_grid("rho_grid", self.rho_grid, descending=False)
        for name in ("eps_pair", "eps_minus", "eps_u", "fallback_eps"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InvalidConfig(f"{name} must be > 0, got {value}")

    @property
    def fixed_eps(self) -> bool:
        """True when every regularizer the method needs is fixed"""
        if self.method == Method.NAIVE:
            return self.eps_u is not None
        return None not in (self.eps_pair, self.eps_minus, self.eps_u)

    def with_eps(self, value: float) -> "PipelineConfig":
        """Copy with all three regularizers fixed to one value"""
        return self.replace(eps_pair=value, eps_minus=value, eps_u=value)

    def replace(self, **changes: Any) -> "PipelineConfig":
        data = self.to_dict()
        data.update(changes)
        return PipelineConfig.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["method"] = self.method.value
        data["eps_grid"] = list(self.eps_grid)
        data["rho_grid"] = list(self.rho_grid)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PipelineConfig":
        """Build from a mapping, ignoring keys that are not config fields"""
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


def _check_grid(name: str, grid: Tuple[float, ...], descending: bool) -> None:
    if not grid:
        raise InvalidConfig(f"{name} must be nonempty")
    if any(not v > 0 for v in grid):
        raise InvalidConfig(f"{name} must be strictly positive")
    ordered = sorted(grid, reverse=descending)
    if list(grid) != ordered or len(set(grid)) != len(grid):
        direction = "descending" if descending else "ascending"
        raise InvalidConfig(f"{name} must be strictly {direction}")
