from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from homgeo.errors import ConfigError

MODES = ("null-only", "all", "certify", "verify")

# per-angle grid resolution on S^m for the hyperspherical product grid
_DEFAULT_PER_ANGLE = {2: 64, 3: 16, 4: 12}


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the sphere scans, the certificate and the pipeline.

    ``grid`` overrides the resolution: for a circle it is the number of
    equispaced angles, on higher spheres the number of samples per angle.
    ``None`` picks a default from the sphere dimension.

    ``mode``: ``null-only`` runs the null-cone scan and certificate;
    ``all`` and ``certify`` add the geodesic-vector scan; ``verify`` also
    runs the E(1,1) coordinate checks when the entry is E(1,1).
    """

    grid: Optional[int] = None
    tol_zero: float = 1e-9
    newton_max_iter: int = 50
    max_candidates: int = 64
    mode: str = "all"
    circle_grid: int = 720
    seed_limit: int = 256

    def __post_init__(self):
        if self.grid is not None and self.grid < 2:
            raise ConfigError("grid resolution must be >= 2")
        if not (0 < self.tol_zero < 1e-3):
            raise ConfigError("tol_zero must lie in (0, 1e-3)")
        if min(self.newton_max_iter, self.max_candidates, self.seed_limit) < 1 or self.circle_grid < 4:
            raise ConfigError("iteration caps and resolutions must be positive")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")

    def resolution(self, sphere_dim: int) -> int:
        """Grid resolution for ``S^sphere_dim``."""
        if self.grid is not None:
            return self.grid
        if sphere_dim <= 1:
            return self.circle_grid
        return _DEFAULT_PER_ANGLE.get(sphere_dim, 8)

    def as_dict(self) -> dict:
        return asdict(self)
