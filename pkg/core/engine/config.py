import os
from dataclasses import dataclass, replace
from django.conf import settings


@dataclass(frozen=True)
class Tolerances:
    """
    Numerical tolerances shared by the solver and the warmstart engine.

    ``recon`` is scaled by the matrix order and ``sing`` by
    ``1 + |lambda| * ||E_B||`` at the point of use.
    """
    res: float = 1e-9
    feas: float = 1e-9
    opt: float = 1e-9
    imag: float = 1e-7
    sing: float = 1e-12
    recon: float = 1e-8
    cond_threshold: float = 1e12
    lambda0: float = 1e-14
    exclusion_radius: float = 1e-6
    max_retries: int = 5
    max_iterations: int = 50_000
    bland_after: int = 50

    def with_overrides(self, **overrides) -> 'Tolerances':
        """Return a copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


class EngineConfig:
    """Read-only view of the PARAWARM_* settings with library defaults."""

    def _setting(self, name, default):
        if not settings.configured:
            return default
        return getattr(settings, name, default)

    @property
    def threads(self) -> int:
        threads = self._setting('PARAWARM_THREADS', 0)
        return threads if threads and threads > 0 else (os.cpu_count() or 1)

    @property
    def seed(self) -> int:
        return self._setting('PARAWARM_SEED', 0)

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances().with_overrides(**self._setting('PARAWARM_TOLERANCES', {}))


config = EngineConfig()
