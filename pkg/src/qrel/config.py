"""Global tolerance policy.

Every "= 0" comparison in the package goes through a :class:`Tolerance`:
a quantity vanishes when its Hilbert-Schmidt norm is at most
``rel_eps * max(scale, abs_floor)``, where ``scale`` is the product of the
natural norms of the operands that produced it.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class Tolerance:
    rel_eps: float = 1e-9
    abs_floor: float = 1e-12

    def __post_init__(self) -> None:
        if not self.rel_eps > 0.0:
            raise ValidationError("rel_eps must be positive")
        if self.abs_floor < 0.0:
            raise ValidationError("abs_floor must be nonnegative")

    def cutoff(self, *scales: float) -> float:
        """Zero threshold for a quantity whose natural scale is the product of `scales`."""
        scale = 1.0
        for s in scales:
            scale *= s
        return self.rel_eps * max(scale, self.abs_floor)

    def is_zero(self, value: float, *scales: float) -> bool:
        return value <= self.cutoff(*scales)


_active = Tolerance()


def get_tolerance() -> Tolerance:
    return _active


def set_tolerance(tol: Tolerance) -> None:
    global _active
    if not isinstance(tol, Tolerance):
        raise ValidationError("set_tolerance expects a Tolerance")
    _active = tol


@contextmanager
def tolerance(rel_eps: float | None = None, abs_floor: float | None = None):
    """Temporarily override the active tolerance."""
    previous = get_tolerance()
    set_tolerance(
        Tolerance(
            rel_eps=previous.rel_eps if rel_eps is None else rel_eps,
            abs_floor=previous.abs_floor if abs_floor is None else abs_floor,
        )
    )
    try:
        yield get_tolerance()
    finally:
        set_tolerance(previous)
