"""Floating-point tolerance used for every distance equality test."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel > 0 and self.abs > 0):
            raise ValueError("tolerances must be positive")

    def eps(self, scale: float) -> float:
        return max(self.abs, self.rel * abs(scale))

    def close(self, a: float, b: float, scale: float | None = None) -> bool:
        if scale is None:
            scale = max(abs(a), abs(b))
        return abs(a - b) <= self.eps(scale)


DEFAULT_TOL = Tolerance()
