"""Hölder weight functions used to normalize the scan statistic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

POLYNOMIAL = "poly"
LOGARITHMIC = "log"


@dataclass(frozen=True)
class WeightFunction:
    """Polynomial ``x**beta`` (``0 <= beta < 1/2``) or logarithmic
    ``sqrt(x) * log(1/x)**beta`` (``beta > 1/2``) weight.

    Construct through :func:`validate` or :meth:`parse` to get range checks.
    """

    family: str
    beta: float

    def __post_init__(self):
        _check_range(self.family, self.beta)
        object.__setattr__(self, "beta", float(self.beta))

    def __call__(self, x):
        return evaluate(self, x)

    @classmethod
    def parse(cls, text: str) -> "WeightFunction":
        """Parse ``"poly:<beta>"`` or ``"log:<beta>"``."""
        family, sep, beta = text.partition(":")
        if not sep:
            raise ParameterError(f"weight spec {text!r} is not of the form family:beta")
        try:
            value = float(beta)
        except ValueError:
            raise ParameterError(f"weight exponent {beta!r} is not a number") from None
        return cls(family.strip().lower(), value)

    def __str__(self):
        return f"{self.family}:{self.beta:g}"


def validate(family: str, beta: float) -> WeightFunction:
    """Build a weight, refusing exponents outside the family's admissible range."""
    return WeightFunction(family, beta)


def _check_range(family, beta):
    if family == POLYNOMIAL:
        if not 0.0 <= beta < 0.5:
            raise ParameterError(f"polynomial weight needs beta in [0, 1/2), got {beta}")
    elif family == LOGARITHMIC:
        if not beta > 0.5 or not np.isfinite(beta):
            raise ParameterError(f"logarithmic weight needs beta in (1/2, inf), got {beta}")
    else:
        raise ParameterError(f"unknown weight family {family!r}; use 'poly' or 'log'")


def evaluate(w: WeightFunction, x):
    """Evaluate the weight on ``0 < x < 1``; scalars in, float out."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0) or np.any(xa >= 1):
        raise ValueError("weight functions are evaluated on the open interval (0, 1)")
    if w.family == POLYNOMIAL:
        out = np.ones_like(xa) if w.beta == 0 else xa**w.beta
    else:
        out = np.sqrt(xa) * np.log(1.0 / xa) ** w.beta
    return float(out) if out.ndim == 0 else out
