"""Vertex types, Boltzmann weights, and the phase diagram of the six-vertex model.

Line picture used throughout the package: an edge is "thick" when its arrow
points downward (vertical edges) or to the left (horizontal edges).  Under
the ice rule every vertex carries an even number of thick edge-ends, and the
six admissible local patterns are numbered

    type 1   no thick edges              weight a
    type 2   all four edges thick        weight a
    type 3   top and bottom thick        weight b
    type 4   left and right thick        weight b
    type 5   bottom and right thick      weight c
    type 6   top and left thick          weight c

so thick paths flow monotonically downward and to the left.  The weight
assignment is invariant under simultaneous arrow reversal (types within a
pair share a weight).

The anisotropy ``Delta = (a^2 + b^2 - c^2) / (2ab)`` fixes the phase:
ferroelectric above 1, antiferroelectric below -1, disordered in between.
On the free-fermion line ``Delta = 0`` the whole weight triple is captured,
up to overall scale, by the single parameter ``tau = b^2 / a^2``; the
normalized triple is ``(1, sqrt(tau), sqrt(1 + tau))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

VERTEX_TYPES = (1, 2, 3, 4, 5, 6)

# Thick-edge pattern (top, bottom, left, right) of each vertex type.
EDGES_BY_TYPE = {
    1: (0, 0, 0, 0),
    2: (1, 1, 1, 1),
    3: (1, 1, 0, 0),
    4: (0, 0, 1, 1),
    5: (0, 1, 0, 1),
    6: (1, 0, 1, 0),
}
TYPE_BY_EDGES = {edges: t for t, edges in EDGES_BY_TYPE.items()}

# Weight class of each type: "a" for 1-2, "b" for 3-4, "c" for 5-6.
WEIGHT_CLASS = {1: "a", 2: "a", 3: "b", 4: "b", 5: "c", 6: "c"}


class Phase(str, Enum):
    """Phase region of the model, determined solely by the anisotropy."""

    FERROELECTRIC = "ferroelectric"
    ANTIFERROELECTRIC = "antiferroelectric"
    DISORDERED = "disordered"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class VertexWeights:
    """Positive Boltzmann weight triple (a, b, c).

    Types 1-2 carry weight ``a``, types 3-4 weight ``b``, types 5-6 weight
    ``c``.  Immutable, so instances are safe to share across threads.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"weight {name} must be positive and finite, got {value!r}")

    def weight_of(self, vertex_type: int) -> float:
        """Weight carried by a single vertex of the given type (1..6)."""
        return getattr(self, WEIGHT_CLASS[vertex_type])

    def scaled(self, kappa: float) -> "VertexWeights":
        """Rescale all three weights by a common positive factor."""
        return VertexWeights(kappa * self.a, kappa * self.b, kappa * self.c)

    def as_dict(self) -> dict:
        """JSON-ready form, ``{"a": ..., "b": ..., "c": ...}``."""
        return {"a": self.a, "b": self.b, "c": self.c}


def delta(w: VertexWeights) -> float:
    """Anisotropy parameter (a^2 + b^2 - c^2) / (2ab).

    Invariant under a common rescaling of the weights.
    """
    return (w.a * w.a + w.b * w.b - w.c * w.c) / (2.0 * w.a * w.b)


def classify_phase(w: VertexWeights, eps: float = 1e-12) -> Phase:
    """Phase label from the anisotropy.

    Values within ``eps`` of the transition values +-1 map to the distinct
    ``BOUNDARY`` label so downstream disordered-regime formulas never accept
    them silently.
    """
    d = delta(w)
    if abs(d - 1.0) <= eps or abs(d + 1.0) <= eps:
        return Phase.BOUNDARY
    if d > 1.0:
        return Phase.FERROELECTRIC
    if d < -1.0:
        return Phase.ANTIFERROELECTRIC
    return Phase.DISORDERED


def weights_from_spectral(lam: float, eta: float) -> VertexWeights:
    """Disordered-regime weights from spectral and crossing parameters.

    ``a = sin(lam + eta)``, ``b = sin(lam - eta)``, ``c = sin(2 eta)``, which
    gives anisotropy ``cos(2 eta)``.  The admissible wedge is
    ``0 < eta < pi/2`` and ``eta < lam < pi - eta``; outside it some weight
    would be non-positive and the parameters are rejected.
    """
    if not (0.0 < eta < math.pi / 2.0):
        raise ValueError(f"crossing parameter must satisfy 0 < eta < pi/2, got {eta!r}")
    if not (eta < lam < math.pi - eta):
        raise ValueError(f"spectral parameter must satisfy eta < lam < pi - eta, got {lam!r}")
    return VertexWeights(
        a=math.sin(lam + eta),
        b=math.sin(lam - eta),
        c=math.sin(2.0 * eta),
    )


def weights_from_tau(tau) -> VertexWeights:
    """Free-fermion weights for a given ``tau = b^2/a^2 > 0``.

    Returns the triple normalized to ``a = 1``, namely
    ``(1, sqrt(tau), sqrt(1 + tau))``, which satisfies ``a^2 + b^2 = c^2``
    exactly in the squared (symbolic) representation.  All emptiness
    probabilities are scale invariant, so the normalization loses nothing.
    """
    t = float(tau)
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"tau must be positive and finite, got {tau!r}")
    return VertexWeights(1.0, math.sqrt(t), math.sqrt(1.0 + t))
