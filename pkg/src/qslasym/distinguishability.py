"""Distinguishability measures between density matrices.

Trace distance is kept unnormalised (maximum 2). The Renyi divergence is the
Petz form, not the sandwiched one. Infinite values are ``math.inf``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DimensionMismatch, InvalidOrder, ParseError
from .linalg import support_power
from .states import DensityMatrix

# Overlaps tr(rho^s sigma^(1-s)) below this are rounding noise and count as zero.
OVERLAP_FLOOR = 1e-15

KINDS = ("trace", "renyi", "infidelity", "perp")


def check_order(s: float) -> float:
    s = float(s)
    if not (0 < s < 1 or 1 < s <= 2):
        raise InvalidOrder(f"Renyi order must lie in (0,1) or (1,2], got {s}")
    return s


@dataclass(frozen=True)
class Measure:
    """A distinguishability measure selector: trace, renyi(s), infidelity or perp."""

    kind: str
    s: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParseError(f"unknown measure {self.kind!r}; expected one of {KINDS}")
        if self.kind == "renyi":
            check_order(self.s)

    @classmethod
    def parse(cls, text: str) -> "Measure":
        """Parse ``trace``, ``renyi``, ``renyi:<s>``, ``infidelity`` or ``perp``."""
        name, _, arg = text.strip().lower().partition(":")
        if name == "renyi":
            try:
                s = float(arg) if arg else 0.5
            except ValueError:
                raise ParseError(f"bad Renyi order in {text!r}") from None
            return cls("renyi", s)
        if arg:
            raise ParseError(f"measure {name!r} takes no parameter")
        return cls(name)

    def __str__(self):
        return f"renyi:{self.s:g}" if self.kind == "renyi" else self.kind

    def __call__(self, a, b) -> float:
        return distance(self, a, b)


TRACE = Measure("trace")
RENYI_HALF = Measure("renyi", 0.5)
INFIDELITY = Measure("infidelity")
PERP = Measure("perp")


def _pair(a, b):
    ma = a.matrix if isinstance(a, DensityMatrix) else np.asarray(a, dtype=complex)
    mb = b.matrix if isinstance(b, DensityMatrix) else np.asarray(b, dtype=complex)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"state shapes differ: {ma.shape} vs {mb.shape}")
    return ma, mb


def trace_distance(a, b) -> float:
    """||a - b||_1, in [0, 2]."""
    ma, mb = _pair(a, b)
    d = ma - mb
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


def renyi_overlap(a, b, s: float) -> float:
    """tr(a^s b^(1-s)) with powers taken on the support."""
    ma, mb = _pair(a, b)
    return float(np.real(np.trace(support_power(ma, s) @ support_power(mb, 1 - s))))


def _outside_support(a: np.ndarray, b: np.ndarray) -> float:
    """Weight of ``a`` outside the support of ``b``."""
    lam, vec = np.linalg.eigh(b)
    null = vec[:, lam <= DEFAULT.clamp * max(1.0, float(np.max(np.abs(lam))))]
    if null.shape[1] == 0:
        return 0.0
    return float(np.real(np.trace(null.conj().T @ a @ null)))


def renyi_relative_entropy(a, b, s: float = 0.5) -> float:
    """Petz-Renyi divergence (1/(s-1)) log tr(a^s b^(1-s)).

    Returns ``math.inf`` when the overlap vanishes (s < 1) or when ``a`` is
    not supported inside the support of ``b`` (s > 1).
    """
    s = check_order(s)
    ma, mb = _pair(a, b)
    if s > 1 and _outside_support(ma, mb) > OVERLAP_FLOOR:
        return math.inf
    q = renyi_overlap(ma, mb, s)
    if q <= OVERLAP_FLOOR:
        return math.inf
    return max(0.0, math.log(q) / (s - 1))


def fidelity(a, b) -> float:
    """(tr sqrt(sqrt(a) b sqrt(a)))^2."""
    ma, mb = _pair(a, b)
    ra = support_power(ma, 0.5)
    m = ra @ mb @ ra
    lam = np.clip(np.linalg.eigvalsh(0.5 * (m + m.conj().T)), 0.0, None)
    return float(min(1.0, np.sum(np.sqrt(lam)) ** 2))


def infidelity(a, b) -> float:
    return max(0.0, 1.0 - fidelity(a, b))


def is_perfectly_distinguishable(a, b, tol: float = DEFAULT.perp) -> bool:
    return trace_distance(a, b) >= 2.0 - tol


def distance(measure: Measure, a, b) -> float:
    """Evaluate ``measure`` on the ordered pair (a, b)."""
    if measure.kind == "trace":
        return trace_distance(a, b)
    if measure.kind == "renyi":
        return renyi_relative_entropy(a, b, measure.s)
    if measure.kind == "infidelity":
        return infidelity(a, b)
    return 1.0 if is_perfectly_distinguishable(a, b) else 0.0
