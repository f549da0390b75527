"""Nystrom discretization of det(1 - K) for the sine and Airy kernels.

The operator is discretized on Gauss-Legendre nodes in the symmetric form
I - W^{1/2} K W^{1/2}.  For kernels that are analytic on the domain the
determinant converges exponentially in the number of nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .numerics import airy_ai, airy_ai_prime, gauss_legendre, logdet_dense, solve_dense

DEFAULT_NODES = 48
# tail trace allowed beyond the truncated Airy domain
DEFAULT_TAIL_TOL = 1e-13


class TruncationError(ValueError):
    """The truncated Airy domain leaves too much trace mass behind."""


class SingularOperatorError(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntervalUnion:
    """Ordered, pairwise disjoint open intervals (a_k, b_k)."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        if not ivs:
            raise ValueError("interval union must contain at least one interval")
        for a, b in ivs:
            if not a < b:
                raise ValueError(f"interval ({a}, {b}) is empty or reversed")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if not b0 < a1:
                raise ValueError("intervals must be ordered and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def single(cls, a: float = -1.0, b: float = 1.0) -> "IntervalUnion":
        return cls(((a, b),))

    @classmethod
    def parse(cls, text: str) -> "IntervalUnion":
        """Parse ``"a:b,c:d"``."""
        pairs = []
        for chunk in text.split(","):
            a, b = chunk.split(":")
            pairs.append((float(a), float(b)))
        return cls(tuple(pairs))

    def scaled(self, c: float) -> "IntervalUnion":
        return IntervalUnion(tuple((c * a, c * b) for a, b in self.intervals))

    @property
    def measure(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def is_finite(self) -> bool:
        return all(math.isfinite(a) and math.isfinite(b) for a, b in self.intervals)


@dataclass(frozen=True)
class SineKernel:
    """sin x(z - z') / pi (z - z')."""

    x: float

    def __post_init__(self):
        if not self.x > 0:
            raise ValueError(f"sine kernel parameter must be positive, got {self.x}")


@dataclass(frozen=True)
class AiryKernel:
    """(Ai(z) Ai'(z') - Ai'(z) Ai(z')) / (z - z')."""


Kernel = Union[SineKernel, AiryKernel]
AIRY = AiryKernel()


def kernel_matrix(kind: Kernel, z, w) -> np.ndarray:
    """Kernel values on the grid z x w; coincident points use the analytic diagonal."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    diff = z[:, None] - w[None, :]
    same = diff == 0.0
    safe = np.where(same, 1.0, diff)
    if isinstance(kind, SineKernel):
        out = np.sin(kind.x * safe) / (math.pi * safe)
        diag = np.full(z.shape, kind.x / math.pi)
    elif isinstance(kind, AiryKernel):
        az, apz = airy_ai(z), airy_ai_prime(z)
        aw, apw = airy_ai(w), airy_ai_prime(w)
        out = (az[:, None] * apw[None, :] - apz[:, None] * aw[None, :]) / safe
        diag = apz**2 - z * az**2
    else:
        raise TypeError(f"unknown kernel {kind!r}")
    return np.where(same, diag[:, None], out)


def kernel_eval(kind: Kernel, z: float, w: float) -> float:
    return float(kernel_matrix(kind, [z], [w])[0, 0])


@dataclass(frozen=True)
class NystromSystem:
    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray  # I - W^{1/2} K W^{1/2}

    @property
    def size(self) -> int:
        return self.nodes.size

    def logdet(self) -> float:
        sign, value = logdet_dense(self.matrix)
        if sign <= 0:
            raise SingularOperatorError("discretized 1 - K is not positive definite")
        return value

    def det(self) -> float:
        return math.exp(self.logdet())


def build_nystrom(kind: Kernel, domain: IntervalUnion, n_per_interval: int = DEFAULT_NODES) -> NystromSystem:
    if n_per_interval < 4:
        raise ValueError(f"need at least 4 nodes per interval, got {n_per_interval}")
    if not domain.is_finite():
        raise ValueError("infinite interval: use semi_infinite_det for the Airy half-line")
    rules = [gauss_legendre(n_per_interval, iv) for iv in domain.intervals]
    nodes = np.concatenate([r.nodes for r in rules])
    weights = np.concatenate([r.weights for r in rules])
    root = np.sqrt(weights)
    a = root[:, None] * kernel_matrix(kind, nodes, nodes) * root[None, :]
    return NystromSystem(nodes=nodes, weights=weights, matrix=np.eye(nodes.size) - a)


def nystrom_logdet(kind: Kernel, domain: IntervalUnion, n_per_interval: int = DEFAULT_NODES) -> float:
    return build_nystrom(kind, domain, n_per_interval).logdet()


def nystrom_det(kind: Kernel, domain: IntervalUnion, n_per_interval: int = DEFAULT_NODES) -> float:
    """det(1 - K) on ``domain``; a value in (0, 1]."""
    return math.exp(nystrom_logdet(kind, domain, n_per_interval))


def airy_trace_tail(s: float) -> float:
    """Trace of the Airy kernel on (s, inf), in closed form.

    integral_s^inf (Ai'^2 - z Ai^2) dz = (2 s^2 Ai^2 - 2 s Ai'^2 - Ai Ai') / 3
    """
    ai, aip = airy_ai(s), airy_ai_prime(s)
    return (2.0 * s * s * ai * ai - 2.0 * s * aip * aip - ai * aip) / 3.0


def default_length(t: float) -> float:
    return max(12.0, 14.0 - t)


def semi_infinite_logdet(
    t: float,
    n: int = DEFAULT_NODES,
    length: float | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """log F2(t) = log det(1 - K_Airy) on (t, inf), truncated to (t, t + length)."""
    if not math.isfinite(t) or t < -15.0:
        raise ValueError(f"Airy determinant supported for t >= -15, got {t}")
    length = default_length(t) if length is None else float(length)
    if not length > 0:
        raise ValueError(f"truncation length must be positive, got {length}")
    tail = airy_trace_tail(t + length)
    if tail > tail_tol:
        raise TruncationError(
            f"Airy trace beyond t+L={t + length:g} is {tail:.3e} > {tail_tol:.1e}; increase L"
        )
    return nystrom_logdet(AIRY, IntervalUnion.single(t, t + length), n)


def semi_infinite_det(
    t: float,
    n: int = DEFAULT_NODES,
    length: float | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """F2(t) as the Airy-kernel Fredholm determinant on (t, inf)."""
    return math.exp(semi_infinite_logdet(t, n, length, tail_tol))


def resolvent_trace(kind: Kernel, domain: IntervalUnion, n_per_interval: int = DEFAULT_NODES) -> float:
    """tr((1 - K)^{-1} K) of the discretized operator.

    Equals P(exactly one point in the domain) / P(no point in the domain).
    """
    system = build_nystrom(kind, domain, n_per_interval)
    sign, logabs = logdet_dense(system.matrix)
    if sign <= 0 or logabs < math.log(1e-300):
        raise SingularOperatorError("1 - K is numerically singular on this domain")
    a = np.eye(system.size) - system.matrix
    return float(np.trace(solve_dense(system.matrix, a)))
