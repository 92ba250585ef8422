"""Truncated power series over the Tate ring and the lambda-ring calculus on them.

The plethystic exponential is realized by the monomial product formula

    Exp(sum_{n,k} a_{n,k} u^k t^n) = prod_{n,k} (1 - u^k t^n)^(-a_{n,k}),

which is a group isomorphism from series without constant term onto unit
series.  The power structure is A(t)^m = Exp(m * Log A(t)).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .motive import ONE, ZERO, TateClass

__all__ = [
    "DEFAULT_ORDER",
    "MotiveSeries",
    "substitute",
    "sigma",
    "exp_series",
    "log_series",
    "power",
    "stirling2",
    "config_class",
]

DEFAULT_ORDER = 12


class MotiveSeries:
    """A power series sum_{n<=N} c_n t^n with TateClass coefficients, exact mod t^(N+1)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[TateClass | int], order: int | None = None):
        cs = [c if isinstance(c, TateClass) else TateClass.constant(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        cs = cs[: order + 1]
        cs.extend([ZERO] * (order + 1 - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "MotiveSeries":
        return cls([ONE], order)

    @classmethod
    def monomial(cls, c: TateClass | int, n: int, order: int = DEFAULT_ORDER) -> "MotiveSeries":
        cs = [ZERO] * (order + 1)
        if n <= order:
            cs[n] = c if isinstance(c, TateClass) else TateClass.constant(c)
        return cls(cs, order)

    @classmethod
    def geometric(cls, ratio: TateClass, order: int = DEFAULT_ORDER) -> "MotiveSeries":
        """1/(1 - ratio*t)."""
        cs = [ONE]
        for _ in range(order):
            cs.append(cs[-1] * ratio)
        return cls(cs, order)

    def __getitem__(self, n: int) -> TateClass:
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return self.order + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, MotiveSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"MotiveSeries({[str(c) for c in self.coeffs]}, order={self.order})"

    def truncate(self, order: int) -> "MotiveSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return MotiveSeries(self.coeffs[: order + 1], order)

    def _common(self, other: "MotiveSeries") -> tuple["MotiveSeries", "MotiveSeries"]:
        if self.order == other.order:
            return self, other
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n)

    def __add__(self, other):
        if not isinstance(other, MotiveSeries):
            return NotImplemented
        a, b = self._common(other)
        return MotiveSeries([x + y for x, y in zip(a.coeffs, b.coeffs)], a.order)

    def __neg__(self):
        return MotiveSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, MotiveSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (TateClass, int)):
            return MotiveSeries([c * other for c in self.coeffs], self.order)
        if not isinstance(other, MotiveSeries):
            return NotImplemented
        a, b = self._common(other)
        n = a.order
        out = []
        for d in range(n + 1):
            acc = ZERO
            for i in range(d + 1):
                x, y = a.coeffs[i], b.coeffs[d - i]
                if x and y:
                    acc = acc + x * y
            out.append(acc)
        return MotiveSeries(out, n)

    def __rmul__(self, other):
        if isinstance(other, (TateClass, int)):
            return self * other
        return NotImplemented

    def inverse(self) -> "MotiveSeries":
        if self.coeffs[0] != ONE:
            raise ValueError("not invertible: constant term must be 1")
        inv = [ONE]
        for d in range(1, self.order + 1):
            acc = ZERO
            for i in range(1, d + 1):
                acc = acc + self.coeffs[i] * inv[d - i]
            inv.append(-acc)
        return MotiveSeries(inv, self.order)

    def substitute(self, s: TateClass | int, e: int = 1) -> "MotiveSeries":
        return substitute(self, s, e)

    def map(self, fn) -> list:
        return [fn(c) for c in self.coeffs]

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "MotiveSeries":
        return cls([TateClass.from_json(c) for c in data["coeffs"]], int(data["order"]))


def substitute(a: MotiveSeries, s: TateClass | int, e: int = 1) -> MotiveSeries:
    """Return A(s * t^e) truncated to the order of ``a``; ``s`` must be +-u^k."""
    if isinstance(s, int):
        s = TateClass.constant(s)
    if not s.is_monomial() or next(iter(s.coeffs.values())) not in (1, -1):
        raise ValueError("substitution requires monomial")
    if e < 1:
        raise ValueError("e must be a positive integer")
    out = [ZERO] * (a.order + 1)
    spow = ONE
    for n, c in enumerate(a.coeffs):
        if n * e > a.order:
            break
        out[n * e] = c * spow
        spow = spow * s
    return MotiveSeries(out, a.order)


# Internally series are lists of {u-exponent: int} dicts during Exp/Log.

def _mul_factor(buf: list[dict[int, int]], n: int, k: int, a: int) -> None:
    """In place: buf *= (1 - u^k t^n)^(-a)."""
    N = len(buf) - 1
    jmax = N // n
    if jmax == 0 or a == 0:
        return
    # generalized binomial coefficients of (1-x)^(-a)
    binom = [1]
    for j in range(1, jmax + 1):
        binom.append(binom[-1] * (a + j - 1) // j)
    for d in range(N, n - 1, -1):
        target = buf[d]
        for j in range(1, d // n + 1):
            b = binom[j]
            if not b:
                continue
            src = buf[d - n * j]
            shift = k * j
            for e, v in src.items():
                key = e + shift
                target[key] = target.get(key, 0) + b * v
        buf[d] = {e: v for e, v in target.items() if v}


def _to_series(buf: list[dict[int, int]]) -> MotiveSeries:
    return MotiveSeries([TateClass(c) for c in buf], len(buf) - 1)


def exp_series(a: MotiveSeries) -> MotiveSeries:
    """Plethystic exponential of a series with zero constant term."""
    if a.coeffs[0]:
        raise ValueError("Exp requires zero constant term")
    buf: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(a.order)]
    for n in range(1, a.order + 1):
        for k, c in a.coeffs[n].items():
            _mul_factor(buf, n, k, c)
    return _to_series(buf)


def log_series(a: MotiveSeries) -> MotiveSeries:
    """Inverse of :func:`exp_series`, solved degree by degree."""
    if a.coeffs[0] != ONE:
        raise ValueError("Log requires constant term 1")
    buf: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(a.order)]
    out = [ZERO]
    for n in range(1, a.order + 1):
        # Exp(B_<n + B_n t^n) = Exp(B_<n) (1 + B_n t^n) mod t^(n+1)
        b = a.coeffs[n] - TateClass(buf[n])
        out.append(b)
        for k, c in b.items():
            _mul_factor(buf, n, k, c)
    return MotiveSeries(out, a.order)


def power(a: MotiveSeries, m: TateClass | int) -> MotiveSeries:
    """The power structure A(t)^m for a unit series A and a Tate exponent m."""
    if a.coeffs[0] != ONE:
        raise ValueError("power requires constant term 1")
    return exp_series(log_series(a) * m)


def sigma(c: TateClass | int, n: int) -> TateClass:
    """The lambda-ring operation sigma^n, read off as [t^n] Exp(c t)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ONE
    return exp_series(MotiveSeries.monomial(c, 1, n))[n]


@lru_cache(maxsize=None)
def stirling2(k: int, j: int) -> int:
    """Stirling numbers of the second kind."""
    if k == j:
        return 1
    if j == 0 or j > k:
        return 0
    return j * stirling2(k - 1, j) + stirling2(k - 1, j - 1)


@lru_cache(maxsize=None)
def config_class(d: int, k: int) -> TateClass:
    """[F(A^d, k)], ordered k-tuples of distinct points in affine d-space.

    Stratifying X^k by which coordinates coincide gives
    L^(dk) = sum_j S(k, j) [F(A^d, j)]; solve for the top stratum.
    """
    if d < 1 or k < 1:
        raise ValueError("d and k must be positive")
    total = TateClass.monomial(2 * d * k)
    for j in range(1, k):
        total = total - config_class(d, j) * stirling2(k, j)
    return total

