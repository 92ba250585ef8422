"""Generating functions for (motivic) Donaldson-Thomas invariants of Quot schemes of points.

All motivic series are returned in the signed variable: ``p_punctual(r, N)``
is P_r((-1)^r t), ``z_threefold`` returns Z_r(Y, (-1)^r t).  ``z_affine`` is
the plain product Z_r(A^3, t); use :func:`substitute` with ``(-1)**r`` to
compare it with the signed series.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .motive import (
    ONE,
    ZERO,
    HodgeWeight,
    TateClass,
    WeightPolynomial,
    euler_char,
    lefschetz,
    projective_class,
    weight_specialize,
)
from .series import DEFAULT_ORDER, MotiveSeries, exp_series, power, substitute

__all__ = [
    "IdentityViolation",
    "ThreefoldInput",
    "macmahon",
    "macmahon_power",
    "z_affine",
    "p_punctual",
    "omega",
    "z_threefold",
    "dt_series",
    "chern_exponent",
    "vc_weight_series",
    "vc_hodge_polynomials",
]


class IdentityViolation(AssertionError):
    """Two sides of an identity that must agree did not."""


# -- integer series ---------------------------------------------------------

def _int_factor(buf: list[int], m: int, a: int) -> None:
    """In place: buf *= (1 - q^m)^(-a)."""
    N = len(buf) - 1
    jmax = N // m
    binom = [1]
    for j in range(1, jmax + 1):
        binom.append(binom[-1] * (a + j - 1) // j)
    for d in range(N, m - 1, -1):
        buf[d] += sum(binom[j] * buf[d - m * j] for j in range(1, d // m + 1))


def macmahon_power(k: int, N: int) -> list[int]:
    """Coefficients of M(q)^k = prod_m (1 - q^m)^(-m k) up to q^N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    buf = [1] + [0] * N
    for m in range(1, N + 1):
        _int_factor(buf, m, m * k)
    return buf


def macmahon(N: int) -> list[int]:
    """MacMahon function M(q) = prod_{m>=1} (1 - q^m)^(-m) to order N."""
    return macmahon_power(1, N)


def dt_series(r: int, exponent_chi: int, N: int) -> list[int]:
    """M((-1)^r q)^(r * exponent_chi), the DT series of a rank r bundle."""
    if r < 1:
        raise ValueError("rank must be positive")
    coeffs = macmahon_power(r * exponent_chi, N)
    if r % 2:
        coeffs = [c if n % 2 == 0 else -c for n, c in enumerate(coeffs)]
    return coeffs


def chern_exponent(c1c2: int, c3: int) -> int:
    """Integral of c_3(T_Y (x) omega_Y) on a 3-fold from its Chern numbers.

    With Chern roots x_i the twisted roots are x_i - c_1, and the degree-3
    part of prod(1 + x_i - c_1) is c_3 - c_1 c_2; the c_1^3 terms cancel.
    """
    return c3 - c1c2


# -- motivic series ---------------------------------------------------------

def _check_rank(r: int) -> None:
    if r < 1:
        raise ValueError("rank must be positive")


def z_affine(r: int, N: int = DEFAULT_ORDER) -> MotiveSeries:
    """Z_r(A^3, t) = prod_{m>=1} prod_{k=0}^{rm-1} (1 - L^(k+2-rm/2) t^m)^(-1)."""
    _check_rank(r)
    buf = [ONE] + [ZERO] * N
    for m in range(1, N + 1):
        for k in range(r * m):
            x = lefschetz(2 * k + 4 - r * m)
            # multiply by the geometric series sum_j x^j t^(mj)
            for d in range(N, m - 1, -1):
                acc = buf[d]
                xp = ONE
                for j in range(1, d // m + 1):
                    xp = xp * x
                    src = buf[d - m * j]
                    if src:
                        acc = acc + src * xp
                buf[d] = acc
    return MotiveSeries(buf, N)


def _punctual_argument(r: int, N: int, numerator: TateClass) -> MotiveSeries:
    """(-1)^r t * numerator / ((1 - (-L^(-1/2))^r t)(1 - (-L^(1/2))^r t)), expanded."""
    sign = -1 if r % 2 else 1
    num = MotiveSeries.monomial(numerator * sign, 1, N)
    low = -lefschetz(-1)
    high = -lefschetz(1)
    return num * MotiveSeries.geometric(low**r, N) * MotiveSeries.geometric(high**r, N)


def virtual_projective(m: int) -> TateClass:
    """[P^m]_vir = L^(-m/2) [P^m]."""
    return lefschetz(-m) * projective_class(m)


def p_punctual(r: int, N: int = DEFAULT_ORDER) -> MotiveSeries:
    """The signed punctual series P_r((-1)^r t)."""
    _check_rank(r)
    return exp_series(_punctual_argument(r, N, lefschetz(-3) * virtual_projective(r - 1)))


def omega(r: int, n: int) -> TateClass:
    """Omega_{r,n} = (-L^(1/2))^(-rn-2) [P^(rn-1)]."""
    _check_rank(r)
    if n < 1:
        raise ValueError("n must be positive")
    return TateClass.monomial(-r * n - 2) * projective_class(r * n - 1)


@dataclass(frozen=True)
class ThreefoldInput:
    """A smooth 3-fold Y described by its motive, Euler number and Chern numbers."""

    motive: Optional[TateClass] = None
    euler: Optional[int] = None
    chern: Optional[tuple[int, int]] = None  # (c1*c2, c3)
    calabi_yau: bool = False
    name: str = ""

    def __post_init__(self):
        if self.motive is not None:
            chi = euler_char(self.motive)
            if self.euler is None:
                object.__setattr__(self, "euler", chi)
            elif self.euler != chi:
                raise ValueError(f"euler={self.euler} but chi([Y])={chi}")
        if self.chern is not None:
            c1c2, c3 = self.chern
            if self.euler is not None and c3 != self.euler:
                raise ValueError("c3 must equal the Euler characteristic")
            if self.calabi_yau and c1c2 != 0:
                raise ValueError("a Calabi-Yau 3-fold has c1 = 0")

    def dt_exponent(self) -> int:
        if self.chern is not None:
            return chern_exponent(*self.chern)
        if self.euler is None:
            raise ValueError("need chern numbers or the Euler characteristic")
        if not self.calabi_yau:
            raise ValueError("non Calabi-Yau input needs chern numbers")
        return self.euler

    @property
    def conjectural(self) -> bool:
        return not self.calabi_yau


def z_threefold(Y: ThreefoldInput, r: int, N: int = DEFAULT_ORDER, mode: str = "power") -> MotiveSeries:
    """Z_r(Y, (-1)^r t), either as P_r((-1)^r t)^[Y] or through the closed Exp form."""
    _check_rank(r)
    if Y.motive is None:
        raise ValueError("closed-form requires [Y]")
    if not Y.motive.is_lefschetz_integral():
        raise ValueError("[Y] must be an integral polynomial in L")
    if mode == "power":
        return power(p_punctual(r, N), Y.motive)
    if mode == "closed_form":
        y_vir = lefschetz(-3) * Y.motive
        return exp_series(_punctual_argument(r, N, y_vir * virtual_projective(r - 1)))
    raise ValueError(f"unknown mode {mode!r}")


# -- vanishing cycle weights ------------------------------------------------

def _halve(p: WeightPolynomial) -> HodgeWeight:
    if any(k % 2 for k, _ in p.items()):
        raise IdentityViolation("odd weight in an L-integral series")
    return HodgeWeight({k // 2: v for k, v in p.items()})


def _vc_product(r: int, N: int) -> list[HodgeWeight]:
    one = HodgeWeight.constant(1)
    buf = [one] + [HodgeWeight()] * N
    for m in range(1, N + 1):
        for k in range(r * m):
            x = HodgeWeight.monomial(k + 2 - r * m)
            for d in range(N, m - 1, -1):
                acc = buf[d]
                xp = one
                for j in range(1, d // m + 1):
                    xp = xp * x
                    acc = acc + buf[d - m * j] * xp
                buf[d] = acc
    return buf


def vc_weight_series(r: int, N: int = 8) -> list[HodgeWeight]:
    """Normalized Hodge series coefficients in w = xyz^2.

    The right-hand product prod (1 - w^(k+2-rm) t^m)^(-1) is compared with
    Z_r(A^3, L^(-r/2) t) specialized at L -> w; a mismatch raises
    :class:`IdentityViolation`.
    """
    _check_rank(r)
    rhs = _vc_product(r, N)
    lhs = [_halve(weight_specialize(c)) for c in substitute(z_affine(r, N), lefschetz(-r))]
    for n, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            raise IdentityViolation(f"identity violation at t^{n}: {a} != {b}")
    return rhs


def vc_hodge_polynomials(r: int, N: int = 8) -> list[HodgeWeight]:
    """h(H_c(Quot, Phi)) as polynomials in w, undoing the w^(-n^2-rn) normalization."""
    return [c.shift(n * n + r * n) for n, c in enumerate(vc_weight_series(r, N))]


NAMED_THREEFOLDS = {
    "point": ONE,
    "A3": TateClass.monomial(6),
    "P3": projective_class(3),
    "P1xP1xP1": projective_class(1) ** 3,
}
