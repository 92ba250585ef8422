"""Exact arithmetic in the Tate subring Z[L^(1/2), L^(-1/2)] of motivic weights.

Classes are stored as Laurent polynomials in the single variable

    u = -L^(1/2)

so that L = u^2, L^(1/2) = -u and L^(-1/2) = -u^(-1).  With this choice a
class is effective exactly when all of its u-coefficients are nonnegative,
and the sigma-operations act on monomials by u^k -> u^(nk).

Two realizations are provided: the Euler characteristic (u -> 1) and the
weight specialization L^(1/2) -> q (so u -> -q, L -> q^2).
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = [
    "TateClass",
    "WeightPolynomial",
    "ZERO",
    "ONE",
    "U",
    "LEF",
    "lefschetz",
    "projective_class",
    "euler_char",
    "weight_specialize",
    "is_effective",
]


class _Laurent:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("_c", "_hash")
    var = "x"

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or ())
        c: dict[int, int] = {}
        for k, v in items:
            k = int(k)
            c[k] = c.get(k, 0) + int(v)
        self._c = {k: v for k, v in sorted(c.items()) if v}
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]):
        # c must already be canonical (no zero values)
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, k: int, c: int = 1):
        return cls._raw({int(k): int(c)} if c else {})

    @classmethod
    def constant(cls, c: int):
        return cls.monomial(0, c)

    # -- introspection -------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, k: int) -> int:
        return self._c.get(k, 0)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def degree_range(self) -> tuple[int, int]:
        if not self._c:
            raise ValueError("zero has no degree")
        ks = list(self._c)
        return min(ks), max(ks)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, int):
            return type(self).constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return type(self)._raw(dict(sorted(c.items())))

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return type(self)._raw({})
            return type(self)._raw({k: v * other for k, v in self._c.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, int] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return type(self)._raw({k: v for k, v in sorted(c.items()) if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials with unit coefficient are invertible")
            ((k, c),) = self._c.items()
            if c not in (1, -1):
                raise ValueError("only monomials with unit coefficient are invertible")
            return type(self).monomial(k * n, c ** (-n))
        result = type(self).constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int):
        """Multiply by the monomial of exponent ``k``."""
        return type(self)._raw({e + k: v for e, v in self._c.items()})

    def evaluate(self, x: int) -> int:
        """Evaluate at an integer; ``x`` must be a unit when negative exponents occur."""
        total = 0
        for k, v in self._c.items():
            if k >= 0:
                total += v * x**k
            else:
                if x not in (1, -1):
                    raise ValueError("negative exponent at non-unit point")
                total += v * x ** (-k)
        return total

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        if type(other) is type(self):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, tuple(self._c.items())))
        return self._hash

    # -- printing ------------------------------------------------------

    def _power_str(self, k: int) -> str:
        if k == 1:
            return self.var
        if k >= 0:
            return f"{self.var}^{k}"
        return f"{self.var}^({k})"

    def __str__(self) -> str:
        return _join_terms((v, self._power_str(k) if k else "") for k, v in reversed(self._c.items()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"

    def to_json(self) -> dict:
        return {self.var: {str(k): str(v) for k, v in self._c.items()}}

    @classmethod
    def from_json(cls, data: Mapping) -> "_Laurent":
        try:
            body = data[cls.var]
        except KeyError:
            raise ValueError(f"expected key {cls.var!r}") from None
        return cls({int(k): int(v) for k, v in body.items()})


def _join_terms(terms: Iterable[tuple[int, str]]) -> str:
    out = []
    for c, mono in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}·{mono}"
        if not out:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out) if out else "0"


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)\s*(?:[*·]\s*)?)?
        (?:(?P<var>[A-Za-z]+)(?:\^(?:\((?P<pexp>-?\d+(?:/\d+)?)\)|(?P<exp>\d+(?:/\d+)?)))?)?
        \s*""",
    re.VERBOSE,
)


def _parse_terms(text: str) -> list[tuple[int, str | None, str]]:
    """Split ``text`` into (signed coefficient, variable or None, exponent string)."""
    text = text.strip()
    if not text:
        raise ValueError("empty expression")
    pos = 0
    terms = []
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        if terms and m.group("sign") is None:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = int(m.group("coef")) if m.group("coef") else 1
        exp = m.group("pexp") or m.group("exp") or ("1" if m.group("var") else "0")
        terms.append((sign * coef, m.group("var"), exp))
        pos = m.end()
    return terms


class TateClass(_Laurent):
    """A class in Z[u, u^-1] with u = -L^(1/2)."""

    __slots__ = ()
    var = "u"

    @classmethod
    def lefschetz_half(cls, h: int) -> "TateClass":
        """The class L^(h/2) = (-u)^h."""
        return cls.monomial(h, -1 if h % 2 else 1)

    def is_lefschetz_integral(self) -> bool:
        """True when only integral powers of L occur (even u-exponents)."""
        return all(k % 2 == 0 for k in self._c)

    def to_lefschetz_str(self) -> str:
        """Render in the L^(1/2)-basis, e.g. ``L^(3/2) - 2 + L^(-1)``."""
        terms = []
        for k, v in reversed(self._c.items()):
            c = -v if k % 2 else v
            terms.append((c, _lefschetz_power(k)))
        return _join_terms(terms)

    def to_latex(self) -> str:
        terms = []
        for k, v in reversed(self._c.items()):
            c = -v if k % 2 else v
            if k == 0:
                mono = ""
            elif k == 2:
                mono = r"\mathbb{L}"
            elif k % 2 == 0:
                mono = rf"\mathbb{{L}}^{{{k // 2}}}"
            else:
                mono = rf"\mathbb{{L}}^{{{k}/2}}"
            terms.append((c, mono))
        return _join_terms(terms).replace("·", r"\,")

    def render(self, var: str = "L") -> str:
        return self.to_lefschetz_str() if var == "L" else str(self)

    @classmethod
    def parse(cls, text: str) -> "TateClass":
        """Parse either basis: ``"u^3 + u^(-2)"`` or ``"L^(3/2) - 2 + L^(-1)"``."""
        total = cls()
        for c, var, exp in _parse_terms(text):
            if var is None:
                total = total + c
                continue
            if var == "u":
                if "/" in exp:
                    raise ValueError("u-exponents must be integers")
                total = total + cls.monomial(int(exp), c)
            elif var in ("L", "LL"):
                num, _, den = exp.partition("/")
                if den and den != "2":
                    raise ValueError(f"unsupported L exponent {exp!r}")
                h = int(num) if den else 2 * int(num)
                total = total + cls.lefschetz_half(h) * c
            else:
                raise ValueError(f"unknown variable {var!r}")
        return total


def _lefschetz_power(k: int) -> str:
    if k == 0:
        return ""
    if k == 2:
        return "L"
    if k % 2 == 0:
        e = k // 2
        return f"L^{e}" if e > 0 else f"L^({e})"
    return f"L^({k}/2)"


class WeightPolynomial(_Laurent):
    """Laurent polynomial in the weight variable q (or w = q^2 for Hodge series)."""

    __slots__ = ()
    var = "q"

    @classmethod
    def parse(cls, text: str) -> "WeightPolynomial":
        total = cls()
        for c, var, exp in _parse_terms(text):
            if var is None:
                total = total + c
            elif var == cls.var and "/" not in exp:
                total = total + cls.monomial(int(exp), c)
            else:
                raise ValueError(f"unexpected term in {text!r}")
        return total

    def to_latex(self) -> str:
        terms = []
        for k, v in reversed(self._c.items()):
            terms.append((v, "" if k == 0 else (self.var if k == 1 else f"{self.var}^{{{k}}}")))
        return _join_terms(terms).replace("·", r"\,")


class HodgeWeight(WeightPolynomial):
    """Weight polynomial in w = xyz^2 = q^2."""

    __slots__ = ()
    var = "w"


ZERO = TateClass()
ONE = TateClass.constant(1)
U = TateClass.monomial(1)
LEF = TateClass.monomial(2)


def lefschetz(h: int) -> TateClass:
    """L^(h/2)."""
    return TateClass.lefschetz_half(h)


def projective_class(m: int) -> TateClass:
    """[P^m] = 1 + L + ... + L^m."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return TateClass._raw({2 * j: 1 for j in range(m + 1)})


def euler_char(a: TateClass) -> int:
    # chi(u) = chi(-L^(1/2)) = 1
    return sum(a._c.values())


def weight_specialize(a: TateClass) -> WeightPolynomial:
    """Substitute L^(1/2) -> q, i.e. u -> -q."""
    return WeightPolynomial._raw({k: (-v if k % 2 else v) for k, v in a._c.items()})


def is_effective(a: TateClass) -> bool:
    return all(v >= 0 for v in a._c.values())
