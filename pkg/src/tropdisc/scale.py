"""Ordered symbolic field used for every genericity comparison.

Two infinitesimal/infinite layers are modelled:

* ``eps`` is a positive infinitesimal direction parameter, so a polynomial in
  ``eps`` is signed by its lowest-degree nonzero coefficient;
* ``M_1 << M_2 << ... << M_N`` are positive scales, each dominating every
  ``eps``-polynomial multiple of the previous one, with a ``TOP`` scale above
  all of them.

A :class:`ScaleValue` is an ``M``-linear combination with :class:`EpsPoly`
coefficients.  Scale index ``0`` holds constants.  Products of two scale values
are rejected: every height in the construction is affine in the scales.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

TOP = 1 << 40
"""Scale index dominating every finite scale index."""


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


class EpsPoly:
    """Polynomial in ``eps`` with rational coefficients, ``eps -> 0+``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c) -> "EpsPoly":
        return cls((c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def sign(self) -> int:
        for c in self.coeffs:
            if c:
                return 1 if c > 0 else -1
        return 0

    def __add__(self, other: "EpsPoly") -> "EpsPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return EpsPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __neg__(self) -> "EpsPoly":
        return EpsPoly(-c for c in self.coeffs)

    def __sub__(self, other: "EpsPoly") -> "EpsPoly":
        return self + (-other)

    def __mul__(self, other) -> "EpsPoly":
        if isinstance(other, EpsPoly):
            out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return EpsPoly(out)
        k = _q(other)
        return EpsPoly(c * k for c in self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, EpsPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == EpsPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __lt__(self, other: "EpsPoly") -> bool:
        return (self - other).sign() < 0

    def __gt__(self, other: "EpsPoly") -> bool:
        return (self - other).sign() > 0

    def evaluate(self, eps: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * eps + c
        return out

    def __repr__(self) -> str:
        return f"EpsPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for p, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if p == 0 else ("e" if p == 1 else f"e^{p}")
            if mono and abs(c) == 1:
                parts.append(("-" if c < 0 else "+") + mono)
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}{mono}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def eps_inner(w: Sequence[int]) -> EpsPoly:
    """``<w, v>`` for ``v = (1, eps, eps^2)``."""
    if len(w) != 3:
        raise ValueError("eps_inner expects a 3-vector")
    return EpsPoly(w)


class ScaleValue:
    """``sum_s P_s(eps) * M_s`` with ``M_0 = 1`` and ``M_TOP`` above all."""

    __slots__ = ("_c", "_hash")

    def __init__(self, terms: Mapping[int, EpsPoly | int | Fraction] | None = None):
        c: dict[tuple[int, int], Fraction] = {}
        for s, poly in (terms or {}).items():
            if not isinstance(poly, EpsPoly):
                poly = EpsPoly.const(poly)
            for p, x in enumerate(poly.coeffs):
                if x:
                    c[(s, p)] = x
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "ScaleValue":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, x) -> "ScaleValue":
        x = _q(x)
        return cls._raw({(0, 0): x} if x else {})

    @classmethod
    def M(cls, s: int, poly: EpsPoly | int | Fraction = 1) -> "ScaleValue":
        """The value ``poly * M_s``."""
        return cls({s: poly})

    @classmethod
    def top(cls, poly: EpsPoly | int | Fraction = 1) -> "ScaleValue":
        return cls({TOP: poly})

    @property
    def terms(self) -> dict[int, EpsPoly]:
        by_scale: dict[int, dict[int, Fraction]] = {}
        for (s, p), x in self._c.items():
            by_scale.setdefault(s, {})[p] = x
        out = {}
        for s, d in by_scale.items():
            out[s] = EpsPoly(d.get(p, 0) for p in range(max(d) + 1))
        return out

    def scales(self) -> set[int]:
        return {s for s, _ in self._c}

    def has_top(self) -> bool:
        return any(s == TOP for s, _ in self._c)

    def is_zero(self) -> bool:
        return not self._c

    def sign(self) -> int:
        if not self._c:
            return 0
        key = min(self._c, key=lambda k: (-k[0], k[1]))
        return 1 if self._c[key] > 0 else -1

    def leading(self) -> tuple[int, int, Fraction] | None:
        if not self._c:
            return None
        s, p = min(self._c, key=lambda k: (-k[0], k[1]))
        return s, p, self._c[(s, p)]

    def __add__(self, other) -> "ScaleValue":
        if not isinstance(other, ScaleValue):
            if other == 0:
                return self
            other = ScaleValue.const(other)
        c = dict(self._c)
        for k, x in other._c.items():
            y = c.get(k, 0) + x
            if y:
                c[k] = y
            else:
                c.pop(k, None)
        return ScaleValue._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "ScaleValue":
        return ScaleValue._raw({k: -x for k, x in self._c.items()})

    def __sub__(self, other) -> "ScaleValue":
        if not isinstance(other, ScaleValue):
            other = ScaleValue.const(other)
        c = dict(self._c)
        for k, x in other._c.items():
            y = c.get(k, 0) - x
            if y:
                c[k] = y
            else:
                c.pop(k, None)
        return ScaleValue._raw(c)

    def __rsub__(self, other) -> "ScaleValue":
        return (-self) + other

    def __mul__(self, other) -> "ScaleValue":
        if isinstance(other, ScaleValue):
            raise TypeError("product of two scale values leaves the M-linear model")
        if isinstance(other, EpsPoly):
            c: dict[tuple[int, int], Fraction] = {}
            for (s, p), x in self._c.items():
                for q, y in enumerate(other.coeffs):
                    if y:
                        k = (s, p + q)
                        c[k] = c.get(k, 0) + x * y
            return ScaleValue._raw({k: x for k, x in c.items() if x})
        k = _q(other)
        if not k:
            return ScaleValue._raw({})
        return ScaleValue._raw({key: x * k for key, x in self._c.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaleValue":
        k = _q(other)
        if not k:
            raise ZeroDivisionError("division of a scale value by zero")
        return ScaleValue._raw({key: x / k for key, x in self._c.items()})

    def _cmp(self, other) -> int:
        if not isinstance(other, ScaleValue):
            other = ScaleValue.const(other)
        return (self - other).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, ScaleValue):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ScaleValue.const(other)._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def instantiate(self, E: int, B: int, top_exponent: int | None = None) -> Fraction:
        """Numeric value at ``eps = 1/E``, ``M_s = B**s`` (TOP at ``B**top_exponent``)."""
        if top_exponent is None:
            finite = [s for s, _ in self._c if s != TOP]
            top_exponent = (max(finite) if finite else 0) + 1
        eps = Fraction(1, E)
        out = Fraction(0)
        for (s, p), x in self._c.items():
            e = top_exponent if s == TOP else s
            out += x * eps**p * Fraction(B) ** e
        return out

    def __repr__(self) -> str:
        return f"ScaleValue({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for s in sorted(self.terms, reverse=True):
            name = "1" if s == 0 else ("TOP" if s == TOP else f"M_{s}")
            parts.append(f"({self.terms[s]})·{name}")
        return " + ".join(parts)


def compare(a: ScaleValue, b: ScaleValue) -> int:
    """Three-way comparison: -1, 0 or +1."""
    return a._cmp(b)


def sign(a: ScaleValue) -> int:
    return a.sign()


ZERO = ScaleValue()
