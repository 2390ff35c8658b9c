"""Ordered field elements carrying a positive infinitesimal.

A ``PerturbedScalar`` is a polynomial c_0 + c_1 e + c_2 e^2 + ... with
rational coefficients, where e is a positive infinitesimal.  Ordering is
lexicographic by increasing degree, so ``e^2`` plays the role of a second,
smaller infinitesimal.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import DegreeOverflow

DEFAULT_MAX_DEGREE = 2


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class PerturbedScalar:
    __slots__ = ("coeffs", "max_degree")

    def __init__(self, coeffs=(), max_degree: int = DEFAULT_MAX_DEGREE):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        c = _trim(Fraction(x) for x in coeffs)
        if len(c) - 1 > max_degree:
            raise DegreeOverflow(f"degree {len(c) - 1} exceeds bound {max_degree}")
        self.coeffs = c
        self.max_degree = max_degree

    @classmethod
    def eps(cls, power: int = 1, max_degree: int = DEFAULT_MAX_DEGREE) -> "PerturbedScalar":
        return cls((0,) * power + (1,), max_degree)

    @staticmethod
    def lift(x) -> "PerturbedScalar":
        if isinstance(x, PerturbedScalar):
            return x
        if isinstance(x, (Rational, Fraction)):
            return PerturbedScalar((Fraction(x),))
        raise TypeError(f"cannot lift {type(x).__name__} to PerturbedScalar")

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def real_part(self) -> Fraction:
        return self.coefficient(0)

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def sign(self) -> int:
        for c in self.coeffs:
            if c:
                return 1 if c > 0 else -1
        return 0

    def value_at(self, e) -> Fraction:
        """Substitute a concrete rational value for the infinitesimal."""
        e = Fraction(e)
        return sum((c * e ** k for k, c in enumerate(self.coeffs)), Fraction(0))

    def _bound(self, other):
        return max(self.max_degree, getattr(other, "max_degree", 0))

    def __add__(self, other):
        try:
            o = self.lift(other)
        except TypeError:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return PerturbedScalar([self.coefficient(k) + o.coefficient(k) for k in range(n)],
                               self._bound(o))

    __radd__ = __add__

    def __neg__(self):
        return PerturbedScalar([-c for c in self.coeffs], self.max_degree)

    def __sub__(self, other):
        try:
            return self + (-self.lift(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self.lift(other)
        except TypeError:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return PerturbedScalar((), self._bound(o))
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return PerturbedScalar(out, self._bound(o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PerturbedScalar):
            if not other.is_rational():
                raise TypeError("division by an infinitesimal quantity is not supported")
            other = other.real_part
        other = Fraction(other)
        return PerturbedScalar([c / other for c in self.coeffs], self.max_degree)

    def _cmp(self, other):
        return (self - other).sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.real_part)
        return hash(self.coeffs)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"PerturbedScalar({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            term = {0: "", 1: "e"}.get(k, f"e^{k}")
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"+{term}")
            elif c == -1:
                parts.append(f"-{term}")
            else:
                parts.append(f"{'+' if c > 0 else ''}{c}*{term}")
        return "".join(parts).lstrip("+")


def as_scalar(x):
    """Collapse to Fraction when no infinitesimal part is present."""
    if isinstance(x, PerturbedScalar) and x.is_rational():
        return x.real_part
    return x
