"""Exact Gaussian-rational arithmetic: numbers a + b*i with rational a, b.

Rationals are `fractions.Fraction`, so they are arbitrary precision and are
always kept in lowest terms with a positive denominator.  Every operation is
exact; division by zero raises, it never produces a value.

Values are immutable and hashable, safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Gaussian:
    """A Gaussian rational re + im*i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    # -- helpers --------------------------------------------------------

    @staticmethod
    def coerce(x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        return Gaussian(_as_fraction(x))

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    # -- field operations ------------------------------------------------

    def __add__(self, other):
        other = Gaussian.coerce(other)
        return Gaussian(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        other = Gaussian.coerce(other)
        return Gaussian(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Gaussian.coerce(other) - self

    def __mul__(self, other):
        other = Gaussian.coerce(other)
        if not self.im and not other.im:
            return Gaussian(self.re * other.re)
        return Gaussian(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Gaussian":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return Gaussian(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        return self * Gaussian.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Gaussian.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Gaussian(other)
        if not isinstance(other, Gaussian):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    # -- rendering --------------------------------------------------------

    def __str__(self):
        if not self.im:
            return str(self.re)
        im_abs = abs(self.im)
        im_txt = "i" if im_abs == 1 else f"{im_abs}*i"
        sign = "-" if self.im < 0 else "+"
        if not self.re:
            return im_txt if self.im > 0 else f"-{im_txt}"
        return f"{self.re}{sign}{im_txt}"

    def __repr__(self):
        return f"Gaussian({self.re!r}, {self.im!r})"


ZERO = Gaussian(0)
ONE = Gaussian(1)
I = Gaussian(0, 1)


def Q(re, im=0) -> Gaussian:
    """Shorthand constructor; accepts ints, Fractions and 'p/q' strings."""
    return Gaussian(re, im)
