"""Exact scalar arithmetic.

Coefficients live in the Gaussian rationals (QC).  Norm-type quantities
live in the real field generated over the rationals by square roots of
squarefree integers (RadicalSum), so values such as ``|1+i| + 1`` add,
multiply and compare exactly, with no floating point involved.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

_COEFF_RE = re.compile(
    r"^(?P<real>-?\d+(?:\.\d+)?)(?:(?P<sign>[+-])(?P<imag>\d+(?:\.\d+)?)i)?$"
)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def decimal_str(q: Fraction) -> str:
    """Render a rational with denominator 2^a 5^b as an exact decimal string."""
    num, den = q.numerator, q.denominator
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        raise ValueError(f"{q} is not a finite decimal")
    k = max(twos, fives)
    scaled = num * 10**k // den
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(k + 1, "0")
    if k == 0:
        return sign + digits
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


class QC:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @classmethod
    def parse(cls, text: str) -> "QC":
        """Parse the coefficient grammar ``[-]a[.b][±c[.d]i]``."""
        m = _COEFF_RE.match(text.strip())
        if m is None:
            raise ValueError(f"bad coefficient {text!r}")
        re_part = Fraction(m.group("real"))
        im_part = Fraction(0)
        if m.group("imag") is not None:
            im_part = Fraction(m.group("imag"))
            if m.group("sign") == "-":
                im_part = -im_part
        return cls(re_part, im_part)

    def __add__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return QC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return QC(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return QC(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return QC(-self.re, -self.im)

    def conjugate(self) -> "QC":
        return QC(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def magnitude(self) -> "RadicalSum":
        return RadicalSum.sqrt_of(self.abs2())

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        other = _promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self):
        # coefficient grammar, always with an explicit real part
        real = decimal_str(self.re)
        if self.im == 0:
            return real
        sign = "-" if self.im < 0 else "+"
        return f"{real}{sign}{decimal_str(abs(self.im))}i"

    def __repr__(self):
        return f"QC({self.re!r}, {self.im!r})"


def _promote(x):
    if isinstance(x, QC):
        return x
    if isinstance(x, (int, Fraction)):
        return QC(x)
    return NotImplemented


QC_ZERO = QC(0)
QC_ONE = QC(1)


def square_extract(n: int) -> tuple[int, int]:
    """Write n >= 0 as m*m*d with d squarefree; return (m, d)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    m, d = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            m *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return m, d * n


class RadicalSum:
    """Exact real of the form sum of c_i*sqrt(d_i) with c_i rational, d_i squarefree.

    Square roots of distinct squarefree integers are linearly independent
    over the rationals, so the canonical term list decides equality; order
    is decided by interval refinement, which terminates for unequal values.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        # terms: iterable of (radicand, coefficient); combined and sorted here
        acc: dict[int, Fraction] = {}
        for d, c in terms:
            c = _as_fraction(c)
            if c == 0:
                continue
            acc[d] = acc.get(d, Fraction(0)) + c
        self._terms = tuple(sorted((d, c) for d, c in acc.items() if c != 0))

    @classmethod
    def from_rational(cls, q) -> "RadicalSum":
        return cls([(1, _as_fraction(q))])

    @classmethod
    def sqrt_of(cls, q) -> "RadicalSum":
        """The nonnegative square root of a rational q >= 0."""
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("negative radicand")
        if q == 0:
            return cls()
        m, d = square_extract(q.numerator * q.denominator)
        return cls([(d, Fraction(m, q.denominator))])

    @property
    def terms(self):
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(d == 1 for d, _ in self._terms)

    def as_rational(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if self.is_rational():
            return self._terms[0][1]
        raise ValueError(f"{self} is irrational")

    def __add__(self, other):
        other = _promote_real(other)
        if other is NotImplemented:
            return NotImplemented
        return RadicalSum(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return RadicalSum([(d, -c) for d, c in self._terms])

    def __sub__(self, other):
        other = _promote_real(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _promote_real(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _promote_real(other)
        if other is NotImplemented:
            return NotImplemented
        out = []
        for d1, c1 in self._terms:
            for d2, c2 in other._terms:
                g = math.gcd(d1, d2)
                # sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)*(d2/g)), product squarefree
                out.append(((d1 // g) * (d2 // g), c1 * c2 * g))
        return RadicalSum(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise TypeError("only nonnegative integer powers")
        out = RadicalSum.from_rational(1)
        for _ in range(k):
            out = out * self
        return out

    def _bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        scale = 1 << bits
        for d, c in self._terms:
            s = math.isqrt(d * scale * scale)
            s_lo, s_hi = Fraction(s, scale), Fraction(s + 1, scale)
            if c >= 0:
                lo += c * s_lo
                hi += c * s_hi
            else:
                lo += c * s_hi
                hi += c * s_lo
        return lo, hi

    def sign(self) -> int:
        if not self._terms:
            return 0
        bits = 32
        while bits <= 1 << 16:
            lo, hi = self._bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise ArithmeticError("interval refinement failed to separate from zero")

    def _cmp(self, other) -> int:
        other = _promote_real(other)
        if other is NotImplemented:
            raise TypeError("cannot compare")
        return (self - other).sign()

    def __eq__(self, other):
        other = _promote_real(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self._terms))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for d, c in self._terms:
            base = str(c) if d == 1 else (f"{c}*sqrt({d})" if c != 1 else f"sqrt({d})")
            parts.append(base)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"RadicalSum({list(self._terms)!r})"


def _promote_real(x):
    if isinstance(x, RadicalSum):
        return x
    if isinstance(x, (int, Fraction)):
        return RadicalSum.from_rational(x)
    return NotImplemented


REAL_ZERO = RadicalSum()


def real_max(values) -> RadicalSum:
    """Exact maximum of an iterable of RadicalSums (0 if empty)."""
    best = None
    for v in values:
        if best is None or v > best:
            best = v
    return best if best is not None else REAL_ZERO
