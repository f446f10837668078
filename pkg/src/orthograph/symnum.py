"""Exact arithmetic in Q(n): integer polynomials and reduced rational functions.

Every coefficient in this package is a rational function of the ambient
dimension n with integer coefficients.  Two canonical forms make structural
equality meaningful:

  IntPolyN  -- dense tuple of arbitrary-precision ints, no trailing zeros,
               index = power of n.  The zero polynomial is the empty tuple.
  RatFuncN  -- num/den pair of IntPolyN with gcd(num, den) = 1 (including
               integer content) and positive leading denominator coefficient.

Equal values therefore always compare equal with `==`, and both types hash.

The module also provides the one-step and two-step factorial powers used
throughout the matching-collection formulas:

  fall2(x, k) = x (x-2) (x-4) ... (x-2k+2)        rise2(x, k) = x (x+2) ...
  fall1(x, k) = x (x-1) (x-2) ... (x-k+1)         rise1(x, k) = x (x+1) ...

with a negative exponent meaning the reciprocal of the positive one, e.g.
rise2(x, -k) = 1 / rise2(x, k).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at a zero of its denominator."""


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    last = -1
    for i, c in enumerate(coeffs):
        if c:
            last = i
    return tuple(int(c) for c in coeffs[: last + 1])


class IntPolyN:
    """Polynomial in n with integer coefficients, dense and trailing-zero free."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _trim(list(coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolyN is immutable")

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 by the usual convention."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        """gcd of the coefficients (0 for the zero polynomial)."""
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPolyN":
        c = self.content()
        if c in (0, 1):
            return self
        return IntPolyN(x // c for x in self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "IntPolyN") -> "IntPolyN":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolyN(out)

    def __neg__(self) -> "IntPolyN":
        return IntPolyN(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolyN") -> "IntPolyN":
        return self + (-other)

    def __mul__(self, other: "IntPolyN") -> "IntPolyN":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _ZERO_POLY
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return IntPolyN(out)

    def scale(self, k: int) -> "IntPolyN":
        if k == 0:
            return _ZERO_POLY
        return IntPolyN(c * k for c in self.coeffs)

    def __pow__(self, k: int) -> "IntPolyN":
        if k < 0:
            raise ValueError("IntPolyN powers must be nonnegative")
        result = IntPolyN([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "IntPolyN":
        """Multiply by n^k."""
        if self.is_zero():
            return self
        return IntPolyN([0] * k + list(self.coeffs))

    def divexact(self, other: "IntPolyN") -> "IntPolyN":
        """Exact division; raises if the division leaves a remainder."""
        q, r = _divmod_over_q(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def eval_at(self, n0: Union[int, Fraction]) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n0 + c
        return acc

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolyN) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("IntPolyN", self.coeffs))

    def __repr__(self) -> str:
        return f"IntPolyN({list(self.coeffs)})"

    def __str__(self) -> str:
        return format_poly(self)


_ZERO_POLY = IntPolyN()
_ONE_POLY = IntPolyN([1])
N_POLY = IntPolyN([0, 1])


def _divmod_over_q(a: IntPolyN, b: IntPolyN) -> tuple[IntPolyN, IntPolyN]:
    """Polynomial long division over Q, valid only when the quotient and
    remainder happen to have integer coefficients (always true for the exact
    divisions this package performs: divisor primitive or division exact)."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in a.coeffs]
    div = b.coeffs
    lead = Fraction(div[-1])
    qlen = len(rem) - len(div) + 1
    if qlen <= 0:
        return _ZERO_POLY, a
    quot = [Fraction(0)] * qlen
    for i in range(qlen - 1, -1, -1):
        coef = rem[i + len(div) - 1] / lead
        quot[i] = coef
        if coef:
            for j, d in enumerate(div):
                rem[i + j] -= coef * d
    for f in quot + rem:
        if f.denominator != 1:
            raise ValueError("non-integer coefficients in polynomial division")
    return IntPolyN(int(f) for f in quot), IntPolyN(int(f) for f in rem)


def _pseudo_rem(a: IntPolyN, b: IntPolyN) -> IntPolyN:
    """Pseudo-remainder of primitive polynomials for the Euclidean gcd."""
    d = a.degree - b.degree
    scaled = a.scale(b.leading() ** (d + 1))
    _, r = _divmod_over_q(scaled, b)
    return r


def poly_gcd(a: IntPolyN, b: IntPolyN) -> IntPolyN:
    """gcd in Z[n] via the primitive Euclidean algorithm.

    Normalized so the content is gcd(content(a), content(b)) and the leading
    coefficient is positive.
    """
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        cont = math.gcd(a.content(), b.content())
        pa, pb = a.primitive(), b.primitive()
        while not pb.is_zero():
            if pa.degree < pb.degree:
                pa, pb = pb, pa
                continue
            r = _pseudo_rem(pa, pb).primitive()
            pa, pb = pb, r
        g = pa.primitive().scale(cont)
    if g.leading() < 0:
        g = -g
    return g


def _as_poly(x: Union[int, IntPolyN]) -> IntPolyN:
    if isinstance(x, IntPolyN):
        return x
    if isinstance(x, int):
        return IntPolyN([x])
    raise TypeError(f"cannot coerce {type(x).__name__} to IntPolyN")


class RatFuncN:
    """Reduced rational function num/den in n.

    Canonical form: gcd(num, den) = 1 over Z[n] including integer content,
    den is nonzero with positive leading coefficient, and 0 is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, _reduced: bool = False):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in RatFuncN")
        if not _reduced:
            if num.is_zero():
                den = _ONE_POLY
            else:
                g = poly_gcd(num, den)
                if g != _ONE_POLY:
                    num = num.divexact(g)
                    den = den.divexact(g)
                if den.leading() < 0:
                    num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFuncN is immutable")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RatFuncN":
        return cls(IntPolyN([q.numerator]), IntPolyN([q.denominator]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant rational function")
        return Fraction(self.num.leading() if self.num.coeffs else 0, self.den.leading())

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "RatFuncN":
        if isinstance(x, RatFuncN):
            return x
        if isinstance(x, (int, IntPolyN)):
            return RatFuncN(x)
        if isinstance(x, Fraction):
            return RatFuncN.from_fraction(x)
        return NotImplemented

    def __add__(self, other) -> "RatFuncN":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFuncN(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFuncN":
        return RatFuncN(-self.num, self.den, _reduced=True)

    def __sub__(self, other) -> "RatFuncN":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFuncN":
        return (-self) + other

    def __mul__(self, other) -> "RatFuncN":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFuncN(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFuncN":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero RatFuncN")
        return RatFuncN(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFuncN":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "RatFuncN":
        if k >= 0:
            return RatFuncN(self.num**k, self.den**k, _reduced=True)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RatFuncN(self.den ** (-k), self.num ** (-k))

    def eval_at(self, n0: Union[int, Fraction]) -> Fraction:
        dv = self.den.eval_at(n0)
        if dv == 0:
            mult = 0
            den = self.den
            root = IntPolyN([-Fraction(n0).numerator, Fraction(n0).denominator])
            while not den.is_zero() and den.eval_at(n0) == 0:
                den = den.divexact(root)
                mult += 1
            raise PoleError(
                f"denominator vanishes at n = {n0}: factor (n - {n0})^{mult} "
                f"divides {format_poly(self.den)}"
            )
        return self.num.eval_at(n0) / dv

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFuncN", self.num.coeffs, self.den.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"RatFuncN({list(self.num.coeffs)}, {list(self.den.coeffs)})"

    def __str__(self) -> str:
        return format_ratfunc(self)

    def to_json(self) -> dict:
        return {"num": list(self.num.coeffs), "den": list(self.den.coeffs)}

    @classmethod
    def from_json(cls, obj: dict) -> "RatFuncN":
        return cls(IntPolyN(obj["num"]), IntPolyN(obj["den"]))


ZERO = RatFuncN(0)
ONE = RatFuncN(1)
N = RatFuncN(N_POLY)


def _step_product(x, k: int, step: int) -> RatFuncN:
    """Product x (x+step) (x+2*step) ... with k factors, reciprocal for k < 0."""
    if isinstance(x, RatFuncN):
        base = x
    else:
        base = RatFuncN(_as_poly(x))
    if k < 0:
        pos = _step_product(x, -k, step)
        if pos.is_zero():
            raise ZeroDivisionError("reciprocal factorial power of a vanishing product")
        return ONE / pos
    out = ONE
    for i in range(k):
        out = out * (base + i * step)
    return out


def fall2(x, k: int) -> RatFuncN:
    """Two-step falling factorial x(x-2)...(x-2k+2); fall2(x,-k) = 1/fall2(x,k)."""
    return _step_product(x, k, -2)


def rise2(x, k: int) -> RatFuncN:
    """Two-step rising factorial x(x+2)...(x+2k-2); rise2(x,-k) = 1/rise2(x,k)."""
    return _step_product(x, k, 2)


def fall1(x, k: int) -> RatFuncN:
    """Falling factorial x(x-1)...(x-k+1); fall1(x,-k) = 1/fall1(x,k)."""
    return _step_product(x, k, -1)


def rise1(x, k: int) -> RatFuncN:
    """Rising factorial x(x+1)...(x+k-1); rise1(x,-k) = 1/rise1(x,k)."""
    return _step_product(x, k, 1)


def double_factorial(k: int) -> int:
    """k!! with the usual conventions (-1)!! = 0!! = 1."""
    if k < -1:
        raise ValueError("double factorial of integer below -1")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


# -- rendering --------------------------------------------------------------


def _monomial_str(coeff: int, power: int) -> str:
    if power == 0:
        return str(abs(coeff))
    body = "n" if power == 1 else f"n^{power}"
    a = abs(coeff)
    return body if a == 1 else f"{a}*{body}"


def format_poly(p: IntPolyN) -> str:
    """Expanded form, highest power first: '3*n^2 - 6*n'."""
    if p.is_zero():
        return "0"
    parts = []
    for power in range(p.degree, -1, -1):
        c = p.coeffs[power]
        if not c:
            continue
        term = _monomial_str(c, power)
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


def _integer_root_factorization(p: IntPolyN):
    """Split p as const * n^k * prod (n - r)^m * residual with integer roots r.

    Returns (constant, [(root, mult), ...], residual IntPolyN).  The residual
    is primitive with no integer roots; a residual of 1 means fully factored.
    """
    if p.is_zero():
        return 0, [], _ONE_POLY
    const = p.content()
    if p.leading() < 0:
        const = -const
    work = p.divexact(IntPolyN([const]))
    factors = []
    k = 0
    while work.coeffs and work.coeffs[0] == 0:
        work = IntPolyN(work.coeffs[1:])
        k += 1
    if k:
        factors.append((0, k))
    changed = True
    while changed and work.degree >= 1:
        changed = False
        c0 = abs(work.coeffs[0])
        cands = sorted({d for d in range(1, c0 + 1) if c0 % d == 0})
        for a in cands:
            for r in (a, -a):
                if work.eval_at(r) == 0:
                    mult = 0
                    root = IntPolyN([-r, 1])
                    while work.degree >= 1 and work.eval_at(r) == 0:
                        work = work.divexact(root)
                        mult += 1
                    factors.append((r, mult))
                    changed = True
                    break
            if changed:
                break
    if work.degree == 0:
        const *= work.leading()
        work = _ONE_POLY
    return const, sorted(factors), work


def _factored_str(const: int, factors, residual: IntPolyN, latex: bool) -> str:
    parts = []
    for r, m in sorted(factors, key=lambda f: (abs(f[0]), f[0] < 0)):
        if r == 0:
            base = "n"
        elif r > 0:
            base = f"(n-{r})"
        else:
            base = f"(n+{-r})"
        if m == 1:
            parts.append(base)
        else:
            parts.append(f"{base}^{{{m}}}" if latex else f"{base}^{m}")
    if not residual == _ONE_POLY:
        parts.append(f"({format_poly(residual)})")
    joiner = "" if latex else "*"
    body = joiner.join(parts)
    if const == 1 and body:
        return body
    if const == -1 and body:
        return "-" + body
    if not body:
        return str(const)
    return f"{const}{joiner}{body}" if not latex else f"{const}{body}"


def _is_atom(s: str) -> bool:
    """True when s reads as a single factor without outer parentheses."""
    if " " in s or "*" in s:
        return False
    if s.startswith("(") and s.endswith(")"):
        return True
    if s.startswith("(") and ")^" in s:
        return s.index(")") == s.rindex(")")
    return "(" not in s


def format_ratfunc(r: RatFuncN, latex: bool = False) -> str:
    """Render factored over {n - c} when the integer-root factorization is
    complete, otherwise expanded: '-8*(n-1)*(n-2)*(n-4)/(n^8*(n+2)^4)'."""
    if r.is_zero():
        return "0"
    nc, nf, nres = _integer_root_factorization(r.num)
    dc, df, dres = _integer_root_factorization(r.den)
    num_factored = nres == _ONE_POLY and nf
    if r.den == _ONE_POLY:
        if num_factored and len(nf) + (1 if abs(nc) != 1 else 0) > 1:
            return _factored_str(nc, nf, nres, latex)
        return format_poly(r.num)
    den_factored = dres == _ONE_POLY
    num_s = (
        _factored_str(nc, nf, nres, latex)
        if num_factored
        else format_poly(r.num)
    )
    den_s = (
        _factored_str(dc, df, dres, latex)
        if den_factored
        else format_poly(r.den)
    )
    if latex:
        return f"\\frac{{{num_s}}}{{{den_s}}}"
    if " " in num_s:
        num_s = f"({num_s})"
    if not _is_atom(den_s):
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"
