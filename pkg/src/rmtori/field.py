"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Elements are stored as ``x + y*sqrt(d)`` with ``x, y`` reduced fractions.
Every sign or order decision is made with integer comparisons; nothing in
this module touches floating point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple, Union

Rational = Union[int, Fraction]

DEFAULT_MAX_STEPS = 10**6


class FieldError(ValueError):
    pass


class MixedFieldError(FieldError):
    pass


def max_steps_default() -> int:
    raw = os.environ.get("RMTORI_MAX_STEPS")
    if not raw:
        return DEFAULT_MAX_STEPS
    try:
        value = int(raw)
    except ValueError:
        raise FieldError(f"RMTORI_MAX_STEPS must be an integer, got {raw!r}") from None
    if value <= 0:
        raise FieldError("RMTORI_MAX_STEPS must be positive")
    return value


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1 if p == 2 else 2
    return True


@dataclass(frozen=True)
class FieldContext:
    """The field F = Q(sqrt(d)) together with its ring of integers.

    ``omega`` is the standard generator of O_F, so that ``{1, omega}`` is an
    integral basis: ``(1+sqrt(d))/2`` when ``d = 1 (mod 4)`` and ``sqrt(d)``
    otherwise.
    """

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or isinstance(self.d, bool):
            raise FieldError(f"radicand must be an integer, got {self.d!r}")
        if self.d <= 1:
            raise FieldError(f"radicand must be > 1, got {self.d}")
        if not is_squarefree(self.d):
            raise FieldError(f"radicand must be squarefree, got {self.d}")

    @property
    def D(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def omega_is_half(self) -> bool:
        return self.d % 4 == 1

    @property
    def omega(self) -> QuadElem:
        if self.omega_is_half:
            return QuadElem(self, Fraction(1, 2), Fraction(1, 2))
        return QuadElem(self, Fraction(0), Fraction(1))

    @property
    def sqrt_d(self) -> QuadElem:
        return QuadElem(self, 0, 1)

    def __call__(self, x: Rational = 0, y: Rational = 0) -> QuadElem:
        return QuadElem(self, x, y)

    def coerce(self, value) -> QuadElem:
        if isinstance(value, QuadElem):
            if value.ctx != self:
                raise MixedFieldError(f"element of Q(sqrt({value.ctx.d})) used in Q(sqrt({self.d}))")
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return QuadElem(self, value, 0)
        raise TypeError(f"cannot coerce {value!r} into Q(sqrt({self.d}))")

    def coords(self, a: QuadElem) -> tuple[Fraction, Fraction]:
        """Coordinates ``(u, v)`` with ``a = u + v*omega``."""
        if self.omega_is_half:
            return a.x - a.y, 2 * a.y
        return a.x, a.y

    def from_coords(self, u: Rational, v: Rational) -> QuadElem:
        if self.omega_is_half:
            v = Fraction(v)
            return QuadElem(self, u + v / 2, v / 2)
        return QuadElem(self, u, v)

    def omega_minpoly(self) -> tuple[int, int]:
        """``(t, n)`` with omega a root of ``X^2 - t*X + n``."""
        if self.omega_is_half:
            return 1, (1 - self.d) // 4
        return 0, -self.d


class QuadElem:
    """Immutable element ``x + y*sqrt(d)`` of a FieldContext."""

    __slots__ = ("ctx", "x", "y")

    def __init__(self, ctx: FieldContext, x: Rational = 0, y: Rational = 0):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    def __reduce__(self):
        return (QuadElem, (self.ctx, self.x, self.y))

    def _other(self, other) -> QuadElem | None:
        if isinstance(other, QuadElem):
            if other.ctx != self.ctx:
                raise MixedFieldError(
                    f"cannot combine elements of Q(sqrt({self.ctx.d})) and Q(sqrt({other.ctx.d}))"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadElem(self.ctx, other, 0)
        return None

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.ctx == other.ctx and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.ctx.d, self.x, self.y))

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.ctx, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.ctx, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = self.ctx.d
        return QuadElem(self.ctx, self.x * o.x + d * self.y * o.y, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadElem(self.ctx, -self.x, -self.y)

    def __pos__(self):
        return self

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadElem(self.ctx, self.x / n, -self.y / n)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadElem(self.ctx, 1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> QuadElem:
        return QuadElem(self.ctx, self.x, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.ctx.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def is_integral(self) -> bool:
        return self.trace().denominator == 1 and self.norm().denominator == 1

    def sign(self) -> int:
        """Sign under the embedding with sqrt(d) > 0."""
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0 or sx == sy:
            return sx if sx else sy
        if sx == 0:
            return sy
        # opposite signs: the larger of x^2 and d*y^2 wins (never equal, d squarefree)
        return sx if self.x * self.x > self.ctx.d * self.y * self.y else sy

    def is_totally_positive(self) -> bool:
        return self.sign() > 0 and self.conj().sign() > 0

    def __lt__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __floor__(self):
        # write as (u + v*sqrt(d))/w with w > 0
        w = _lcm(self.x.denominator, self.y.denominator)
        u = int(self.x * w)
        v = int(self.y * w)
        if v == 0:
            return u // w
        s = isqrt(v * v * self.ctx.d)
        root_floor = s if v > 0 else -s - 1
        return (u + root_floor) // w

    def __repr__(self):
        return f"QuadElem(d={self.ctx.d}, x={self.x}, y={self.y})"

    def __str__(self):
        return format_elem(self)


def format_elem(a: QuadElem) -> str:
    """Human/parser-friendly text, e.g. ``3 - 2*sqrt(5)`` or ``1/2*sqrt(10)``."""
    if a.y == 0:
        return str(a.x)
    root = f"sqrt({a.ctx.d})"
    ay = abs(a.y)
    rad = root if ay == 1 else f"{ay}*{root}"
    if a.x == 0:
        return rad if a.y > 0 else f"-{rad}"
    return f"{a.x} {'+' if a.y > 0 else '-'} {rad}"


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a // gcd(a, b) * b


# -- the operation-level API ---------------------------------------------------

def arith(a: QuadElem, b: QuadElem | None, op: str) -> QuadElem:
    if op == "conj":
        return a.conj()
    if op == "neg":
        return -a
    if b is None:
        raise FieldError(f"operation {op!r} needs two operands")
    if a.ctx != b.ctx:
        raise MixedFieldError("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown operation {op!r}")


def norm_trace(a: QuadElem) -> tuple[Fraction, Fraction]:
    return a.norm(), a.trace()


def sign_and_positivity(a: QuadElem) -> tuple[int, bool]:
    return a.sign(), a.is_totally_positive()


# -- continued fractions of quadratic irrationals --------------------------------

class CFExpansion(NamedTuple):
    preperiod: tuple[int, ...]
    period: tuple[int, ...]


class SurdState(NamedTuple):
    """``(P + r*sqrt(d)) / Q`` with ``Q | r^2*d - P^2``."""

    P: int
    Q: int


def _surd_form(a: QuadElem) -> tuple[int, int, int]:
    if a.y == 0:
        raise FieldError("continued fraction of a rational number is not periodic")
    w = _lcm(a.x.denominator, a.y.denominator)
    P = int(a.x * w)
    r = int(a.y * w)
    Q = w
    if r < 0:
        P, r, Q = -P, -r, -Q
    N = r * r * a.ctx.d
    if (N - P * P) % Q:
        P, r, Q = P * abs(Q), r * abs(Q), Q * abs(Q)
    return P, Q, r


def _surd_floor(P: int, Q: int, s: int) -> int:
    # floor((P + sqrt(N)) / Q) where s = isqrt(N) and sqrt(N) is irrational
    if Q > 0:
        return (P + s) // Q
    return (-P - s - 1) // (-Q)


def complete_quotients(a: QuadElem, max_steps: int | None = None):
    """Run the surd iteration on ``a`` until a state recurs.

    Returns ``(partials, quotients, start)``: ``quotients[k]`` is the k-th
    complete quotient as a QuadElem, ``partials[k]`` its floor, and the
    period is ``quotients[start:]`` (the next quotient equals
    ``quotients[start]``).
    """
    if max_steps is None:
        max_steps = max_steps_default()
    P, Q, r = _surd_form(a)
    N = r * r * a.ctx.d
    s = isqrt(N)
    seen: dict[tuple[int, int], int] = {}
    partials: list[int] = []
    quotients: list[QuadElem] = []
    ctx = a.ctx
    while (P, Q) not in seen:
        if len(partials) >= max_steps:
            raise FieldError(f"continued fraction did not become periodic within {max_steps} steps")
        seen[(P, Q)] = len(partials)
        q = _surd_floor(P, Q, s)
        partials.append(q)
        quotients.append(QuadElem(ctx, Fraction(P, Q), Fraction(r, Q)))
        P = q * Q - P
        Q = (N - P * P) // Q
    return partials, quotients, seen[(P, Q)]


def cf_expand(a: QuadElem, max_steps: int | None = None) -> CFExpansion:
    partials, _, start = complete_quotients(a, max_steps)
    return CFExpansion(tuple(partials[:start]), tuple(partials[start:]))


def _mobius_apply(terms, tail: QuadElem) -> QuadElem:
    value = tail
    for t in reversed(terms):
        value = t + 1 / value
    return value


def cf_value(ctx: FieldContext, expansion: CFExpansion) -> QuadElem:
    """Rebuild the quadratic irrational whose expansion is ``expansion``.

    The purely periodic tail xi solves ``xi = [period; xi]``, i.e.
    ``q*xi^2 + (q' - p)*xi - p' = 0`` for the last two convergents of the
    period; its root greater than 1 is taken.
    """
    if not expansion.period:
        raise FieldError("empty period")
    p, p_prev, q, q_prev = 1, 0, 0, 1
    for t in expansion.period:
        p, p_prev = t * p + p_prev, p
        q, q_prev = t * q + q_prev, q
    A, B, C = q, q_prev - p, -p_prev
    disc = B * B - 4 * A * C
    # disc = k^2 * d for the field to contain the root
    if disc % ctx.d:
        raise FieldError("expansion does not describe an element of this field")
    k2 = disc // ctx.d
    k = isqrt(k2)
    if k * k != k2:
        raise FieldError("expansion does not describe an element of this field")
    tail = QuadElem(ctx, Fraction(-B, 2 * A), Fraction(k, 2 * A))
    return _mobius_apply(expansion.preperiod, tail)
