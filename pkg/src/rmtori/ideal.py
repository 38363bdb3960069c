"""Fractional ideals of the maximal order O_F."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .field import FieldContext, QuadElem, format_elem
from .lattice import Lattice, Order, canonical_form, principal_generator, reduction_cycle


class IdealError(ValueError):
    pass


@dataclass(frozen=True)
class FractionalIdeal:
    """An O_F-submodule of F of rank two, stored by its lattice normal form."""

    hnf: Lattice

    def __post_init__(self):
        if not self.hnf.is_omega_stable():
            raise IdealError(f"{self.hnf} is not closed under multiplication by omega")

    @property
    def ctx(self) -> FieldContext:
        return self.hnf.ctx

    @property
    def q(self) -> int:
        return self.hnf.q

    @property
    def a(self) -> int:
        return self.hnf.a

    @property
    def b(self) -> int:
        return self.hnf.b

    @property
    def c(self) -> int:
        return self.hnf.c

    @classmethod
    def unit(cls, ctx: FieldContext) -> FractionalIdeal:
        return cls(Order(ctx, 1).lattice)

    def basis(self) -> tuple[QuadElem, QuadElem]:
        return self.hnf.basis()

    def __contains__(self, x) -> bool:
        return x in self.hnf

    def __mul__(self, other):
        if isinstance(other, FractionalIdeal):
            return multiply(self, other)
        if isinstance(other, (QuadElem, int, Fraction)):
            return FractionalIdeal(self.hnf.scale(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FractionalIdeal):
            return multiply(self, invert(other))
        if isinstance(other, (QuadElem, int, Fraction)):
            return FractionalIdeal(self.hnf.scale(1 / self.ctx.coerce(other)))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        result = FractionalIdeal.unit(self.ctx)
        for _ in range(n):
            result = result * self
        return result

    def conj(self) -> FractionalIdeal:
        return FractionalIdeal(self.hnf.conj())

    def norm(self) -> Fraction:
        return ideal_norm(self)

    def is_integral(self) -> bool:
        return self.q == 1

    def two_gens(self) -> tuple[QuadElem, QuadElem]:
        """Generators ``(a/q, (b + c*omega)/q)``; they generate it even over Z."""
        return self.basis()

    def __str__(self):
        e1, e2 = self.basis()
        return f"({format_elem(e1)}, {format_elem(e2)})"


def ideal_from_gens(ctx: FieldContext, gens: Sequence) -> FractionalIdeal:
    elems = [ctx.coerce(g) for g in gens]
    elems = [g for g in elems if not g.is_zero()]
    if not elems:
        raise IdealError("an ideal needs at least one nonzero generator")
    w = ctx.omega
    return FractionalIdeal(Lattice.from_gens(ctx, [x for g in elems for x in (g, g * w)]))


def principal(alpha: QuadElem) -> FractionalIdeal:
    return ideal_from_gens(alpha.ctx, [alpha])


def multiply(A: FractionalIdeal, B: FractionalIdeal) -> FractionalIdeal:
    return FractionalIdeal(A.hnf * B.hnf)


def ideal_norm(A: FractionalIdeal) -> Fraction:
    # [O_F : A] = a*c for integral A, scaled by q^-2
    return A.hnf.index()


def invert(A: FractionalIdeal) -> FractionalIdeal:
    """``A^-1 = conj(A) / N(A)``."""
    n = ideal_norm(A)
    if n == 0:
        raise IdealError("cannot invert the zero module")
    return FractionalIdeal(A.hnf.conj().scale(1 / A.ctx.coerce(n)))


def fundamental_unit_of(ctx: FieldContext) -> QuadElem:
    """Fundamental unit greater than 1, as the period product of the cycle of O_F."""
    return reduction_cycle(Order(ctx, 1).lattice).unit


def is_principal(A: FractionalIdeal, narrow: bool = False) -> QuadElem | None:
    """A generator of ``A`` (totally positive when ``narrow``), or None.

    The wide test compares the reduction cycle of ``A`` with that of O_F and
    reads the generator off the accumulated scales.  For the narrow test the
    unit orbit ``+-eps^k * alpha`` is searched; ``eps^2`` is always totally
    positive, so ``k`` in {0, 1} suffices.
    """
    alpha = principal_generator(A.hnf, Order(A.ctx, 1))
    if alpha is None:
        return None
    if not narrow:
        return alpha
    eps = fundamental_unit_of(A.ctx)
    for cand in (alpha, -alpha, alpha * eps, -alpha * eps):
        if cand.is_totally_positive():
            return cand
    return None


def equivalent(A: FractionalIdeal, B: FractionalIdeal, narrow: bool = False) -> bool:
    return is_principal(A / B, narrow) is not None


def primitive_integral(A: FractionalIdeal) -> FractionalIdeal:
    return FractionalIdeal(A.hnf.primitive_part()[1])


def reduced_cycle(A: FractionalIdeal) -> list[FractionalIdeal]:
    """The primitive integral ideals attached to the reduced bases of ``A``'s class."""
    out = []
    for xi, _ in reduction_cycle(A.hnf).steps:
        out.append(FractionalIdeal(Lattice.from_gens(A.ctx, [1, xi]).primitive_part()[1]))
    return out


def is_reduced(A: FractionalIdeal) -> bool:
    """Primitive integral ideal with no nonzero element below ``N(A)`` in both embeddings.

    Brute force over a box known to hold every candidate: for
    ``x = i*a + j*(b + omega)`` one has ``x - conj(x) = j*sqrt(D)``, which
    bounds ``j``, and ``|x| < N(A) = a`` leaves at most three values of ``i``.
    """
    if A.q != 1 or A.c != 1:
        return False
    n = A.a
    root_D = A.ctx.omega - A.ctx.omega.conj()
    e2 = A.basis()[1]
    j = 0
    while True:
        if root_D * j >= 2 * n:
            break
        for jj in {j, -j}:
            t = e2 * jj
            lo = ((-n - t) / n).__floor__()
            hi = ((n - t) / n).__floor__()
            for i in range(lo, hi + 2):
                x = t + n * i
                if not x.is_zero() and abs(x) < n and abs(x.conj()) < n:
                    return False
        j += 1
    return True


def iter_prime_ideals(ctx: FieldContext, bound: int) -> Iterable[tuple[int, FractionalIdeal]]:
    """Prime ideals of degree one above rational primes ``p <= bound``.

    Uses the roots of the minimal polynomial of omega modulo ``p``: each root
    ``r`` gives ``(p, omega - r)``.  Inert primes contribute nothing (their
    ideal ``(p)`` is principal).
    """
    t, n = ctx.omega_minpoly()
    for p in _primes_upto(bound):
        for r in range(p):
            if (r * r - t * r + n) % p == 0:
                yield p, ideal_from_gens(ctx, [p, ctx.omega - r])


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def canonical_ideal(A: FractionalIdeal, narrow: bool = False) -> tuple[FractionalIdeal, QuadElem]:
    J, s = canonical_form(A.hnf, narrow)
    return FractionalIdeal(J), s
