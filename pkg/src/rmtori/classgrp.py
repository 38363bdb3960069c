"""Units, class group and narrow class group of a real quadratic field."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import NamedTuple

from .field import FieldContext, QuadElem
from .ideal import (
    FractionalIdeal,
    canonical_ideal,
    fundamental_unit_of,
    invert,
    iter_prime_ideals,
    principal,
)


@dataclass(frozen=True)
class UnitInfo:
    epsilon: QuadElem
    unit_norm: int
    tp_index: int  # [O_F^* : totally positive units]


def fundamental_unit(ctx: FieldContext) -> UnitInfo:
    """Fundamental unit from the continued fraction of omega.

    The product of the complete quotients over one period of the expansion
    of omega is the fundamental unit; it is the same number as the
    convergent-at-end-of-period construction, without the bookkeeping.
    """
    eps = fundamental_unit_of(ctx)
    n = eps.norm()
    if abs(n) != 1 or not eps > 1:
        raise ArithmeticError(f"period product {eps} is not a unit > 1")
    n = int(n)
    # units are +-eps^k; the totally positive ones are eps^(2k), or eps^k when N(eps) = 1
    return UnitInfo(eps, n, 4 if n == -1 else 2)


@dataclass(frozen=True)
class IdealClass:
    """A class in C(F) (or C(F)+ when ``narrow``), held by its canonical reduced ideal."""

    rep: FractionalIdeal
    narrow: bool = False

    @classmethod
    def of(cls, A: FractionalIdeal, narrow: bool = False) -> IdealClass:
        return cls(canonical_ideal(A, narrow)[0], narrow)

    @classmethod
    def identity(cls, ctx: FieldContext, narrow: bool = False) -> IdealClass:
        return cls.of(FractionalIdeal.unit(ctx), narrow)

    @property
    def ctx(self) -> FieldContext:
        return self.rep.ctx

    def __mul__(self, other: IdealClass) -> IdealClass:
        if not isinstance(other, IdealClass):
            return NotImplemented
        if other.narrow != self.narrow:
            raise ValueError("cannot multiply a narrow class with a wide one")
        return IdealClass.of(self.rep * other.rep, self.narrow)

    def inverse(self) -> IdealClass:
        return IdealClass.of(invert(self.rep), self.narrow)

    def __pow__(self, n: int) -> IdealClass:
        return IdealClass.of(self.rep**n, self.narrow)

    def is_identity(self) -> bool:
        return self == IdealClass.identity(self.ctx, self.narrow)

    def to_wide(self) -> IdealClass:
        """Image under the canonical surjection C(F)+ -> C(F)."""
        return IdealClass.of(self.rep, False)

    def contains(self, A: FractionalIdeal) -> bool:
        return IdealClass.of(A, self.narrow) == self

    def __str__(self):
        return f"[{self.rep}]{'+' if self.narrow else ''}"


@dataclass(frozen=True)
class ClassGroup:
    ctx: FieldContext
    h: int
    reps: tuple[FractionalIdeal, ...]
    structure: tuple[int, ...]
    narrow: bool
    classes: tuple[IdealClass, ...]
    table: tuple[tuple[int, ...], ...]
    generators: tuple[IdealClass, ...]

    def index(self, c: IdealClass) -> int:
        return self.classes.index(c)

    def class_of(self, A: FractionalIdeal) -> IdealClass:
        return IdealClass.of(A, self.narrow)

    def identity(self) -> IdealClass:
        return self.classes[0]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def order_of(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k


def minkowski_primes(ctx: FieldContext) -> list[tuple[int, FractionalIdeal]]:
    """Degree-one primes of norm at most sqrt(D)/2."""
    D = ctx.D
    bound = isqrt(D) // 2 + 1
    return [(p, P) for p, P in iter_prime_ideals(ctx, bound) if 4 * p * p <= D]


def invariant_factors(orders_of_powers, h: int) -> tuple[int, ...]:
    """Invariant factors of an abelian group of order ``h``.

    ``orders_of_powers(m)`` must return ``#{x : x^m = 1}``; for each prime
    ``p`` the counts at ``p^k`` fix the number of cyclic p-parts of order at
    least ``p^k``.
    """
    parts: dict[int, list[int]] = {}
    for p in _prime_factors(h):
        ranks = []
        k, prev = 1, 1
        while True:
            cnt = orders_of_powers(p**k)
            s = _log_exact(cnt, p)
            s_prev = _log_exact(prev, p)
            if s == s_prev:
                break
            ranks.append(s - s_prev)
            prev = cnt
            k += 1
        # ranks[k-1] = number of cyclic factors of order >= p^k
        exps = []
        for k in range(len(ranks)):
            nxt = ranks[k + 1] if k + 1 < len(ranks) else 0
            exps.extend([k + 1] * (ranks[k] - nxt))
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    factors = []
    for i in range(width):
        f = 1
        for p, exps in parts.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(sorted(factors))


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _log_exact(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise ArithmeticError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


def _build(ctx: FieldContext, gens: list[IdealClass], narrow: bool) -> ClassGroup:
    identity = IdealClass.identity(ctx, narrow)
    elements = [identity]
    seen = {identity}
    i = 0
    while i < len(elements):
        x = elements[i]
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                elements.append(y)
        i += 1
    elements.sort(key=lambda c: (not c.is_identity(), c.rep.hnf.key()))
    pos = {c: k for k, c in enumerate(elements)}
    table = tuple(tuple(pos[x * y] for y in elements) for x in elements)
    h = len(elements)

    def count_killed(m: int) -> int:
        total = 0
        for k in range(h):
            x = 0
            for _ in range(m):
                x = table[x][k]
            total += x == 0
        return total

    distinct_gens = []
    for g in gens:
        if not g.is_identity() and g not in distinct_gens:
            distinct_gens.append(g)
    return ClassGroup(
        ctx=ctx,
        h=h,
        reps=tuple(c.rep for c in elements),
        structure=invariant_factors(count_killed, h),
        narrow=narrow,
        classes=tuple(elements),
        table=table,
        generators=tuple(distinct_gens),
    )


@lru_cache(maxsize=256)
def class_group(ctx: FieldContext) -> ClassGroup:
    """C(F) by closing the classes of primes below the Minkowski bound."""
    gens = [IdealClass.of(P) for _, P in minkowski_primes(ctx)]
    return _build(ctx, gens, narrow=False)


class NarrowClassGroup(NamedTuple):
    group: ClassGroup
    formula_h: Fraction  # 4*h / [O_F^* : F+ cap O_F^*]
    formula_check: bool
    faithful: bool  # C(F)+ acts faithfully <=> the surjection onto C(F) is injective
    unit: UnitInfo


@lru_cache(maxsize=256)
def narrow_class_group(ctx: FieldContext) -> NarrowClassGroup:
    """C(F)+ by direct enumeration, checked against the unit-index formula.

    Generators are the Minkowski primes together with ``(sqrt(d))``, whose
    generator has negative norm and so spans the kernel of C(F)+ -> C(F).
    """
    gens = [IdealClass.of(P, narrow=True) for _, P in minkowski_primes(ctx)]
    gens.append(IdealClass.of(principal(ctx.sqrt_d), narrow=True))
    group = _build(ctx, gens, narrow=True)
    wide = class_group(ctx)
    unit = fundamental_unit(ctx)
    formula_h = Fraction(4 * wide.h, unit.tp_index)
    kernel = [c for c in group.classes if c.to_wide().is_identity()]
    return NarrowClassGroup(
        group=group,
        formula_h=formula_h,
        formula_check=formula_h == group.h,
        faithful=len(kernel) == 1,
        unit=unit,
    )


def surjection(narrow: ClassGroup, wide: ClassGroup) -> list[int]:
    """Index map C(F)+ -> C(F) induced by forgetting the positivity condition."""
    return [wide.index(c.to_wide()) for c in narrow.classes]
