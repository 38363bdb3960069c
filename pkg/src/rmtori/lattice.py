"""Rank-two lattices inside a real quadratic field.

A :class:`Lattice` is a Z-module ``Z*e1 + Z*e2`` in F held in Hermite normal
form relative to the integral basis ``{1, omega}``::

    (1/q) * (Z*a + Z*(b + c*omega)),   a, c > 0,  0 <= b < a,  gcd(q, a, b, c) = 1

which is unique for the module, so structural equality is module equality.
:class:`Pseudolattice` keeps a user-chosen generator pair on top of that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Sequence, Union

from .field import FieldContext, FieldError, QuadElem, complete_quotients


class LatticeError(ValueError):
    pass


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - k * s1
        t0, t1 = t1, t0 - k * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _hnf_from_coords(ctx: FieldContext, vectors) -> Lattice:
    vectors = [(Fraction(u), Fraction(v)) for u, v in vectors]
    q = 1
    for u, v in vectors:
        q = _lcm(q, _lcm(u.denominator, v.denominator))
    rows = [(int(u * q), int(v * q)) for u, v in vectors]

    pivot = None
    a = 0
    for u, v in rows:
        if v == 0:
            a = gcd(a, u)
            continue
        if pivot is None:
            pivot = (u, v)
            continue
        pu, pv = pivot
        g, s, t = xgcd(pv, v)
        pivot = (s * pu + t * u, g)
        # the complementary combination has zero omega-coordinate
        a = gcd(a, (v // g) * pu - (pv // g) * u)
    if pivot is None or a == 0:
        raise LatticeError("generators do not span a rank-two lattice")
    pu, pv = pivot
    if pv < 0:
        pu, pv = -pu, -pv
    b = pu % a
    c = pv
    g = gcd(gcd(q, a), gcd(b, c))
    return Lattice(ctx, q // g, a // g, b // g, c // g)


@dataclass(frozen=True)
class Lattice:
    ctx: FieldContext
    q: int
    a: int
    b: int
    c: int

    @classmethod
    def from_gens(cls, ctx: FieldContext, gens: Sequence) -> Lattice:
        elems = [ctx.coerce(g) for g in gens]
        return _hnf_from_coords(ctx, [ctx.coords(e) for e in elems])

    @classmethod
    def from_coords(cls, ctx: FieldContext, vectors) -> Lattice:
        return _hnf_from_coords(ctx, vectors)

    def basis(self) -> tuple[QuadElem, QuadElem]:
        ctx = self.ctx
        return (
            ctx.from_coords(Fraction(self.a, self.q), 0),
            ctx.from_coords(Fraction(self.b, self.q), Fraction(self.c, self.q)),
        )

    def coords_of(self, x: QuadElem) -> tuple[Fraction, Fraction]:
        """Coordinates of ``x`` in the HNF basis (integers iff ``x`` is in the lattice)."""
        u, v = self.ctx.coords(self.ctx.coerce(x))
        k = v * self.q / self.c
        return (u * self.q - k * self.b) / self.a, k

    def __contains__(self, x) -> bool:
        i, j = self.coords_of(x)
        return i.denominator == 1 and j.denominator == 1

    def index(self) -> Fraction:
        """Covolume relative to Z[omega]: ``[Z[omega] : L]`` for sublattices."""
        return Fraction(self.a * self.c, self.q * self.q)

    def scale(self, alpha) -> Lattice:
        alpha = self.ctx.coerce(alpha)
        if alpha.is_zero():
            raise LatticeError("cannot scale a lattice by zero")
        e1, e2 = self.basis()
        return Lattice.from_gens(self.ctx, [alpha * e1, alpha * e2])

    def __mul__(self, other: Lattice) -> Lattice:
        if not isinstance(other, Lattice):
            return NotImplemented
        _same_field(self, other)
        e = self.basis()
        f = other.basis()
        return Lattice.from_gens(self.ctx, [x * y for x in e for y in f])

    def __add__(self, other: Lattice) -> Lattice:
        if not isinstance(other, Lattice):
            return NotImplemented
        _same_field(self, other)
        return Lattice.from_gens(self.ctx, [*self.basis(), *other.basis()])

    def conj(self) -> Lattice:
        return Lattice.from_gens(self.ctx, [e.conj() for e in self.basis()])

    def dual(self) -> Lattice:
        # coordinate dual B^{-T} Z^2 in the {1, omega} coordinates
        q, a, b, c = self.q, self.a, self.b, self.c
        return Lattice.from_coords(
            self.ctx, [(Fraction(q, a), Fraction(-q * b, a * c)), (0, Fraction(q, c))]
        )

    def intersect(self, other: Lattice) -> Lattice:
        _same_field(self, other)
        return (self.dual() + other.dual()).dual()

    def is_omega_stable(self) -> bool:
        w = self.ctx.omega
        return all(w * e in self for e in self.basis())

    def primitive_part(self) -> tuple[Fraction, Lattice]:
        """``(content, J)`` with ``self = content * J`` and J integral, primitive."""
        g = gcd(gcd(self.a, self.b), self.c)
        J = Lattice(self.ctx, 1, self.a // g, self.b // g, self.c // g)
        return Fraction(g, self.q), J

    def key(self) -> tuple[int, int, int, int, int]:
        return (self.a * self.c, self.q, self.a, self.b, self.c)

    def __str__(self):
        e1, e2 = self.basis()
        return f"Z*({e1}) + Z*({e2})"


def _same_field(x, y):
    if x.ctx != y.ctx:
        raise FieldError(f"lattices live in Q(sqrt({x.ctx.d})) and Q(sqrt({y.ctx.d}))")


def colon(M: Lattice, L: Lattice) -> Lattice:
    """``(M : L) = {alpha in F : alpha*L is contained in M}``."""
    _same_field(M, L)
    e1, e2 = L.basis()
    return M.scale(1 / e1).intersect(M.scale(1 / e2))


# -- reduction cycle ----------------------------------------------------------------

class CycleStep(NamedTuple):
    """``L = scale * (Z + Z*xi)`` with ``xi`` a reduced quadratic irrational."""

    xi: QuadElem
    scale: QuadElem


class Cycle(NamedTuple):
    steps: tuple[CycleStep, ...]
    unit: QuadElem  # product of the complete quotients over one period, > 1


def reduction_cycle(L: Lattice, periods: int = 1, max_steps: int | None = None) -> Cycle:
    """Reduced bases of the homothety class of ``L``, with exact scales.

    With ``xi_{k+1} = 1/(xi_k - a_k)`` one has
    ``Z + Z*xi_{k+1} = xi_{k+1} * (Z + Z*xi_k)``, so the scales follow by
    dividing through the running product of complete quotients.
    """
    e1, e2 = L.basis()
    _, quotients, start = complete_quotients(e2 / e1, max_steps)
    period = len(quotients) - start

    def xi(k):
        return quotients[k] if k < start else quotients[start + (k - start) % period]

    prod = L.ctx(1)  # xi_1 * ... * xi_k
    for k in range(1, start + 1):
        prod = prod * xi(k)
    steps = []
    unit = L.ctx(1)
    for k in range(start, start + periods * period):
        steps.append(CycleStep(xi(k), e1 / prod))
        nxt = xi(k + 1)
        prod = prod * nxt
        if k - start < period:
            unit = unit * nxt
    return Cycle(tuple(steps), unit)


@lru_cache(maxsize=4096)
def canonical_form(L: Lattice, narrow: bool = False) -> tuple[Lattice, QuadElem]:
    """Canonical representative ``J`` of the homothety class of ``L`` and the
    positive ``s`` with ``L = s*J``.

    ``J`` is the primitive integral lattice of least index (then least HNF)
    among the reduced members of the cycle.  With ``narrow`` only scales of
    positive norm are admissible, which splits the cycle by the sign of the
    norm of the scale; two periods are walked so both parities appear when
    the period is odd.
    """
    cyc = reduction_cycle(L, periods=2 if narrow else 1)
    best = None
    for xi, scale in cyc.steps:
        content, J = Lattice.from_gens(L.ctx, [1, xi]).primitive_part()
        s = scale * content
        if narrow and s.norm() < 0:
            continue
        if best is None or J.key() < best[0].key():
            best = (J, s)
    return best


def homothety_witness(L: Lattice, M: Lattice) -> QuadElem | None:
    """Positive ``beta`` with ``beta*L = M`` from the reduction cycles alone."""
    JL, sL = canonical_form(L)
    JM, sM = canonical_form(M)
    if JL != JM:
        return None
    return sM / sL


# -- orders, pseudolattices, endomorphisms -----------------------------------------

@dataclass(frozen=True)
class Order:
    """The order ``Z + f*O_F`` of conductor ``f``."""

    ctx: FieldContext
    conductor: int

    def __post_init__(self):
        if self.conductor < 1:
            raise LatticeError("conductor must be a positive integer")

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.ctx, 1, 1, 0, self.conductor)

    @property
    def is_maximal(self) -> bool:
        return self.conductor == 1

    @property
    def generator(self) -> QuadElem:
        return self.conductor * self.ctx.omega

    def __contains__(self, x) -> bool:
        return x in self.lattice


PseudolatticeLike = Union["Pseudolattice", Lattice]


@dataclass(frozen=True, eq=False)
class Pseudolattice:
    """``Z*w1 + Z*w2`` with ``w2/w1`` irrational; equality is equality of spans."""

    ctx: FieldContext
    w1: QuadElem
    w2: QuadElem
    hnf: Lattice = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, Pseudolattice):
            return NotImplemented
        return self.hnf == other.hnf

    def __hash__(self):
        return hash(self.hnf)

    @classmethod
    def from_lattice(cls, lat: Lattice) -> Pseudolattice:
        w1, w2 = lat.basis()
        return cls(lat.ctx, w1, w2, lat)

    def scale(self, beta) -> Pseudolattice:
        beta = self.ctx.coerce(beta)
        return normal_basis(beta * self.w1, beta * self.w2)

    def __contains__(self, x) -> bool:
        return x in self.hnf

    def __str__(self):
        return f"Z*({self.w1}) + Z*({self.w2})"


def normal_basis(w1: QuadElem, w2: QuadElem) -> Pseudolattice:
    if w1.ctx != w2.ctx:
        raise FieldError("generators live in different fields")
    if w1.is_zero() or w2.is_zero():
        raise LatticeError("zero generator")
    if (w2 / w1).is_rational():
        raise LatticeError("generator ratio is rational, so the group is not dense in R")
    return Pseudolattice(w1.ctx, w1, w2, Lattice.from_gens(w1.ctx, [w1, w2]))


def as_lattice(L: PseudolatticeLike) -> Lattice:
    return L.hnf if isinstance(L, Pseudolattice) else L


def _generators(L: PseudolatticeLike) -> tuple[QuadElem, QuadElem]:
    if isinstance(L, Pseudolattice):
        return L.w1, L.w2
    return L.basis()


def contains(L: PseudolatticeLike, a: QuadElem) -> bool:
    return a in as_lattice(L)


@dataclass(frozen=True)
class MultiplierMatrix:
    """Integers with ``alpha*w1 = a*w1 + b*w2`` and ``alpha*w2 = c*w1 + d*w2``."""

    alpha: QuadElem
    a: int
    b: int
    c: int
    d: int

    def alpha_poly(self) -> tuple[int, int, int]:
        return 1, -(self.a + self.d), self.a * self.d - self.b * self.c

    def theta_poly(self) -> tuple[int, int, int]:
        # theta = w1/w2
        return self.c, self.d - self.a, -self.b


def _solve_in_basis(w1: QuadElem, w2: QuadElem, x: QuadElem) -> tuple[Fraction, Fraction]:
    ctx = w1.ctx
    (p, r), (s, t), (u, v) = ctx.coords(w1), ctx.coords(w2), ctx.coords(x)
    det = p * t - s * r
    return (u * t - s * v) / det, (p * v - u * r) / det


def multiplier_matrix(L: PseudolatticeLike, alpha: QuadElem) -> MultiplierMatrix:
    w1, w2 = _generators(L)
    a, b = _solve_in_basis(w1, w2, alpha * w1)
    c, d = _solve_in_basis(w1, w2, alpha * w2)
    entries = (a, b, c, d)
    if any(e.denominator != 1 for e in entries):
        raise LatticeError(f"{alpha} does not multiply the lattice into itself")
    return MultiplierMatrix(alpha, *(int(e) for e in entries))


@lru_cache(maxsize=4096)
def _multiplier_ring(L: Lattice) -> Order:
    R = colon(L, L)
    if (R.q, R.a, R.b) != (1, 1, 0):
        raise LatticeError(f"multiplier ring has unexpected normal form {R}")
    return Order(L.ctx, R.c)


def multiplier_ring(L: PseudolatticeLike) -> Order:
    return _multiplier_ring(as_lattice(L))


class EndomorphismData(NamedTuple):
    order: Order
    witnesses: tuple[MultiplierMatrix, ...]


def end_order(L: PseudolatticeLike) -> EndomorphismData:
    """The multiplier ring ``{alpha : alpha*L in L}`` with the integer matrix
    of its non-rational generator ``f*omega`` on the generators of ``L``."""
    order = multiplier_ring(L)
    return EndomorphismData(order, (multiplier_matrix(L, order.generator),))


def hom_module(L: PseudolatticeLike, M: PseudolatticeLike) -> Lattice:
    return colon(as_lattice(M), as_lattice(L))


class MultiplierInfo(NamedTuple):
    in_module: bool
    positive: bool

    @property
    def is_morphism(self) -> bool:
        # nonzero and positive, as morphisms are positive reals
        return self.in_module and self.positive


def classify_multiplier(L: PseudolatticeLike, M: PseudolatticeLike, alpha: QuadElem) -> MultiplierInfo:
    return MultiplierInfo(alpha in hom_module(L, M), alpha.sign() > 0)


def principal_generator(T: Lattice, order: Order) -> QuadElem | None:
    """Positive ``beta`` with ``T = beta*order`` if ``T`` is principal over the order."""
    JT, sT = canonical_form(T)
    JO, sO = canonical_form(order.lattice)
    if JT != JO:
        return None
    return sT / sO


def is_homothetic(L: PseudolatticeLike, M: PseudolatticeLike) -> QuadElem | None:
    """A positive ``beta`` with ``beta*L = M``, or None.

    Goes through the transporter ``(M : L)``: the lattices are homothetic
    exactly when they share a multiplier ring and the transporter is a
    principal module over it.
    """
    L, M = as_lattice(L), as_lattice(M)
    _same_field(L, M)
    order = multiplier_ring(L)
    if multiplier_ring(M) != order:
        return None
    T = colon(M, L)
    if T * L != M:
        return None
    beta = principal_generator(T, order)
    if beta is None:
        return None
    if L.scale(beta) != M:
        raise LatticeError("homothety witness failed verification")
    return beta
