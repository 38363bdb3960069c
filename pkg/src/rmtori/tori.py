"""Quantum tori with real multiplication and the ideal-class action on them.

A torus ``Z_L = R/L`` is determined up to isomorphism by the homothety class
of ``L``; classes are stored through the canonical reduced lattice of that
class, so equality of :class:`QuantumTorusClass` values is homothety.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Union

from .classgrp import IdealClass, class_group, fundamental_unit, narrow_class_group
from .field import FieldContext, MixedFieldError, QuadElem
from .ideal import FractionalIdeal
from .lattice import (
    Lattice,
    MultiplierMatrix,
    Order,
    Pseudolattice,
    PseudolatticeLike,
    as_lattice,
    canonical_form,
    colon,
    end_order,
    multiplier_ring,
)


class TorusError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumTorusClass:
    rep: Pseudolattice
    end: Order

    @classmethod
    def of(cls, L: PseudolatticeLike) -> QuantumTorusClass:
        J, _ = canonical_form(as_lattice(L))
        return cls(Pseudolattice.from_lattice(J), multiplier_ring(J))

    @property
    def ctx(self) -> FieldContext:
        return self.rep.ctx

    @property
    def has_maximal_rm(self) -> bool:
        return self.end.is_maximal

    def __str__(self):
        return f"Z_[{self.rep}]"


@dataclass(frozen=True)
class GaloisLabel:
    """A formal element of Gal(H_F/F), named by its ideal class under reciprocity."""

    ideal_class: IdealClass
    label: str = field(compare=False)

    @classmethod
    def of(cls, c: IdealClass) -> GaloisLabel:
        return cls(c, "id" if c.is_identity() else f"σ_{c}")

    def __mul__(self, other: GaloisLabel) -> GaloisLabel:
        return GaloisLabel.of(self.ideal_class * other.ideal_class)

    def __str__(self):
        return self.label


class RMData(NamedTuple):
    field: FieldContext
    order: Order
    matrix: MultiplierMatrix
    theta: QuadElem  # w1/w2
    theta_poly: tuple[int, int, int]  # c X^2 + (d - a) X - b
    alpha_poly: tuple[int, int, int]  # X^2 - (a + d) X + (ad - bc)


def rm_detect(L: PseudolatticeLike) -> RMData:
    """The real quadratic field and endomorphism order of ``Z_L``.

    Generators are taken in F, so End is never just Z here; the witness is
    the matrix of ``f*omega`` on the generator pair of ``L``.
    """
    if isinstance(L, Lattice):
        L = Pseudolattice.from_lattice(L)
    order, (m,) = end_order(L)
    return RMData(L.ctx, order, m, L.w1 / L.w2, m.theta_poly(), m.alpha_poly())


def enumerate_qt(ctx: FieldContext) -> list[QuantumTorusClass]:
    """QT(O_F): one torus per ideal class, in class-group order."""
    return [QuantumTorusClass.of(A.hnf) for A in class_group(ctx).reps]


IdealLike = Union[IdealClass, FractionalIdeal]


def _ideal(c: IdealLike) -> FractionalIdeal:
    return c.rep if isinstance(c, IdealClass) else c


def act(c: IdealLike, Z: QuantumTorusClass) -> QuantumTorusClass:
    """``[a] * Z_L = Z_{aL}``; narrow classes act through their image in C(F)."""
    A = _ideal(c)
    if A.ctx != Z.ctx:
        raise MixedFieldError("ideal and torus live over different fields")
    if not Z.has_maximal_rm:
        raise TorusError(f"{Z} has endomorphism ring of conductor {Z.end.conductor}, not O_F")
    return QuantumTorusClass.of(A.hnf * Z.rep.hnf)


def transporter(Z1: QuantumTorusClass, Z2: QuantumTorusClass) -> IdealClass:
    """The class ``c`` with ``c * Z1 = Z2``: the class of ``(L2 : L1)``."""
    if Z1.ctx != Z2.ctx:
        raise MixedFieldError("tori live over different fields")
    return IdealClass.of(FractionalIdeal(colon(Z2.rep.hnf, Z1.rep.hnf)))


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ActionReport:
    ctx: FieldContext
    h: int
    checks: list[Check]
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _random_scalar(ctx: FieldContext, rng: random.Random) -> QuadElem:
    while True:
        x = ctx(rng.randint(-9, 9), rng.randint(-9, 9)) / rng.randint(1, 6)
        if not x.is_zero():
            return x


def verify_simply_transitive(ctx: FieldContext, samples: int = 100, seed: int = 0) -> ActionReport:
    """Exhaustive check of the C(F) action on QT(O_F), plus random rescalings."""
    G = class_group(ctx)
    tori = enumerate_qt(ctx)
    pos = {Z: i for i, Z in enumerate(tori)}
    checks: list[Check] = []
    counter = None

    def record(name, ok, detail="", example=None):
        nonlocal counter
        checks.append(Check(name, ok, detail))
        if not ok and counter is None:
            counter = {"check": name, **(example or {})}

    record("torus_count", len(tori) == G.h, f"|QT(O_F)| = {len(tori)}, h = {G.h}")
    record(
        "distinct_classes", len(pos) == len(tori), "enumerated tori are pairwise non-isomorphic"
    )

    # action table: image[c][z]
    image = []
    bad_end = None
    for c in G.classes:
        row = []
        for Z in tori:
            raw = c.rep.hnf * Z.rep.hnf
            if not multiplier_ring(raw).is_maximal and bad_end is None:
                bad_end = (str(c), str(Z))
            W = act(c, Z)
            if W not in pos:
                record("closure", False, example={"class": str(c), "torus": str(Z)})
                return ActionReport(ctx, G.h, checks, counter)
            row.append(pos[W])
        image.append(row)
    record("closure", True, "every a*L is homothetic to an enumerated torus")
    record(
        "end_preserved",
        bad_end is None,
        "End(aL) is maximal for every class and torus",
        None if bad_end is None else {"class": bad_end[0], "torus": bad_end[1]},
    )

    ident_ok = all(image[0][z] == z for z in range(len(tori)))
    record("identity", ident_ok, "[O_F] acts trivially")

    compat = None
    for i in range(G.h):
        for j in range(G.h):
            k = G.mul(i, j)
            for z in range(len(tori)):
                if image[k][z] != image[i][image[j][z]]:
                    compat = compat or {"c1": str(G.classes[i]), "c2": str(G.classes[j]), "torus": str(tori[z])}
    record("compatibility", compat is None, "(c1 c2) * Z = c1 * (c2 * Z)", compat)

    unique = None
    trans = None
    for z1 in range(len(tori)):
        for z2 in range(len(tori)):
            hits = [i for i in range(G.h) if image[i][z1] == z2]
            if len(hits) != 1:
                unique = unique or {"z1": str(tori[z1]), "z2": str(tori[z2]), "classes": len(hits)}
                continue
            t = transporter(tori[z1], tori[z2])
            if t != G.classes[hits[0]] or act(t, tori[z1]) != tori[z2]:
                trans = trans or {"z1": str(tori[z1]), "z2": str(tori[z2]), "transporter": str(t)}
    record("simply_transitive", unique is None, "exactly one class carries Z1 to Z2", unique)
    record("transporter", trans is None, "class of (L2 : L1) carries Z1 to Z2", trans)

    simple = None
    for i in range(1, G.h):
        for z in range(len(tori)):
            if image[i][z] == z:
                simple = simple or {"class": str(G.classes[i]), "torus": str(tori[z])}
    record("simple", simple is None, "only the trivial class fixes a torus", simple)

    rng = random.Random(seed * 1_000_003 + ctx.d)
    indep = None
    for _ in range(samples):
        i = rng.randrange(G.h)
        z = rng.randrange(len(tori))
        alpha = _random_scalar(ctx, rng)
        A = G.classes[i].rep
        L = tori[z].rep.hnf.scale(_random_scalar(ctx, rng))
        left = act(A * alpha, QuantumTorusClass.of(L))
        if left != act(A, tori[z]):
            indep = indep or {"class": str(G.classes[i]), "alpha": str(alpha), "torus": str(tori[z])}
    record(
        "representative_independence",
        indep is None,
        f"{samples} random rescalings of ideal and lattice",
        indep,
    )

    # the narrow group acts through the surjection: transitive, faithful iff h+ = h
    NG = narrow_class_group(ctx)
    unit = fundamental_unit(ctx)
    orbit = {act(c, tori[0]) for c in NG.group.classes}
    record("narrow_transitive", len(orbit) == len(tori), "C(F)+ orbit of Z_{O_F} is all of QT(O_F)")
    acts_faithfully = len({tuple(pos[act(c, Z)] for Z in tori) for c in NG.group.classes}) == NG.group.h
    record(
        "narrow_faithfulness",
        acts_faithfully == (unit.tp_index == 4) == NG.faithful,
        f"faithful={acts_faithfully}, unit index={unit.tp_index}",
    )
    return ActionReport(ctx, G.h, checks, counter)


class GaloisRow(NamedTuple):
    label: GaloisLabel
    permutation: tuple[int, ...]  # torus index -> torus index


class GaloisTable(NamedTuple):
    rows: tuple[GaloisRow, ...]
    composition: tuple[tuple[int, ...], ...]  # row index product table
    tori: tuple[QuantumTorusClass, ...]


def galois_table(ctx: FieldContext) -> GaloisTable:
    """Ideal classes relabelled as formal Galois elements, with their action."""
    G = class_group(ctx)
    tori = enumerate_qt(ctx)
    pos = {Z: i for i, Z in enumerate(tori)}
    labels = [GaloisLabel.of(c) for c in G.classes]
    rows = tuple(GaloisRow(g, tuple(pos[act(g.ideal_class, Z)] for Z in tori)) for g in labels)
    index = {g: i for i, g in enumerate(labels)}
    composition = tuple(tuple(index[g * k] for k in labels) for g in labels)
    return GaloisTable(rows, composition, tuple(tori))
