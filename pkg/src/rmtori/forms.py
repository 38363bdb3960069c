"""Indefinite binary quadratic forms: reduced forms and their cycles.

Independent of the ideal machinery; the number of cycles of reduced forms
of a fundamental discriminant D is the narrow class number of Q(sqrt(D)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt


class DiscriminantError(ValueError):
    pass


def validate_discriminant(D: int) -> None:
    if D <= 0:
        raise DiscriminantError(f"discriminant must be positive, got {D}")
    if D % 4 not in (0, 1):
        raise DiscriminantError(f"discriminant must be 0 or 1 mod 4, got {D}")
    if isqrt(D) ** 2 == D:
        raise DiscriminantError(f"discriminant must not be a square, got {D}")


def is_fundamental(D: int) -> bool:
    try:
        validate_discriminant(D)
    except DiscriminantError:
        return False
    if D % 4 == 1:
        return _squarefree(D)
    m = D // 4
    return m % 4 in (2, 3) and _squarefree(m)


def _squarefree(n: int) -> bool:
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True, order=True)
class BQF:
    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_reduced(self) -> bool:
        """``0 < B < sqrt(D)`` and ``sqrt(D) - B < 2|A| < sqrt(D) + B``."""
        D = self.discriminant
        A2 = 2 * abs(self.A)
        B = self.B
        if B <= 0 or B * B >= D:
            return False
        # sqrt(D) < 2|A| + B, both sides positive
        if (A2 + B) ** 2 <= D:
            return False
        # 2|A| - B < sqrt(D)
        return A2 - B <= 0 or (A2 - B) ** 2 < D

    def rho(self) -> BQF:
        """Neighbouring reduced form ``(C, B', *)`` with ``B' = -B mod 2C`` and
        ``sqrt(D) - 2|C| < B' < sqrt(D)``."""
        D = self.discriminant
        s = isqrt(D)
        m = 2 * abs(self.C)
        Bn = s - (s + self.B) % m
        Cn = (Bn * Bn - D) // (4 * self.C)
        return BQF(self.C, Bn, Cn)

    def __str__(self):
        return f"({self.A}, {self.B}, {self.C})"


def reduced_forms(D: int) -> list[BQF]:
    validate_discriminant(D)
    s = isqrt(D)
    out = []
    for B in range(1, s + 1):
        if (B - D) % 2:
            continue
        N = (B * B - D) // 4  # = A*C, negative
        if N == 0:
            continue
        for absA in range(1, min(-N, s) + 1):
            if N % absA:
                continue
            for A in (absA, -absA):
                f = BQF(A, B, N // A)
                if f.is_reduced():
                    out.append(f)
    return sorted(out)


def form_cycles(D: int) -> list[list[BQF]]:
    remaining = set(reduced_forms(D))
    cycles = []
    for f in sorted(remaining):
        if f not in remaining:
            continue
        cyc = [f]
        remaining.discard(f)
        g = f.rho()
        while g != f:
            if g not in remaining:
                raise ArithmeticError(f"rho left the reduced forms of discriminant {D} at {g}")
            cyc.append(g)
            remaining.discard(g)
            g = g.rho()
        cycles.append(cyc)
    return cycles


def form_class_count(D: int) -> int:
    """Number of proper equivalence classes of forms of discriminant ``D``."""
    return len(form_cycles(D))
