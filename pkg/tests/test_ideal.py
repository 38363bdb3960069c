from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rand_elem
from rmtori.field import FieldContext
from rmtori.ideal import (
    FractionalIdeal,
    IdealError,
    equivalent,
    ideal_from_gens,
    ideal_norm,
    invert,
    is_principal,
    is_reduced,
    iter_prime_ideals,
    multiply,
    principal,
    reduced_cycle,
)
from rmtori.lattice import Lattice

F3, F10 = FieldContext(3), FieldContext(10)
R10 = F10.sqrt_d
P2 = ideal_from_gens(F10, [2, R10])


def closure_mod(ctx, gens, N):
    """Image in O_F/N*O_F of the ideal generated by integral ``gens`` (N in the ideal)."""
    w = ctx.omega
    vecs = set()
    for g in map(ctx.coerce, gens):
        for x in (g, g * w):
            u, v = ctx.coords(x)
            vecs.add((int(u) % N, int(v) % N))
    group = {(0, 0)}
    frontier = list(group)
    while frontier:
        nxt = []
        for s in frontier:
            for t in vecs:
                r = ((s[0] + t[0]) % N, (s[1] + t[1]) % N)
                if r not in group:
                    group.add(r)
                    nxt.append(r)
        frontier = nxt
    return group


def oracle_norm_and_members(ctx, gens, N):
    sub = closure_mod(ctx, gens, N)
    return Fraction(N * N, len(sub)), sub


def test_principal_sqrt10_hnf():
    A = principal(R10)
    assert (A.q, A.a, A.b, A.c) == (1, 10, 0, 1)
    assert A.norm() == 10
    norm, _ = oracle_norm_and_members(F10, [R10], 10)
    assert norm == 10


def test_unit_and_p2():
    assert ideal_from_gens(F10, [1]) == FractionalIdeal.unit(F10)
    assert P2.norm() == 2
    assert oracle_norm_and_members(F10, [2, R10], 2)[0] == 2


def test_membership_matches_closure_oracle(rng):
    for d in (3, 5, 10, 13, 79):
        ctx = FieldContext(d)
        tried = 0
        while tried < 12:
            gens = [ctx.from_coords(rng.randint(-12, 12), rng.randint(-12, 12)) for _ in range(2)]
            N = abs(int(gens[0].norm()))
            if not 0 < N <= 80:
                continue
            tried += 1
            A = ideal_from_gens(ctx, gens)
            norm, sub = oracle_norm_and_members(ctx, gens, N)
            assert A.norm() == norm
            for u in range(N):
                for v in range(N):
                    assert (ctx.from_coords(u, v) in A) == ((u, v) in sub)


def test_non_ideal_lattice_rejected():
    with pytest.raises(IdealError):
        FractionalIdeal(Lattice.from_gens(F10, [1, 2 * R10]))
    with pytest.raises(IdealError):
        ideal_from_gens(F10, [0])


def test_multiply_examples():
    assert P2 * P2 == principal(F10(2))
    assert P2 * FractionalIdeal.unit(F10) == P2
    assert multiply(P2, invert(P2)) == FractionalIdeal.unit(F10)


def test_invert_examples():
    O = FractionalIdeal.unit(F10)
    assert invert(O) == O
    assert invert(P2).hnf == Lattice.from_gens(F10, [1, R10 / 2])
    assert invert(P2) == P2.conj() / 2
    assert invert(principal(R10)) == principal(1 / R10)


def test_norm_examples():
    assert ideal_norm(FractionalIdeal.unit(F10)) == 1
    assert ideal_norm(principal(F10(3))) == 9
    assert ideal_norm(P2) == 2
    # |N(1 + sqrt(10))| = 9
    assert ideal_norm(principal(F10(1, 1) / 3)) == 1
    assert ideal_norm(principal(F10(1, 1) / 2)) == Fraction(9, 4)


def rand_ideal(ctx, rng):
    gens = [rand_elem(ctx, rng, 9, 3) for _ in range(rng.randint(1, 3))]
    return ideal_from_gens(ctx, gens)


def test_group_laws(rng):
    for d in (2, 5, 10, 79):
        ctx = FieldContext(d)
        O = FractionalIdeal.unit(ctx)
        for _ in range(30):
            A, B, C = rand_ideal(ctx, rng), rand_ideal(ctx, rng), rand_ideal(ctx, rng)
            assert A * B == B * A
            assert (A * B) * C == A * (B * C)
            assert A * invert(A) == O
            assert ideal_norm(A * B) == ideal_norm(A) * ideal_norm(B)
            assert A * A.conj() == principal(ctx(ideal_norm(A)))
            alpha = rand_elem(ctx, rng)
            assert ideal_norm(principal(alpha)) == abs(alpha.norm())


def test_sum_of_generators_contains_them(rng):
    for _ in range(50):
        gens = [rand_elem(F10, rng, 9, 3) for _ in range(3)]
        A = ideal_from_gens(F10, gens)
        for g in gens:
            assert g in A
            assert g * F10.omega in A


def test_is_principal_examples():
    g = is_principal(principal(R10))
    # generators are only defined up to units
    assert principal(g) == principal(R10) and abs((g / R10).norm()) == 1 and (g / R10).is_integral()
    assert is_principal(P2) is None
    assert is_principal(principal(F3.sqrt_d), narrow=True) is None
    assert is_principal(principal(F3.sqrt_d)) is not None


def test_sqrt3_unit_orbit_has_no_totally_positive_generator():
    eps = F3(2, 1)
    assert eps.is_totally_positive()
    for k in range(-6, 7):
        for sign in (1, -1):
            assert not (sign * F3.sqrt_d * eps**k).is_totally_positive()


def test_generators_generate(rng):
    for d in (2, 3, 6, 10, 13):
        ctx = FieldContext(d)
        for _ in range(25):
            alpha = rand_elem(ctx, rng, 20, 5)
            A = principal(alpha)
            g = is_principal(A)
            assert g is not None and principal(g) == A
            gp = is_principal(A, narrow=True)
            if gp is not None:
                assert gp.is_totally_positive() and principal(gp) == A
            if alpha.is_totally_positive():
                assert gp is not None


def test_narrow_principal_implies_principal(rng):
    for d in (3, 6, 7, 10, 79):
        ctx = FieldContext(d)
        for _ in range(20):
            A = rand_ideal(ctx, rng)
            if is_principal(A, narrow=True) is not None:
                assert is_principal(A) is not None


def test_equivalent():
    assert not equivalent(P2, FractionalIdeal.unit(F10))
    assert equivalent(P2, P2.conj())
    assert equivalent(P2 * F10(1, 1), P2)


def brute_reduced(A):
    # no nonzero x in A with |x| < N(A) and |conj x| < N(A), from a generous box
    n = A.a
    e1, e2 = A.basis()
    for i in range(-3 * n, 3 * n + 1):
        for j in range(-3 * n, 3 * n + 1):
            x = i * e1 + j * e2
            if not x.is_zero() and abs(x) < n and abs(x.conj()) < n:
                return False
    return True


def test_is_reduced_examples():
    assert not is_reduced(ideal_from_gens(F10, [5, R10]))
    assert is_reduced(FractionalIdeal.unit(F10))
    assert not is_reduced(principal(F10(2)))


def test_is_reduced_against_brute_force():
    for d in (2, 5, 10, 13):
        ctx = FieldContext(d)
        for p, P in iter_prime_ideals(ctx, 30):
            for A in (P, P * P):
                if A.c == 1 and A.a <= 25:
                    assert is_reduced(A) == brute_reduced(A)


def test_reduced_cycle_members_are_reduced_and_equivalent():
    for d in (10, 79, 82):
        ctx = FieldContext(d)
        for _, P in iter_prime_ideals(ctx, 20):
            cyc = reduced_cycle(P)
            assert cyc
            for J in cyc:
                assert is_reduced(J)
                assert equivalent(J, P)


def test_prime_ideals_have_prime_norm():
    for d in (2, 5, 10, 79):
        ctx = FieldContext(d)
        for p, P in iter_prime_ideals(ctx, 40):
            assert P.norm() == p and P.is_integral()


@settings(max_examples=40, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 6))
def test_power_and_inverse(x, y, k):
    alpha = F10(x, y)
    if alpha.is_zero():
        return
    A = principal(alpha) * P2
    assert A ** 2 == principal(alpha * alpha * 2)
    assert A ** -1 == invert(A)
    assert (P2 ** k).norm() == 2**k
