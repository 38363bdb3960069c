from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rand_elem
from rmtori.field import FieldContext, FieldError, cf_expand
from rmtori.ideal import ideal_from_gens
from rmtori.lattice import (
    Lattice,
    LatticeError,
    Order,
    canonical_form,
    classify_multiplier,
    colon,
    contains,
    end_order,
    hom_module,
    homothety_witness,
    is_homothetic,
    multiplier_matrix,
    multiplier_ring,
    normal_basis,
    reduction_cycle,
)

F2, F5, F10 = FieldContext(2), FieldContext(5), FieldContext(10)
R2, R10 = F2.sqrt_d, F10.sqrt_d


def rand_lattice(ctx, rng, span=6, den=4):
    while True:
        w1 = rand_elem(ctx, rng, span, den)
        w2 = rand_elem(ctx, rng, span, den)
        if not (w2 / w1).is_rational():
            return normal_basis(w1, w2)


def brute_conductor(L, limit=20000):
    w = L.ctx.omega
    gens = (L.w1, L.w2)
    for f in range(1, limit):
        if all(f * w * g in L for g in gens):
            return f
    raise AssertionError("no conductor found")


def is_rotation(p, q):
    return len(p) == len(q) and any(p[i:] + p[:i] == q for i in range(len(p)))


def serret_equivalent(L, M):
    """GL2(Z)-equivalence of generator ratios: same periodic tail up to rotation."""
    return is_rotation(cf_expand(L.w2 / L.w1).period, cf_expand(M.w2 / M.w1).period)


def test_normal_basis_examples():
    base = normal_basis(F2(1), R2)
    assert normal_basis(F2(1), R2 + 3).hnf == base.hnf
    assert normal_basis(F2(2), 2 * R2).hnf != base.hnf
    assert normal_basis(R2, F2(2)) == normal_basis(F2(2), R2)
    assert normal_basis(F2(2), 2 * R2).hnf.index() == 4


def test_normal_basis_rejects_degenerate():
    with pytest.raises(LatticeError):
        normal_basis(F2(1), F2(3))
    with pytest.raises(LatticeError):
        normal_basis(R2, 3 * R2)
    with pytest.raises(LatticeError):
        normal_basis(F2(0), R2)
    with pytest.raises(FieldError):
        normal_basis(F2(1), F5.sqrt_d)


def test_contains_examples():
    L = normal_basis(F2(1), R2)
    assert contains(L, F2(3, -5))
    assert not contains(L, F2(Fraction(1, 2)))
    assert not contains(L, R2 / 2)


def test_contains_matches_integer_solve(rng):
    for _ in range(200):
        L = rand_lattice(F10, rng)
        i, j = rng.randint(-9, 9), rng.randint(-9, 9)
        x = i * L.w1 + j * L.w2
        assert contains(L, x)
        assert not contains(L, x + L.w1 / 2)


def test_hnf_shape(rng):
    for ctx in (F2, F5, F10):
        for _ in range(100):
            L = rand_lattice(ctx, rng).hnf
            assert L.q > 0 and L.a > 0 and L.c > 0 and 0 <= L.b < L.a
            assert Lattice.from_gens(ctx, L.basis()) == L


def test_end_order_examples():
    assert end_order(normal_basis(F5(1), F5.sqrt_d)).order.conductor == 2
    assert end_order(normal_basis(F5(1), F5.omega)).order.conductor == 1
    assert end_order(normal_basis(F2(1), R2)).order == Order(F2, 1)


def test_end_order_matches_brute_force(rng):
    for ctx in (F2, F5, F10, FieldContext(13)):
        for _ in range(40):
            L = rand_lattice(ctx, rng)
            order, (m,) = end_order(L)
            assert order.conductor == brute_conductor(L)
            a, b, c, d = m.a, m.b, m.c, m.d
            assert m.alpha * L.w1 == a * L.w1 + b * L.w2
            assert m.alpha * L.w2 == c * L.w1 + d * L.w2


def test_end_order_is_homothety_invariant(rng):
    for _ in range(50):
        L = rand_lattice(F10, rng)
        lam = rand_elem(F10, rng)
        assert end_order(L.scale(lam)).order == end_order(L).order


def test_multiplier_matrix_rejects_non_multipliers():
    L = normal_basis(F5(1), F5.sqrt_d)
    with pytest.raises(LatticeError):
        multiplier_matrix(L, F5.omega)


def test_hom_module_examples():
    O = Order(F10, 1).lattice
    p2 = ideal_from_gens(F10, [2, R10]).hnf
    assert hom_module(O, O) == O
    assert hom_module(O, p2) == p2
    inv = hom_module(p2, O)
    assert inv == Lattice.from_gens(F10, [1, R10 / 2])
    assert inv * p2 == O


def _grid(ctx, den, span):
    for u, v in product(range(-span, span + 1), repeat=2):
        yield ctx.from_coords(Fraction(u, den), Fraction(v, den))


def test_hom_module_against_grid(rng):
    for ctx in (F2, F5, F10):
        for _ in range(6):
            L, M = rand_lattice(ctx, rng, 4, 3), rand_lattice(ctx, rng, 4, 3)
            H = hom_module(L, M)
            for alpha in _grid(ctx, 6, 8):
                brute = alpha * L.w1 in M and alpha * L.w2 in M
                assert (alpha in H) == brute


def test_classify_multiplier():
    L = normal_basis(F2(1), R2)
    assert classify_multiplier(L, L, R2).is_morphism
    info = classify_multiplier(L, L, -R2)
    assert info.in_module and not info.positive and not info.is_morphism
    assert not classify_multiplier(L, L, R2 / 2).in_module


def test_colon_contract(rng):
    for _ in range(60):
        L = rand_lattice(F10, rng).hnf
        M = rand_lattice(F10, rng).hnf
        T = colon(M, L)
        prod = T * L
        assert prod.intersect(M) == prod


def test_is_homothetic_examples():
    L = normal_basis(F2(1), R2)
    beta = is_homothetic(L, L.scale(R2))
    assert beta is not None and L.hnf.scale(beta) == L.scale(R2).hnf
    assert is_homothetic(normal_basis(F10(1), R10), normal_basis(F10(2), R10)) is None
    M = normal_basis(F2(1), R2 / 2)
    beta = is_homothetic(L, M)
    assert beta is not None and L.hnf.scale(beta) == M.hnf
    # the reverse direction is carried by sqrt(2) itself
    assert M.scale(R2) == L


def test_is_homothetic_against_serret(rng):
    agree = 0
    for ctx in (F2, F5, F10, FieldContext(79)):
        for _ in range(40):
            L = rand_lattice(ctx, rng)
            M = rand_lattice(ctx, rng) if rng.random() < 0.5 else L.scale(rand_elem(ctx, rng))
            beta = is_homothetic(L, M)
            assert (beta is not None) == serret_equivalent(L, M)
            assert (homothety_witness(L.hnf, M.hnf) is not None) == (beta is not None)
            if beta is not None:
                assert beta > 0 and L.hnf.scale(beta) == M.hnf
                agree += 1
    assert agree >= 40


@settings(max_examples=60, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 4))
def test_gl2_change_of_basis_is_invisible(p, r, s, t, k):
    # any integer basis change of determinant +-1 spans the same lattice
    if abs(p * t - r * s) != 1:
        return
    L = normal_basis(F10(1, 1) / k, F10(3, -2))
    M = normal_basis(p * L.w1 + r * L.w2, s * L.w1 + t * L.w2)
    assert M == L
    assert is_homothetic(L, M) == 1


def test_reduction_cycle_scales(rng):
    for _ in range(40):
        L = rand_lattice(F10, rng).hnf
        cyc = reduction_cycle(L)
        for xi, scale in cyc.steps:
            assert xi > 1 and -1 < xi.conj() < 0
            assert Lattice.from_gens(F10, [scale, scale * xi]) == L
        assert abs(cyc.unit.norm()) == 1 and cyc.unit > 1


def test_canonical_form_invariants(rng):
    for _ in range(40):
        L = rand_lattice(F5, rng).hnf
        J, s = canonical_form(L)
        assert s > 0 and J.scale(s) == L
        assert canonical_form(L.scale(rand_elem(F5, rng)))[0] == J


def test_multiplier_ring_of_orders():
    for f in (1, 2, 3, 6):
        assert multiplier_ring(Order(F10, f).lattice).conductor == f
