from __future__ import annotations

from fractions import Fraction

import pytest

from equichern.cyclotomic import (
    Cyclotomic,
    CyclotomicError,
    cyclotomic_polynomial,
    format_cyclotomic,
    parse_cyclotomic,
    phi,
)
from equichern.qlinalg import (
    GroupAction,
    InconsistentSystemError,
    RationalMatrix,
    averaging_projector,
    equivariant_hom_dim,
    invariants,
)

import oracles


def M(rows):
    return RationalMatrix.from_rows(rows)


def test_rank_and_kernel_basics():
    ident = RationalMatrix.identity(3)
    assert ident.rank() == 3
    assert ident.kernel_basis() == ()
    m = M([[1, 1], [2, 2]])
    assert m.rank() == 1
    assert m.kernel_basis() == ((Fraction(-1), Fraction(1)),)


def test_rank_nullity_random():
    import random

    rng = random.Random(7)
    for _ in range(50):
        r, c = rng.randint(0, 5), rng.randint(0, 5)
        m = RationalMatrix(r, c, [[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)])
        assert m.rank() + len(m.kernel_basis()) == c
        assert m.rank() == oracles.brute_rank(m.data)
        for v in m.kernel_basis():
            assert all(x == 0 for x in m.apply(v))
        assert len(m.image_basis()) == m.rank()
        assert len(m.cokernel_basis()) == r - m.rank()


def test_solve():
    m = M([[1, 2], [3, 4]])
    x = m.solve((5, 11))
    assert m.apply(x) == (Fraction(5), Fraction(11))
    with pytest.raises(InconsistentSystemError):
        M([[1, 1], [1, 1]]).solve((0, 1))


def test_cokernel():
    zero = RationalMatrix.zero(3, 2)
    assert len(zero.cokernel_basis()) == 3
    surj = RationalMatrix.identity(2)
    assert surj.cokernel_basis() == ()
    col = M([[1], [1]])
    cok = col.cokernel_basis()
    assert len(cok) == 1


def _z2_swap(z2):
    swap = M([[0, 1], [1, 0]])
    return GroupAction(z2, 2, (RationalMatrix.identity(2), swap)).validate()


def test_invariants(z2):
    triv = GroupAction.trivial(z2, 2)
    assert len(invariants(triv)) == 2
    act = _z2_swap(z2)
    inv = invariants(act)
    assert len(inv) == 1
    assert inv[0] == (Fraction(1), Fraction(1))
    P = averaging_projector(act)
    assert P.mul(P) == P


def test_equivariant_hom_dim(z2):
    triv1 = GroupAction.trivial(z2, 1)
    assert equivariant_hom_dim(triv1, triv1) == 1
    swap = _z2_swap(z2)
    assert equivariant_hom_dim(swap, triv1) == 1
    sign = GroupAction(z2, 1, (RationalMatrix.identity(1), M([[-1]]))).validate()
    assert equivariant_hom_dim(sign, triv1) == 0
    # regular representation: hom(reg, V) has dim = dim V
    assert equivariant_hom_dim(swap, swap) == 2


def test_action_validation(z2):
    bad = GroupAction(z2, 1, (RationalMatrix.identity(1), M([[2]])))
    with pytest.raises(Exception):
        bad.validate()


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_product_of_cyclotomics_is_xn_minus_one():
    # prod over d | n of Phi_d == x^n - 1, exactly, for all n <= 24
    from equichern.cyclotomic import _poly_mul, divisors

    for n in range(1, 25):
        prod = [1]
        for d in divisors(n):
            prod = _poly_mul(prod, list(cyclotomic_polynomial(d)))
        expected = [0] * (n + 1)
        expected[0], expected[n] = -1, 1
        assert prod == expected, n


def test_root_relations():
    w = Cyclotomic.root(3)
    assert (w + w * w) == Cyclotomic.rational(-1)
    z8 = Cyclotomic.root(8)
    assert z8 * Cyclotomic.root(8, 3) == Cyclotomic.rational(-1)
    # Phi_N(zeta_N) = 0 for N <= 24
    for n in range(1, 25):
        poly = cyclotomic_polynomial(n)
        acc = Cyclotomic.zero(n)
        for k, c in enumerate(poly):
            if c:
                acc = acc + Cyclotomic.root(n, k) * Cyclotomic.rational(c)
        assert acc.is_zero(), n


def test_mixed_conductors():
    w3 = Cyclotomic.root(3)
    i = Cyclotomic.root(4)
    x = w3 + i
    assert x.conductor == 12
    assert (x - i - w3).is_zero()
    assert (i * i) == Cyclotomic.rational(-1)


def test_is_rational():
    w = Cyclotomic.root(5)
    s = w + Cyclotomic.root(5, 2) + Cyclotomic.root(5, 3) + Cyclotomic.root(5, 4)
    assert s.is_rational()
    assert s.as_rational() == Fraction(-1)
    assert not w.is_rational()
    with pytest.raises(CyclotomicError):
        w.as_rational()


def test_parse_and_format_cyclotomic():
    samples = [
        "1/2 + 1/2*z(3) - z(3)^2",
        "2",
        "-3/4",
        "z(8)^3",
        "1 - z(4)",
        "0",
    ]
    for s in samples:
        x = parse_cyclotomic(s)
        again = parse_cyclotomic(format_cyclotomic(x))
        assert x == again, s
    assert parse_cyclotomic("z(3) + z(3)^2") == Cyclotomic.rational(-1)
    with pytest.raises(CyclotomicError):
        parse_cyclotomic("z3 + bogus")


def test_phi():
    assert [phi(n) for n in (1, 2, 3, 4, 6, 8, 12)] == [1, 1, 2, 2, 2, 4, 4]
