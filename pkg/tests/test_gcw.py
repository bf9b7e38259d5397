from __future__ import annotations

import pytest

from equichern.gcw import (
    GcwError,
    builtin_examples,
    euler_check,
    fixed_point_chain,
    format_gcw,
    homology_with_action,
    orbit_complex,
    parse_gcw,
    point_complex,
    quotient_chain,
)
from equichern.groups import (
    generated_subgroup,
    subgroup,
    subgroup_conjugacy_classes,
    trivial_subgroup,
)
from equichern.qlinalg import invariants

import oracles


def test_point_and_orbit(s3):
    X = point_complex(s3)
    assert X.dim == 0
    for cls in subgroup_conjugacy_classes(s3).classes:
        f = fixed_point_chain(X, cls.rep)
        assert f.dims == (1,)
        h = homology_with_action(f)
        assert h.dims == (1,)
    c3 = generated_subgroup(s3, [3])
    Y = orbit_complex(s3, c3)
    f = fixed_point_chain(Y, trivial_subgroup(s3))
    assert f.dims == (2,)  # |G/C3| = 2 points


def test_parse_round_trip(z2):
    X = builtin_examples("reflection_circle")
    text = format_gcw(X)
    Y = parse_gcw(text, X.group)
    assert Y.dim == X.dim
    assert [c.ident for c in Y.cells[0]] == [c.ident for c in X.cells[0]]
    assert Y.boundaries[1] == X.boundaries[1]


def test_parse_errors(z2, s3):
    base = "gcw t\ngroup z2\ndim 1\ncells 0: a iso={0,1}\ncells 1: e iso={0}\n"
    with pytest.raises(GcwError, match="integers"):
        parse_gcw(base + "boundary e = 1/2*(a, 0)\n", z2)
    with pytest.raises(GcwError, match="unknown target"):
        parse_gcw(base + "boundary e = 1*(zz, 0)\n", z2)
    # invalid morphism: element 1 of S3 does not conjugate C3 into C2
    bad = (
        "gcw t\ngroup s3\ndim 1\n"
        "cells 0: a iso={0,1}\n"
        "cells 1: e iso={0,3,4}\n"
        "boundary e = 1*(a, 0)\n"
    )
    with pytest.raises(GcwError, match="invalid morphism"):
        parse_gcw(bad, s3)


def test_d_squared_negative_control(z2):
    # a 2-cell glued so that d(d(f)) != 0
    text = (
        "gcw bad\ngroup z2\ndim 2\n"
        "cells 0: a iso={0,1}; b iso={0,1}\n"
        "cells 1: e iso={0,1}\n"
        "cells 2: f iso={0,1}\n"
        "boundary e = 1*(a, 0) - 1*(b, 0)\n"
        "boundary f = 1*(e, 0)\n"
    )
    with pytest.raises(GcwError, match="d∘d != 0 at cell f"):
        parse_gcw(text, __import__("equichern.data", fromlist=["bundled_group"]).bundled_group("z2"))


def test_reflection_circle_fixed_points(z2):
    X = builtin_examples("reflection_circle")
    triv = trivial_subgroup(z2)
    f = fixed_point_chain(X, triv)
    assert f.dims == (2, 2)
    assert f.boundaries[1].rank() == 1
    h = homology_with_action(f)
    assert h.dims == (1, 1)  # the circle
    full = subgroup(z2, (0, 1))
    f2 = fixed_point_chain(X, full)
    assert f2.dims == (2, 0)
    assert homology_with_action(f2).dims == (2, 0)  # two fixed points


def test_reflection_circle_quotients(z2):
    X = builtin_examples("reflection_circle")
    q = quotient_chain(X, trivial_subgroup(z2))
    assert q.dims == (2, 1)
    assert [list(r) for r in q.boundaries[1].data] == [[1], [-1]]
    h = homology_with_action(q)
    assert h.dims == (1, 0)  # the arc
    full = subgroup(z2, (0, 1))
    q2 = quotient_chain(X, full)
    assert q2.dims == (2, 0)
    h2 = homology_with_action(q2)
    assert h2.dims == (2, 0)
    # trivial Weyl action
    assert h2.actions[0].group.order == 1


def test_s3_triangle(s3):
    X = builtin_examples("s3_triangle")
    triv = trivial_subgroup(s3)
    f = fixed_point_chain(X, triv)
    assert f.dims == (6, 6)  # the hexagon
    assert homology_with_action(f).dims == (1, 1)
    q = quotient_chain(X, triv)
    assert q.dims == (2, 1)
    assert homology_with_action(q).dims == (1, 0)
    # at a reflection subgroup: two fixed points, trivial Weyl group
    c2 = generated_subgroup(s3, [1])
    f2 = fixed_point_chain(X, c2)
    assert f2.dims == (2, 0)
    q2 = quotient_chain(X, c2)
    assert q2.dims == (2, 0)
    # at C3 and S3: empty
    c3 = generated_subgroup(s3, [3])
    assert fixed_point_chain(X, c3).dims == (0, 0)
    assert quotient_chain(X, c3).dims == (0, 0)


def test_dihedral_polygon(d4):
    X = builtin_examples("dihedral_polygon")
    triv = trivial_subgroup(d4)
    f = fixed_point_chain(X, triv)
    assert f.dims == (8, 8)  # the octagon
    assert homology_with_action(f).dims == (1, 1)
    # each reflection class fixes two cells of its own orbit
    diag = generated_subgroup(d4, [1])
    axis = generated_subgroup(d4, [2])
    assert fixed_point_chain(X, diag).dims == (2, 0)
    assert fixed_point_chain(X, axis).dims == (2, 0)
    # the quotient identifies the two fixed points of a diagonal reflection
    assert quotient_chain(X, diag).dims == (1, 0)
    assert quotient_chain(X, axis).dims == (1, 0)
    # the center fixes nothing
    center = generated_subgroup(d4, [5])
    assert fixed_point_chain(X, center).dims == (0, 0)


def test_quotient_dims_match_sub_morphism_counts(s3):
    # dim of quotient_chain degree n = sum_i |mor_Sub(H, H_i)|
    from equichern.eicat import sub_mors_raw

    X = builtin_examples("s3_triangle")
    ct = subgroup_conjugacy_classes(s3)
    for cls in ct.classes:
        q = quotient_chain(X, cls.rep)
        for n in range(X.dim + 1):
            expected = sum(
                len(sub_mors_raw(s3, cls.rep, cell.iso)) for cell in X.cells[n]
            )
            assert q.dims[n] == expected


def test_quotient_homology_matches_raw_cw_oracle(groups):
    """The Sub(G,F) pipeline agrees with a raw centralizer-quotient CW oracle."""
    for name in ("reflection_circle", "s3_triangle", "dihedral_polygon"):
        X = builtin_examples(name)
        G = X.group
        for cls in subgroup_conjugacy_classes(G).classes:
            q = quotient_chain(X, cls.rep)
            h = homology_with_action(q)
            oracle = oracles.quotient_cw_homology_dims(X, cls.rep.elems)
            assert list(h.dims) == oracle, (name, cls.rep.literal())


def test_actions_commute_and_characters_basis_independent(s3):
    X = builtin_examples("s3_triangle")
    c3 = generated_subgroup(s3, [3])
    # exercised at an object with nontrivial Weyl group: the orbit S3/C3
    Y = orbit_complex(s3, c3)
    q = quotient_chain(Y, c3)
    assert q.dims == (2,)
    W = q.actions[0].group
    assert W.order == 2
    h = homology_with_action(q)
    # H_0 is the regular representation of W = Z/2: character (2, 0)
    assert h.characters[0] == (2, 0)
    assert len(invariants(h.actions[0])) == 1


def test_euler_checks(groups):
    for name in ("reflection_circle", "s3_triangle", "dihedral_polygon"):
        X = builtin_examples(name)
        report = euler_check(X)
        for _lit, chain_euler, hom_euler in report:
            assert chain_euler == hom_euler
    X = point_complex(groups["s3"])
    for _lit, a, b in euler_check(X):
        assert a == b == 1


def test_fixed_point_chain_full_cellular(s3):
    # at H = 1 the chain complex has one basis element per cell per coset
    X = builtin_examples("s3_triangle")
    f = fixed_point_chain(X, trivial_subgroup(s3))
    for n in range(X.dim + 1):
        expected = sum(6 // cell.iso.order for cell in X.cells[n])
        assert f.dims[n] == expected
