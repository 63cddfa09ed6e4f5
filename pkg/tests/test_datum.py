import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import coxlimits as cx
from coxlimits.errors import DatumError


def test_parse_affine_dihedral():
    d = cx.parse_datum("rank 2\nbond 0 1 inf -1\n")
    assert np.allclose(d.gram, [[1, -1], [-1, 1]])
    assert math.isinf(d.labels[0, 1])


def test_parse_no_bonds_gives_identity_gram():
    d = cx.parse_datum("rank 2\n")
    assert np.allclose(d.gram, np.eye(2))


def test_parse_triangle_of_3_bonds():
    d = cx.parse_datum("rank 3\nbond 0 1 3\nbond 1 2 3\nbond 0 2 3\n")
    off = d.gram[~np.eye(3, dtype=bool)]
    assert np.allclose(off, -0.5)


def test_parse_comments_and_names():
    d = cx.parse_datum("# header\nrank 2  # trailing\nname 0 left\nbond 0 1 inf\n")
    assert d.name(0) == "left"
    assert d.gram[0, 1] == -1.0


def test_parse_infinite_bond_default_value_is_minus_one():
    d = cx.parse_datum("rank 2\nbond 0 1 inf\n")
    assert d.gram[0, 1] == -1.0


@pytest.mark.parametrize(
    "text",
    [
        "bond 0 1 3\n",  # bond before rank
        "rank 2\nbond 0 1 1\n",  # label below 2
        "rank 2\nbond 0 1 inf -0.5\n",  # infinite bond above -1
        "rank 2\nbond 0 1 3\nbond 1 0 4\n",  # asymmetric duplicate
        "rank 2\nbond 0 0 3\n",  # self bond
        "rank 2\nfrob 1 2\n",  # unknown directive
        "rank 2\nbond 0 5 3\n",  # index out of range
        "",  # missing rank
        "rank 2\nbond 0 1 three\n",  # unparsable
    ],
)
def test_parse_rejects_bad_input(text):
    with pytest.raises(DatumError):
        cx.parse_datum(text)


def test_bilinear_simple_roots_are_unit(twin_affine):
    for i in range(twin_affine.rank):
        e = twin_affine.simple_root(i)
        assert cx.bilinear(twin_affine, e, e) == pytest.approx(1.0)


def test_bilinear_center_against_wing_sum(twin_affine):
    c = twin_affine.simple_root(2)
    v = twin_affine.simple_root(0) + twin_affine.simple_root(1) + twin_affine.simple_root(3) + twin_affine.simple_root(4)
    assert cx.bilinear(twin_affine, c, v) == pytest.approx(-1.0)


def test_bilinear_dihedral_cross_value(aff_dihedral):
    assert cx.bilinear(
        aff_dihedral, np.array([2.0, 1.0]), np.array([1.0, 2.0])
    ) == pytest.approx(-1.0)


def test_bilinear_dimension_mismatch(twin_affine):
    with pytest.raises(ValueError):
        cx.bilinear(twin_affine, np.ones(3), np.ones(5))


def test_graph_components_two_wings(twin_affine):
    assert cx.graph_components(twin_affine, [0, 1, 3, 4]) == [(0, 1), (3, 4)]


def test_graph_components_singleton(twin_affine):
    assert cx.graph_components(twin_affine, [2]) == [(2,)]


def test_graph_components_triangle_is_connected(afftilde2):
    assert cx.graph_components(afftilde2, [0, 1, 2]) == [(0, 1, 2)]


def test_graph_components_empty():
    d = cx.parse_datum("rank 2\n")
    assert cx.graph_components(d, []) == []


def test_component_blocks_are_pairwise_disconnected(twin_affine):
    blocks = cx.graph_components(twin_affine, range(twin_affine.rank))
    for a in blocks:
        for b in blocks:
            if a is b:
                continue
            for i in a:
                for j in b:
                    assert abs(twin_affine.gram[i, j]) <= twin_affine.tolerance


@pytest.mark.parametrize(
    "name", ["a2", "b2", "h3", "afftilde1", "afftilde2", "dih15", "twin_affine", "tri101"]
)
def test_gram_symmetric_unit_diagonal(data_dir, name):
    d = cx.load_datum(data_dir / f"{name}.cox")
    assert np.allclose(d.gram, d.gram.T)
    assert np.allclose(np.diag(d.gram), 1.0)


coords = st.lists(st.integers(min_value=-5, max_value=5), min_size=5, max_size=5)


@given(u=coords, v=coords, w=coords, lam=st.integers(min_value=-3, max_value=3))
def test_bilinear_is_symmetric_and_bilinear(u, v, w, lam):
    d = cx.parse_datum(
        "rank 5\nbond 0 1 inf -1\nbond 3 4 inf -1\nbond 1 2 3\nbond 2 3 3\n"
    )
    u, v, w = np.array(u, float), np.array(v, float), np.array(w, float)
    assert cx.bilinear(d, u, v) == pytest.approx(cx.bilinear(d, v, u))
    assert cx.bilinear(d, u + lam * w, v) == pytest.approx(
        cx.bilinear(d, u, v) + lam * cx.bilinear(d, w, v)
    )
