import numpy as np
import pytest
from hypothesis import given, strategies as st

import coxlimits as cx
from coxlimits.errors import SliceLimitError


def brute_force_positive_roots(d, max_depth):
    """Reference closure: plain-python BFS over rounded coordinate tuples."""
    def key(v):
        return tuple(round(float(x), 6) for x in v)

    level = {key(d.simple_root(i)): d.simple_root(i) for i in range(d.rank)}
    seen = dict(level)
    depth_of = {k: 0 for k in level}
    for depth in range(1, max_depth + 1):
        nxt = {}
        for v in level.values():
            for i in range(d.rank):
                image = v - 2.0 * cx.bilinear(d, v, d.simple_root(i)) * d.simple_root(i)
                if min(image) >= -1e-9 and max(image) > 1e-9:
                    k = key(image)
                    if k not in seen:
                        nxt[k] = image
                        depth_of[k] = depth
        seen.update(nxt)
        level = nxt
    return seen, depth_of


def test_reflect_own_root_negates(twin_affine):
    a = twin_affine.simple_root(0)
    assert np.allclose(cx.reflect(twin_affine, a, a), -a)


def test_reflect_dihedral_example(aff_dihedral):
    a, b = aff_dihedral.simple_root(0), aff_dihedral.simple_root(1)
    assert np.allclose(cx.reflect(aff_dihedral, a, b), 2 * a + b)


def test_reflect_center_over_neighbor(twin_affine):
    b, c = twin_affine.simple_root(1), twin_affine.simple_root(2)
    assert np.allclose(cx.reflect(twin_affine, b, c), b + c)


def test_reflect_isotropic_vector_rejected(aff_dihedral):
    iso = aff_dihedral.simple_root(0) + aff_dihedral.simple_root(1)
    with pytest.raises(ValueError):
        cx.reflect(aff_dihedral, iso, aff_dihedral.simple_root(0))


@pytest.mark.parametrize("name", ["a2", "afftilde2", "twin_affine", "dih15"])
def test_depth_zero_slice_is_simple_basis(data_dir, name):
    d = cx.load_datum(data_dir / f"{name}.cox")
    s = cx.generate_roots(d, 0)
    assert len(s) == d.rank
    assert np.allclose(s.coords, np.eye(d.rank))


def test_dihedral_depth2_slice_matches_brute_force(aff_dihedral):
    s = cx.generate_roots(aff_dihedral, 2)
    expected = {(1, 0), (0, 1), (2, 1), (1, 2), (3, 2), (2, 3)}
    got = {tuple(int(round(x)) for x in row) for row in s.coords}
    assert got == expected


@pytest.mark.parametrize("name", ["afftilde2", "twin_affine", "tri101"])
def test_slice_agrees_with_reference_closure(data_dir, name):
    d = cx.load_datum(data_dir / f"{name}.cox")
    s = cx.generate_roots(d, 4)
    seen, depth_of = brute_force_positive_roots(d, 4)
    got = {
        tuple(round(float(x), 6) for x in s.coords[i]): int(s.depths[i])
        for i in range(len(s))
    }
    assert set(got) == set(seen)
    assert got == depth_of


@pytest.mark.parametrize("cval", [-1.0, -1.5])
def test_dihedral_slice_has_2k_plus_2_roots(cval):
    d = cx.coxeter_datum(2, [(0, 1, "inf", cval)])
    for k in range(7):
        assert len(cx.generate_roots(d, k)) == 2 * k + 2


def test_wing_cycle_square_root_in_slice(twin_affine):
    s = cx.generate_roots(twin_affine, 8)
    idx = s.index_of(np.array([6.0, 4.0, 1.0, 4.0, 6.0]))
    assert idx is not None
    assert s.depths[idx] == 8


def test_act_empty_word_is_identity(twin_affine):
    v = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    assert np.allclose(cx.act(twin_affine, (), v), v)


def test_act_wing_cycle_cubed(twin_affine):
    # (r_a r_b r_e r_d)^3 applied to c
    w = (0, 1, 4, 3) * 3
    out = cx.act(twin_affine, w, twin_affine.simple_root(2))
    assert np.allclose(out, [12, 9, 1, 9, 12], atol=1e-9)


short_word = st.lists(st.integers(min_value=0, max_value=4), max_size=6)
int_vec = st.lists(st.integers(min_value=-4, max_value=4), min_size=5, max_size=5)


@given(w=short_word, u=int_vec, v=int_vec)
def test_act_preserves_bilinear_form(w, u, v):
    d = cx.parse_datum(
        "rank 5\nbond 0 1 inf -1\nbond 3 4 inf -1\nbond 1 2 3\nbond 2 3 3\n"
    )
    u, v = np.array(u, float), np.array(v, float)
    wu, wv = cx.act(d, w, u), cx.act(d, w, v)
    assert cx.bilinear(d, wu, wv) == pytest.approx(cx.bilinear(d, u, v), abs=1e-9)


def test_inversion_set_simple_reflection(twin_affine):
    inv = cx.inversion_set(twin_affine, (0,))
    assert inv.reduced
    assert len(inv) == 1
    assert np.allclose(inv.roots[0], twin_affine.simple_root(0))


def test_inversion_set_empty_word(twin_affine):
    inv = cx.inversion_set(twin_affine, ())
    assert inv.reduced and len(inv) == 0


def test_inversion_set_dihedral_aba(aff_dihedral):
    inv = cx.inversion_set(aff_dihedral, (0, 1, 0))
    assert inv.reduced
    got = sorted(tuple(int(round(x)) for x in r) for r in inv.roots)
    assert got == [(1, 0), (2, 1), (3, 2)]


def test_inversion_set_detects_nonreduced(aff_dihedral):
    inv = cx.inversion_set(aff_dihedral, (0, 0))
    assert not inv.reduced
    assert len(inv) == 0


@given(w=st.lists(st.integers(min_value=0, max_value=2), max_size=5))
def test_inversion_set_matches_definition(w):
    d = cx.parse_datum("rank 3\nbond 0 1 3\nbond 1 2 3\nbond 0 2 3\n")
    s = cx.generate_roots(d, len(w) + 1)
    inv = cx.inversion_set(d, w)
    got = {tuple(round(float(x), 6) for x in r) for r in inv.roots}
    expected = set()
    for i in range(len(s)):
        if int(s.depths[i]) > len(w):
            continue
        image = cx.act(d, w, s.coords[i])
        if max(image) <= 1e-9:
            expected.add(tuple(round(float(x), 6) for x in s.coords[i]))
    assert got == expected
    if inv.reduced:
        assert len(inv) == len(w)


def test_support_examples(twin_affine, aff_dihedral):
    assert cx.support(twin_affine.simple_root(0)) == (0,)
    once = cx.act(twin_affine, (0, 1, 4, 3), twin_affine.simple_root(2))
    assert cx.support(once) == (0, 1, 2, 3, 4)
    assert cx.support(np.array([2.0, 1.0])) == (0, 1)


def test_full_support_root_rank_one():
    d = cx.parse_datum("rank 1\n")
    r = cx.full_support_root(d)
    assert np.allclose(r.coords, [1.0])


def test_full_support_root_rank5_wings(twin_affine):
    r = cx.full_support_root(twin_affine, start=2, order=[1, 0, 3, 4])
    assert np.allclose(r.coords, [2, 1, 1, 1, 2], atol=1e-9)
    rebuilt = cx.act(twin_affine, r.witness, twin_affine.simple_root(r.seed))
    assert np.allclose(rebuilt, r.coords, atol=1e-9)


def test_full_support_root_triangle(afftilde2):
    r = cx.full_support_root(afftilde2)
    assert len(cx.support(r.coords)) == 3


def test_full_support_root_needs_connected_graph():
    d = cx.parse_datum("rank 2\n")
    with pytest.raises(ValueError):
        cx.full_support_root(d)


@pytest.mark.parametrize("name", ["a2", "afftilde2", "dih15", "twin_affine"])
def test_slice_roots_are_unit_vectors(data_dir, name):
    d = cx.load_datum(data_dir / f"{name}.cox")
    s = cx.generate_roots(d, 6)
    norms = np.einsum("ij,jk,ik->i", s.coords, d.gram, s.coords)
    assert np.max(np.abs(norms - 1.0)) < 1e-9


@pytest.mark.parametrize("name", ["afftilde2", "twin_affine", "tri101"])
def test_witness_reproduces_root(data_dir, name):
    d = cx.load_datum(data_dir / f"{name}.cox")
    s = cx.generate_roots(d, 5)
    for i in range(len(s)):
        r = s.root(i)
        assert len(r.witness) == r.depth
        rebuilt = cx.act(d, r.witness, d.simple_root(r.seed))
        assert np.max(np.abs(rebuilt - r.coords)) < 1e-9


def test_no_duplicate_roots_within_tolerance(twin_affine):
    s = cx.generate_roots(twin_affine, 5)
    coords = s.coords
    for i in range(len(s)):
        dist = np.max(np.abs(coords - coords[i]), axis=1)
        dist[i] = np.inf
        assert dist.min() > 1e-6


@pytest.mark.parametrize("name", ["afftilde2", "twin_affine", "tri101"])
def test_root_support_is_connected(data_dir, name):
    d = cx.load_datum(data_dir / f"{name}.cox")
    s = cx.generate_roots(d, 5)
    for i in range(len(s)):
        supp = cx.support(s.coords[i], d.tolerance)
        assert len(cx.graph_components(d, supp)) == 1


def test_root_count_cap(aff_dihedral):
    with pytest.raises(SliceLimitError):
        cx.generate_roots(aff_dihedral, 10, max_roots=5)


def test_depth_cap_guard(aff_dihedral):
    with pytest.raises(SliceLimitError):
        cx.generate_roots(aff_dihedral, 50)
    s = cx.generate_roots(aff_dihedral, 50, depth_cap=64)
    assert len(s) == 2 * 50 + 2


def test_inversion_count_is_subadditive(afftilde2):
    rng = np.random.default_rng(3)
    for _ in range(20):
        w1 = tuple(int(x) for x in rng.integers(0, 3, size=rng.integers(0, 5)))
        w2 = tuple(int(x) for x in rng.integers(0, 3, size=rng.integers(0, 5)))
        n1 = len(cx.inversion_set(afftilde2, w1))
        n2 = len(cx.inversion_set(afftilde2, w2))
        n12 = len(cx.inversion_set(afftilde2, w1 + w2))
        assert n12 <= n1 + n2
