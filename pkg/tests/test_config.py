import json
import random
import warnings

import pytest

from dualdefect.config import (
    CollapseError,
    GroupHom,
    PointConfig,
    affine_equivalent,
    apply_affine,
    difference_lattice,
    dump_config_json,
    is_normalized,
    load_config_json,
    load_config_text,
    normalize,
)
from dualdefect.exact_linalg import identity, snf

from conftest import EX58_U, EX58_V, random_unimodular, unit_vector


def test_normalize_collinear_points():
    a = PointConfig.make([(0, 0), (2, 0), (4, 0)])
    b, theta = normalize(a)
    assert b.dim == 1 and b.points == ((0,), (1,), (2,))
    assert [theta.apply(p) for p in b.points] == [(0, 0), (2, 0), (4, 0)]


def test_normalize_full_lattice_is_identity(segre_square):
    b, theta = normalize(segre_square)
    assert b == PointConfig(2, segre_square.points, segre_square.name)
    assert theta.matrix == ((1, 0), (0, 1))
    assert theta.translation is None


def test_normalize_single_point():
    b, theta = normalize(PointConfig.make([(1, 1)]))
    assert b.dim == 0 and b.points == ((),)
    assert theta.apply(()) == (1, 1)


def test_normalize_idempotent():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 3)
        pts = {tuple(rng.randint(-4, 4) for _ in range(n))
               for _ in range(rng.randint(2, 6))}
        a = PointConfig.make(sorted(pts))
        b, _ = normalize(a)
        b2, theta2 = normalize(b)
        assert b2 == b
        assert theta2.matrix == tuple(map(tuple, identity(b.dim)))


def test_difference_lattice_examples(segre_square):
    assert difference_lattice(segre_square) == identity(2)
    assert difference_lattice(PointConfig.make([(0,), (2,)])) == [[2]]
    assert difference_lattice(PointConfig.make([(3, 7)])) == []


def test_difference_lattice_snf_identity_after_normalize():
    a = PointConfig.make([(0, 0), (2, 0), (0, 3), (2, 3)])
    b, _ = normalize(a)
    d = difference_lattice(b)
    s, _, _ = snf(d)
    assert all(s[i][i] == 1 for i in range(len(d)))


def test_affine_equivalent_translation(segre_square):
    b = segre_square.translate((3, -2))
    w = affine_equivalent(segre_square, b)
    assert w is not None
    assert {w.apply(p) for p in segre_square.points} == set(b.points)


def test_affine_equivalent_negative():
    a = PointConfig.make([(0,), (1,), (2,)])
    b = PointConfig.make([(0,), (1,), (3,)])
    assert affine_equivalent(a, b) is None


def test_affine_equivalent_random_witness_fuzz():
    rng = random.Random(17)
    for _ in range(60):
        n = rng.randint(1, 4)
        pts = set()
        while len(pts) < rng.randint(2, 7):
            pts.add(tuple(rng.randint(-3, 3) for _ in range(n)))
        a = PointConfig.make(sorted(pts))
        u = random_unimodular(rng, n)
        t = [rng.randint(-4, 4) for _ in range(n)]
        b = apply_affine(a, GroupHom.make(u, t))
        w = affine_equivalent(a, b)
        assert w is not None
        if is_normalized(a):
            assert {w.apply(p) for p in a.points} == set(b.points)
        # symmetric and reflexive
        assert affine_equivalent(b, a) is not None
        assert affine_equivalent(a, a) is not None


def test_affine_equivalent_transitive_witnesses():
    rng = random.Random(23)
    a = PointConfig.make([(0, 0), (1, 0), (0, 1), (2, 1), (1, 2)])
    u1 = random_unimodular(rng, 2)
    u2 = random_unimodular(rng, 2)
    b = apply_affine(a, GroupHom.make(u1, (1, -1)))
    c = apply_affine(b, GroupHom.make(u2, (0, 3)))
    wab = affine_equivalent(a, b)
    wbc = affine_equivalent(b, c)
    composed = wbc.compose(wab)
    assert {composed.apply(p) for p in a.points} == set(c.points)


def test_apply_affine_identity(segre_square):
    out = apply_affine(segre_square, GroupHom.identity_map(2))
    assert out.points == segre_square.points


def test_apply_affine_ex58_pi1_images(ex5_8):
    pi1 = GroupHom.make([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 2],
    ])
    img = apply_affine(ex5_8, pi1)
    f5 = unit_vector(5, 5)
    part0 = {pi1.apply((0,) * 6), pi1.apply(unit_vector(5, 6)),
             pi1.apply(unit_vector(6, 6))}
    assert part0 == {(0,) * 5, f5, tuple(2 * x for x in f5)}
    assert len(img) == 9


def test_apply_affine_collapse(segre_square):
    pr2 = GroupHom.make([[0, 1]])
    with pytest.raises(CollapseError):
        apply_affine(segre_square, pr2)
    merged = apply_affine(segre_square, pr2, dedupe=True)
    assert merged.points == ((0,), (1,))


def test_difference_lattice_unimodular_covariance():
    rng = random.Random(31)
    a = PointConfig.make([(0, 0), (2, 0), (0, 2)])
    u = random_unimodular(rng, 2)
    b = apply_affine(a, GroupHom.make(u))
    db = difference_lattice(b)
    # image of the lattice under u (rows transform by right-multiplication)
    from dualdefect.exact_linalg import hnf_basis, mat_mul, transpose
    da_img = hnf_basis(mat_mul(difference_lattice(a), transpose(u)))
    assert db == da_img


def test_dedupe_warning():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        a = PointConfig.make([(0, 0), (0, 0), (1, 0)])
    assert len(a) == 2
    assert any("repeated" in str(w.message) for w in rec)


def test_json_roundtrip(segre_square):
    text = dump_config_json(PointConfig(2, segre_square.points, "sq"))
    back = load_config_json(text)
    assert back.points == segre_square.points and back.name == "sq"


def test_text_format_comments_and_blanks():
    cfg = load_config_text("0 0  # origin\n\n1 0\n# full line comment\n0 1\n")
    assert cfg.points == ((0, 0), (0, 1), (1, 0))


def test_text_format_empty_rejected():
    with pytest.raises(ValueError):
        load_config_text("# nothing here\n")


def test_json_missing_points_rejected():
    with pytest.raises(ValueError):
        load_config_json(json.dumps({"name": "x"}))
