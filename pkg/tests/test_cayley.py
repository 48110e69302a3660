import random

import pytest

from dualdefect.cayley import (
    DimensionError,
    NotSimplexImage,
    TooLarge,
    apply_frame,
    cayley_sum,
    decompose_along,
    enumerate_simplex_projections,
    is_join_type,
    join_type_wrt,
    projection_for_partition,
)
from dualdefect.config import GroupHom, PointConfig, is_normalized

from conftest import EX58_U, EX58_V, unit_vector


def proj_last(m, r):
    """Projection of Z^{m+r} onto the last r coordinates."""
    if r == 0:
        return GroupHom.zero_map(m)
    rows = [[0] * m + [1 if j == i else 0 for j in range(r)]
            for i in range(r)]
    return GroupHom.make(rows, None, m + r)


def test_cayley_sum_segre(segre_square):
    s01 = PointConfig.make([(0,), (1,)])
    assert cayley_sum([s01, s01]).points == segre_square.points


def test_cayley_sum_single_fiber(segre_square):
    assert cayley_sum([segre_square]).points == segre_square.points


def test_cayley_sum_ex5_7_size(ex5_7):
    assert len(ex5_7) == 14 and ex5_7.dim == 5


def test_cayley_sum_dimension_mismatch():
    with pytest.raises(DimensionError):
        cayley_sum([PointConfig.make([(0,)]), PointConfig.make([(0, 0)])])


def test_is_join_type_examples():
    s01 = PointConfig.make([(0,), (1,)])
    assert is_join_type([s01, s01]) is False
    singleton = PointConfig.make([(5,)], dim=1)
    assert is_join_type([singleton, s01]) is True
    assert is_join_type([PointConfig.make([(0, 0)])] * 3) is True


def test_is_join_type_ex58_pi1_image_fibers():
    # spans <f5>, <f2-f1>, <f4-f3> inside Z^5
    f = lambda i: list(unit_vector(i, 5))
    fib0 = PointConfig.make([(0,) * 5, tuple(f(5)), tuple(2 * x for x in f(5))])
    fib1 = PointConfig.make([tuple(f(1)), tuple(f(2))])
    fib2 = PointConfig.make([tuple(f(3)), tuple(f(4))])
    assert is_join_type([fib0, fib1, fib2]) is True


def test_decompose_segre_pr2(segre_square):
    st = decompose_along(segre_square, GroupHom.make([[0, 1]]))
    assert st.r == 1
    assert [fb.points for fb in st.fibers] == [((0,), (1,)), ((0,), (1,))]


def test_decompose_zero_map(segre_square):
    st = decompose_along(segre_square, GroupHom.zero_map(2))
    assert st.r == 0
    assert st.parts == (tuple(range(4)),)
    assert st.fibers[0].points == segre_square.points


def test_decompose_ex5_8(ex5_8):
    pi = GroupHom.make([[1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0]])
    st = decompose_along(ex5_8, pi)
    assert st.r == 2
    assert {pi.apply(p) for p in ex5_8.points} == {(0, 0), (1, 0), (0, 1)}
    psets = {frozenset(ex5_8.points[i] for i in part) for part in st.parts}
    e = lambda i: unit_vector(i, 6)
    assert psets == {
        frozenset([(0,) * 6, e(5), e(6)]),
        frozenset([e(1), e(2), EX58_U]),
        frozenset([e(3), e(4), EX58_V]),
    }
    assert set(apply_frame(st).points) == set(cayley_sum(st.fibers).points)


def test_decompose_rejects_non_simplex_image(segre_square):
    # full identity: image is the square itself, not a simplex
    with pytest.raises(NotSimplexImage):
        decompose_along(segre_square, GroupHom.identity_map(2))


def test_join_type_wrt_ex5_8(ex5_8):
    pi1 = GroupHom.make([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 2],
    ])
    pi2 = GroupHom.make([[1, 1, 0, 0, 0], [0, 0, 1, 1, 0]])
    assert join_type_wrt(ex5_8, pi1, pi2) is True
    assert join_type_wrt(ex5_8, pi1, GroupHom.zero_map(5)) is True


def test_join_type_wrt_ex5_7(ex5_7):
    # pi1 the projection killing the first two coordinates, pi2 identity
    pi1 = GroupHom.make([[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    pi2 = GroupHom.identity_map(3)
    assert join_type_wrt(ex5_7, pi1, pi2) is True


def test_enumerate_two_points():
    structs = enumerate_simplex_projections(PointConfig.make([(0,), (1,)]))
    assert sorted(st.r for st in structs) == [0, 1]


def test_enumerate_single_point():
    structs = enumerate_simplex_projections(PointConfig.make([()], dim=0))
    assert len(structs) == 1 and structs[0].r == 0


def test_enumerate_segre(segre_square):
    structs = enumerate_simplex_projections(segre_square)
    kers = [tuple(map(tuple, st.kernel_lattice()))
            for st in structs if st.r == 1]
    assert ((0, 1),) in kers and ((1, 0),) in kers
    assert any(st.r == 0 for st in structs)
    # kernels pairwise distinct (duplicate-free guarantee)
    all_kers = [tuple(map(tuple, st.kernel_lattice())) for st in structs]
    assert len(all_kers) == len(set(all_kers))


def test_enumerate_limit_guard(ex5_7):
    with pytest.raises(TooLarge):
        enumerate_simplex_projections(ex5_7, limit=10)


def test_enumerate_structures_are_valid(segre_square):
    for st in enumerate_simplex_projections(segre_square):
        redone = decompose_along(segre_square, st.pi)
        assert redone.parts == st.parts
        assert sorted(i for p in st.parts for i in p) == list(range(4))


def test_roundtrip_cayley_then_decompose():
    rng = random.Random(3)
    done = 0
    while done < 30:
        r = rng.randint(0, 2)
        m = rng.randint(1, 2)
        fibs = []
        for _ in range(r + 1):
            pts = set()
            while len(pts) < rng.randint(1, 3):
                pts.add(tuple(rng.randint(-2, 2) for _ in range(m)))
            fibs.append(PointConfig.make(sorted(pts), dim=m))
        cs = cayley_sum(fibs)
        if not is_normalized(cs):
            continue
        st = decompose_along(cs, proj_last(m, r))
        assert st.r == r

        def norm(f):
            base = f.points[0]
            return sorted(tuple(x - y for x, y in zip(p, base))
                          for p in f.points)

        assert sorted(map(norm, st.fibers)) == sorted(map(norm, fibs))
        done += 1


def test_coarsening_preserves_join_type():
    # two join-type fibers in disjoint blocks; the coarsening to r = 0
    # merges them into one fiber whose single-summand family is join type
    f0 = PointConfig.make([(0, 0), (1, 0), (2, 0)])
    f1 = PointConfig.make([(0, 0), (0, 1), (0, 2)])
    assert is_join_type([f0, f1])
    cs = cayley_sum([f0, f1])
    fine = decompose_along(cs, proj_last(2, 1))
    assert is_join_type(fine.fibers)
    coarse = decompose_along(cs, GroupHom.zero_map(3))
    assert is_join_type(coarse.fibers)
    # nested kernels as required for a coarsening
    from dualdefect.exact_linalg import lattice_leq
    assert lattice_leq(fine.kernel_lattice(), coarse.kernel_lattice())


def test_projection_for_partition_rejects_bad_partition(segre_square):
    # opposite corners cannot be separated by an integer linear functional
    # constant on each part
    parts = ((0, 3), (1, 2))
    assert projection_for_partition(segre_square, parts) is None
