"""Cayley sums and their combinatorics.

Construction of Cayley sums, decomposition of a configuration along a
projection whose image is a unimodular simplex, join-type predicates, and
exhaustive enumeration of all simplex-image projections of a small
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import GroupHom, PointConfig, difference_lattice, is_normalized
from .exact_linalg import (
    IntMat,
    det,
    hnf_basis,
    identity,
    kernel_basis_int,
    mat_vec,
    rank_int,
    solve_int,
    solve_int_left,
    transpose,
)


class DimensionError(ValueError):
    """Fibers of a Cayley sum must share one ambient dimension."""


class NotSimplexImage(ValueError):
    """The projection image is not a unimodular simplex {0, e_1, ..., e_r}."""


class TooLarge(ValueError):
    """Configuration exceeds the exhaustive enumeration limit."""


def _simplex_vertex(i: int, r: int) -> tuple[int, ...]:
    """Vertex i of {0, e_1, ..., e_r}; vertex 0 is the origin."""
    return tuple(1 if j == i - 1 else 0 for j in range(r))


@dataclass(frozen=True)
class CayleyStructure:
    """A realization of a configuration as a Cayley sum.

    base is the ambient configuration, parts a partition of its point
    indices, pi the projection with simplex image, fibers the translated
    preimages A_i, and section_frame the isomorphism f of the ambient
    lattice onto Z^{n-r} x Z^r carrying base onto cayley_sum(fibers).
    g is the affine automorphism of the codomain with g(pi(part i)) =
    vertex i, so pr2 composed with section_frame equals g composed with pi.
    """

    base: PointConfig
    r: int
    parts: tuple[tuple[int, ...], ...]
    pi: GroupHom
    fibers: tuple[PointConfig, ...]
    section_frame: GroupHom
    g: GroupHom

    def __post_init__(self):
        assert self.r + 1 == len(self.parts) == len(self.fibers)
        assert sorted(i for p in self.parts for i in p) == list(range(len(self.base)))

    def kernel_lattice(self) -> IntMat:
        return self.pi.kernel_lattice()


def cayley_sum(fibers) -> PointConfig:
    """(A_0 x {0}) u (A_1 x {e_1}) u ... u (A_r x {e_r})."""
    fibers = list(fibers)
    assert fibers, "need at least one fiber"
    m = fibers[0].dim
    if any(f.dim != m for f in fibers):
        raise DimensionError("fibers live in different ambient dimensions")
    r = len(fibers) - 1
    if r == 0:
        return fibers[0]
    pts = []
    for i, f in enumerate(fibers):
        tail = _simplex_vertex(i, r)
        pts.extend(p + tail for p in f.points)
    return PointConfig(m + r, tuple(sorted(pts)))


def is_join_type(fibers) -> bool:
    """Whether the difference lattices of the fibers sum directly.

    Decided over Q: the sum of the spans has dimension equal to the sum
    of the individual dimensions.
    """
    fibers = list(fibers)
    assert fibers
    m = fibers[0].dim
    if any(f.dim != m for f in fibers):
        raise DimensionError("fibers live in different ambient dimensions")
    bases = [difference_lattice(f) for f in fibers]
    total = sum(len(b) for b in bases)
    stacked = [row for b in bases for row in b]
    if not stacked:
        return True
    return rank_int(stacked) == total


def _group_by_image(a: PointConfig, pi: GroupHom):
    """Partition point indices by pi-value, parts ordered by least index."""
    by_value: dict[tuple[int, ...], list[int]] = {}
    order = []
    for i, p in enumerate(a.points):
        v = pi.apply(p)
        if v not in by_value:
            by_value[v] = []
            order.append(v)
        by_value[v].append(i)
    return [tuple(by_value[v]) for v in order], order


def _simplex_chart(values, r: int) -> GroupHom:
    """Affine iso of Z^r sending values[i] to vertex i, or NotSimplexImage.

    The values must be r+1 distinct points whose differences from
    values[0] form a unimodular matrix; that is exactly equivalence with
    the unit simplex.
    """
    if len(values) != r + 1:
        raise NotSimplexImage(
            f"projection image has {len(values)} values, expected {r + 1}"
        )
    v0 = values[0]
    d = transpose([[x - y for x, y in zip(v, v0)] for v in values[1:]])
    if r > 0 and abs(det(d)) != 1:
        raise NotSimplexImage("image differences do not form a lattice basis")
    # invert the difference matrix; solve d * col = e_i over Z
    cols = []
    for i in range(r):
        e = [1 if j == i else 0 for j in range(r)]
        col = solve_int(d, e)
        assert col is not None
        cols.append(col)
    mat = transpose(cols) if r else []
    shift = [-x for x in mat_vec(mat, list(v0))]
    return GroupHom.make(mat, shift, r)


def decompose_along(a: PointConfig, pi: GroupHom) -> CayleyStructure:
    """Split a into Cayley fibers along a projection with simplex image.

    Returns the partition into parts, the fibers A_i = (preimage of
    vertex i) - s(vertex i) written in kernel coordinates, and the
    lattice isomorphism f with f(a) = cayley_sum(fibers).
    """
    assert pi.domain_rank == a.dim
    assert is_normalized(a), "decompose_along expects a normalized configuration"
    n = a.dim
    r = pi.codomain_rank
    parts, values = _group_by_image(a, pi)
    g = _simplex_chart(values, r)
    chart = g.compose(pi)  # sends part i to vertex i
    if r == 0:
        f = GroupHom.identity_map(n)
        return CayleyStructure(a, 0, tuple(parts), pi, (a,), f, g)
    phi = chart.linear().matrix_rows
    if not GroupHom.make(phi).is_surjective():
        raise NotSimplexImage("projection is not surjective over Z")
    # section s of phi: integer right inverse, columnwise
    s_cols = []
    for i in range(r):
        e = [1 if j == i else 0 for j in range(r)]
        col = solve_int(phi, e)
        assert col is not None
        s_cols.append(col)
    s = transpose(s_cols)  # n x r
    # canonical (HNF) basis of the saturated kernel, so that coordinate
    # kernels get identity coordinates
    kernel = hnf_basis(kernel_basis_int(phi))
    f_rows: IntMat = []
    for x_row in identity(n):
        # x - s(phi(x)) lies in ker phi; take its kernel coordinates
        img = mat_vec(phi, x_row)
        red = [xv - sv for xv, sv in zip(x_row, mat_vec(s, img))]
        if kernel:
            coords = solve_int_left(kernel, red)
            assert coords is not None
        else:
            assert not any(red)
            coords = []
        f_rows.append(coords)
    # f(x) = (kernel coords of x - s(phi x), chart(x))
    top = transpose(f_rows)  # (n-r) x n acting on columns
    f_mat = top + chart.linear().matrix_rows
    tr = [0] * (n - r) + list(chart.translation or [0] * r)
    f = GroupHom.make(f_mat, tr if any(tr) else None, n)
    fibers = []
    for part in parts:
        pts = [f.apply(a.points[i])[: n - r] for i in part]
        fibers.append(PointConfig(n - r, tuple(sorted(pts))))
    struct = CayleyStructure(a, r, tuple(parts), pi, tuple(fibers), f, g)
    assert set(apply_frame(struct).points) == set(cayley_sum(fibers).points)
    return struct


def apply_frame(struct: CayleyStructure) -> PointConfig:
    """Image of the base under the section frame."""
    pts = [struct.section_frame.apply(p) for p in struct.base.points]
    return PointConfig(struct.base.dim, tuple(sorted(pts)))


def join_type_wrt(a: PointConfig, pi1: GroupHom, pi2: GroupHom) -> bool:
    """Whether a is of join type with respect to the pair (pi1, pi2).

    The parts of a along pi2 o pi1 have difference lattices M_i; the
    predicate holds when the images pi1(M_i) inside ker pi2 sum directly.
    """
    assert pi1.is_surjective() if pi1.matrix else True
    struct = decompose_along(a, pi2.compose(pi1))
    lin = pi1.linear()
    total = 0
    stacked: IntMat = []
    for part in struct.parts:
        base_pt = a.points[part[0]]
        rows = [
            [x - y for x, y in zip(lin.apply(a.points[i]), lin.apply(base_pt))]
            for i in part[1:]
        ]
        basis = hnf_basis(rows)
        total += len(basis)
        stacked.extend(basis)
    if not stacked:
        return True
    return rank_int(stacked) == total


def _set_partitions(n: int, max_parts: int):
    """Restricted-growth-string enumeration of set partitions of range(n)."""
    rgs = [0] * n

    def rec(i: int, k: int):
        if i == n:
            parts: list[list[int]] = [[] for _ in range(k)]
            for j, c in enumerate(rgs):
                parts[c].append(j)
            yield [tuple(p) for p in parts]
            return
        for c in range(min(k + 1, max_parts)):
            rgs[i] = c
            yield from rec(i + 1, max(k, c + 1))

    if n == 0:
        yield []
        return
    yield from rec(0, 0)


def projection_for_partition(a: PointConfig, parts) -> GroupHom | None:
    """The unique projection sending part i to vertex i, if one exists.

    Solves P(u - u0) = vertex(part of u) over Z for the matrix P, with u0
    the first point of part 0; returns None when the system has no
    integer solution or P is not surjective.
    """
    r = len(parts) - 1
    u0 = a.points[parts[0][0]]
    d_rows = []
    e_rows = []
    for i, part in enumerate(parts):
        v = list(_simplex_vertex(i, r))
        for j in part:
            d_rows.append([x - y for x, y in zip(a.points[j], u0)])
            e_rows.append(v)
    if r == 0:
        return GroupHom.zero_map(a.dim)
    p_rows = []
    for jcol in range(r):
        x = solve_int(d_rows, [row[jcol] for row in e_rows])
        if x is None:
            return None
        p_rows.append(x)
    pi = GroupHom.make(p_rows, None, a.dim)
    if not pi.is_surjective():
        return None
    return pi


def enumerate_simplex_projections(a: PointConfig, limit: int = 12):
    """All Cayley structures of a, one per realizable point partition.

    Exhausts set partitions of the points (at most dim+1 parts can carry
    a surjection onto a simplex) and keeps those extending to a valid
    projection.  Distinct structures have distinct projection kernels.
    """
    if len(a) > limit:
        raise TooLarge(f"{len(a)} points exceeds enumeration limit {limit}")
    assert is_normalized(a)
    out = []
    seen_kernels = set()
    for parts in _set_partitions(len(a), a.dim + 1):
        pi = projection_for_partition(a, parts)
        if pi is None:
            continue
        struct = decompose_along(a, pi)
        key = tuple(map(tuple, struct.kernel_lattice()))
        if key in seen_kernels:
            continue
        seen_kernels.add(key)
        out.append(struct)
    out.sort(key=lambda st: (st.r, st.parts))
    return out
