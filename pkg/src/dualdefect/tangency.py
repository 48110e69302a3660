"""Tangency space, generic Hessian, and the randomized corank oracle.

A hyperplane tangent to the toric variety of A at the all-ones point has
coefficient vector a = (a_u) with sum a_u = 0 and sum a_u u = 0.  For
generic such a, the corank of the quadratic form sum a_u u u^T equals the
dual defect; its kernel spans the tangent directions of the contact
plane, and grouping points by the induced linear functional recovers the
minimal simplex projection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .config import PointConfig, is_normalized
from .cayley import cayley_sum
from .exact_linalg import RatMat, RationalSubspace, kernel_basis_rat, rank_rat

DEFAULT_SEED = 0xA11CE
DEFAULT_BOUND = 1 << 20
DEFAULT_TRIALS = 3
ESCALATIONS = 2


class GenericityFailure(RuntimeError):
    """Random samples disagreed even after escalating the bound."""


class ArityError(ValueError):
    """Coefficient vector length does not match the point count."""


@dataclass(frozen=True)
class TangencyProblem:
    config: PointConfig
    tangency_basis: tuple[tuple[Fraction, ...], ...]
    seed: int = DEFAULT_SEED
    bound: int = DEFAULT_BOUND
    trials: int = DEFAULT_TRIALS

    @classmethod
    def make(cls, config: PointConfig, seed: int = DEFAULT_SEED,
             bound: int = DEFAULT_BOUND, trials: int = DEFAULT_TRIALS
             ) -> "TangencyProblem":
        basis = tangency_space(config)
        return cls(config, tuple(tuple(row) for row in basis),
                   seed, bound, trials)

    @property
    def dim_l(self) -> int:
        return len(self.tangency_basis)


@dataclass(frozen=True)
class DefectResult:
    """Outcome of the corank oracle.

    delta is None exactly when the dual variety is degenerate
    (EmptyDual: no tangent hyperplane at the identity at all).
    """

    delta: int | None
    rank_witness: tuple[Fraction, ...] | None
    samples_used: int

    @property
    def empty_dual(self) -> bool:
        return self.delta is None


def tangency_space(a: PointConfig) -> RatMat:
    """Basis of {coefficients a_u : sum a_u = 0, sum a_u u = 0}.

    For a normalized configuration the dimension is #A - n - 1.
    """
    assert is_normalized(a)
    npts = len(a)
    rows: RatMat = [[Fraction(1)] * npts]
    for j in range(a.dim):
        rows.append([Fraction(p[j]) for p in a.points])
    return kernel_basis_rat(rows)


def hessian(a: PointConfig, coeffs) -> RatMat:
    """The n x n matrix sum_u a_u u u^T over exact rationals."""
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) != len(a):
        raise ArityError(f"{len(coeffs)} coefficients for {len(a)} points")
    n = a.dim
    h = [[Fraction(0)] * n for _ in range(n)]
    for c, u in zip(coeffs, a.points):
        if c == 0:
            continue
        for i in range(n):
            if u[i] == 0:
                continue
            for j in range(n):
                if u[j]:
                    h[i][j] += c * u[i] * u[j]
    return h


def _sample_coeffs(rng: random.Random, basis, bound: int):
    """A random nonzero rational combination of the basis rows."""
    npts = len(basis[0])
    while True:
        weights = [rng.randint(-bound, bound) for _ in basis]
        if any(weights):
            break
    out = [Fraction(0)] * npts
    for w, row in zip(weights, basis):
        if w:
            for i, x in enumerate(row):
                out[i] += w * x
    return tuple(out)


def defect_oracle(p: TangencyProblem) -> DefectResult:
    """delta = n - (generic rank of the Hessian), or EmptyDual.

    The generic rank is the maximum over `trials` seeded samples; lower
    semicontinuity of rank makes the maximum correct with overwhelming
    probability.
    """
    if p.dim_l == 0:
        return DefectResult(None, None, 0)
    rng = random.Random(p.seed)
    best_rank = -1
    witness = None
    for _ in range(p.trials):
        coeffs = _sample_coeffs(rng, p.tangency_basis, p.bound)
        r = rank_rat(hessian(p.config, coeffs))
        if r > best_rank:
            best_rank = r
            witness = coeffs
    return DefectResult(p.config.dim - best_rank, witness, p.trials)


def _grouping_from_kernel(a: PointConfig, kernel: RatMat):
    """Partition points by the functional v -> <u, v> on the kernel."""
    keys = {}
    order = []
    for i, u in enumerate(a.points):
        key = tuple(sum(Fraction(x) * v[j] for j, x in enumerate(u))
                    for v in kernel)
        if key not in keys:
            keys[key] = []
            order.append(key)
        keys[key].append(i)
    return tuple(tuple(keys[k]) for k in order)


def contact_grouping(p: TangencyProblem):
    """Group points touching the same contact-plane functional.

    Samples generic tangency coefficients, takes the Hessian kernel, and
    groups u ~ u' when <u - u', v> = 0 for every kernel vector v.  All
    trials must produce the same partition; on disagreement the sampling
    bound is doubled and the whole round retried.
    """
    assert p.dim_l >= 1
    bound = p.bound
    rng = random.Random(p.seed)
    for _ in range(ESCALATIONS + 1):
        parts = None
        kernel = None
        agreed = True
        best_corank = None
        for _ in range(p.trials):
            coeffs = _sample_coeffs(rng, p.tangency_basis, bound)
            h = hessian(p.config, coeffs)
            ker = kernel_basis_rat(h)
            grouping = _grouping_from_kernel(p.config, ker)
            if parts is None:
                parts, kernel, best_corank = grouping, ker, len(ker)
            elif grouping != parts or len(ker) != best_corank:
                agreed = False
                break
        if agreed:
            sub = RationalSubspace.from_rows(p.config.dim, kernel)
            return parts, sub
        bound *= 2
    raise GenericityFailure(
        "contact grouping unstable across samples; sampling bound too small"
    )


def slice_contact_dim(fibers, seed: int = DEFAULT_SEED,
                      bound: int = DEFAULT_BOUND,
                      trials: int = DEFAULT_TRIALS) -> int:
    """Dimension of the open contact slice of a Cayley sum.

    Equals r minus the generic dimension of the span of the fiberwise
    moment vectors m_i = sum_j a_ij u_ij, for generic tangency
    coefficients of the Cayley sum.
    """
    fibers = list(fibers)
    r = len(fibers) - 1
    if r == 0:
        return 0
    total = cayley_sum(fibers)
    assert is_normalized(total)
    m = fibers[0].dim
    basis = tangency_space(total)
    if not basis:
        return 0
    # fiber index of each Cayley point, read off the simplex tail
    fiber_of = []
    for pt in total.points:
        tail = pt[m:]
        fiber_of.append(tail.index(1) + 1 if any(tail) else 0)
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        coeffs = _sample_coeffs(rng, basis, bound)
        moments = [[Fraction(0)] * m for _ in range(r + 1)]
        for c, pt, fi in zip(coeffs, total.points, fiber_of):
            for j in range(m):
                moments[fi][j] += c * pt[j]
        best = max(best, rank_rat(moments))
    return r - best
