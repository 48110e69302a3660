"""Main pipeline: dual defect with a machine-checkable structure certificate.

Given a normalized configuration, the contact grouping yields the minimal
projection pi with simplex image; the alpha invariant of the part
difference spaces inside ker pi gives c; quotienting by the minimal
subspace factors pi = pi2 o pi1, and delta = r - c.  An independent
randomized Hessian-corank oracle must agree or certification fails.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .alpha import AlphaProblem, alpha as alpha_of, check_star, vprime
from .cayley import (
    CayleyStructure,
    decompose_along,
    cayley_sum,
    enumerate_simplex_projections,
    is_join_type,
    join_type_wrt,
    projection_for_partition,
)
from .config import GroupHom, PointConfig, apply_affine, is_normalized, normalize
from .exact_linalg import (
    IntMat,
    RationalSubspace,
    hnf_basis,
    kernel_basis_int,
    lattice_leq,
    mat_mul,
    solve_int,
    solve_int_left,
    transpose,
)
from .tangency import (
    DEFAULT_BOUND,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    ESCALATIONS,
    DefectResult,
    TangencyProblem,
    contact_grouping,
    defect_oracle,
)


class CertificationError(RuntimeError):
    """The two independent defect computations disagree, or a certified
    invariant failed to verify."""


@dataclass(frozen=True)
class StructureCertificate:
    n: int
    r: int
    c: int
    delta: int
    grouping: tuple[tuple[int, ...], ...]
    pi1: GroupHom
    pi2: GroupHom
    p: GroupHom
    fibers: tuple[PointConfig, ...]
    seed: int
    bound: int
    trials: int
    oracle_delta: DefectResult
    checks: tuple[tuple[str, bool], ...]

    @property
    def pi(self) -> GroupHom:
        return self.pi2.compose(self.pi1)

    def checks_dict(self) -> dict[str, bool]:
        return dict(self.checks)


def _quotient_map(lattice: IntMat, n: int) -> GroupHom:
    """A surjection of Z^n whose kernel is the given saturated lattice.

    The rows returned by the integer kernel computation belong to a
    unimodular matrix, so any such quotient is automatically surjective.
    """
    if not lattice:
        return GroupHom.identity_map(n)
    rows = kernel_basis_int([list(r) for r in lattice])
    q = GroupHom.make(rows, None, n)
    assert q.is_surjective()
    return q


def _saturated_kernel(m: IntMat, n: int) -> IntMat:
    if not m:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return hnf_basis(kernel_basis_int(m))


def find_min_projection(a: PointConfig, seed: int = DEFAULT_SEED,
                        bound: int = DEFAULT_BOUND,
                        trials: int = DEFAULT_TRIALS):
    """Minimal simplex projection whose plane contains the contact locus.

    Returns (pi, grouping).  Configurations with empty dual or defect
    zero get the zero map and a single group.
    """
    assert is_normalized(a)
    tp = TangencyProblem.make(a, seed, bound, trials)
    oracle = defect_oracle(tp)
    if oracle.empty_dual or oracle.delta == 0:
        return GroupHom.zero_map(a.dim), (tuple(range(len(a))),)
    parts, _kernel = contact_grouping(tp)
    pi = projection_for_partition(a, parts)
    assert pi is not None, "contact grouping is not realizable over Z"
    return pi, parts


def _part_difference_space(a: PointConfig, part) -> RationalSubspace:
    base = a.points[part[0]]
    rows = [[Fraction(x - y) for x, y in zip(a.points[i], base)]
            for i in part[1:]]
    return RationalSubspace.from_rows(a.dim, rows)


def _restrict_to_kernel(pi1: GroupHom, pi_mat: IntMat, pi2_mat: IntMat,
                        n: int) -> GroupHom:
    """The map p with p = pi1 restricted to ker pi, in kernel bases."""
    ker_pi = _saturated_kernel(pi_mat, n)
    ker_pi2 = _saturated_kernel(pi2_mat, pi1.codomain_rank)
    cols = []
    for b in ker_pi:
        img = list(pi1.apply(b))
        if ker_pi2:
            coords = solve_int_left(ker_pi2, img)
            assert coords is not None, "pi1 does not map ker pi into ker pi2"
        else:
            assert not any(img)
            coords = []
        cols.append(coords)
    mat = transpose(cols) if ker_pi else []
    return GroupHom.make(mat, None, len(ker_pi))


def _build_certificate(a: PointConfig, seed: int, bound: int, trials: int,
                       oracle: DefectResult):
    """One attempt at the full pipeline; returns the certificate pieces."""
    n = a.dim
    tp = TangencyProblem.make(a, seed, bound, trials)
    parts, _ = contact_grouping(tp)
    pi = projection_for_partition(a, parts)
    assert pi is not None, "contact grouping is not realizable over Z"
    struct = decompose_along(a, pi)
    r = struct.r
    pi_mat = pi.matrix_rows
    ambient = RationalSubspace.from_rows(
        n, [[Fraction(x) for x in row] for row in _saturated_kernel(pi_mat, n)]
    )
    summands = [_part_difference_space(a, part) for part in parts]
    ap = AlphaProblem.make(summands, ambient, seed, bound, trials)
    c = alpha_of(ap)
    vp = vprime(ap)
    pi1 = _quotient_map(vp.integer_lattice(), n)
    # pi2 with pi2 * pi1 = pi: lift the standard basis through pi1
    m1 = pi1.matrix_rows
    cols = []
    for j in range(n - c):
        e = [1 if i == j else 0 for i in range(n - c)]
        lift = solve_int(m1, e)
        assert lift is not None
        cols.append([sum(pr * lv for pr, lv in zip(row, lift))
                     for row in pi_mat])
    pi2 = GroupHom.make(transpose(cols), None, n - c)
    assert mat_mul(pi2.matrix_rows, m1) == pi_mat
    p = _restrict_to_kernel(pi1, pi_mat, pi2.matrix_rows, n)
    delta = r - c
    return parts, struct, pi1, pi2, p, r, c, delta


def structure_certificate(a: PointConfig, seed: int = DEFAULT_SEED,
                          bound: int = DEFAULT_BOUND,
                          trials: int = DEFAULT_TRIALS
                          ) -> StructureCertificate:
    """Compute delta with a replayable structure certificate.

    The structural computation delta = r - c and the Hessian corank
    oracle must agree; persistent disagreement after escalating the
    sampling bound raises CertificationError.
    """
    assert is_normalized(a), "normalize the configuration first"
    n = a.dim
    oracle = defect_oracle(TangencyProblem.make(a, seed, bound, trials))
    if oracle.empty_dual or oracle.delta == 0:
        grouping = (tuple(range(len(a))),)
        checks = (
            ("oracle_agrees", True),
            ("pi1_surjective", True),
            ("pi_factors", True),
            ("join_type_wrt_pi2", True),
        )
        return StructureCertificate(
            n=n, r=0, c=0, delta=0, grouping=grouping,
            pi1=GroupHom.identity_map(n), pi2=GroupHom.zero_map(n),
            p=GroupHom.identity_map(n), fibers=(a,),
            seed=seed, bound=bound, trials=trials,
            oracle_delta=oracle, checks=checks,
        )
    cur = bound
    last = None
    for _ in range(ESCALATIONS + 1):
        parts, struct, pi1, pi2, p, r, c, delta = _build_certificate(
            a, seed, cur, trials, oracle
        )
        last = (parts, struct, pi1, pi2, p, r, c, delta)
        if delta == oracle.delta:
            break
        cur *= 2
    else:
        raise CertificationError(
            f"structure delta {last[7]} disagrees with oracle "
            f"delta {oracle.delta} after escalation"
        )
    parts, struct, pi1, pi2, p, r, c, delta = last
    checks = (
        ("oracle_agrees", delta == oracle.delta),
        ("pi1_surjective", pi1.is_surjective()),
        ("pi_factors", mat_mul(pi2.matrix_rows, pi1.matrix_rows)
         == struct.pi.matrix_rows),
        ("join_type_wrt_pi2", join_type_wrt(a, pi1, pi2)),
    )
    if not all(v for _, v in checks):
        raise CertificationError(f"certified invariant failed: {checks}")
    return StructureCertificate(
        n=n, r=r, c=c, delta=delta, grouping=parts,
        pi1=pi1, pi2=pi2, p=p, fibers=struct.fibers,
        seed=seed, bound=bound, trials=trials,
        oracle_delta=oracle, checks=checks,
    )


def join_factors(cert: StructureCertificate, a: PointConfig):
    """The factors p(A_0), ..., p(A_r) of the join description.

    Their Cayley sum must be of join type, and every factor, normalized,
    must have oracle defect 0 (or degenerate to a point with empty dual).
    """
    factors = tuple(
        apply_affine(f, cert.p, dedupe=True) for f in cert.fibers
    )
    if not is_join_type(factors):
        raise CertificationError("join factors do not sum directly")
    for f in factors:
        nf, _ = normalize(f)
        res = defect_oracle(
            TangencyProblem.make(nf, cert.seed, cert.bound, cert.trials)
        )
        if not res.empty_dual and res.delta != 0:
            raise CertificationError(
                f"join factor has nonzero defect {res.delta}"
            )
    return factors


def _kernel_chain_ok(inner: IntMat, outer: IntMat) -> bool:
    """Saturated lattice containment inner <= outer, over Q is enough."""
    if not inner:
        return True
    if not outer:
        return False
    return lattice_leq(inner, outer)


def _alpha_for_structure(a: PointConfig, struct: CayleyStructure,
                         seed: int, bound: int, trials: int) -> AlphaProblem:
    n = a.dim
    ambient = RationalSubspace.from_rows(
        n, [[Fraction(x) for x in row]
            for row in _saturated_kernel(struct.pi.linear().matrix_rows, n)]
    )
    summands = [_part_difference_space(a, part) for part in struct.parts]
    return AlphaProblem.make(summands, ambient, seed, bound, trials)


def verify_certificate(a: PointConfig, cert: StructureCertificate,
                       exhaustive: bool = False, limit: int = 12) -> dict:
    """Independent re-check of a certificate.

    Always checks the arithmetic invariants, the simplex image, join
    type, and a fresh oracle run under a different seed.  In exhaustive
    mode additionally enumerates every simplex projection of a and
    verifies the minimality kernel chain and the lower-bound inequality
    r' - c' <= delta.
    """
    checks: dict[str, bool] = {}
    checks["delta_consistent"] = cert.delta == cert.r - cert.c
    checks["pi1_surjective"] = (
        cert.pi1.is_surjective() if cert.pi1.matrix else cert.n == 0 or cert.pi1.codomain_rank == 0
    )
    pi = cert.pi
    ker_pi1 = cert.pi1.kernel_lattice()
    checks["pi1_kernel_rank"] = len(ker_pi1) == cert.c
    try:
        struct = decompose_along(a, pi)
        checks["simplex_image"] = struct.parts == cert.grouping
    except Exception:
        struct = None
        checks["simplex_image"] = False
    checks["r_matches"] = struct is not None and struct.r == cert.r
    try:
        checks["join_type_wrt_pi2"] = (
            cert.r == 0 or join_type_wrt(a, cert.pi1, cert.pi2)
        )
    except Exception:
        checks["join_type_wrt_pi2"] = False
    fresh = defect_oracle(
        TangencyProblem.make(a, cert.seed + 1, cert.bound, cert.trials)
    )
    checks["oracle_fresh_seed"] = (
        (fresh.empty_dual and cert.delta == 0)
        or fresh.delta == cert.delta
    )
    if exhaustive and fresh.empty_dual:
        # no dual hypersurface, so the lower-bound law is vacuous
        checks["lower_bound_law"] = True
        checks["condition4_chain"] = True
    elif exhaustive:
        lower_ok = True
        chain_ok = True
        ker_pi = _saturated_kernel(pi.linear().matrix_rows, cert.n)
        for st in enumerate_simplex_projections(a, limit):
            ap = _alpha_for_structure(a, st, cert.seed, cert.bound,
                                      cert.trials)
            c2 = alpha_of(ap)
            if st.r - c2 > cert.delta:
                lower_ok = False
            # condition (4): pairs realizing delta with join-type quotient
            if st.r - c2 != cert.delta or not check_star(ap):
                continue
            try:
                vp = vprime(ap)
            except Exception:
                continue
            pi1b = _quotient_map(vp.integer_lattice(), cert.n)
            pim = st.pi.linear().matrix_rows
            m1 = pi1b.matrix_rows
            cols = []
            solvable = True
            for j in range(pi1b.codomain_rank):
                e = [1 if i == j else 0 for i in range(pi1b.codomain_rank)]
                lift = solve_int(m1, e)
                if lift is None:
                    solvable = False
                    break
                cols.append([sum(pr * lv for pr, lv in zip(row, lift))
                             for row in pim])
            if not solvable:
                continue
            pi2b = GroupHom.make(transpose(cols), None, pi1b.codomain_rank)
            if mat_mul(pi2b.matrix_rows, m1) != pim:
                continue
            try:
                if st.r > 0 and not join_type_wrt(a, pi1b, pi2b):
                    continue
            except Exception:
                continue
            ker_pi1b = pi1b.kernel_lattice()
            ker_pib = _saturated_kernel(pim, cert.n)
            if not (_kernel_chain_ok(ker_pi1, ker_pi1b)
                    and _kernel_chain_ok(ker_pi1b, ker_pib)
                    and _kernel_chain_ok(ker_pib, ker_pi)):
                chain_ok = False
        checks["lower_bound_law"] = lower_ok
        checks["condition4_chain"] = chain_ok
    checks["all_passed"] = all(checks.values())
    return checks


# --- serialization ----------------------------------------------------------

_BIG = 1 << 53


def _enc_int(x: int):
    return str(x) if abs(x) >= _BIG else x


def _enc_mat(m) -> list:
    return [[_enc_int(int(x)) for x in row] for row in m]


def _dec_int(x) -> int:
    return int(x)


def certificate_to_json(cert: StructureCertificate) -> str:
    oracle = ("empty_dual" if cert.oracle_delta.empty_dual
              else cert.oracle_delta.delta)
    obj = {
        "n": cert.n,
        "r": cert.r,
        "c": cert.c,
        "delta": cert.delta,
        "grouping": [list(g) for g in cert.grouping],
        "pi1": _enc_mat(cert.pi1.matrix),
        "pi2": _enc_mat(cert.pi2.matrix),
        "p": _enc_mat(cert.p.matrix),
        "seed": _enc_int(cert.seed),
        "bound": _enc_int(cert.bound),
        "trials": cert.trials,
        "oracle_delta": oracle,
        "checks": {k: v for k, v in cert.checks},
    }
    return json.dumps(obj, indent=2)


def certificate_from_json(text: str) -> StructureCertificate:
    obj = json.loads(text)
    n = obj["n"]
    c = obj["c"]
    r = obj["r"]

    def mat(key, domain):
        rows = [[_dec_int(x) for x in row] for row in obj[key]]
        return GroupHom.make(rows, None, domain)

    oracle = obj["oracle_delta"]
    if oracle == "empty_dual":
        od = DefectResult(None, None, 0)
    else:
        od = DefectResult(int(oracle), None, 0)
    return StructureCertificate(
        n=n, r=r, c=c, delta=obj["delta"],
        grouping=tuple(tuple(g) for g in obj["grouping"]),
        pi1=mat("pi1", n),
        pi2=mat("pi2", n - c),
        p=mat("p", n - r),
        fibers=(),
        seed=_dec_int(obj["seed"]),
        bound=_dec_int(obj["bound"]),
        trials=obj["trials"],
        oracle_delta=od,
        checks=tuple(obj["checks"].items()),
    )
