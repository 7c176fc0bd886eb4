"""The abelian-normal-subgroup pipeline and its verifier suite.

Given an enumerated group and an invariant Hermitian form, the elements at
operator distance < 1/2 from the identity form a conjugation-closed set of
pairwise commuting elements. They generate an abelian normal subgroup ``A``
whose index is bounded by ``25**(n*n)`` via a volume comparison of operator
norm balls in the ``2 n^2``-dimensional real space of matrices.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import AbelianCheckFailed, InputError, NormalCheckFailed, SampleSizeError
from .groups import (
    FiniteMatrixGroup,
    SubgroupHandle,
    commutation_residual,
    is_abelian,
    is_normal,
    left_cosets,
    normality_violation,
    subgroup_generated,
    subgroup_lattice,
)
from .linalg import DEFAULT_TOL, Tolerance, spectral_norms
from .norms import HermitianFormContext, NormContext, build_hermitian_form, verify_isometry

THRESHOLD = 0.5
BOUNDARY_BAND = 1e-6
TRACE_SLACK = 1e-8
UNIT_SLACK = 1e-9
# pairwise coset separation is brute force up to this many representatives
PAIRWISE_LIMIT = 512
# contraction inequality is checked against all of G while |M| * |G| stays below this
CONTRACTION_PAIR_LIMIT = 1_000_000


def index_bound(n: int) -> int:
    return 25 ** (n * n)


def refined_index_bound(n: int) -> int:
    return 25 ** (n * n) - 9 ** (n * n)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float | None = None
    detail: str = ""


@dataclass
class NearIdentitySet:
    member_indices: tuple[int, ...]
    distances: np.ndarray
    boundary_flags: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.member_indices)


@dataclass
class JordanReport:
    n: int
    group_order: int
    m_size: int
    a_order: int
    index: int
    bound: int
    refined_bound: int
    coset_rep_indices: list[int]
    min_coset_separation: float
    m_indices: list[int] = field(default_factory=list)
    a_indices: list[int] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return asdict(self)


def identity_distances(g: FiniteMatrixGroup, ctx: HermitianFormContext) -> np.ndarray:
    """``op_norm(I - e)`` for every element, in element order."""
    eye = np.eye(g.dim)
    return ctx.op_norms(eye - g.elements)


def build_near_identity_set(g: FiniteMatrixGroup, ctx: NormContext) -> NearIdentitySet:
    if not isinstance(ctx, HermitianFormContext):
        raise InputError("the near-identity set needs exact operator norms (Hermitian form)")
    d = identity_distances(g, ctx)
    members = tuple(int(i) for i in np.flatnonzero(d < THRESHOLD))
    boundary = tuple(int(i) for i in np.flatnonzero(np.abs(d - THRESHOLD) < BOUNDARY_BAND))
    return NearIdentitySet(members, d, boundary)


def generate_abelian_normal(g: FiniteMatrixGroup, m: NearIdentitySet,
                            tol: Tolerance = DEFAULT_TOL) -> SubgroupHandle:
    a = subgroup_generated(g, m.member_indices)
    residual, pair = commutation_residual(g, a)
    if residual > tol.residual_tol:
        raise AbelianCheckFailed(
            f"generated subgroup is not abelian: elements {pair} have commutator residual "
            f"{residual:.3g}. The theory guarantees commutation, so this is numerical breakdown.",
            pair=pair, residual=residual,
        )
    bad = normality_violation(g, a)
    if bad is not None:
        raise NormalCheckFailed(
            f"generated subgroup is not normal: conjugating element {bad[1]} by generator {bad[0]} "
            "leaves it. The theory guarantees normality, so this is numerical breakdown.",
            pair=bad,
        )
    return a


def check_trace_lemma(g: FiniteMatrixGroup, ctx: HermitianFormContext,
                      distances: np.ndarray | None = None) -> CheckResult:
    """Elements at distance < 1 have nonzero trace, with ``|n - tr| <= n d``."""
    n = g.dim
    d = identity_distances(g, ctx) if distances is None else distances
    near = np.flatnonzero(d < 1.0)
    traces = np.trace(g.elements[near], axis1=1, axis2=2)
    excess = np.abs(n - traces) - n * d[near]
    worst = float(np.max(excess)) if len(near) else 0.0
    min_trace = float(np.min(np.abs(traces))) if len(near) else float("inf")
    passed = worst <= TRACE_SLACK and min_trace > 0.0
    return CheckResult("trace_lemma", passed, max(worst, 0.0),
                       f"{len(near)} elements at distance < 1; min |trace| = {min_trace:.6g}")


def check_commutation_lemma(g: FiniteMatrixGroup, m: NearIdentitySet,
                            ctx: HermitianFormContext,
                            tol: Tolerance = DEFAULT_TOL) -> list[CheckResult]:
    """Pairwise commutation inside ``M`` and the commutator contraction inequality.

    The contraction ``d(x^-1 z^-1 x z) <= 2 d(x) d(z)`` holds for any pair of
    isometries; it is checked for ``x`` in ``M`` and ``z`` in all of ``G``
    (falling back to ``z`` in ``M`` for very large groups).
    """
    mi = np.array(m.member_indices)
    mats = g.elements[mi]
    worst_comm = 0.0
    for x in mats:
        r = np.linalg.norm(x @ mats - mats @ x, axis=(1, 2))
        worst_comm = max(worst_comm, float(np.max(r)))
    commute = CheckResult("m_pairs_commute", worst_comm <= tol.residual_tol, worst_comm,
                          f"{len(mi) ** 2} pairs")

    zs = np.arange(g.order) if len(mi) * g.order <= CONTRACTION_PAIR_LIMIT else mi
    zmats = g.elements[zs]
    zinv = np.linalg.inv(zmats)
    eye = np.eye(g.dim)
    worst_slack = -np.inf
    for xi, x in zip(mi, mats):
        x_inv = np.linalg.inv(x)
        comm = x_inv @ zinv @ x @ zmats
        lhs = ctx.op_norms(eye - comm)
        rhs = 2.0 * m.distances[xi] * m.distances[zs]
        worst_slack = max(worst_slack, float(np.max(lhs - rhs)))
    contraction = CheckResult("commutator_contraction", worst_slack <= tol.residual_tol,
                              max(worst_slack, 0.0), f"{len(mi)} x {len(zs)} pairs")
    return [commute, contraction]


def check_commutator_scalar(g: FiniteMatrixGroup, x_idx: int, z_idx: int,
                            tol: Tolerance = DEFAULT_TOL) -> complex | None:
    """``lambda`` if ``x^-1 z^-1 x z`` equals ``lambda * I`` within tolerance, else ``None``."""
    x, z = g.elements[x_idx], g.elements[z_idx]
    comm = np.linalg.inv(x) @ np.linalg.inv(z) @ x @ z
    lam = complex(np.trace(comm) / g.dim)
    if np.linalg.norm(comm - lam * np.eye(g.dim)) <= tol.residual_tol:
        return lam
    return None


def check_coset_separation(g: FiniteMatrixGroup, report: JordanReport, ctx: HermitianFormContext,
                           distances: np.ndarray | None = None) -> list[CheckResult]:
    """Minimum ``op_norm(x_i - x_j)`` over distinct representatives and ``op_norm(x_i) = 1``.

    Above :data:`PAIRWISE_LIMIT` representatives the minimum is taken over
    ``op_norm(I - g)`` for ``g`` outside ``A``, a lower bound for the pairwise
    minimum since ``op_norm(x_i - x_j) = op_norm(I - x_j^-1 x_i)``.
    """
    reps = report.coset_rep_indices
    rep_norms = ctx.op_norms(g.elements[reps])
    unit_residual = float(np.max(np.abs(rep_norms - 1.0)))
    if len(reps) < 2:
        sep = float("inf")
        how = "index 1, vacuous"
    elif len(reps) <= PAIRWISE_LIMIT:
        mats = g.elements[reps]
        sep = float("inf")
        for i in range(len(reps) - 1):
            sep = min(sep, float(np.min(ctx.op_norms(mats[i] - mats[i + 1:]))))
        how = f"{len(reps) * (len(reps) - 1) // 2} pairs"
    else:
        d = identity_distances(g, ctx) if distances is None else distances
        outside = np.ones(g.order, dtype=bool)
        outside[report.a_indices] = False
        sep = float(np.min(d[outside]))
        how = "via distances of elements outside A"
    report.min_coset_separation = sep
    return [
        CheckResult("coset_separation", sep >= THRESHOLD - DEFAULT_TOL.residual_tol,
                    max(THRESHOLD - sep, 0.0), f"min distance {sep:.12g}, {how}"),
        CheckResult("coset_reps_unit_norm", unit_residual <= UNIT_SLACK, unit_residual,
                    f"{len(reps)} representatives"),
    ]


def check_conjugation_invariance(g: FiniteMatrixGroup, distances: np.ndarray,
                                 conjugators=None) -> CheckResult:
    """``d(y^-1 x y) = d(x)`` for all ``x`` and the given ``y`` (default: generators)."""
    ys = g.generator_indices if conjugators is None else conjugators
    worst = 0.0
    for y in ys:
        y_inv = g.inv(y)
        for x in range(g.order):
            k = g.mul(g.mul(y_inv, x), y)
            worst = max(worst, abs(float(distances[k] - distances[x])))
    return CheckResult("distance_conjugation_invariance", worst <= UNIT_SLACK, worst,
                       f"{len(ys)} conjugators")


def jordan_pipeline(g: FiniteMatrixGroup, tol: Tolerance = DEFAULT_TOL,
                    ctx: HermitianFormContext | None = None) -> JordanReport:
    """Build ``M`` and ``A``, compute the index and bounds, and run every check.

    Raises :class:`~jordanbound.errors.TheoremViolation` if ``A`` fails to be
    abelian or normal; every other failed property is recorded in ``checks``.
    """
    n = g.dim
    ctx = build_hermitian_form(g) if ctx is None else ctx
    m = build_near_identity_set(g, ctx)
    a = generate_abelian_normal(g, m, tol)
    reps = left_cosets(g, a)
    report = JordanReport(
        n=n, group_order=g.order, m_size=m.size, a_order=a.order, index=len(reps),
        bound=index_bound(n), refined_bound=refined_index_bound(n),
        coset_rep_indices=reps, min_coset_separation=float("inf"),
        m_indices=list(m.member_indices), a_indices=list(a.member_indices),
    )
    report.warnings.extend(ctx.warnings)
    for i in m.boundary_flags:
        report.warnings.append(
            f"element {i} has distance {m.distances[i]:.12g} within {BOUNDARY_BAND:g} of 1/2; "
            "membership in M is numerically fragile"
        )

    residual, _ = commutation_residual(g, a)
    checks = report.checks
    checks.append(CheckResult("a_abelian", residual <= tol.residual_tol, residual, f"|A| = {a.order}"))
    checks.append(CheckResult("a_normal", is_normal(g, a, tol), None, "generator conjugation"))
    checks.append(CheckResult("index_times_order", report.index * a.order == g.order, None,
                              f"{report.index} * {a.order} vs {g.order}"))
    checks.append(CheckResult("index_bound", report.index <= report.bound, None,
                              f"{report.index} <= 25^{n * n}"))
    checks.append(CheckResult("refined_index_bound", report.index <= report.refined_bound, None,
                              f"{report.index} <= 25^{n * n} - 9^{n * n}"))
    iso = verify_isometry(ctx, g)
    checks.append(CheckResult("isometry", iso <= tol.residual_tol, iso, "max ||h^H P h - P||_F / ||P||_F"))
    checks.append(CheckResult("identity_in_m", 0 in m.member_indices and m.distances[0] == 0.0,
                              float(m.distances[0])))
    checks.append(check_conjugation_invariance(g, m.distances))
    checks.append(check_trace_lemma(g, ctx, m.distances))
    checks.extend(check_commutation_lemma(g, m, ctx, tol))
    lams = [check_commutator_scalar(g, x, z, tol) for x in m.member_indices[:64] for z in m.member_indices[:64]]
    scalar_ok = all(lam is not None and abs(lam - 1) <= tol.residual_tol for lam in lams)
    checks.append(CheckResult("m_commutators_trivial", scalar_ok, None,
                              "x^-1 z^-1 x z = 1 * I on M pairs"))
    checks.extend(check_coset_separation(g, report, ctx, m.distances))
    return report


def max_abelian_normal_oracle(g: FiniteMatrixGroup, max_group_order: int = 64,
                              tol: Tolerance = DEFAULT_TOL) -> int:
    """Order of the largest abelian normal subgroup, by brute force over the lattice."""
    return max(
        s.order for s in subgroup_lattice(g, max_group_order)
        if is_abelian(g, s, tol) and is_normal(g, s, tol)
    )


def abelian_normal_subgroups(g: FiniteMatrixGroup, max_group_order: int = 64,
                             tol: Tolerance = DEFAULT_TOL) -> list[SubgroupHandle]:
    return [s for s in subgroup_lattice(g, max_group_order)
            if is_abelian(g, s, tol) and is_normal(g, s, tol)]


# Monte-Carlo volume comparison

MC_CHUNK = 65_536


@dataclass
class VolumeEstimate:
    ratio: float
    rel_std_error: float
    inner_count: int
    outer_count: int
    samples: int
    expected: float


def mc_volume_ratio(n: int, r_outer: float, r_inner: float, samples: int = 1_000_000,
                    seed: int = 0) -> VolumeEstimate:
    """Estimate ``vol B(r_outer) / vol B(r_inner)`` for spectral-norm balls in ``C^{n x n}``.

    Points are drawn uniformly from the Frobenius ball of radius
    ``r_outer * sqrt(n)``, which encloses the outer ball. Each chunk of
    :data:`MC_CHUNK` samples has its own stream keyed by ``(seed, chunk)``.
    """
    if not (r_outer >= r_inner > 0):
        raise InputError("need r_outer >= r_inner > 0")
    dim = 2 * n * n
    radius = r_outer * math.sqrt(n)
    inner = outer = 0
    for chunk, start in enumerate(range(0, samples, MC_CHUNK)):
        k = min(MC_CHUNK, samples - start)
        rng = np.random.default_rng([seed, chunk])
        x = rng.standard_normal((k, dim))
        x *= (radius * rng.random(k) ** (1.0 / dim) / np.linalg.norm(x, axis=1))[:, None]
        mats = (x[:, : n * n] + 1j * x[:, n * n:]).reshape(k, n, n)
        s = spectral_norms(mats)
        outer += int(np.count_nonzero(s < r_outer))
        inner += int(np.count_nonzero(s < r_inner))
    if inner == 0:
        raise SampleSizeError(f"no samples landed in the inner ball; {samples} samples are too few for n={n}")
    p_inner, p_outer = inner / samples, outer / samples
    rel_se = math.sqrt(max(1.0 / p_inner - 1.0 / p_outer, 0.0) / samples)
    if rel_se > 0.1:
        raise SampleSizeError(f"relative standard error {rel_se:.3g} exceeds 10%; increase samples")
    return VolumeEstimate(outer / inner, rel_se, inner, outer, samples, (r_outer / r_inner) ** dim)

