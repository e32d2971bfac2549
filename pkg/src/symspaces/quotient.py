"""Congruence relations, normal subspaces, and the quotient pipeline.

The pipeline follows the constructive direction of the quotient theorem:
a triple-system ideal n gives the Lie-algebra ideal l = ker(psi) (+) n, the
quotient algebra g/l is realized by matrices through its adjoint-type
representation (with an explicit faithfulness check), and the projection
of points is the induced representation of the group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .lts import (
    LinearSubspace,
    ideal_bracket_plus_n,
    ideal_ker_psi_plus_n,
    is_ideal,
)
from .numkernel import DEFAULT_TOL, Tolerance, mat_log, nullspace, op_norm
from .subspace import (
    ChartSplitError,
    ReflectionSubspace,
    exp_chart_split,
    generate_integral,
    lts_of_subspace,
    split_complement_criterion,
)
from .sympair import MatrixSymmetricPair, SigmaRule, group_sigma
from .symspace import SymPoint, base_point, exp_point, lts_of_pair, mu, tau_action

__all__ = [
    "CongruenceRelation",
    "QuotientResult",
    "QuotientGateError",
    "FaithfulnessError",
    "normal_lts_is_ideal",
    "congruence_from_ideal",
    "quotient_theorem_pipeline",
    "weak_submersion_check",
    "relation_closure_check",
]


class QuotientGateError(RuntimeError):
    """The gate failed: N is not a symmetric subspace, so the quotient cannot
    be made a symmetric space with a weak-submersion projection."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class FaithfulnessError(RuntimeError):
    """ker(ad on g/l) exceeds l: the quotient group has no faithful
    adjoint-type matrix realization."""


@dataclass(frozen=True, eq=False)
class CongruenceRelation:
    """Equivalence relation on M induced by a normal integral subgroup.

    ``relates`` answers in three values: True/False inside the normal-chart
    domain of the discrepancy, ``None`` outside it.
    """

    pair: MatrixSymmetricPair
    l_algebra: LinearSubspace  # full-algebra coordinates
    n_minus: LinearSubspace  # g_minus coordinates
    relates: Callable[[SymPoint, SymPoint], Optional[bool]]
    label: str = ""
    sequence_probes: Optional[Callable[[], list]] = None


def normal_lts_is_ideal(n_space: ReflectionSubspace) -> bool:
    """Extract the subspace's system and test the ideal condition in the ambient."""
    pair = n_space.pair
    n = lts_of_subspace(n_space)
    return is_ideal(lts_of_pair(pair), n, pair.tol)


def _chart_relates(pair: MatrixSymmetricPair, n: LinearSubspace):
    def relates(x: SymPoint, y: SymPoint) -> Optional[bool]:
        d = np.linalg.inv(x.rep) @ y.rep
        cartan = d @ np.linalg.inv(group_sigma(pair, d))
        if op_norm(cartan - np.eye(pair.ambient_n)) >= 1.0:
            return None
        v = pair.matrix_to_minus(0.5 * mat_log(cartan, pair.tol))
        return n.distance(v) <= pair.tol.threshold(max(float(np.linalg.norm(v)), 1.0))

    return relates


def congruence_from_ideal(pair: MatrixSymmetricPair, n: LinearSubspace) -> CongruenceRelation:
    """Congruence relation of the normal integral subspace generated by an ideal.

    Builds the Lie ideal span[g_minus, n] (+) n and relates two points iff
    the Cartan discrepancy of their representatives lands (chart-locally) in
    n after projection, i.e. vanishes in g_minus/n.
    """
    m = pair.dim_minus
    n = LinearSubspace.span(n.basis, m, pair.tol)
    if not is_ideal(lts_of_pair(pair), n, pair.tol):
        raise ValueError("congruence requires an ideal of the pair's triple system")
    l_alg = ideal_bracket_plus_n(pair.algebra(), pair.minus_subspace_to_full(n), pair.tol)
    return CongruenceRelation(
        pair=pair,
        l_algebra=l_alg,
        n_minus=n,
        relates=_chart_relates(pair, n),
        label=f"congruence({pair.label})",
    )


@dataclass(frozen=True, eq=False)
class QuotientResult:
    """Quotient symmetric pair with its point and algebra projections."""

    quotient_pair: MatrixSymmetricPair
    projection_points: Callable[[SymPoint], SymPoint]
    projection_algebra: np.ndarray  # (quotient dim_minus, source dim_minus)
    l_algebra: LinearSubspace
    relation: CongruenceRelation
    report: dict = field(default_factory=dict)


def _split_theta_invariant(pair: MatrixSymmetricPair, l: LinearSubspace):
    """Split a theta-invariant subspace into eigenparts (as coordinate rows)."""
    p = pair.dim_plus
    d = pair.dim
    plus_rows = np.zeros((0, d))
    minus_rows = np.zeros((0, d))
    if l.dim:
        proj_p = l.basis.copy()
        proj_p[:, p:] = 0.0
        proj_m = l.basis.copy()
        proj_m[:, :p] = 0.0
        plus_rows = LinearSubspace.span(proj_p, d, pair.tol).basis
        minus_rows = LinearSubspace.span(proj_m, d, pair.tol).basis
        if plus_rows.shape[0] + minus_rows.shape[0] != l.dim:
            raise ValueError("subspace is not theta-invariant")
    return plus_rows, minus_rows


def quotient_theorem_pipeline(
    pair: MatrixSymmetricPair,
    n: LinearSubspace,
    subspace: Optional[ReflectionSubspace] = None,
    rng: Optional[np.random.Generator] = None,
) -> QuotientResult:
    """Run the quotient theorem constructively for an ideal n of Lts(M).

    Gate: the integral subspace of n must pass the chart-split and
    split-complement criteria (it must be a symmetric subspace); otherwise
    :class:`QuotientGateError`.  The quotient group is realized as matrices
    through the adjoint representation on g/l, which must have kernel
    exactly l (:class:`FaithfulnessError` otherwise).
    """
    rng = rng or np.random.default_rng(0)
    tol = pair.tol
    m = pair.dim_minus
    n = LinearSubspace.span(n.basis, m, tol)
    mlts = lts_of_pair(pair)
    if not is_ideal(mlts, n, tol):
        raise ValueError("quotient pipeline requires an ideal")

    n_space = subspace if subspace is not None else generate_integral(n, pair)
    extracted = lts_of_subspace(n_space)
    if not extracted.equals(n, tol):
        raise ValueError("subspace system does not match the given ideal")
    try:
        chart = exp_chart_split(n_space, n, rng=rng)
    except ChartSplitError as exc:
        raise QuotientGateError(
            "no chart-split radius: N is not a symmetric subspace, so no weak-submersion quotient exists",
            report=exc.report.as_dict(),
        ) from exc
    f_comp = n.complement()
    if not split_complement_criterion(n_space, n, f_comp, rng=rng):
        raise QuotientGateError(
            "the complement ball meets N away from the base point: N is not a symmetric subspace",
            report=chart.as_dict(),
        )

    g_alg = pair.algebra()
    n_full = pair.minus_subspace_to_full(n)
    l_alg = ideal_ker_psi_plus_n(g_alg, n_full, tol)
    l_bracket = ideal_bracket_plus_n(g_alg, n_full, tol)
    if not l_alg.contains_subspace(l_bracket, tol):
        raise ValueError("internal: span[g-,n]+n escaped ker(psi)+n")

    # complement of l, chosen inside each theta eigenspace
    p, d = pair.dim_plus, pair.dim
    l_plus_rows, l_minus_rows = _split_theta_invariant(pair, l_alg)
    plus_block = LinearSubspace.span(l_plus_rows[:, :p], p, tol) if p else LinearSubspace.zero(0)
    minus_block = LinearSubspace.span(l_minus_rows[:, p:], m, tol) if m else LinearSubspace.zero(0)
    comp_plus = plus_block.complement().onb()  # rows in R^p
    comp_minus = minus_block.complement().onb()  # rows in R^m
    embed_plus = np.hstack([comp_plus, np.zeros((comp_plus.shape[0], m))])
    embed_minus = np.hstack([np.zeros((comp_minus.shape[0], p)), comp_minus])
    comp = np.vstack([embed_plus, embed_minus])  # (d', d) orthonormal, orthogonal to l
    d_out = comp.shape[0]
    p_out, m_out = comp_plus.shape[0], comp_minus.shape[0]

    def ad_ql(vec: np.ndarray) -> np.ndarray:
        """The operator of [vec, .] on g/l in complement coordinates."""
        return np.array([[comp[a] @ g_alg.bracket_vec(vec, comp[b]) for b in range(d_out)] for a in range(d_out)])

    stacked = np.array([ad_ql(e).reshape(-1) for e in np.eye(d)])  # row per basis vector
    kernel = LinearSubspace(d, nullspace(stacked.T, tol).T)
    faith_resid = max(
        (float(np.linalg.norm(ad_ql(row))) for row in l_alg.basis), default=0.0
    )
    if not kernel.equals(l_alg, tol):
        raise FaithfulnessError(
            f"ker(ad on g/l) has dimension {kernel.dim}, expected {l_alg.dim}: "
            "no faithful matrix realization of the quotient group"
        )

    ambient = d_out if d_out > 0 else 1
    if d_out > 0:
        plus_mats = np.array([ad_ql(r) for r in embed_plus]) if p_out else np.zeros((0, ambient, ambient))
        minus_mats = np.array([ad_ql(r) for r in embed_minus]) if m_out else np.zeros((0, ambient, ambient))
        theta_mat = np.diag([1.0] * p_out + [-1.0] * m_out)
    else:
        plus_mats = np.zeros((0, 1, 1))
        minus_mats = np.zeros((0, 1, 1))
        theta_mat = np.eye(1)
    qpair = MatrixSymmetricPair(
        ambient_n=ambient,
        plus_mats=plus_mats,
        minus_mats=minus_mats,
        sigma=SigmaRule("conjugation", theta_mat),
        label=f"{pair.label}/quotient",
        tol=tol,
    )

    proj_algebra = embed_minus[:, p:] if m_out else np.zeros((0, m))

    def project_point(x: SymPoint) -> SymPoint:
        if x.pair is not pair:
            raise ValueError("point does not belong to the source pair")
        g = x.rep
        gi = np.linalg.inv(g)
        cols = []
        for b in range(d_out):
            mat = pair.to_matrix(comp[b])
            cols.append(comp @ pair.matrix_coords(g @ mat @ gi))
        rep = np.array(cols).T if d_out else np.eye(1)
        return SymPoint.from_rep(qpair, rep)

    relation = congruence_from_ideal(pair, n)
    report = {
        "l_basis": l_alg.basis.tolist(),
        "l_dim": l_alg.dim,
        "faithfulness_residual": faith_resid,
        "quotient_dim": d_out,
        "quotient_dim_minus": m_out,
        "quotient_tensor": qpair.structure_tensor.tolist(),
        "chart_radius": chart.radius,
        "rank_checks": {
            "projection_rank": int(np.linalg.matrix_rank(proj_algebra)) if proj_algebra.size else 0,
            "expected_rank": m_out,
        },
    }
    return QuotientResult(
        quotient_pair=qpair,
        projection_points=project_point,
        projection_algebra=proj_algebra,
        l_algebra=l_alg,
        relation=relation,
        report=report,
    )


def submersion_sample_rates(
    qr: QuotientResult,
    rng: Optional[np.random.Generator] = None,
    samples: int = 100,
    scale: float = 0.2,
) -> dict:
    """Pass rates of the sampled quotient laws (for reports).

    ``projection_morphism``: pi(mu(x,y)) = mu(pi x, pi y); ``kernel_relation``:
    relates(x,y) agrees with pi(x) = pi(y) on decidable samples.
    """
    rng = rng or np.random.default_rng(0)
    pair = qr.relation.pair
    morph_pass = rel_pass = rel_total = 0
    for _ in range(samples):
        u = scale * rng.standard_normal(pair.dim_minus)
        v = scale * rng.standard_normal(pair.dim_minus)
        x, y = exp_point(pair, u), exp_point(pair, v)
        lhs = qr.projection_points(mu(x, y))
        rhs = mu(qr.projection_points(x), qr.projection_points(y))
        morph_pass += int(lhs.same(rhs))
        related = qr.relation.relates(x, y)
        if related is not None:
            rel_total += 1
            rel_pass += int(related == qr.projection_points(x).same(qr.projection_points(y)))
    return {
        "projection_morphism": morph_pass / samples,
        "kernel_relation": rel_pass / rel_total if rel_total else 1.0,
    }


def weak_submersion_check(
    qr: QuotientResult,
    rng: Optional[np.random.Generator] = None,
    samples: int = 100,
    scale: float = 0.3,
) -> bool:
    """Tangent map is a linear quotient map and the projection is a morphism.

    Checks full row rank of the algebra projection, kernel equal to n, and
    pi(mu(x, y)) = mu(pi(x), pi(y)) on sampled points.
    """
    rng = rng or np.random.default_rng(0)
    pair = qr.relation.pair
    tol = pair.tol
    a = qr.projection_algebra
    m_out = qr.quotient_pair.dim_minus
    if a.size:
        if np.linalg.matrix_rank(a) != m_out:
            return False
        ker = LinearSubspace(pair.dim_minus, nullspace(a, tol).T)
    else:
        if m_out != 0:
            return False
        ker = LinearSubspace.full(pair.dim_minus)
    if not ker.equals(qr.relation.n_minus, tol):
        return False

    for _ in range(samples):
        u = scale * rng.standard_normal(pair.dim_minus)
        v = scale * rng.standard_normal(pair.dim_minus)
        x, y = exp_point(pair, u), exp_point(pair, v)
        if rng.uniform() < 0.3:
            g = pair.random_element(rng, letters=1, scale=0.2)
            x = tau_action(pair, g, x)
        lhs = qr.projection_points(mu(x, y))
        rhs = mu(qr.projection_points(x), qr.projection_points(y))
        if not lhs.same(rhs):
            return False
    return True


def relation_closure_check(
    relation: CongruenceRelation,
    rng: Optional[np.random.Generator] = None,
    samples: int = 10,
    steps: int = 5,
) -> dict:
    """Sequential-stability test of the relation along shrinking perturbations.

    Generic sequences are tau-translates of a related pair, which stay related
    and converge to a related limit.  Relations carrying their own probe
    sequences (the dense-line case) are tested through those as well; the
    report marks failure with the offending limit pair.
    """
    pair = relation.pair
    rng = rng or np.random.default_rng(0)
    m = pair.dim_minus
    for _ in range(samples):
        u = 0.2 * rng.standard_normal(m)
        w = 0.1 * rng.standard_normal(m)
        wn = relation.n_minus.project(w) if relation.n_minus.dim else np.zeros(m)
        x = exp_point(pair, u)
        y = SymPoint.from_rep(pair, x.rep @ pair.exp(pair.minus_to_matrix(wn)))
        if relation.relates(x, y) is False:
            return {"ok": False, "witness": "constructed related pair rejected"}
        direction = pair.random_algebra_element(rng, 0.2)
        eps = 0.2
        for _ in range(steps):
            g = pair.exp(eps * direction)
            xi, yi = tau_action(pair, g, x), tau_action(pair, g, y)
            if relation.relates(xi, yi) is False:
                return {"ok": False, "witness": "tau translate left the relation"}
            eps /= 2.0
        if relation.relates(x, y) is False:
            return {"ok": False, "witness": "limit pair rejected"}
    if relation.sequence_probes is not None:
        for seq, limit in relation.sequence_probes():
            for xi, yi in seq:
                if relation.relates(xi, yi) is False:
                    return {"ok": False, "witness": "probe sequence not inside the relation"}
            lx, ly = limit
            if relation.relates(lx, ly) is not True:
                return {
                    "ok": False,
                    "witness": "limit of a related sequence escapes the relation",
                }
    return {"ok": True, "witness": None}
