"""Reflection, integral and symmetric subspaces of M = G/K.

A subspace is a membership oracle over points plus enough structure to
linearize it at the base point.  Membership may return ``None`` ("unknown")
outside the normal-chart domain: global membership in a generated integral
subspace is undecidable from finite data, and every criterion the theory
offers is local at the base point anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .lts import LinearSubspace, VerificationError, is_subsystem
from .numkernel import DEFAULT_TOL, Tolerance, nullspace
from .symspace import SymMorphism, SymPoint, base_point, exp_point, log_point, lts_of_pair, mu
from .sympair import MatrixSymmetricPair

__all__ = [
    "ProbeWitness",
    "ReflectionSubspace",
    "CertificationError",
    "ChartSplitError",
    "ChartReport",
    "algebraic_subspace",
    "fixed_point_subspace",
    "whole_space",
    "base_only",
    "generate_integral",
    "lts_of_subspace",
    "lts_roundtrip_check",
    "exp_chart_split",
    "split_complement_criterion",
    "preimage_subspace",
    "kernel_subspace",
    "mu_closure_check",
]

CERTIFICATION_GRID = (0.1, -0.1, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0)


class CertificationError(RuntimeError):
    """Linearized candidate failed its exponential-ray certification."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ChartSplitError(RuntimeError):
    """No chart-split radius found down to the floor; carries the report."""

    def __init__(self, message: str, report: "ChartReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True, eq=False)
class ProbeWitness:
    """A certified member of a subspace, used to drive falsification checks."""

    vector: np.ndarray  # g_minus coordinates; exp_point(vector) is a member
    note: str = ""


@dataclass(frozen=True, eq=False)
class ReflectionSubspace:
    """Pointed reflection subspace given by a membership predicate.

    ``kind`` selects how the candidate Lie triple system is linearized:
    ``algebraic`` (nullspace of the constraint Jacobian at b), ``fixed_point``
    (+1 eigenspace of an automorphism derivative), ``generated`` (the seed
    itself) or ``preimage`` (pullback of the target subspace).
    """

    pair: MatrixSymmetricPair
    membership: Callable[[SymPoint], Optional[bool]]
    kind: str
    label: str = ""
    seed: Optional[LinearSubspace] = None  # g_minus coordinates
    constraints: Optional[Callable[[np.ndarray], np.ndarray]] = None
    automorphism: Optional[SymMorphism] = None
    backing: Optional[tuple] = None  # (SymMorphism, target ReflectionSubspace)
    probes: Optional[Callable[[float, Optional[LinearSubspace]], Sequence[ProbeWitness]]] = None

    def member(self, x: SymPoint) -> Optional[bool]:
        return self.membership(x)

    def candidate_subspace(self) -> LinearSubspace:
        """Linearization of the subspace at the base point (uncertified)."""
        m = self.pair.dim_minus
        tol = self.pair.tol
        if self.kind == "generated":
            if self.seed is None:
                raise ValueError("generated subspace without a seed")
            return LinearSubspace.span(self.seed.basis, m, tol)
        if self.kind == "fixed_point":
            if self.automorphism is None:
                raise ValueError("fixed-point subspace without an automorphism")
            a = self.automorphism.minus_map
            return LinearSubspace(m, nullspace(a - np.eye(m), tol).T)
        if self.kind == "preimage":
            f, n2 = self.backing
            comp = n2.complement().onb()  # rows spanning the complement of n2
            if comp.shape[0] == 0:
                return LinearSubspace.full(m)
            return LinearSubspace(m, nullspace(comp @ f.minus_map, tol).T)
        if self.kind == "algebraic":
            if self.constraints is None:
                raise ValueError("algebraic subspace without constraints")
            h = 1e-6
            cols = []
            for i in range(m):
                e = np.zeros(m)
                e[i] = 1.0
                fp = np.asarray(self.constraints(exp_point(self.pair, h * e).cartan), dtype=float)
                fm = np.asarray(self.constraints(exp_point(self.pair, -h * e).cartan), dtype=float)
                cols.append((fp - fm) / (2.0 * h))
            jac = np.array(cols).T if cols else np.zeros((0, m))
            if jac.ndim == 1:
                jac = jac.reshape(1, -1)
            # finite differences leave O(h^2) noise well above machine eps
            fd_tol = Tolerance(abs_eps=max(tol.abs_eps, 1e-8), rel_eps=max(tol.rel_eps, 1e-7))
            return LinearSubspace(m, nullspace(jac, fd_tol).T)
        raise ValueError(f"unknown subspace kind {self.kind!r}")

    def descriptor(self) -> dict:
        out = {"kind": self.kind, "label": self.label}
        if self.seed is not None:
            out["seed_basis"] = self.seed.basis.tolist()
        if self.automorphism is not None:
            out["automorphism"] = self.automorphism.label
        if self.constraints is not None:
            out["constraints"] = getattr(self.constraints, "constraint_name", "custom")
        return out


def algebraic_subspace(
    pair: MatrixSymmetricPair,
    constraints: Callable[[np.ndarray], np.ndarray],
    label: str = "",
    membership: Optional[Callable[[SymPoint], Optional[bool]]] = None,
    probes=None,
) -> ReflectionSubspace:
    """Subspace cut out by polynomial constraints on the Cartan matrix."""

    def default_member(x: SymPoint) -> bool:
        res = np.asarray(constraints(x.cartan), dtype=float)
        scale = max(float(np.linalg.norm(x.cartan)), 1.0)
        return float(np.linalg.norm(res)) <= pair.tol.threshold(scale)

    return ReflectionSubspace(
        pair=pair,
        membership=membership or default_member,
        kind="algebraic",
        label=label,
        constraints=constraints,
        probes=probes,
    )


def fixed_point_subspace(pair: MatrixSymmetricPair, automorphism: SymMorphism, label: str = "") -> ReflectionSubspace:
    """Fixed-point set of a pair automorphism (always a reflection subspace)."""
    if automorphism.source is not pair or automorphism.target is not pair:
        raise ValueError("automorphism must map the pair to itself")

    def member(x: SymPoint) -> bool:
        return automorphism(x).same(x)

    return ReflectionSubspace(
        pair=pair, membership=member, kind="fixed_point", label=label, automorphism=automorphism
    )


def whole_space(pair: MatrixSymmetricPair) -> ReflectionSubspace:
    def no_constraints(cartan: np.ndarray) -> np.ndarray:
        return np.zeros(0)

    no_constraints.constraint_name = "none"
    return algebraic_subspace(pair, no_constraints, label="whole_space")


def base_only(pair: MatrixSymmetricPair) -> ReflectionSubspace:
    def at_base(cartan: np.ndarray) -> np.ndarray:
        return (cartan - np.eye(pair.ambient_n)).ravel()

    at_base.constraint_name = "cartan_equals_identity"
    return algebraic_subspace(pair, at_base, label="base_only")


def generate_integral(seed: LinearSubspace, pair: MatrixSymmetricPair) -> ReflectionSubspace:
    """The connected integral subspace generated by a triple subsystem.

    Membership is chart-local: a point is a member iff its normal-chart
    preimage lands in the seed; outside the chart domain the answer is
    ``None`` (unknown), never a guess.
    """
    m = pair.dim_minus
    seed = LinearSubspace.span(seed.basis, m, pair.tol)
    if not is_subsystem(lts_of_pair(pair), seed, pair.tol):
        raise ValueError("seed is not a triple subsystem")

    def member(x: SymPoint) -> Optional[bool]:
        try:
            v = log_point(pair, x)
        except ValueError:
            return None
        return seed.distance(v) <= pair.tol.threshold(max(float(np.linalg.norm(v)), 1.0))

    return ReflectionSubspace(
        pair=pair, membership=member, kind="generated", label="generated_integral", seed=seed
    )


def lts_of_subspace(n_space: ReflectionSubspace) -> LinearSubspace:
    """Certified Lie triple system of a pointed reflection subspace.

    The linearized candidate is certified on the documented exponential-ray
    grid (a definite non-member refutes it; "unknown" outside the chart does
    not) and must pass is_subsystem on the ambient system.
    """
    pair = n_space.pair
    base = base_point(pair)
    if n_space.member(base) is False:
        raise CertificationError("subspace does not contain the base point", witness=(None, 0.0))
    cand = n_space.candidate_subspace()
    for v in cand.onb():
        for t in CERTIFICATION_GRID:
            if n_space.member(exp_point(pair, t * v)) is False:
                raise CertificationError(
                    f"candidate ray failed membership at t={t}", witness=(v, t)
                )
    if not is_subsystem(lts_of_pair(pair), cand, pair.tol):
        raise CertificationError("candidate is not a triple subsystem", witness=(cand.basis, None))
    return cand


def lts_roundtrip_check(seed: LinearSubspace, pair: MatrixSymmetricPair) -> bool:
    """Seed -> generated integral subspace -> extracted system: spans must agree."""
    extracted = lts_of_subspace(generate_integral(seed, pair))
    seed_n = LinearSubspace.span(seed.basis, pair.dim_minus, pair.tol)
    return extracted.equals(seed_n, pair.tol)


@dataclass(frozen=True)
class ChartReport:
    ok: bool
    radius: float
    max_violation: float
    witness: Optional[np.ndarray]
    history: tuple = field(default_factory=tuple)  # ((radius, violation), ...)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "radius": self.radius,
            "max_violation": self.max_violation,
            "witness": None if self.witness is None else np.asarray(self.witness).tolist(),
            "history": [list(h) for h in self.history],
        }


def _ball_sample(rng: np.random.Generator, basis: np.ndarray, radius: float) -> np.ndarray:
    """Uniform-ish sample in the given span with norm <= radius (nonzero)."""
    k = basis.shape[0]
    u = rng.standard_normal(k)
    u /= max(np.linalg.norm(u), 1e-300)
    scale = radius * rng.uniform(0.2, 1.0)
    return scale * (u @ basis)


def exp_chart_split(
    n_space: ReflectionSubspace,
    n: LinearSubspace,
    rng: Optional[np.random.Generator] = None,
    samples: int = 40,
    start_radius: float = 1.0,
    floor: float = 1e-3,
) -> ChartReport:
    """Search for a radius where exp_point(v) in N iff v in n on the ball.

    Random samples check both directions; certified probe witnesses from the
    subspace (if any) refute radii that sampling alone cannot.  The radius
    halves on failure; hitting the floor raises :class:`ChartSplitError`.
    """
    pair = n_space.pair
    rng = rng or np.random.default_rng(0)
    m = pair.dim_minus
    history = []
    radius = start_radius
    free = np.eye(m)
    while True:
        violation = 0.0
        witness = None

        for _ in range(samples if n.dim else 0):
            v = _ball_sample(rng, n.onb(), radius)
            if n_space.member(exp_point(pair, v)) is False:
                violation = max(violation, float(np.linalg.norm(v)))
                witness = v
        for _ in range(samples):
            w = _ball_sample(rng, free, radius)
            gap = n.distance(w)
            if gap > 0.05 * radius and n_space.member(exp_point(pair, w)) is True:
                violation = max(violation, gap)
                witness = w
        if n_space.probes is not None:
            for probe in n_space.probes(radius, None):
                w = np.asarray(probe.vector, dtype=float)
                if np.linalg.norm(w) <= radius:
                    gap = n.distance(w)
                    if gap > pair.tol.threshold(1.0):
                        violation = max(violation, gap)
                        witness = w

        history.append((radius, violation))
        if violation == 0.0:
            return ChartReport(True, radius, 0.0, None, tuple(history))
        if radius <= floor:
            report = ChartReport(False, radius, violation, witness, tuple(history))
            raise ChartSplitError(
                f"no chart-split radius above floor {floor}", report
            )
        radius /= 2.0


def split_complement_criterion(
    n_space: ReflectionSubspace,
    n: LinearSubspace,
    f_comp: LinearSubspace,
    rng: Optional[np.random.Generator] = None,
    samples: int = 200,
    radius: float = 0.5,
) -> bool:
    """Falsification check of N intersect Exp(F-ball) = {b}.

    Returns False as soon as a nonzero sampled (or certified probe) direction
    in F exponentiates into N; True means no refutation was found.
    """
    pair = n_space.pair
    m = pair.dim_minus
    if n.dim + f_comp.dim != m:
        raise ValueError("F is not a complement of n (dimension count)")
    stacked = np.vstack([n.basis, f_comp.basis])
    if LinearSubspace.span(stacked, m, pair.tol).dim != m:
        raise ValueError("F is not a complement of n (rank)")
    rng = rng or np.random.default_rng(0)
    if f_comp.dim == 0:
        return True
    for _ in range(samples):
        w = _ball_sample(rng, f_comp.onb(), radius)
        if np.linalg.norm(w) < 1e-6:
            continue
        if n_space.member(exp_point(pair, w)) is True:
            return False
    if n_space.probes is not None:
        for probe in n_space.probes(radius, f_comp):
            w = np.asarray(probe.vector, dtype=float)
            if 1e-12 < np.linalg.norm(w) <= radius and f_comp.distance(w) <= pair.tol.threshold(1.0):
                return False
    return True


def preimage_subspace(f: SymMorphism, n2_space: ReflectionSubspace) -> ReflectionSubspace:
    """Preimage of a pointed reflection subspace under a morphism.

    The extracted Lie triple system is verified against the nullspace
    computation A^-1(n2) before returning.
    """
    if n2_space.pair is not f.target:
        raise ValueError("target subspace lives over the wrong pair")
    if n2_space.member(f(base_point(f.source))) is False:
        raise ValueError("target subspace is not pointed at f(b1)")
    n2 = lts_of_subspace(n2_space)

    def member(x: SymPoint) -> Optional[bool]:
        return n2_space.member(f(x))

    pre = ReflectionSubspace(
        pair=f.source,
        membership=member,
        kind="preimage",
        label=f"preimage({n2_space.label})",
        backing=(f, n2),
    )
    extracted = lts_of_subspace(pre)
    pullback = pre.candidate_subspace()
    if not extracted.equals(pullback, f.source.tol):
        raise VerificationError("extracted system differs from the pullback nullspace")
    return pre


def kernel_subspace(f: SymMorphism) -> ReflectionSubspace:
    """Kernel f^-1(b2) as a reflection subspace; its system is ker of the tangent map."""
    pre = preimage_subspace(f, base_only(f.target))
    return ReflectionSubspace(
        pair=pre.pair,
        membership=pre.membership,
        kind=pre.kind,
        label=f"kernel({f.label})" if f.label else "kernel",
        backing=pre.backing,
    )


def mu_closure_check(
    n_space: ReflectionSubspace,
    rng: Optional[np.random.Generator] = None,
    samples: int = 30,
    scale: float = 0.15,
) -> bool:
    """Sampled closure of membership under the point product.

    Draws members x, y near the base (through the seed when present) and
    requires mu(x, y) not to be a definite non-member whenever it is decidable.
    """
    pair = n_space.pair
    rng = rng or np.random.default_rng(0)
    if n_space.seed is not None and n_space.seed.dim > 0:
        basis = n_space.seed.onb()
    else:
        basis = np.eye(pair.dim_minus)
    for _ in range(samples):
        u = _ball_sample(rng, basis, scale)
        v = _ball_sample(rng, basis, scale)
        x, y = exp_point(pair, u), exp_point(pair, v)
        if n_space.member(x) is not True or n_space.member(y) is not True:
            continue
        if n_space.member(mu(x, y)) is False:
            return False
    return True
