"""Lie triple systems as structure tensors.

A Lie triple system on R^d is stored as a coefficient tensor ``c`` with
``[e_i, e_j, e_k] = sum_l c[i,j,k,l] e_l``.  The module also hosts linear
subspaces (the common currency of all subsystem/ideal computations) and
symmetric Lie algebras ``g = g_plus + g_minus`` with their bracket tensor
and involution, together with the quotient, standard-embedding and
psi-representation machinery built on top of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numkernel import DEFAULT_TOL, Tolerance, nullspace, numerical_rank

__all__ = [
    "LinearSubspace",
    "LieTripleSystem",
    "LtsMorphism",
    "SymmetricLieAlgebra",
    "LtsAxiomReport",
    "check_lts_axioms",
    "bracket",
    "is_subsystem",
    "is_ideal",
    "ideal_report",
    "quotient_lts",
    "direct_sum_lts",
    "standard_embedding",
    "PsiRepresentation",
    "psi_representation",
    "ideal_ker_psi_plus_n",
    "ideal_bracket_plus_n",
    "displacement_algebra",
    "algebra_to_json",
    "algebra_from_json",
]


class VerificationError(RuntimeError):
    """A numerically re-checked structural guarantee failed."""


# ---------------------------------------------------------------------------
# linear subspaces


@dataclass(frozen=True, eq=False)
class LinearSubspace:
    """Subspace of R^ambient_dim spanned by the rows of ``basis``."""

    ambient_dim: int
    basis: np.ndarray  # shape (k, ambient_dim), linearly independent rows

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if b.size == 0:
            b = b.reshape(0, self.ambient_dim)
        if b.shape[1] != self.ambient_dim:
            raise ValueError("basis vectors do not match the ambient dimension")
        if b.shape[0] and numerical_rank(b) != b.shape[0]:
            raise ValueError("basis rows are linearly dependent")
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, ambient_dim: int, tol: Tolerance = DEFAULT_TOL) -> "LinearSubspace":
        """Orthonormalized span of (possibly dependent) vectors."""
        v = np.atleast_2d(np.asarray(vectors, dtype=float))
        if v.size == 0:
            return cls(ambient_dim, np.zeros((0, ambient_dim)))
        if v.shape[1] != ambient_dim:
            raise ValueError("vectors do not match the ambient dimension")
        _, sing, vt = np.linalg.svd(v)
        cut = tol.abs_eps + tol.rel_eps * (sing[0] if sing.size else 0.0)
        rank = int(np.sum(sing > cut))
        return cls(ambient_dim, vt[:rank])

    @classmethod
    def zero(cls, ambient_dim: int) -> "LinearSubspace":
        return cls(ambient_dim, np.zeros((0, ambient_dim)))

    @classmethod
    def full(cls, ambient_dim: int) -> "LinearSubspace":
        return cls(ambient_dim, np.eye(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def onb(self) -> np.ndarray:
        """Orthonormal row basis (deterministic, via SVD)."""
        if self.dim == 0:
            return self.basis
        _, _, vt = np.linalg.svd(self.basis)
        return vt[: self.dim]

    def project(self, v: np.ndarray) -> np.ndarray:
        """Orthogonal projection of ``v`` onto the subspace."""
        q = self.onb()
        return q.T @ (q @ np.asarray(v, dtype=float))

    def distance(self, v: np.ndarray) -> float:
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.project(v)))

    def contains(self, v: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
        v = np.asarray(v, dtype=float)
        return self.distance(v) <= tol.threshold(max(np.linalg.norm(v), 1.0))

    def contains_subspace(self, other: "LinearSubspace", tol: Tolerance = DEFAULT_TOL) -> bool:
        if other.dim == 0:
            return True
        stacked = np.vstack([self.basis, other.basis])
        return numerical_rank(stacked, tol) == self.dim

    def equals(self, other: "LinearSubspace", tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.dim == other.dim and self.contains_subspace(other, tol)

    def complement(self) -> "LinearSubspace":
        """Orthogonal complement inside the ambient space."""
        if self.dim == 0:
            return LinearSubspace.full(self.ambient_dim)
        return LinearSubspace(self.ambient_dim, nullspace(self.basis).T)

    def map_through(self, matrix: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> "LinearSubspace":
        """Image subspace under a linear map given by ``matrix`` (target x ambient)."""
        if self.dim == 0:
            return LinearSubspace.zero(matrix.shape[0])
        return LinearSubspace.span(self.basis @ matrix.T, matrix.shape[0], tol)


def subspace_sum(a: LinearSubspace, b: LinearSubspace, tol: Tolerance = DEFAULT_TOL) -> LinearSubspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return LinearSubspace.span(np.vstack([a.basis, b.basis]), a.ambient_dim, tol)


# ---------------------------------------------------------------------------
# Lie triple systems


@dataclass(frozen=True, eq=False)
class LieTripleSystem:
    """Finite-dimensional real Lie triple system given by its tensor."""

    dim: int
    tensor: np.ndarray  # shape (d, d, d, d)
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=float)
        expected = (self.dim,) * 4
        if t.shape != expected:
            raise ValueError(f"tensor shape {t.shape} != {expected}")
        object.__setattr__(self, "tensor", t)

    def bracket(self, x, y, z) -> np.ndarray:
        x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
        for v in (x, y, z):
            if v.shape != (self.dim,):
                raise ValueError(f"vector length {v.shape} != ({self.dim},)")
        return np.einsum("ijkl,i,j,k->l", self.tensor, x, y, z)

    def operator(self, x, y) -> np.ndarray:
        """The inner map D_{x,y} = [x, y, .] as a (dim x dim) matrix."""
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        return np.einsum("ijkl,i,j->lk", self.tensor, x, y)


@dataclass(frozen=True, eq=False)
class LtsAxiomReport:
    antisymmetry: float
    cyclic: float
    derivation: float

    @property
    def max_residual(self) -> float:
        return max(self.antisymmetry, self.cyclic, self.derivation)

    def passed(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.max_residual <= tol.abs_eps

    def as_dict(self) -> dict:
        return {
            "antisymmetry": self.antisymmetry,
            "cyclic": self.cyclic,
            "derivation": self.derivation,
            "max_residual": self.max_residual,
        }


def check_lts_axioms(m: LieTripleSystem) -> LtsAxiomReport:
    """Residuals of the three defining identities over all basis tuples."""
    c = m.tensor
    if m.dim == 0:
        return LtsAxiomReport(0.0, 0.0, 0.0)
    anti = float(np.max(np.abs(c + c.transpose(1, 0, 2, 3))))
    cyc = float(np.max(np.abs(c + c.transpose(1, 2, 0, 3) + c.transpose(2, 0, 1, 3))))
    lhs = np.einsum("uvwm,abml->abuvwl", c, c)
    rhs = (
        np.einsum("abum,mvwl->abuvwl", c, c)
        + np.einsum("abvm,umwl->abuvwl", c, c)
        + np.einsum("abwm,uvml->abuvwl", c, c)
    )
    der = float(np.max(np.abs(lhs - rhs)))
    return LtsAxiomReport(anti, cyc, der)


def bracket(m: LieTripleSystem, x, y, z) -> np.ndarray:
    return m.bracket(x, y, z)


def _basis_brackets(m: LieTripleSystem, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """All brackets [u, v, w] for u in rows(a), v in rows(b), w in rows(c)."""
    return np.einsum("ijkl,ai,bj,ck->abcl", m.tensor, a, b, c).reshape(-1, m.dim)


def is_subsystem(m: LieTripleSystem, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff [n, n, n] lies in n within tolerance."""
    if n.ambient_dim != m.dim:
        raise ValueError("subspace ambient dimension does not match the system")
    if n.dim == 0:
        return True
    vals = _basis_brackets(m, n.onb(), n.onb(), n.onb())
    return all(n.contains(v, tol) for v in vals)


def ideal_report(m: LieTripleSystem, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Residuals of the ideal condition [n,m,m] <= n and its two consequences."""
    if n.ambient_dim != m.dim:
        raise ValueError("subspace ambient dimension does not match the system")
    full = np.eye(m.dim)
    q = n.onb()

    def worst(a, b, c):
        vals = _basis_brackets(m, a, b, c)
        return max((n.distance(v) for v in vals), default=0.0)

    if n.dim == 0:
        slot1 = worst(np.zeros((0, m.dim)), full, full)
        return {"n_m_m": slot1, "m_n_m": 0.0, "m_m_n": 0.0}
    return {
        "n_m_m": worst(q, full, full),
        "m_n_m": worst(full, q, full),
        "m_m_n": worst(full, full, q),
    }


def is_ideal(m: LieTripleSystem, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff [n, m, m] lies in n; the two consequence slots are re-checked.

    An ideal automatically satisfies [m,n,m] <= n and [m,m,n] <= n; if the
    primary condition holds but a consequence fails, the tensor or tolerance
    is inconsistent and a :class:`VerificationError` is raised.
    """
    rep = ideal_report(m, n, tol)
    cut = tol.threshold()
    primary = rep["n_m_m"] <= cut
    if primary and (rep["m_n_m"] > cut or rep["m_m_n"] > cut):
        raise VerificationError(f"ideal consequence slots failed: {rep}")
    return primary


def quotient_lts(m: LieTripleSystem, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL):
    """Quotient m/n on the orthogonal complement of an ideal n.

    Returns ``(quotient, projection)`` where the projection is a verified
    :class:`LtsMorphism` with kernel n.
    """
    if not is_ideal(m, n, tol):
        raise ValueError("quotient requires an ideal")
    comp = n.complement().onb()  # rows: chosen representatives of m/n
    k = comp.shape[0]
    proj = comp  # (k, d): coordinates of the class of a vector
    tensor = np.einsum(
        "ijkl,ai,bj,ck,dl->abcd", m.tensor, comp, comp, comp, proj
    )
    quot = LieTripleSystem(k, tensor, label=f"{m.label}/{n.dim}d" if m.label else "")
    morphism = LtsMorphism(source=m, target=quot, matrix=proj)
    if not morphism.is_valid(tol):
        raise VerificationError("quotient projection failed the morphism check")
    ker = LinearSubspace(m.dim, nullspace(proj, tol).T)
    if not ker.equals(LinearSubspace.span(n.basis, m.dim, tol), tol):
        raise VerificationError("projection kernel does not match the ideal")
    return quot, morphism


def direct_sum_lts(a: LieTripleSystem, b: LieTripleSystem, label: str = "") -> LieTripleSystem:
    d = a.dim + b.dim
    t = np.zeros((d, d, d, d))
    t[: a.dim, : a.dim, : a.dim, : a.dim] = a.tensor
    t[a.dim :, a.dim :, a.dim :, a.dim :] = b.tensor
    return LieTripleSystem(d, t, label=label or f"{a.label}(+){b.label}")


@dataclass(frozen=True, eq=False)
class LtsMorphism:
    """Linear map between Lie triple systems, checked on basis triples."""

    source: LieTripleSystem
    target: LieTripleSystem
    matrix: np.ndarray  # (target.dim, source.dim)

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.shape != (self.target.dim, self.source.dim):
            raise ValueError("morphism matrix has the wrong shape")
        object.__setattr__(self, "matrix", a)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def residual(self) -> float:
        a = self.matrix
        mapped = np.einsum("ijkl,pl->ijkp", self.source.tensor, a)
        direct = np.einsum("pqrs,pi,qj,rk->ijks", self.target.tensor, a, a, a)
        if mapped.size == 0:
            return 0.0
        return float(np.max(np.abs(mapped - direct)))

    def is_valid(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        scale = max(float(np.linalg.norm(self.matrix)) ** 3, 1.0)
        return self.residual() <= tol.threshold(scale)


# ---------------------------------------------------------------------------
# symmetric Lie algebras


@dataclass(frozen=True, eq=False)
class SymmetricLieAlgebra:
    """Lie algebra with involution; tensor b[i,j,l] gives [e_i,e_j] = sum b l e_l."""

    dim: int
    bracket_tensor: np.ndarray  # (d, d, d)
    theta: np.ndarray  # (d, d) involution matrix
    plus_basis: LinearSubspace = field(repr=False)
    minus_basis: LinearSubspace = field(repr=False)
    label: str = ""

    def __post_init__(self):
        b = np.asarray(self.bracket_tensor, dtype=float)
        th = np.asarray(self.theta, dtype=float)
        if b.shape != (self.dim,) * 3:
            raise ValueError("bracket tensor shape mismatch")
        if th.shape != (self.dim, self.dim):
            raise ValueError("theta shape mismatch")
        object.__setattr__(self, "bracket_tensor", b)
        object.__setattr__(self, "theta", th)

    @classmethod
    def from_eigensplit(cls, bracket_tensor, theta, label: str = "", tol: Tolerance = DEFAULT_TOL):
        """Build with eigenspaces computed from theta (theta^2 = id required)."""
        th = np.asarray(theta, dtype=float)
        d = th.shape[0]
        plus = LinearSubspace(d, nullspace(th - np.eye(d), tol).T)
        minus = LinearSubspace(d, nullspace(th + np.eye(d), tol).T)
        return cls(d, np.asarray(bracket_tensor, dtype=float), th, plus, minus, label)

    def bracket_vec(self, x, y) -> np.ndarray:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        return np.einsum("ijl,i,j->l", self.bracket_tensor, x, y)

    def ad(self, x) -> np.ndarray:
        """ad(x) = [x, .] as a (dim x dim) matrix."""
        return np.einsum("ijl,i->lj", self.bracket_tensor, np.asarray(x, dtype=float))

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> dict:
        """Residuals of antisymmetry, Jacobi, theta^2=id, theta automorphism,
        eigenspace correctness and spanning."""
        b, th, d = self.bracket_tensor, self.theta, self.dim
        out = {}
        out["antisymmetry"] = float(np.max(np.abs(b + b.transpose(1, 0, 2)))) if d else 0.0
        jac = (
            np.einsum("jkm,iml->ijkl", b, b)
            - np.einsum("ijm,mkl->ijkl", b, b)
            - np.einsum("ikm,jml->ijkl", b, b)
        )
        # [x,[y,z]] = [[x,y],z] + [y,[x,z]]
        out["jacobi"] = float(np.max(np.abs(jac))) if d else 0.0
        out["theta_involutive"] = float(np.max(np.abs(th @ th - np.eye(d)))) if d else 0.0
        # theta[x,y] = [theta x, theta y]
        auto = np.einsum("pl,ijp->ijl", th, b) - np.einsum("ijl,ip,jq->pql", b, th, th)
        out["theta_automorphism"] = float(np.max(np.abs(auto))) if d else 0.0
        eig = 0.0
        for sub, sign in ((self.plus_basis, 1.0), (self.minus_basis, -1.0)):
            for row in sub.basis:
                eig = max(eig, float(np.linalg.norm(th @ row - sign * row)))
        out["eigenbasis"] = eig
        out["spanning"] = 0.0 if self.plus_basis.dim + self.minus_basis.dim == d else 1.0
        out["max_residual"] = max(out.values())
        return out

    def minus_lts(self, tol: Tolerance = DEFAULT_TOL) -> tuple[LieTripleSystem, np.ndarray]:
        """The Lie triple system [x,y,z] = [[x,y],z] on g_minus.

        Returns the system in minus-basis coordinates together with the onb
        rows used as that basis (``(k, dim)``).
        """
        q = self.minus_basis.onb()
        k = q.shape[0]
        inner = np.einsum("ijl,ai,bj->abl", self.bracket_tensor, q, q)
        vals = np.einsum("ijl,abi,cj->abcl", self.bracket_tensor, inner, q)
        # triple bracket must land back in g_minus
        coords = vals @ q.T
        resid = float(np.max(np.abs(vals - coords @ q))) if vals.size else 0.0
        if resid > tol.threshold(max(float(np.max(np.abs(vals))) if vals.size else 0.0, 1.0)):
            raise VerificationError("triple bracket leaves the (-1)-eigenspace")
        label = f"{self.label}-" if self.label else ""
        return LieTripleSystem(k, coords, label=label), q


def standard_embedding(
    m: LieTripleSystem, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL
) -> SymmetricLieAlgebra:
    """Symmetric Lie algebra h = [n,n] (+) n built from a triple subsystem.

    The plus part is the span of the inner maps D_{x,y} = [x,y,.] restricted
    to n, the minus part is n itself, and theta is +1/-1 on the two parts.
    """
    if not is_subsystem(m, n, tol):
        raise ValueError("standard embedding requires a triple subsystem")
    q = n.onb()  # (k, d) rows
    k = q.shape[0]
    ops = []
    for a in range(k):
        for b in range(k):
            full_op = m.operator(q[a], q[b])  # (d, d) on the ambient system
            ops.append(q @ full_op @ q.T)  # restriction to n in q-coordinates
    ops = np.asarray(ops).reshape(-1, k * k) if ops else np.zeros((0, k * k))
    op_span = LinearSubspace.span(ops, k * k, tol)
    r = op_span.dim
    p = op_span.onb()  # rows: flattened operator basis

    def op_coords(mat: np.ndarray) -> np.ndarray:
        flat = mat.reshape(-1)
        coords = p @ flat
        resid = float(np.linalg.norm(flat - p.T @ coords))
        if resid > tol.threshold(max(np.linalg.norm(flat), 1.0)):
            raise VerificationError("operator escapes the inner-derivation span")
        return coords

    d = r + k
    tensor = np.zeros((d, d, d))
    p_mats = [p[i].reshape(k, k) for i in range(r)]
    for i in range(r):
        for j in range(r):
            comm = p_mats[i] @ p_mats[j] - p_mats[j] @ p_mats[i]
            tensor[i, j, :r] = op_coords(comm)
    for i in range(r):
        for a in range(k):
            val = p_mats[i] @ np.eye(k)[a]
            tensor[i, r + a, r:] = val
            tensor[r + a, i, r:] = -val
    for a in range(k):
        for b in range(k):
            dab = q @ m.operator(q[a], q[b]) @ q.T
            tensor[r + a, r + b, :r] = op_coords(dab)
    theta = np.diag([1.0] * r + [-1.0] * k) if d else np.zeros((0, 0))
    plus = LinearSubspace(d, np.eye(d)[:r]) if r else LinearSubspace.zero(d)
    minus = LinearSubspace(d, np.eye(d)[r:]) if k else LinearSubspace.zero(d)
    label = f"emb({m.label})" if m.label else ""
    return SymmetricLieAlgebra(d, tensor, theta, plus, minus, label)


# ---------------------------------------------------------------------------
# psi representation and the ideals driving the quotient theorem


def _require_minus_subspace(g: SymmetricLieAlgebra, n: LinearSubspace, tol: Tolerance):
    if n.ambient_dim != g.dim:
        raise ValueError("subspace must live in the algebra's coordinate space")
    for row in n.basis:
        if not g.minus_basis.contains(row, tol):
            raise ValueError("subspace is not contained in the (-1)-eigenspace")


def _minus_coords_subspace(g: SymmetricLieAlgebra, n: LinearSubspace, q: np.ndarray) -> LinearSubspace:
    """Rewrite n (subspace of g) in the minus-onb coordinates given by rows q."""
    if n.dim == 0:
        return LinearSubspace.zero(q.shape[0])
    return LinearSubspace.span(n.basis @ q.T, q.shape[0])


def _check_plus_generated(g: SymmetricLieAlgebra, tol: Tolerance):
    q = g.minus_basis.onb()
    brackets = np.einsum("ijl,ai,bj->abl", g.bracket_tensor, q, q).reshape(-1, g.dim)
    span = LinearSubspace.span(brackets, g.dim, tol)
    if not span.equals(LinearSubspace.span(g.plus_basis.basis, g.dim, tol), tol):
        raise ValueError("hypothesis g_plus = span[g_minus, g_minus] is violated")


@dataclass(frozen=True, eq=False)
class PsiRepresentation:
    """Action of g_plus on g_minus/n: one operator per plus-basis element."""

    operators: list  # (q, q) arrays, parallel to g.plus_basis rows
    quotient_onb: np.ndarray  # rows: onb of the complement of n inside g_minus
    kernel: LinearSubspace  # subspace of g


def psi_representation(
    g: SymmetricLieAlgebra, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL
) -> PsiRepresentation:
    """The induced representation g_plus -> gl(g_minus/n) and its kernel.

    Requires n to be an ideal of the triple system g_minus and the algebra
    to satisfy g_plus = span[g_minus, g_minus].
    """
    _require_minus_subspace(g, n, tol)
    _check_plus_generated(g, tol)
    mlts, q = g.minus_lts(tol)
    n_m = _minus_coords_subspace(g, n, q)
    if not is_ideal(mlts, n_m, tol):
        raise ValueError("psi requires an ideal of the triple system g_minus")

    # quotient coordinates: complement of n inside g_minus (rows in g-coords)
    comp_m = n_m.complement().onb()  # in minus coords
    quot = comp_m @ q  # rows in g coordinates, orthonormal
    ops = []
    for x in g.plus_basis.basis:
        adx = g.ad(x)
        # entry (a, j) = quotient coordinate a of the class of [x, quot_j]
        op = (quot @ (adx @ quot.T)) if quot.size else np.zeros((quot.shape[0],) * 2)
        ops.append(op)
    if g.plus_basis.dim == 0:
        kernel = LinearSubspace.zero(g.dim)
    else:
        stacked = np.array([op.reshape(-1) for op in ops])  # one row per plus vector
        ker_coeff = nullspace(stacked.T, tol)  # columns: coefficient vectors
        kernel = LinearSubspace.span(ker_coeff.T @ g.plus_basis.basis, g.dim, tol)
    return PsiRepresentation(operators=ops, quotient_onb=quot, kernel=kernel)


def _verify_theta_invariant_ideal(
    g: SymmetricLieAlgebra, l: LinearSubspace, tol: Tolerance, what: str
) -> None:
    for row in l.basis:
        if not l.contains(g.theta @ row, tol):
            raise VerificationError(f"{what} is not theta-invariant")
    full = np.eye(g.dim)
    for row in l.basis:
        for e in full:
            if not l.contains(g.bracket_vec(row, e), tol):
                raise VerificationError(f"{what} is not a Lie ideal")


def ideal_ker_psi_plus_n(
    g: SymmetricLieAlgebra, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL
) -> LinearSubspace:
    """The theta-invariant Lie ideal ker(psi) (+) n inside g, re-verified."""
    rep = psi_representation(g, n, tol)
    l = subspace_sum(rep.kernel, LinearSubspace.span(n.basis, g.dim, tol) if n.dim else LinearSubspace.zero(g.dim), tol)
    _verify_theta_invariant_ideal(g, l, tol, "ker(psi) + n")
    return l


def ideal_bracket_plus_n(
    g: SymmetricLieAlgebra, n: LinearSubspace, tol: Tolerance = DEFAULT_TOL
) -> LinearSubspace:
    """The theta-invariant Lie ideal span[g_minus, n] (+) n, re-verified."""
    _require_minus_subspace(g, n, tol)
    mlts, q = g.minus_lts(tol)
    n_m = _minus_coords_subspace(g, n, q)
    if not is_ideal(mlts, n_m, tol):
        raise ValueError("requires an ideal of the triple system g_minus")
    vecs = [g.bracket_vec(x, y) for x in q for y in n.basis]
    span = LinearSubspace.span(np.array(vecs).reshape(-1, g.dim), g.dim, tol) if vecs else LinearSubspace.zero(g.dim)
    l = subspace_sum(span, LinearSubspace.span(n.basis, g.dim, tol) if n.dim else LinearSubspace.zero(g.dim), tol)
    _verify_theta_invariant_ideal(g, l, tol, "span[g_minus, n] + n")
    return l


def displacement_algebra(g: SymmetricLieAlgebra, tol: Tolerance = DEFAULT_TOL) -> LinearSubspace:
    """The subalgebra span[g_minus, g_minus] (+) g_minus of g.

    Verified to be a theta-invariant subalgebra before returning.
    """
    q = g.minus_basis.onb()
    brackets = np.einsum("ijl,ai,bj->abl", g.bracket_tensor, q, q).reshape(-1, g.dim)
    parts = np.vstack([brackets, g.minus_basis.basis]) if brackets.size else g.minus_basis.basis
    sub = LinearSubspace.span(parts, g.dim, tol)
    for row in sub.basis:
        if not sub.contains(g.theta @ row, tol):
            raise VerificationError("displacement algebra is not theta-invariant")
    for x in sub.onb():
        for y in sub.onb():
            if not sub.contains(g.bracket_vec(x, y), tol):
                raise VerificationError("displacement algebra is not a subalgebra")
    return sub


# ---------------------------------------------------------------------------
# JSON descriptors


def algebra_to_json(obj) -> dict:
    """Serialize a LieTripleSystem or SymmetricLieAlgebra descriptor."""
    if isinstance(obj, LieTripleSystem):
        return {
            "kind": "lts",
            "dim": obj.dim,
            "tensor": obj.tensor.tolist(),
            "theta": None,
            "labels": [obj.label],
        }
    if isinstance(obj, SymmetricLieAlgebra):
        return {
            "kind": "symmetric_lie_algebra",
            "dim": obj.dim,
            "tensor": obj.bracket_tensor.tolist(),
            "theta": obj.theta.tolist(),
            "labels": [obj.label],
        }
    raise TypeError(f"cannot serialize {type(obj)!r}")


def algebra_from_json(data: dict):
    kind = data.get("kind")
    labels = data.get("labels") or [""]
    if kind == "lts":
        return LieTripleSystem(int(data["dim"]), np.asarray(data["tensor"], dtype=float), labels[0])
    if kind == "symmetric_lie_algebra":
        return SymmetricLieAlgebra.from_eigensplit(
            np.asarray(data["tensor"], dtype=float),
            np.asarray(data["theta"], dtype=float),
            labels[0],
        )
    raise ValueError(f"unknown descriptor kind {kind!r}")
