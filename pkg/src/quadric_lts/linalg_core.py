"""Linear algebra on the tangent model C^m of the quadric.

Tangent vectors are plain complex numpy arrays of shape ``(m,)``.  The complex
structure J is multiplication by ``1j`` and the CQ-structure is the circle of
conjugations ``v -> phase * conj(v)``.  Real subspaces are stored through an
orthonormal basis with respect to ``Re <.,.>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


class DimensionError(ValueError):
    pass


class PredicateError(ValueError):
    """A subspace does not satisfy the structural predicate it was claimed to have."""


def as_cvector(v, m: int | None = None) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {arr.shape}")
    if m is not None and arr.shape[0] != m:
        raise DimensionError(f"expected length {m}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    return arr


def unit(m: int, k: int, scale: complex = 1.0) -> np.ndarray:
    """``scale`` times the k-th standard basis vector of C^m (0-based)."""
    e = np.zeros(m, dtype=complex)
    e[k] = scale
    return e


def realify(v: np.ndarray) -> np.ndarray:
    """C^m -> R^{2m}, (Re, Im) stacked along the last axis."""
    v = np.asarray(v)
    return np.concatenate([v.real, v.imag], axis=-1)


def complexify(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    m = x.shape[-1] // 2
    return x[..., :m] + 1j * x[..., m:]


def hermitian_inner(u, v) -> complex:
    """<u, v>_C = <u, v> + i <u, Jv>; linear in ``u``, conjugate-linear in ``v``."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(v, u))


def real_inner(u, v) -> float:
    return hermitian_inner(u, v).real


def bilinear(u, v) -> complex:
    """The complex symmetric form b(u, v) = sum u_k v_k, i.e. <u, A0 v>_C."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.sum(u * v))


@dataclass(frozen=True)
class Conjugation:
    """The conjugation ``v -> phase * conj(v)``; ``phase = 1`` is the standard one."""

    phase: complex = 1.0

    def __post_init__(self):
        if abs(abs(self.phase) - 1.0) > 1e-12:
            raise ValueError(f"conjugation phase must have modulus 1, got {abs(self.phase)!r}")
        object.__setattr__(self, "phase", complex(self.phase))

    def __call__(self, v):
        return conjugation_apply(self, v)

    def fixed_frame(self, m: int) -> np.ndarray:
        """Orthonormal basis (rows) of V(A) = sqrt(phase) * R^m."""
        mu = np.sqrt(self.phase)
        return mu * np.eye(m, dtype=complex)


A0 = Conjugation(1.0)


def conjugation_apply(A: Conjugation, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return A.phase * np.conj(v)


def conjugation_split(A: Conjugation, v) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(Re_A v, Im_A v)``, both in V(A), with ``v = Re_A v + J Im_A v``."""
    v = np.asarray(v, dtype=complex)
    Av = conjugation_apply(A, v)
    return (Av + v) / 2, 1j * (Av - v) / 2


def _mgs_pivot(cols: np.ndarray, tol: float) -> np.ndarray:
    """Modified Gram-Schmidt with column pivoting on the rows of ``cols``.

    Returns an orthonormal set of rows spanning the numerical row space.
    """
    work = np.array(cols, dtype=float, copy=True)
    if work.size == 0:
        return np.zeros((0, work.shape[-1] if work.ndim == 2 else 0))
    norms = np.linalg.norm(work, axis=1)
    cutoff = tol * max(float(norms.max()), 0.0)
    basis = []
    active = np.ones(len(work), dtype=bool)
    while active.any():
        norms = np.where(active, np.linalg.norm(work, axis=1), -1.0)
        j = int(np.argmax(norms))
        if norms[j] <= cutoff or norms[j] == 0.0:
            break
        q = work[j] / norms[j]
        # second pass keeps q orthogonal to the accepted basis at roundoff level
        for b in basis:
            q -= (q @ b) * b
        q /= np.linalg.norm(q)
        basis.append(q)
        active[j] = False
        work -= np.outer(work @ q, q)
    if not basis:
        return np.zeros((0, work.shape[1]))
    return np.array(basis)


@dataclass(frozen=True, eq=False)
class RealSubspace:
    """A real-linear subspace of C^m held as an orthonormal basis (rows of ``basis``)."""

    basis: np.ndarray
    m: int
    tol: float = DEFAULT_TOL
    _real: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex).reshape(-1, self.m)
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)
        r = realify(b)
        r.flags.writeable = False
        object.__setattr__(self, "_real", r)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def real_basis(self) -> np.ndarray:
        return self._real

    def project(self, v) -> np.ndarray:
        x = realify(np.asarray(v, dtype=complex))
        return complexify((x @ self._real.T) @ self._real)

    def residual(self, v) -> float:
        v = np.asarray(v, dtype=complex)
        return float(np.linalg.norm(v - self.project(v)))

    def contains(self, v, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        v = np.asarray(v, dtype=complex)
        return self.residual(v) <= tol * max(1.0, float(np.linalg.norm(v)))

    def residuals(self, V) -> np.ndarray:
        """Projection residual norms for the rows of ``V``."""
        X = realify(np.asarray(V, dtype=complex).reshape(-1, self.m))
        R = X - (X @ self._real.T) @ self._real
        return np.linalg.norm(R, axis=1)

    def contains_all(self, V, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        V = np.asarray(V, dtype=complex).reshape(-1, self.m)
        if len(V) == 0:
            return True
        limits = tol * np.maximum(1.0, np.linalg.norm(V, axis=1))
        return bool(np.all(self.residuals(V) <= limits))

    def contains_space(self, other: "RealSubspace", tol: float | None = None) -> bool:
        return self.contains_all(other.basis, tol)

    def same_as(self, other: "RealSubspace", tol: float | None = None) -> bool:
        return self.dim == other.dim and self.contains_space(other, tol) and other.contains_space(self, tol)

    def coords(self, v) -> np.ndarray:
        """Coordinates of the projection of ``v`` in this basis."""
        return realify(np.asarray(v, dtype=complex)) @ self._real.T

    def orthonormality_residual(self) -> float:
        g = self._real @ self._real.T
        return float(np.abs(g - np.eye(self.dim)).max()) if self.dim else 0.0

    def __repr__(self):
        return f"RealSubspace(dim={self.dim}, m={self.m})"


def subspace_span(vectors: Iterable, m: int, tol: float = DEFAULT_TOL) -> RealSubspace:
    """Real span of ``vectors``, orthonormalized with rank decided at ``tol``."""
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    for v in vecs:
        if v.shape != (m,):
            raise DimensionError(f"expected vectors of length {m}, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite entries in spanning set")
    if not vecs:
        return RealSubspace(np.zeros((0, m), dtype=complex), m, tol)
    q = _mgs_pivot(realify(np.array(vecs)), tol)
    return RealSubspace(complexify(q) if len(q) else np.zeros((0, m), dtype=complex), m, tol)


def zero_subspace(m: int, tol: float = DEFAULT_TOL) -> RealSubspace:
    return subspace_span([], m, tol)


def full_space(m: int, tol: float = DEFAULT_TOL) -> RealSubspace:
    return subspace_span([unit(m, k) for k in range(m)] + [unit(m, k, 1j) for k in range(m)], m, tol)


def subspace_sum(*spaces: RealSubspace) -> RealSubspace:
    m = spaces[0].m
    vecs = [b for s in spaces for b in s.basis]
    return subspace_span(vecs, m, spaces[0].tol)


def orthogonal_complement(S: RealSubspace) -> RealSubspace:
    m = S.m
    P = np.eye(2 * m) - S.real_basis.T @ S.real_basis
    return subspace_span(complexify(P), m, S.tol)


def intersect(S: RealSubspace, T: RealSubspace, tol: float | None = None) -> RealSubspace:
    """S ∩ T: the vectors of S whose component orthogonal to T vanishes."""
    if S.m != T.m:
        raise DimensionError("dimension mismatch")
    tol = S.tol if tol is None else tol
    if S.dim == 0 or T.dim == 0:
        return zero_subspace(S.m, S.tol)
    Sr = S.real_basis
    R = Sr - (Sr @ T.real_basis.T) @ T.real_basis
    # coefficient vectors c with c @ R = 0
    u, s, _ = np.linalg.svd(R, full_matrices=True)
    s_full = np.zeros(S.dim)
    s_full[: len(s)] = s
    null = u[:, s_full <= tol]
    if null.shape[1] == 0:
        return zero_subspace(S.m, S.tol)
    return subspace_span(complexify(null.T @ Sr), S.m, S.tol)


def apply_map(S: RealSubspace, f) -> RealSubspace:
    return subspace_span([f(b) for b in S.basis], S.m, S.tol)


@dataclass(frozen=True)
class SubspaceFlags:
    is_complex: bool
    is_totally_real: bool
    is_isotropic: bool
    is_cq_subspace: bool

    def complexity(self) -> str:
        if self.is_complex:
            return "complex"
        if self.is_totally_real:
            return "totally_real"
        return "neither"


def subspace_flags(S: RealSubspace, A: Conjugation = A0) -> SubspaceFlags:
    tol = S.tol
    B = S.basis
    if S.dim == 0:
        return SubspaceFlags(True, True, True, True)
    is_complex = S.contains_all(1j * B)
    # Re<Ju, v> over all basis pairs
    omega = realify(1j * B) @ S.real_basis.T
    is_totally_real = bool(np.abs(omega).max() <= tol)
    # <u, lambda A0 v>_C = conj(lambda) b(u, v): vanishing does not depend on the phase
    is_isotropic = bool(np.abs(B @ B.T).max() <= tol)
    is_cq = is_complex and S.contains_all(conjugation_apply(A, B))
    return SubspaceFlags(bool(is_complex), is_totally_real, is_isotropic, bool(is_cq))


def complex_closure(S: RealSubspace) -> RealSubspace:
    return subspace_span(list(S.basis) + [1j * b for b in S.basis], S.m, S.tol)


@dataclass(frozen=True, eq=False)
class CanonicalRepresentation:
    """Structural data recovered from a CQ- or isotropic subspace.

    ``kind`` is ``"cq"``, ``"isotropic_complex"`` or ``"isotropic_totally_real"``.
    For ``"cq"``: ``S = W ⊕ JW`` with ``W = w1``.  For the isotropic kinds
    ``S = {x + J tau(x) : x in w1}`` with ``tau: w1 -> w2`` stored as the matrix
    ``tau`` acting on ``w1``-coordinates and returning ``w2``-coordinates.
    """

    kind: str
    conjugation: Conjugation
    w1: RealSubspace
    w2: RealSubspace
    tau: np.ndarray | None

    def tau_apply(self, x) -> np.ndarray:
        c = self.w1.coords(x)
        return complexify((self.tau @ c) @ self.w2.real_basis)

    def rebuild(self) -> RealSubspace:
        m = self.w1.m
        if self.kind == "cq":
            return subspace_span(list(self.w1.basis) + [1j * b for b in self.w1.basis], m, self.w1.tol)
        return subspace_span([x + 1j * self.tau_apply(x) for x in self.w1.basis], m, self.w1.tol)


def canonical_representation(S: RealSubspace, A: Conjugation = A0, kind: str | None = None) -> CanonicalRepresentation:
    """Decompose S relative to the conjugation A.

    ``kind`` states what S is claimed to be; when omitted it is inferred from
    the flags.  A claim that the flags contradict raises ``PredicateError``.
    """
    flags = subspace_flags(S, A)
    if kind is None:
        if flags.is_cq_subspace:
            kind = "cq"
        elif flags.is_isotropic and flags.is_complex:
            kind = "isotropic_complex"
        elif flags.is_isotropic and flags.is_totally_real:
            kind = "isotropic_totally_real"
        else:
            raise PredicateError("subspace is neither a CQ-subspace nor isotropic complex/totally real")
    m = S.m
    if kind == "cq":
        if not flags.is_cq_subspace:
            raise PredicateError("not a CQ-subspace: " + ("not complex" if not flags.is_complex else "not A-invariant"))
        VA = subspace_span(A.fixed_frame(m), m, S.tol)
        W = intersect(S, VA)
        if 2 * W.dim != S.dim:
            raise PredicateError("S ∩ V(A) does not have half the dimension of S")
        return CanonicalRepresentation("cq", A, W, W, None)
    if kind not in ("isotropic_complex", "isotropic_totally_real"):
        raise ValueError(f"unknown kind {kind!r}")
    if not flags.is_isotropic:
        raise PredicateError("not isotropic")
    if kind == "isotropic_complex" and not flags.is_complex:
        raise PredicateError("not a complex subspace")
    if kind == "isotropic_totally_real" and not flags.is_totally_real:
        raise PredicateError("not totally real")
    re_parts = [conjugation_split(A, b)[0] for b in S.basis]
    im_parts = [conjugation_split(A, b)[1] for b in S.basis]
    W1 = subspace_span(re_parts, m, S.tol)
    W2 = subspace_span(im_parts, m, S.tol)
    if W1.dim != S.dim or W2.dim != S.dim:
        raise PredicateError("Re_A or Im_A is not injective on S")
    # tau = Im_A ∘ (Re_A|S)^{-1} in W1 / W2 coordinates
    R = np.array([W1.coords(x) for x in re_parts]).T
    I = np.array([W2.coords(y) for y in im_parts]).T
    tau = I @ np.linalg.inv(R)
    if kind == "isotropic_complex":
        if not W1.same_as(W2):
            raise PredicateError("Re_A(S) and Im_A(S) differ for a complex isotropic subspace")
        # express tau on W1 coordinates in both slots
        tau = (W1.real_basis @ W2.real_basis.T) @ tau
        W2 = W1
    else:
        cross = np.abs(W1.real_basis @ W2.real_basis.T).max()
        if cross > S.tol * 10:
            raise PredicateError("Re_A(S) and Im_A(S) are not orthogonal")
    return CanonicalRepresentation(kind, A, W1, W2, tau)


def random_unit_vector(m: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=m) + 1j * rng.normal(size=m)
    return v / np.linalg.norm(v)


def random_subspace(m: int, d: int, rng: np.random.Generator, tol: float = DEFAULT_TOL) -> RealSubspace:
    return subspace_span([random_unit_vector(m, rng) for _ in range(d)], m, tol)


def random_element(S: RealSubspace, rng: np.random.Generator) -> np.ndarray:
    c = rng.normal(size=S.dim)
    v = c @ S.basis
    return v / np.linalg.norm(v)


def vectors_from_pairs(rows: Sequence[Sequence[Sequence[float]]]) -> list[np.ndarray]:
    """``[[re, im], ...]`` rows to complex vectors."""
    return [np.array([complex(re, im) for re, im in row]) for row in rows]


def vector_to_pairs(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]
