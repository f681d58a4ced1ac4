"""The so(m+2) matrix model of the tangent space and the curvature of Q^m.

The base point is ``p = [1, i, 0, ..., 0]`` with unit lift
``z = (e1 + i e2) / sqrt(2)``.  An element of the m-part is the skew matrix
``[[0, -B^T], [B, 0]]`` with a real ``m x 2`` block ``B``; its tangent vector is
``X z`` read in coordinates ``3..m+2``, i.e. ``(B[:, 0] + i B[:, 1]) / sqrt(2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg_core import (
    DEFAULT_TOL,
    Conjugation,
    DimensionError,
    RealSubspace,
    conjugation_apply,
    realify,
)

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class TangentMatrix:
    block: np.ndarray

    def __post_init__(self):
        b = np.array(self.block, dtype=float)
        if b.ndim != 2 or b.shape[1] != 2:
            raise DimensionError(f"tangent block must be m x 2, got {b.shape}")
        b.flags.writeable = False
        object.__setattr__(self, "block", b)

    @property
    def m(self) -> int:
        return self.block.shape[0]

    @property
    def full(self) -> np.ndarray:
        m = self.m
        X = np.zeros((m + 2, m + 2))
        X[2:, :2] = self.block
        X[:2, 2:] = -self.block.T
        return X


@dataclass(frozen=True, eq=False)
class IsotropyMatrix:
    full: np.ndarray

    def off_diagonal_residual(self) -> float:
        return float(max(np.abs(self.full[2:, :2]).max(initial=0.0), np.abs(self.full[:2, 2:]).max(initial=0.0)))

    def skew_residual(self) -> float:
        return float(np.abs(self.full + self.full.T).max())


def tangent_lift(v) -> TangentMatrix:
    v = np.asarray(v, dtype=complex)
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite tangent vector")
    return TangentMatrix(SQRT2 * np.stack([v.real, v.imag], axis=1))


def tangent_project(X: TangentMatrix) -> np.ndarray:
    B = X.block
    return (B[:, 0] + 1j * B[:, 1]) / SQRT2


def _full(X) -> np.ndarray:
    if isinstance(X, (TangentMatrix, IsotropyMatrix)):
        return X.full
    return np.asarray(X, dtype=float)


def commutator(X, Y) -> np.ndarray:
    X, Y = _full(X), _full(Y)
    if X.shape != Y.shape:
        raise DimensionError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    return X @ Y - Y @ X


def bracket(X: TangentMatrix, Y: TangentMatrix) -> IsotropyMatrix:
    return IsotropyMatrix(commutator(X, Y))


def m_part(M: np.ndarray) -> TangentMatrix:
    """The tangent block of an (m+2) x (m+2) matrix in the m-part."""
    return TangentMatrix(np.asarray(M)[2:, :2])


def killing_form(X, Y) -> float:
    """Killing form of so(n) via the closed form (n - 2) tr(XY)."""
    X, Y = _full(X), _full(Y)
    n = X.shape[0]
    return float((n - 2) * np.trace(X @ Y))


def killing_inner(X: TangentMatrix, Y: TangentMatrix) -> float:
    if X.m != Y.m:
        raise DimensionError("dimension mismatch")
    return -killing_form(X, Y) / (4 * X.m)


def so_basis(n: int) -> list[np.ndarray]:
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j], E[j, i] = -1.0, 1.0
            basis.append(E)
    return basis


def ad_matrix(X: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    """Matrix of ad(X) on so(n) in the given orthogonal basis of elementary skew matrices."""
    cols = []
    for E in basis:
        C = X @ E - E @ X
        cols.append([np.sum(C * F) / np.sum(F * F) for F in basis])
    return np.array(cols).T


def killing_form_bruteforce(X, Y) -> float:
    """tr(ad X ∘ ad Y) computed from explicit ad matrices."""
    X, Y = _full(X), _full(Y)
    basis = so_basis(X.shape[0])
    return float(np.trace(ad_matrix(X, basis) @ ad_matrix(Y, basis)))


def _curvature_formula_batch(U, V, W, A: Conjugation) -> np.ndarray:
    # rows of U, V, W are the arguments; broadcasting over the leading axis
    def h(a, b):
        return np.sum(a * np.conj(b), axis=-1)[..., None]

    AU, AV, AW = (conjugation_apply(A, x) for x in (U, V, W))
    omega = h(1j * U, V).real
    return h(W, V) * U - h(W, U) * V - 2 * omega * (1j * W) + h(V, AW) * AU - h(U, AW) * AV


def curvature(u, v, w, mode: str = "formula", A: Conjugation | None = None) -> np.ndarray:
    """R(u, v) w at the base point.

    ``mode="formula"`` evaluates the closed expression in terms of the metric,
    J and a conjugation of the CQ-structure (default the standard one);
    ``mode="bracket"`` computes ``-[[X, Y], Z]`` on matrix lifts.
    """
    u, v, w = (np.asarray(x, dtype=complex) for x in (u, v, w))
    if not (u.shape == v.shape == w.shape):
        raise DimensionError("dimension mismatch")
    if mode == "formula":
        return _curvature_formula_batch(u, v, w, A or Conjugation(1.0))
    if mode == "bracket":
        X, Y, Z = (tangent_lift(x).full for x in (u, v, w))
        C = X @ Y - Y @ X
        return -tangent_project(m_part(C @ Z - Z @ C))
    raise ValueError(f"unknown curvature mode {mode!r}")


def curvature_tensor_on_basis(basis: np.ndarray) -> np.ndarray:
    """All R(b_i, b_j) b_k for the rows of ``basis``; shape (d, d, d, m).

    Closed formula with the standard conjugation, vectorised over the triples.
    """
    B = np.asarray(basis, dtype=complex)
    H = B @ B.conj().T          # H[a, b] = <b_a, b_b>_C
    S = B @ B.T                 # S[a, b] = b(b_a, b_b)
    Bc = B.conj()
    # term order follows the formula: <w,v>u - <w,u>v - 2<Ju,v>Jw + <v,Aw>Au - <u,Aw>Av
    T = np.einsum("kj,im->ijkm", H, B)
    T -= np.einsum("ki,jm->ijkm", H, B)
    T += 2j * np.einsum("ij,km->ijkm", H.imag, B)
    T += np.einsum("jk,im->ijkm", S, Bc)
    T -= np.einsum("ik,jm->ijkm", S, Bc)
    return T


@dataclass(frozen=True)
class LieTripleResult:
    is_lts: bool
    residual: float
    scale: float

    def __bool__(self):
        return self.is_lts


def is_lie_triple(S: RealSubspace, tol: float | None = None) -> LieTripleResult:
    """Curvature invariance of S, tested on all ordered basis triples."""
    tol = S.tol if tol is None else tol
    if S.dim == 0:
        return LieTripleResult(True, 0.0, 0.0)
    T = curvature_tensor_on_basis(S.basis).reshape(-1, S.m)
    Tr = realify(T)
    P = S.real_basis
    res = Tr - (Tr @ P.T) @ P
    scale = float(np.linalg.norm(Tr, axis=1).max())
    worst = float(np.linalg.norm(res, axis=1).max())
    return LieTripleResult(worst <= tol * max(scale, 1.0), worst, scale)


def shape_operator(phase: complex, v) -> np.ndarray:
    if abs(abs(phase) - 1.0) > 1e-12:
        raise ValueError("shape operator phase must be a unit complex number")
    return conjugation_apply(Conjugation(phase), v)


def isotropy_element(theta: float, O: np.ndarray) -> np.ndarray:
    """The element diag(R(theta), O) of SO(2) x SO(m) inside SO(m+2)."""
    O = np.asarray(O, dtype=float)
    m = O.shape[0]
    g = np.zeros((m + 2, m + 2))
    c, s = np.cos(theta), np.sin(theta)
    g[:2, :2] = [[c, -s], [s, c]]
    g[2:, 2:] = O
    return g


def isotropy_act(g: np.ndarray, v) -> np.ndarray:
    """Ad(g) on the tangent space, pushed through the lift: tau(g X g^T)."""
    X = tangent_lift(v).full
    return tangent_project(m_part(g @ X @ g.T))


def random_rotation(m: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(m, m)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_isotropy(m: int, rng: np.random.Generator) -> np.ndarray:
    return isotropy_element(rng.uniform(0, 2 * np.pi), random_rotation(m, rng))


def isotropy_act_subspace(g: np.ndarray, S: RealSubspace) -> RealSubspace:
    from .linalg_core import subspace_span

    return subspace_span([isotropy_act(g, b) for b in S.basis], S.m, S.tol)
