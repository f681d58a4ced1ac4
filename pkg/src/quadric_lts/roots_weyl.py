"""Cartan frames, the root table of Q^m, restricted roots, Weyl groups and the
characteristic angle.

A Cartan subalgebra of the tangent space is ``a = R X ⊕ R JY`` with X, Y an
orthonormal pair in the fixed space of a conjugation ``A = phase * A0``.  Roots
are identified with their Riesz vectors in ``a``; Weyl group elements are 2x2
matrices in the orthonormal coordinates ``(X, JY)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg_core import (
    DEFAULT_TOL,
    Conjugation,
    RealSubspace,
    conjugation_apply,
    intersect,
    orthogonal_complement,
    real_inner,
    realify,
    subspace_span,
    subspace_sum,
    unit,
    zero_subspace,
)
from .lie_model import SQRT2, commutator, m_part, tangent_lift, tangent_project

ROOT_INDICES = (1, 2, 3, 4)


class FrameError(ValueError):
    pass


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CartanFrame:
    phase: complex
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "phase", complex(self.phase))
        for name in ("X", "Y"):
            v = np.array(getattr(self, name), dtype=complex)
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def conjugation(self) -> Conjugation:
        return Conjugation(self.phase)

    @property
    def JY(self) -> np.ndarray:
        return 1j * self.Y

    def cartan(self, tol: float = DEFAULT_TOL) -> RealSubspace:
        return subspace_span([self.X, self.JY], self.m, tol)

    def to_plane(self, v) -> np.ndarray:
        """Coordinates of ``v`` (projected to a) in the basis (X, JY)."""
        return np.array([real_inner(v, self.X), real_inner(v, self.JY)])

    def from_plane(self, c) -> np.ndarray:
        return c[0] * self.X + c[1] * self.JY

    def validate(self, tol: float = 1e-10) -> None:
        A = self.conjugation
        for name, v in (("X", self.X), ("Y", self.Y)):
            if np.linalg.norm(conjugation_apply(A, v) - v) > tol:
                raise FrameError(f"{name} is not fixed by the frame conjugation")
            if abs(np.linalg.norm(v) - 1.0) > tol:
                raise FrameError(f"{name} is not a unit vector")
        if abs(real_inner(self.X, self.Y)) > tol:
            raise FrameError("X and Y are not orthogonal")
        C = commutator(tangent_lift(self.X), tangent_lift(self.JY))
        if np.abs(C).max() > tol:
            raise FrameError("span{X, JY} is not flat")


def canonical_cartan(m: int) -> CartanFrame:
    if m < 2:
        raise ValueError("the quadric needs m >= 2")
    return CartanFrame(1.0, unit(m, 0), unit(m, 1))


def frame_for_basis(phase: complex, X, Y) -> CartanFrame:
    frame = CartanFrame(phase, X, Y)
    frame.validate()
    return frame


@dataclass(frozen=True, eq=False)
class RootDatum:
    index: int
    riesz: np.ndarray
    root_space: RealSubspace

    @property
    def multiplicity(self) -> int:
        return self.root_space.dim

    def value(self, Z) -> float:
        return real_inner(Z, self.riesz)


def _fixed_complement(frame: CartanFrame, tol: float) -> RealSubspace:
    """(R X ⊕ R Y)^⊥ inside V(A)."""
    m = frame.m
    VA = subspace_span(frame.conjugation.fixed_frame(m), m, tol)
    XY = subspace_span([frame.X, frame.Y], m, tol)
    return intersect(VA, orthogonal_complement(XY))


def root_table(frame: CartanFrame, m: int | None = None, tol: float = DEFAULT_TOL) -> list[RootDatum]:
    """Positive roots of Q^m with respect to the frame's Cartan subalgebra."""
    frame.validate()
    m = frame.m if m is None else m
    if m != frame.m:
        raise FrameError("frame dimension does not match m")
    X, JY, Y = frame.X, frame.JY, frame.Y
    perp = _fixed_complement(frame, tol)
    rows = []
    if m > 2:
        rows.append(RootDatum(1, SQRT2 * JY, subspace_span([1j * b for b in perp.basis], m, tol)))
        rows.append(RootDatum(2, SQRT2 * X, perp))
    rows.append(RootDatum(3, SQRT2 * (X - JY), subspace_span([1j * X + Y], m, tol)))
    rows.append(RootDatum(4, SQRT2 * (X + JY), subspace_span([1j * X - Y], m, tol)))
    return rows


def ad_squared(Z, E) -> np.ndarray:
    """ad(Z)^2 E = [Z, [Z, E]] computed on matrix lifts."""
    Zm = tangent_lift(Z).full
    C = commutator(Zm, tangent_lift(E).full)
    return tangent_project(m_part(commutator(Zm, C)))


def root_eigen_residual(datum: RootDatum, frame: CartanFrame, Zs) -> float:
    worst = 0.0
    for Z in Zs:
        lam = datum.value(Z)
        for E in datum.root_space.basis:
            worst = max(worst, float(np.linalg.norm(ad_squared(Z, E) + lam**2 * E)))
    return worst


@dataclass(frozen=True, eq=False)
class RestrictedRoot:
    """A root of the subsystem: the ambient roots restricting to it (with the
    sign of the restriction), its Riesz vector in a', and its root space in S."""

    ambient: tuple[int, ...]
    signs: tuple[int, ...]
    riesz: np.ndarray
    part: RealSubspace

    @property
    def elementary(self) -> bool:
        return len(self.ambient) == 1

    @property
    def label(self) -> str:
        kind = "Elementary" if self.elementary else "Composite"
        return f"{kind}({','.join(str(k) for k in self.ambient)})"


@dataclass(frozen=True, eq=False)
class RestrictedRootReport:
    cartan: RealSubspace          # a' = S ∩ a
    zero_part: RealSubspace
    roots: tuple[RestrictedRoot, ...]
    restricted_values: dict = field(default_factory=dict)

    @property
    def parts(self) -> dict[str, RealSubspace]:
        return {r.label: r.part for r in self.roots}

    @property
    def labels(self) -> list[str]:
        return [r.label for r in self.roots]

    def direct_sum(self) -> RealSubspace:
        return subspace_sum(self.zero_part, *(r.part for r in self.roots))


def centralizer(Z, S: RealSubspace, tol: float | None = None) -> RealSubspace:
    """{Y in S : [lift Z, lift Y] = 0}."""
    tol = S.tol if tol is None else tol
    if S.dim == 0:
        return S
    Bz = tangent_lift(Z).block
    Bs = SQRT2 * np.stack([S.basis.real, S.basis.imag], axis=2)   # (d, m, 2)
    # [X, Y] for m-part elements is block diagonal: -Bx^T By + By^T Bx and -Bx By^T + By Bx^T
    top = -np.einsum("ka,dkb->dab", Bz, Bs) + np.einsum("dka,kb->dab", Bs, Bz)
    bottom = -np.einsum("ia,dja->dij", Bz, Bs) + np.einsum("dia,ja->dij", Bs, Bz)
    rows = np.concatenate([top.reshape(S.dim, -1), bottom.reshape(S.dim, -1)], axis=1)
    u, s, _ = np.linalg.svd(rows, full_matrices=True)
    s_full = np.zeros(S.dim)
    s_full[: len(s)] = s
    scale = max(float(np.linalg.norm(Bz)), 1.0)
    null = u[:, s_full <= tol * scale]
    if null.shape[1] == 0:
        return zero_subspace(S.m, S.tol)
    return subspace_span(null.T @ S.basis, S.m, S.tol)


def decompose_by_roots(S: RealSubspace, frame: CartanFrame, check_lts: bool = True) -> RestrictedRootReport:
    """Restricted-root decomposition of the Lie triple system S relative to
    ``a' = S ∩ a`` where ``a`` is the frame's Cartan subalgebra."""
    from .lie_model import is_lie_triple

    frame.validate()
    m = S.m
    tol = S.tol
    if check_lts and not is_lie_triple(S):
        raise DecompositionError("S is not a Lie triple system")
    a = frame.cartan(tol)
    a_prime = intersect(S, a)
    if a_prime.dim == 0:
        raise DecompositionError("S meets the Cartan subalgebra of the frame trivially")
    Zgen = a_prime.basis.sum(axis=0)
    if a_prime.dim == 2:
        Zgen = a_prime.basis[0] + np.pi / 4 * a_prime.basis[1]
    if centralizer(Zgen, S).dim != a_prime.dim:
        raise DecompositionError("S ∩ a is not maximal flat in S")

    table = root_table(frame, m, tol)
    P = a_prime.real_basis
    restricted = {}
    for d in table:
        r = realify(d.riesz)
        restricted[d.index] = (r @ P.T) @ P   # Riesz vector of λ|a' (realified)

    # canonical orientation: first a' coordinate with a nonzero entry is positive
    def canon(vec):
        c = vec @ P.T
        for x in c:
            if abs(x) > 1e-9:
                return (1 if x > 0 else -1)
        return 0

    groups: list[dict] = []
    zero_roots = []
    for d in table:
        rv = restricted[d.index]
        sgn = canon(rv)
        if sgn == 0:
            zero_roots.append(d)
            continue
        key = sgn * rv
        for g in groups:
            if np.linalg.norm(g["key"] - key) <= 1e-9:
                g["members"].append((d, sgn))
                break
        else:
            groups.append({"key": key, "members": [(d, sgn)]})

    zero_part = intersect(S, subspace_sum(a, *(d.root_space for d in zero_roots)))
    roots = []
    values = {}
    for g in groups:
        space = subspace_sum(*(d.root_space for d, _ in g["members"]))
        part = intersect(S, space)
        for d, sgn in g["members"]:
            if a_prime.dim == 1:
                values[d.index] = abs(float(g["key"] @ P[0]))
        if part.dim == 0:
            continue
        from .linalg_core import complexify

        roots.append(
            RestrictedRoot(
                ambient=tuple(d.index for d, _ in g["members"]),
                signs=tuple(s for _, s in g["members"]),
                riesz=complexify(g["key"]),
                part=part,
            )
        )
    for d in zero_roots:
        if a_prime.dim == 1:
            values[d.index] = 0.0
    return RestrictedRootReport(a_prime, zero_part, tuple(roots), values)


def elementary_riesz_check(report: RestrictedRootReport, frame: CartanFrame, S: RealSubspace | None = None, tol: float | None = None) -> bool:
    """Elementary roots have ambient Riesz vectors inside a'; composite roots
    have pairwise Riesz differences (sign-adjusted) orthogonal to a'."""
    a_prime = report.cartan
    tol = a_prime.tol if tol is None else tol
    if S is not None and not S.contains_space(a_prime):
        raise DecompositionError("stale report: a' is not contained in S")
    riesz = {d.index: d.riesz for d in root_table(frame, frame.m, a_prime.tol)}
    for r in report.roots:
        if r.elementary:
            k = r.ambient[0]
            if not a_prime.contains(riesz[k], tol):
                return False
            continue
        ref = r.signs[0] * riesz[r.ambient[0]]
        for k, s in zip(r.ambient[1:], r.signs[1:]):
            diff = s * riesz[k] - ref
            if np.abs(a_prime.real_basis @ realify(diff)).max() > tol * max(1.0, float(np.linalg.norm(diff))):
                return False
    return True


# --- Weyl groups -------------------------------------------------------------

def reflection(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return np.eye(len(r)) - 2.0 * np.outer(r, r) / (r @ r)


def group_closure(generators, tol: float = 1e-10, max_order: int = 1000) -> list[np.ndarray]:
    """Closure under composition by fixed-point iteration."""
    def find(mat, pool):
        return any(np.abs(mat - g).max() <= tol for g in pool)

    n = generators[0].shape[0]
    elements = [np.eye(n)]
    frontier = [np.eye(n)]
    while frontier:
        new = []
        for g in frontier:
            for s in generators:
                h = s @ g
                if not find(h, elements) and not find(h, new):
                    new.append(h)
        elements.extend(new)
        frontier = new
        if len(elements) > max_order:
            raise RuntimeError("group closure did not terminate")
    return elements


def riesz_plane_coords(frame: CartanFrame) -> dict[int, np.ndarray]:
    return {d.index: frame.to_plane(d.riesz) for d in root_table(frame)}


def weyl_group(frame: CartanFrame, m: int | None = None) -> list[np.ndarray]:
    """Weyl group of Q^m as 2x2 matrices in the (X, JY) coordinates of a."""
    if m is not None and m != frame.m:
        raise FrameError("frame dimension does not match m")
    coords = riesz_plane_coords(frame)
    return group_closure([reflection(r) for r in coords.values()])


def root_set(frame: CartanFrame) -> list[np.ndarray]:
    coords = riesz_plane_coords(frame)
    return [s * c for c in coords.values() for s in (1, -1)]


def contains_matrix(group, mat, tol: float = 1e-10) -> bool:
    return any(np.abs(mat - g).max() <= tol for g in group)


def subsystem_weyl_group(report: RestrictedRootReport, frame: CartanFrame) -> list[np.ndarray]:
    """Weyl group of a rank-2 subsystem (a' = a), in the frame's plane coordinates."""
    if report.cartan.dim != 2:
        raise DecompositionError("subsystem Weyl group is only formed in the rank-2 case")
    gens = [reflection(frame.to_plane(r.riesz)) for r in report.roots]
    if not gens:
        return [np.eye(2)]
    return group_closure(gens)


# --- characteristic angle ----------------------------------------------------

def characteristic_angle(v) -> float:
    """The angle phi in [0, pi/4] with |b(v, v)| = cos(2 phi) |v|^2.

    Evaluated as ``atan2(sin 2phi, cos 2phi) / 2`` with ``|v|^2 sin 2phi = 2 |a ∧ c|``
    for ``v = a + i c``; this stays accurate at both ends of the range.
    """
    v = np.asarray(v, dtype=complex)
    if float(np.vdot(v, v).real) == 0.0:
        raise ValueError("characteristic angle of the zero vector is undefined")
    return float(characteristic_angles(v[None, :])[0])


def characteristic_angles(V) -> np.ndarray:
    """Vectorised characteristic angle over the rows of ``V``."""
    V = np.asarray(V, dtype=complex)
    a, c = V.real, V.imag
    W = np.einsum("ni,nj->nij", a, c)
    wedge = np.sqrt(np.sum((W - W.transpose(0, 2, 1)) ** 2, axis=(1, 2)) / 2.0)
    b = np.abs(np.sum(V * V, axis=1))
    return 0.5 * np.arctan2(2.0 * wedge, b)


def angle_from_cos(v) -> float:
    """Direct arccos evaluation with clamping; kept as a cross-check."""
    v = np.asarray(v, dtype=complex)
    n2 = float(np.vdot(v, v).real)
    if n2 == 0.0:
        raise ValueError("characteristic angle of the zero vector is undefined")
    return 0.5 * float(np.arccos(np.clip(abs(complex(np.sum(v * v))) / n2, 0.0, 1.0)))
