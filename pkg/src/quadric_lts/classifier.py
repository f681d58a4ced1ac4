"""Rank, type classification, canonical generators and the property table for
Lie triple systems of Q^m."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg_core import (
    DEFAULT_TOL,
    RealSubspace,
    SubspaceFlags,
    intersect,
    subspace_flags,
    subspace_span,
    unit,
)
from .lie_model import is_lie_triple, isotropy_element, random_rotation
from .roots_weyl import CartanFrame, centralizer, characteristic_angle, characteristic_angles

TAGS = ("Geo", "G1", "G2", "G3", "P1", "P2", "A", "I1", "I2", "Full", "NotLieTriple")
ANGLE_TOL = 1e-6
ARCTAN_HALF = float(np.arctan(0.5))


class InadmissibleType(ValueError):
    pass


@dataclass(frozen=True)
class LtsType:
    tag: str
    params: tuple[int, ...] = ()
    diagnostic: str = ""

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown type tag {self.tag!r}")
        params = tuple(int(p) for p in self.params)
        if self.tag == "G2" and len(params) == 2 and params[0] < params[1]:
            params = (params[1], params[0])
        object.__setattr__(self, "params", params)

    def __eq__(self, other):
        if not isinstance(other, LtsType):
            return NotImplemented
        return (self.tag, self.params) == (other.tag, other.params)

    def __hash__(self):
        return hash((self.tag, self.params))

    def __str__(self):
        if not self.params:
            return self.tag
        return f"{self.tag}({','.join(map(str, self.params))})"

    @classmethod
    def parse(cls, text: str) -> "LtsType":
        text = text.strip()
        if "(" in text:
            tag, rest = text.split("(", 1)
            params = tuple(int(p) for p in rest.rstrip(")").split(",") if p.strip())
            return cls(tag, params)
        return cls(text)

    def canonical(self) -> "LtsType":
        """One-dimensional P1 and I2 spaces are lines, i.e. of type Geo."""
        if self.tag in ("P1", "I2") and self.params == (1,):
            return LtsType("Geo")
        return self

    @property
    def k(self) -> int | None:
        return self.params[0] if len(self.params) == 1 else None


def check_admissible(t: LtsType, m: int) -> None:
    if m < 2:
        raise InadmissibleType("the quadric needs m >= 2")
    p = t.params
    need = {"Geo": 0, "G3": 0, "P2": 0, "A": 0, "Full": 0, "G1": 1, "P1": 1, "I1": 1, "I2": 1, "G2": 2}
    if t.tag == "NotLieTriple":
        raise InadmissibleType("NotLieTriple is not a generable type")
    if len(p) != need[t.tag]:
        raise InadmissibleType(f"{t.tag} takes {need[t.tag]} parameter(s), got {len(p)}")
    if t.tag == "G1" and not 2 <= p[0] <= m - 1:
        raise InadmissibleType(f"G1 requires 2 <= k <= m-1, got k={p[0]}, m={m}")
    if t.tag == "G2" and not (min(p) >= 1 and sum(p) <= m):
        raise InadmissibleType(f"G2 requires k1, k2 >= 1 and k1 + k2 <= m, got {p}, m={m}")
    if t.tag == "P1" and not 1 <= p[0] <= m:
        raise InadmissibleType(f"P1 requires 1 <= k <= m, got k={p[0]}, m={m}")
    if t.tag == "A" and m < 3:
        raise InadmissibleType(f"type A needs m >= 3, got m={m}")
    if t.tag in ("I1", "I2") and not (1 <= p[0] and 2 * p[0] <= m):
        raise InadmissibleType(f"{t.tag} requires 1 <= k <= m/2, got k={p[0]}, m={m}")


def admissible_types(m: int) -> list[LtsType]:
    out = [LtsType("Geo")]
    out += [LtsType("G1", (k,)) for k in range(2, m)]
    out += [LtsType("G2", (k1, k2)) for k1 in range(1, m) for k2 in range(1, k1 + 1) if k1 + k2 <= m]
    out += [LtsType("G3")]
    out += [LtsType("P1", (k,)) for k in range(1, m + 1)]
    out += [LtsType("P2")]
    if m >= 3:
        out += [LtsType("A")]
    out += [LtsType("I1", (k,)) for k in range(1, m // 2 + 1)]
    out += [LtsType("I2", (k,)) for k in range(1, m // 2 + 1)]
    out += [LtsType("Full")]
    return out


@dataclass(frozen=True)
class TypeProperties:
    real_dim: int
    complexity: str
    rank: int
    maximal: bool
    maximal_rule: str


def type_properties(t: LtsType, m: int) -> TypeProperties:
    check_admissible(t, m)
    k = t.k
    if t.tag == "Geo":
        return TypeProperties(1, "totally_real", 1, False, "no")
    if t.tag == "G1":
        return TypeProperties(2 * k, "complex", 2, k == m - 1 and k >= 2, "for k = m-1 >= 2")
    if t.tag == "G2":
        k1, k2 = t.params
        return TypeProperties(k1 + k2, "totally_real", 2, k1 + k2 == m and m >= 3, "for k1+k2 = m >= 3")
    if t.tag == "G3":
        return TypeProperties(3, "neither", 2, m == 2, "only for m = 2")
    if t.tag == "P1":
        return TypeProperties(k, "totally_real", 1, k == m, "for k = m")
    if t.tag == "P2":
        return TypeProperties(2, "complex", 1, m == 2, "only for m = 2")
    if t.tag == "A":
        return TypeProperties(2, "neither", 1, m == 3, "only for m = 3")
    if t.tag == "I1":
        return TypeProperties(2 * k, "complex", 1, 2 * k == m and m >= 4, "for 2k = m >= 4")
    if t.tag == "I2":
        return TypeProperties(k, "totally_real", 1, False, "no")
    if t.tag == "Full":
        return TypeProperties(2 * m, "complex", 2, False, "not proper")
    raise InadmissibleType(str(t))


# --- canonical generators -----------------------------------------------------

def canonical_basis(t: LtsType, m: int) -> tuple[list[np.ndarray], CartanFrame]:
    """Axis-aligned example of type ``t`` and a frame whose Cartan subalgebra
    meets it in a Cartan subalgebra of the example."""
    check_admissible(t, m)
    e = lambda k, s=1.0: unit(m, k, s)
    r2, r5 = np.sqrt(2.0), np.sqrt(5.0)
    Y = e(1)
    k = t.k
    if t.tag == "Geo":
        vecs = [e(0)]
    elif t.tag == "G1":
        vecs = [e(j) for j in range(k)] + [e(j, 1j) for j in range(k)]
    elif t.tag == "G2":
        k1, k2 = t.params
        vecs = [e(j) for j in range(k1)] + [e(j, 1j) for j in range(k1, k1 + k2)]
        Y = e(k1)
    elif t.tag == "G3":
        vecs = [(e(0) - e(1, 1j)) / r2, (e(0, 1j) + e(1)) / r2, (e(0) + e(1, 1j)) / r2]
    elif t.tag == "P1":
        vecs = [e(j) for j in range(k)]
    elif t.tag == "P2":
        vecs = [e(0), e(0, 1j)]
    elif t.tag == "A":
        vecs = [(2 * e(0) + e(1, 1j)) / r5, (e(1) + e(0, 1j) + np.sqrt(3) * e(2, 1j)) / r5]
    elif t.tag == "I1":
        vecs = []
        for j in range(k):
            v = (e(2 * j) + e(2 * j + 1, 1j)) / r2
            vecs += [v, 1j * v]
    elif t.tag == "I2":
        vecs = [(e(2 * j) + e(2 * j + 1, 1j)) / r2 for j in range(k)]
    elif t.tag == "Full":
        vecs = [e(j) for j in range(m)] + [e(j, 1j) for j in range(m)]
    else:
        raise InadmissibleType(str(t))
    return vecs, CartanFrame(1.0, e(0), Y)


def random_cq_automorphism(m: int, rng: np.random.Generator) -> tuple[float, np.ndarray]:
    """(theta, O) for the CQ-automorphism v -> e^{i theta} O v, i.e. Ad of diag(R(theta), O)."""
    return float(rng.uniform(0, 2 * np.pi)), random_rotation(m, rng)


def apply_cq_automorphism(aut: tuple[float, np.ndarray], v) -> np.ndarray:
    theta, O = aut
    return np.exp(1j * theta) * (O @ np.asarray(v, dtype=complex))


def automorphism_matrix(aut: tuple[float, np.ndarray]) -> np.ndarray:
    """The element of SO(2) x SO(m) whose adjoint action realises ``aut``."""
    theta, O = aut
    return isotropy_element(theta, O)


def transform_subspace(S: RealSubspace, aut) -> RealSubspace:
    # unitary maps keep the basis orthonormal, so no re-orthogonalisation is needed
    theta, O = aut
    return RealSubspace(np.exp(1j * theta) * (S.basis @ O.T), S.m, S.tol)


def transform_frame(frame: CartanFrame, aut) -> CartanFrame:
    theta, _ = aut
    return CartanFrame(frame.phase * np.exp(2j * theta), apply_cq_automorphism(aut, frame.X), apply_cq_automorphism(aut, frame.Y))


def generate_with_frame(t: LtsType, m: int, seed: int = 42, tol: float = DEFAULT_TOL) -> tuple[RealSubspace, CartanFrame]:
    vecs, frame = canonical_basis(t, m)
    aut = random_cq_automorphism(m, np.random.default_rng(seed))
    S = subspace_span([apply_cq_automorphism(aut, v) for v in vecs], m, tol)
    return S, transform_frame(frame, aut)


def generate(t: LtsType, m: int, seed: int = 42, tol: float = DEFAULT_TOL) -> RealSubspace:
    return generate_with_frame(t, m, seed, tol)[0]


# --- rank and classification --------------------------------------------------

def rank_of(S: RealSubspace, check: bool = True) -> int:
    """Rank of a Lie triple system: dimension of the centralizer of one element.

    Every element lies in a maximal flat of S, and a 2-dimensional span is flat
    iff a single bracket vanishes, so the centralizer of the first basis vector
    has dimension >= 2 exactly when the rank is 2.
    """
    if S.dim == 0:
        raise ValueError("rank of the zero subspace is undefined")
    if check and not is_lie_triple(S):
        raise ValueError("rank is only defined here for Lie triple systems")
    return 2 if centralizer(S.basis[0], S).dim >= 2 else 1


def _g2_split(S: RealSubspace, tol: float) -> tuple[int, int] | None:
    B = S.basis @ S.basis.T
    flat = B.ravel()
    big = np.abs(flat) > 1e-12
    if not big.any():
        return None
    j = int(np.argmax(np.abs(flat)))
    phase = flat[j] / abs(flat[j])
    M = B / phase
    if np.abs(M.imag).max() > 1e3 * tol:
        return None
    w = np.linalg.eigvalsh((M.real + M.real.T) / 2)
    if np.abs(np.abs(w) - 1.0).max() > 1e3 * tol:
        return None
    k1 = int(np.sum(w > 0))
    k2 = int(np.sum(w < 0))
    return (max(k1, k2), min(k1, k2))


def _is_g3(S: RealSubspace) -> bool:
    line = intersect(S, subspace_span([1j * b for b in S.basis], S.m, S.tol))
    if line.dim != 2:
        return False
    fl = subspace_flags(line)
    return fl.is_complex and fl.is_isotropic


def angle_samples(S: RealSubspace, n_random: int = 20, seed: int = 0) -> list[float]:
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=(n_random, S.dim))
    vecs = np.concatenate([S.basis, coeffs @ S.basis])
    return list(characteristic_angles(vecs))


@dataclass(frozen=True)
class Classification:
    type: LtsType
    dim: int
    rank: int | None
    angle: float | None
    flags: SubspaceFlags
    residual: float

    @property
    def is_lts(self) -> bool:
        return self.type.tag != "NotLieTriple"


def classify_detailed(S: RealSubspace) -> Classification:
    m, d, tol = S.m, S.dim, S.tol
    flags = subspace_flags(S)
    lts = is_lie_triple(S)

    def result(t, rank=None, angle=None):
        return Classification(t, d, rank, angle, flags, lts.residual)

    if d == 0:
        return result(LtsType("NotLieTriple", diagnostic="zero subspace"))
    if d == 2 * m:
        return result(LtsType("Full"), rank=2)
    if not lts:
        return result(LtsType("NotLieTriple", diagnostic="not curvature-invariant"))
    if d == 1:
        return result(LtsType("Geo"), rank=1, angle=characteristic_angle(S.basis[0]))
    rank = rank_of(S, check=False)
    if rank == 2:
        if flags.is_complex:
            if not flags.is_cq_subspace:
                return result(LtsType("NotLieTriple", diagnostic="complex rank-2 space is not a CQ-subspace"), rank)
            return result(LtsType("G1", (d // 2,)), rank)
        if flags.is_totally_real:
            split = _g2_split(S, tol)
            if split is None:
                return result(LtsType("NotLieTriple", diagnostic="totally real rank-2 space has no +-1 split"), rank)
            return result(LtsType("G2", split), rank)
        if d == 3 and _is_g3(S):
            return result(LtsType("G3"), rank)
        return result(LtsType("NotLieTriple", diagnostic="rank-2 space of no listed form"), rank)

    angles = angle_samples(S)
    phi0 = float(np.mean(angles))
    if max(angles) - min(angles) > ANGLE_TOL:
        return result(LtsType("NotLieTriple", diagnostic=f"characteristic angle not constant (spread {max(angles) - min(angles):.3g})"), rank, phi0)
    if abs(phi0) <= ANGLE_TOL:
        if flags.is_complex and d == 2:
            return result(LtsType("P2"), rank, phi0)
        if flags.is_totally_real:
            return result(LtsType("P1", (d,)), rank, phi0)
    elif abs(phi0 - ARCTAN_HALF) <= ANGLE_TOL:
        if d == 2 and not flags.is_complex and not flags.is_totally_real:
            return result(LtsType("A"), rank, phi0)
    elif abs(phi0 - np.pi / 4) <= ANGLE_TOL:
        if flags.is_complex:
            return result(LtsType("I1", (d // 2,)), rank, phi0)
        if flags.is_totally_real:
            return result(LtsType("I2", (d,)), rank, phi0)
    return result(LtsType("NotLieTriple", diagnostic=f"rank-1 space with angle {phi0:.6g} and flags {flags}"), rank, phi0)


def classify(S: RealSubspace) -> LtsType:
    return classify_detailed(S).type


def is_subspace_of(S1: RealSubspace, S2: RealSubspace, tol: float | None = None) -> bool:
    if S1.m != S2.m:
        raise ValueError("dimension mismatch")
    return S2.contains_space(S1, tol)
