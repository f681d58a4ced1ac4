"""Points of CP^{m+1}, the quadric equation, explicit totally geodesic
embeddings, the flat torus and closed-geodesic periods."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .linalg_core import RealSubspace, subspace_span
from .lie_model import tangent_lift

R = 1.0 / np.sqrt(2.0)
QUADRIC_TOL = 1e-12
POINT_EQ_TOL = 1e-10


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of CP^n stored as a unit representative, canonically phased."""

    homog: np.ndarray

    def __post_init__(self):
        z = np.array(self.homog, dtype=complex).ravel()
        if not np.all(np.isfinite(z)):
            raise ValueError("non-finite homogeneous coordinates")
        nrm = np.linalg.norm(z)
        if nrm == 0:
            raise ValueError("the zero vector is not a projective point")
        z = z / nrm
        j = int(np.argmax(np.abs(z) > 1e-14))
        z = z * (abs(z[j]) / z[j])
        z.flags.writeable = False
        object.__setattr__(self, "homog", z)

    @property
    def n(self) -> int:
        return self.homog.shape[0] - 1

    def same_point(self, other: "ProjPoint", tol: float = POINT_EQ_TOL) -> bool:
        return abs(np.vdot(self.homog, other.homog)) >= 1.0 - tol

    def __repr__(self):
        return f"ProjPoint({np.array2string(self.homog, precision=6)})"


def base_point(m: int) -> ProjPoint:
    z = np.zeros(m + 2, dtype=complex)
    z[0], z[1] = 1.0, 1j
    return ProjPoint(z)


def quadric_residual(p: ProjPoint) -> float:
    return float(abs(np.sum(p.homog**2)))


def on_quadric(p: ProjPoint, tol: float = QUADRIC_TOL) -> bool:
    return quadric_residual(p) <= tol


def fs_distance(p: ProjPoint, q: ProjPoint) -> float:
    """Fubini-Study distance, diameter pi/2.

    Equal to ``arccos |<p, q>|``; evaluated through ``atan2`` of the
    orthogonal and parallel components so that short distances keep full
    relative precision.
    """
    if p.n != q.n:
        raise ValueError("dimension mismatch")
    c = np.vdot(p.homog, q.homog)
    perp = np.linalg.norm(q.homog - c * p.homog)
    return float(np.arctan2(perp, abs(c)))


def curve_length(points: list[ProjPoint]) -> float:
    return float(sum(fs_distance(a, b) for a, b in zip(points, points[1:])))


def _pad(z, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=complex)
    out[: len(z)] = z
    return out


# --- embeddings ---------------------------------------------------------------

def embed_quadric_inclusion(k: int, m: int, p: ProjPoint) -> ProjPoint:
    if not 1 <= k < m:
        raise EmbeddingError(f"inclusion Q^{k} -> Q^{m} needs 1 <= k < m")
    if p.n != k + 1:
        raise EmbeddingError(f"expected a point of CP^{k + 1}")
    if not on_quadric(p):
        raise EmbeddingError("source point is not on Q^k")
    return ProjPoint(_pad(p.homog, m + 2))


def _sphere_product_homog(k1: int, k2: int, m: int, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != k1 + 1 or len(y) != k2 + 1:
        raise EmbeddingError("sphere coordinates have the wrong length")
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    return _pad(np.concatenate([R * x, 1j * R * y]), m + 2)


def embed_sphere_product(k1: int, k2: int, m: int, x, y) -> ProjPoint:
    """(x, y) in S^{k1} x S^{k2} (radius 1/sqrt 2 after scaling) to Q^m."""
    if k1 < 0 or k2 < 0 or k1 + k2 < 1 or k1 + k2 > m:
        raise EmbeddingError(f"sphere product needs k1, k2 >= 0 and 1 <= k1 + k2 <= m, got ({k1}, {k2}), m={m}")
    return ProjPoint(_sphere_product_homog(k1, k2, m, x, y))


def torus_homog(m: int, t: float, s: float) -> np.ndarray:
    if m < 2:
        raise EmbeddingError("the torus map needs m >= 2")
    z = np.zeros(m + 2, dtype=complex)
    z[0] = R * np.cos(t / R)
    z[1] = 1j * R * np.cos(s / R)
    z[2] = R * np.sin(t / R)
    z[3] = 1j * R * np.sin(s / R)
    return z


def torus_map(m: int, t: float, s: float) -> ProjPoint:
    """The covering C -> maximal flat torus through the base point."""
    return ProjPoint(torus_homog(m, t, s))


LATTICE_GENERATORS = (np.pi / np.sqrt(2) * (1 + 1j), np.pi / np.sqrt(2) * (1 - 1j))


def in_lattice(w: complex, tol: float = 1e-9) -> bool:
    """Whether ``w`` lies in Z g1 ⊕ Z g2 for the torus deck lattice."""
    g1, g2 = LATTICE_GENERATORS
    M = np.array([[g1.real, g2.real], [g1.imag, g2.imag]])
    ab = np.linalg.solve(M, [w.real, w.imag])
    return bool(np.all(np.abs(ab - np.round(ab)) <= tol))


def geodesic_homog(x, y, phi: float, t: float, m: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (m,) or y.shape != (m,):
        raise EmbeddingError("frame vectors must be real of length m")
    G = np.array([[x @ x, x @ y], [y @ x, y @ y]])
    if np.abs(G - np.eye(2)).max() > 1e-10:
        raise EmbeddingError("(x, y) must be orthonormal")
    if not -1e-15 <= phi <= np.pi / 4 + 1e-15:
        raise EmbeddingError("phi must lie in [0, pi/4]")
    a = t * np.cos(phi) / R
    b = t * np.sin(phi) / R
    z = np.zeros(m + 2, dtype=complex)
    z[0] = R * np.cos(a)
    z[1] = 1j * R * np.cos(b)
    z[2:] = R * np.sin(a) * x + 1j * R * np.sin(b) * y
    return z


def geodesic_sample(x, y, phi: float, t: float, m: int) -> ProjPoint:
    """Point at arclength t on the geodesic with initial velocity cos(phi) x + i sin(phi) y."""
    return ProjPoint(geodesic_homog(x, y, phi, t, m))


def geodesic_by_exponential(v, t: float) -> ProjPoint:
    """exp(t X) z for X the matrix lift of v: an independent route to the geodesic."""
    v = np.asarray(v, dtype=complex)
    m = len(v)
    z0 = np.zeros(m + 2, dtype=complex)
    z0[0], z0[1] = R, 1j * R
    return ProjPoint(expm(t * tangent_lift(v).full) @ z0)


@dataclass(frozen=True)
class PeriodCase:
    """tan(phi) = tan_num / tan_den as a reduced fraction; (0, 1) is phi = 0."""

    tan_num: int
    tan_den: int

    def __post_init__(self):
        if self.tan_num < 0 or self.tan_den < 1:
            raise ValueError("need tan_num >= 0 and tan_den >= 1")
        if gcd(self.tan_num, self.tan_den) != 1:
            raise ValueError(f"{self.tan_num}/{self.tan_den} is not reduced")

    @classmethod
    def from_fraction(cls, num: int, den: int) -> "PeriodCase":
        f = Fraction(num, den)
        return cls(f.numerator, f.denominator)

    @property
    def angle(self) -> float:
        return float(np.arctan2(self.tan_num, self.tan_den))


def minimal_period(case: PeriodCase) -> float:
    n1, n2 = case.tan_num, case.tan_den
    if n1 == 0:
        return float(np.sqrt(2) * np.pi)
    if n1 % 2 == 1 and n2 % 2 == 1:
        return float(np.pi / np.sqrt(2) * np.hypot(n1, n2))
    return float(np.sqrt(2) * np.pi * np.hypot(n1, n2))


def minimal_period_oracle(case: PeriodCase) -> float:
    """Smallest t > 0 with t e^{i phi} in the deck lattice, by enumeration.

    A lattice point a g1 + b g2 equals (pi/sqrt 2)((a+b) + i(a-b)); it lies on
    the ray of direction (tan_den, tan_num) iff the integer cross product
    vanishes and the dot product is positive.
    """
    n1, n2 = case.tan_num, case.tan_den
    bound = 10 * (n1 + n2)
    best = None
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            re, im = a + b, a - b
            if re * n1 - im * n2 != 0 or re * n2 + im * n1 <= 0:
                continue
            length = np.pi / np.sqrt(2) * np.hypot(re, im)
            if best is None or length < best:
                best = length
    if best is None:
        raise RuntimeError("lattice search bound exhausted")
    return float(best)


def geodesic_for_case(case: PeriodCase, m: int) -> tuple[np.ndarray, np.ndarray, float]:
    """(x, y, phi) in canonical gauge for a period case; tan > 1 is mirrored
    into [0, pi/4] since the periods are symmetric in (n1, n2)."""
    if m < 2:
        raise ValueError("m >= 2 required")
    n1, n2 = case.tan_num, case.tan_den
    if n1 > n2:
        n1, n2 = n2, n1
    x = np.zeros(m)
    y = np.zeros(m)
    x[0], y[1] = 1.0, 1.0
    return x, y, float(np.arctan2(n1, n2))


def embed_projective(k: int, m: int, z: ProjPoint, real_only: bool = False) -> ProjPoint:
    if not (1 <= k and 2 * k <= m):
        raise EmbeddingError(f"CP^{k} -> Q^{m} needs 1 <= k <= m/2")
    if z.n != k:
        raise EmbeddingError(f"expected a point of CP^{k}")
    h = z.homog
    if real_only and np.abs(h.imag).max() > 1e-12:
        raise EmbeddingError("real_only requires a real representative")
    return ProjPoint(_pad(np.concatenate([h, 1j * h]), m + 2))


SEGRE_U = np.array(
    [[1, 0, 0, 1], [1j, 0, 0, -1j], [0, 1j, 1j, 0], [0, 1, -1, 0]], dtype=complex
) / np.sqrt(2)


def segre(z: ProjPoint, w: ProjPoint) -> np.ndarray:
    z0, z1 = z.homog
    w0, w1 = w.homog
    return np.array([z0 * w0, z0 * w1, z1 * w0, z1 * w1])


def segre_unitary_residuals(rng: np.random.Generator | None = None, trials: int = 20) -> tuple[float, float]:
    """(unitarity residual, max |sum (Uw)^2 - 2 (w0 w3 - w1 w2)|) over random w."""
    rng = rng or np.random.default_rng(0)
    unit_res = float(np.abs(SEGRE_U @ SEGRE_U.conj().T - np.eye(4)).max())
    form_res = 0.0
    for _ in range(trials):
        w = rng.normal(size=4) + 1j * rng.normal(size=4)
        lhs = np.sum((SEGRE_U @ w) ** 2)
        form_res = max(form_res, abs(lhs - 2 * (w[0] * w[3] - w[1] * w[2])))
    return unit_res, float(form_res)


def embed_segre_g3(z: ProjPoint, w: ProjPoint, m: int) -> ProjPoint:
    """CP^1 x CP^1 -> Q^2 -> Q^m via Segre, a unitary onto sum z^2 = 0, and padding."""
    if m < 2:
        raise EmbeddingError("m >= 2 required")
    if z.n != 1 or w.n != 1:
        raise EmbeddingError("Segre factors must be points of CP^1")
    return ProjPoint(_pad(SEGRE_U @ segre(z, w), m + 2))


# --- tangent spaces of embeddings -----------------------------------------------

@dataclass(frozen=True, eq=False)
class EmbeddingDescriptor:
    """A smooth map from a parameter space into unit vectors of C^{m+2}.

    ``curves`` are parametrised curves ``c(t)`` through the base source point
    (``c(0)`` maps to the base point); the tangent space of the image is
    spanned by their velocities.
    """

    name: str
    m: int
    expected: str
    curves: tuple[Callable[[float], np.ndarray], ...]
    sample: Callable[[np.random.Generator], np.ndarray] = field(default=None)


def _horizontal_velocity(curve, m: int, h: float = 1e-5) -> np.ndarray:
    z0 = np.zeros(m + 2, dtype=complex)
    z0[0], z0[1] = R, 1j * R
    zc = np.asarray(curve(0.0), dtype=complex)
    zc = zc / np.linalg.norm(zc)
    c = np.vdot(zc, z0)
    if abs(abs(c) - 1.0) > 1e-10:
        raise EmbeddingError("embedding does not send the base source point to the base point")
    phase = c / abs(c)

    def rep(t):
        z = np.asarray(curve(t), dtype=complex)
        return phase * z / np.linalg.norm(z)

    dz = (rep(h) - rep(-h)) / (2 * h)
    dz = dz - np.vdot(z0, dz) * z0
    return dz


def tangent_space_of_embedding(e: EmbeddingDescriptor, samples: int = 0, seed: int = 0, tol: float = 1e-7) -> RealSubspace:
    """Tangent space at the base point of the image, as a subspace of C^m.

    ``samples`` extra velocity vectors come from random linear combinations of
    the coordinate curves' parameters where the descriptor supports it.
    """
    m = e.m
    vels = [_horizontal_velocity(c, m) for c in e.curves]
    if samples and e.sample is not None:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            vels.append(_horizontal_velocity(e.sample(rng), m))
    for v in vels:
        if abs(v[0]) + abs(v[1]) > 1e-6:
            raise EmbeddingError("velocity has a component along the base fibre plane")
    return subspace_span([v[2:] for v in vels], m, tol)


def _perm_to_front(length: int, src: int) -> np.ndarray:
    """Permutation moving coordinate ``src`` to position 1."""
    order = [0, src] + [j for j in range(1, length) if j != src]
    return np.array(order)


def inclusion_descriptor(k: int, m: int) -> EmbeddingDescriptor:
    z0 = np.zeros(k + 2, dtype=complex)
    z0[0], z0[1] = R, 1j * R
    dirs = [np.eye(k, dtype=complex)[j] for j in range(k)] + [1j * np.eye(k, dtype=complex)[j] for j in range(k)]

    def make(v):
        L = tangent_lift(v).full
        return lambda t: embed_quadric_inclusion(k, m, ProjPoint(expm(t * L) @ z0)).homog

    def sample(rng):
        v = rng.normal(size=k) + 1j * rng.normal(size=k)
        return make(v / np.linalg.norm(v))

    expected = "P2" if k == 1 else f"G1({k})"
    return EmbeddingDescriptor(f"inclusion Q^{k}", m, expected, tuple(make(v) for v in dirs), sample)


def sphere_product_descriptor(k1: int, k2: int, m: int) -> EmbeddingDescriptor:
    if k1 + k2 < 1 or k1 + k2 > m:
        raise EmbeddingError("sphere product needs 1 <= k1 + k2 <= m")
    perm = _perm_to_front(m + 2, k1 + 1)

    def point(x, y):
        return embed_sphere_product(k1, k2, m, x, y).homog[perm]

    def make(dx, dy):
        x0 = np.eye(k1 + 1)[0]
        y0 = np.eye(k2 + 1)[0]
        return lambda t: point(np.cos(t) * x0 + np.sin(t) * dx, np.cos(t) * y0 + np.sin(t) * dy)

    curves = []
    for j in range(1, k1 + 1):
        curves.append(make(np.eye(k1 + 1)[j], np.zeros(k2 + 1)))
    for j in range(1, k2 + 1):
        curves.append(make(np.zeros(k1 + 1), np.eye(k2 + 1)[j]))

    def sample(rng):
        dx = np.concatenate([[0.0], rng.normal(size=k1)])
        dy = np.concatenate([[0.0], rng.normal(size=k2)])
        n = np.sqrt(dx @ dx + dy @ dy)
        return make(dx / n, dy / n)

    if k1 >= 1 and k2 >= 1:
        expected = f"G2({max(k1, k2)},{min(k1, k2)})"
    elif k1 + k2 == 1:
        expected = "Geo"
    else:
        expected = f"P1({k1 + k2})"
    return EmbeddingDescriptor(f"sphere product ({k1},{k2})", m, expected, tuple(curves), sample)


def torus_descriptor(m: int) -> EmbeddingDescriptor:
    curves = (lambda t: torus_homog(m, t, 0.0), lambda t: torus_homog(m, 0.0, t))

    def sample(rng):
        a, b = rng.normal(size=2)
        return lambda t: torus_homog(m, a * t, b * t)

    return EmbeddingDescriptor("maximal torus", m, "G2(1,1)", curves, sample)


def projective_descriptor(k: int, m: int, real_only: bool = False) -> EmbeddingDescriptor:
    if not (1 <= k and 2 * k <= m):
        raise EmbeddingError("projective embedding needs 1 <= k <= m/2")
    perm = _perm_to_front(m + 2, k + 1)
    e = np.eye(k + 1, dtype=complex)

    def make(u):
        return lambda t: embed_projective(k, m, ProjPoint(np.cos(t) * e[0] + np.sin(t) * u), real_only).homog[perm]

    dirs = [e[j] for j in range(1, k + 1)]
    if not real_only:
        dirs += [1j * e[j] for j in range(1, k + 1)]

    def sample(rng):
        u = np.concatenate([[0.0], rng.normal(size=k)]).astype(complex)
        if not real_only:
            u[1:] += 1j * rng.normal(size=k)
        return make(u / np.linalg.norm(u))

    expected = f"I2({k})" if real_only else f"I1({k})"
    if real_only and k == 1:
        expected = "Geo"
    return EmbeddingDescriptor(f"projective CP^{k}" + (" (real)" if real_only else ""), m, expected, tuple(make(u) for u in dirs), sample)


def segre_descriptor(m: int, real_circle: bool = True) -> EmbeddingDescriptor:
    def zc(u):
        return lambda t: ProjPoint(np.array([np.cos(t), np.sin(t) * u]))

    base = ProjPoint(np.array([1.0, 0.0]))
    curves = [
        lambda t: embed_segre_g3(zc(1.0)(t), base, m).homog,
        lambda t: embed_segre_g3(zc(1j)(t), base, m).homog,
        lambda t: embed_segre_g3(base, zc(1.0)(t), m).homog,
    ]
    if not real_circle:
        curves.append(lambda t: embed_segre_g3(base, zc(1j)(t), m).homog)

    def sample(rng):
        a = rng.normal() + 1j * rng.normal()
        b = rng.normal() if real_circle else rng.normal() + 1j * rng.normal()
        return lambda t: embed_segre_g3(
            ProjPoint(np.array([1.0, t * a])), ProjPoint(np.array([1.0, t * b])), m
        ).homog

    if real_circle:
        expected = "G3"
    else:
        expected = "Full" if m == 2 else "G1(2)"
    return EmbeddingDescriptor("Segre" + (" x real circle" if real_circle else ""), m, expected, tuple(curves), sample)
