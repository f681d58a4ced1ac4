"""Command-line front end.  Every subcommand prints one JSON document.

Exit codes: 0 success, 1 a verification found a failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from typing import Any

import numpy as np

from .classifier import (
    InadmissibleType,
    LtsType,
    check_admissible,
    classify_detailed,
    generate_with_frame,
)
from .lie_model import curvature
from .linalg_core import (
    DEFAULT_TOL,
    RealSubspace,
    subspace_span,
    vector_to_pairs,
    vectors_from_pairs,
)
from .quadric_geo import (
    EmbeddingError,
    PeriodCase,
    inclusion_descriptor,
    minimal_period,
    minimal_period_oracle,
    projective_descriptor,
    quadric_residual,
    ProjPoint,
    segre_descriptor,
    sphere_product_descriptor,
    tangent_space_of_embedding,
    torus_descriptor,
)
from .roots_weyl import (
    CartanFrame,
    DecompositionError,
    FrameError,
    canonical_cartan,
    characteristic_angle,
    decompose_by_roots,
    root_eigen_residual,
    root_table,
)

DEFAULT_SEED = 42

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_VECTOR = {"type": "array", "items": _PAIR}

SUBSPACE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["m", "basis"],
    "properties": {
        "m": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": _VECTOR},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "type": {"type": "string"},
        "frame": {
            "type": "object",
            "required": ["phase", "X", "Y"],
            "properties": {"phase": _PAIR, "X": _VECTOR, "Y": _VECTOR},
        },
    },
}

FLAGS_SCHEMA = {
    "type": "object",
    "required": ["is_complex", "is_totally_real", "is_isotropic", "is_cq_subspace"],
    "properties": {k: {"type": "boolean"} for k in ("is_complex", "is_totally_real", "is_isotropic", "is_cq_subspace")},
}

CLASSIFICATION_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["is_lts", "type", "params", "dim", "rank", "angle", "flags", "residual"],
    "properties": {
        "is_lts": {"type": "boolean"},
        "type": {"enum": ["Geo", "G1", "G2", "G3", "P1", "P2", "A", "I1", "I2", "Full", "NotLieTriple"]},
        "params": {"type": "object"},
        "dim": {"type": "integer", "minimum": 0},
        "rank": {"type": ["integer", "null"]},
        "angle": {"type": ["number", "null"]},
        "flags": FLAGS_SCHEMA,
        "residual": {"type": "number", "minimum": 0},
        "diagnostic": {"type": "string"},
    },
}


class InputError(ValueError):
    """Bad user input; reported with exit code 2."""


def _emit(doc: dict, out=None) -> None:
    # json writes floats with repr, the shortest string that round-trips exactly
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=False)
    (out or sys.stdout).write(text + "\n")


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def _validate(doc: Any, schema: dict) -> None:
    import jsonschema

    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"field {where}: {exc.message}") from exc


def _vectors(rows, m: int, field: str) -> list[np.ndarray]:
    vecs = vectors_from_pairs(rows)
    for j, v in enumerate(vecs):
        if len(v) != m:
            raise InputError(f"field {field}/{j}: expected {m} entries, got {len(v)}")
        if not np.all(np.isfinite(v)):
            raise InputError(f"field {field}/{j}: non-finite entry")
    return vecs


def read_subspace_document(path: str) -> tuple[RealSubspace, CartanFrame | None]:
    doc = _load_json(path)
    _validate(doc, SUBSPACE_SCHEMA)
    m = doc["m"]
    tol = doc.get("tol", DEFAULT_TOL)
    S = subspace_span(_vectors(doc["basis"], m, "basis"), m, tol)
    frame = None
    if "frame" in doc:
        f = doc["frame"]
        X = _vectors([f["X"]], m, "frame/X")[0]
        Y = _vectors([f["Y"]], m, "frame/Y")[0]
        frame = CartanFrame(complex(*f["phase"]), X, Y)
        try:
            frame.validate()
        except FrameError as exc:
            raise InputError(f"field frame: {exc}") from exc
    return S, frame


def subspace_document(S: RealSubspace, type_tag: str | None = None, frame: CartanFrame | None = None) -> dict:
    doc: dict[str, Any] = {"m": S.m, "basis": [vector_to_pairs(b) for b in S.basis], "tol": S.tol}
    if type_tag is not None:
        doc["type"] = type_tag
    if frame is not None:
        doc["frame"] = {
            "phase": [frame.phase.real, frame.phase.imag],
            "X": vector_to_pairs(frame.X),
            "Y": vector_to_pairs(frame.Y),
        }
    return doc


def _params_object(t: LtsType) -> dict:
    if t.tag == "G2":
        return {"k1": t.params[0], "k2": t.params[1]}
    if t.params:
        return {"k": t.params[0]}
    return {}


def classification_report(S: RealSubspace) -> dict:
    c = classify_detailed(S)
    f = c.flags
    doc = {
        "is_lts": c.is_lts,
        "type": c.type.tag,
        "params": _params_object(c.type),
        "dim": c.dim,
        "rank": c.rank,
        "angle": c.angle if (c.rank == 1 and c.dim >= 1) else None,
        "flags": {
            "is_complex": f.is_complex,
            "is_totally_real": f.is_totally_real,
            "is_isotropic": f.is_isotropic,
            "is_cq_subspace": f.is_cq_subspace,
        },
        "residual": c.residual,
    }
    if c.type.diagnostic:
        doc["diagnostic"] = c.type.diagnostic
    return doc


def _type_from_args(args) -> LtsType:
    if args.k1 is not None or args.k2 is not None:
        if args.k1 is None or args.k2 is None:
            raise InputError("--k1 and --k2 must be given together")
        params: tuple[int, ...] = (args.k1, args.k2)
    elif args.k is not None:
        params = (args.k,)
    else:
        params = ()
    try:
        return LtsType(args.type, params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_classify(args) -> int:
    S, _ = read_subspace_document(args.input)
    if args.tol is not None:
        S = subspace_span(S.basis, S.m, args.tol)
    _emit(classification_report(S))
    return 0


def cmd_generate(args) -> int:
    t = _type_from_args(args)
    try:
        check_admissible(t, args.m)
    except InadmissibleType as exc:
        raise InputError(str(exc)) from exc
    S, frame = generate_with_frame(t, args.m, args.seed)
    doc = subspace_document(S, str(t), frame)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            _emit(doc, fh)
    else:
        _emit(doc)
    return 0


def cmd_roots(args) -> int:
    if args.m < 2:
        raise InputError("m must be at least 2")
    frame = canonical_cartan(args.m)
    rng = np.random.default_rng(args.seed)
    Zs = [frame.from_plane(rng.normal(size=2)) for _ in range(20)]
    rows = []
    for d in root_table(frame):
        rows.append(
            {
                "index": d.index,
                "riesz": vector_to_pairs(d.riesz),
                "root_space": [vector_to_pairs(b) for b in d.root_space.basis],
                "multiplicity": d.multiplicity,
                "eigen_residual": root_eigen_residual(d, frame, Zs),
            }
        )
    _emit({"m": args.m, "cartan": {"X": vector_to_pairs(frame.X), "JY": vector_to_pairs(frame.JY)}, "roots": rows})
    return 0


def cmd_decompose(args) -> int:
    S, frame = read_subspace_document(args.input)
    if args.m is not None and args.m != S.m:
        raise InputError(f"-m {args.m} does not match document m = {S.m}")
    frame = frame or canonical_cartan(S.m)
    try:
        rep = decompose_by_roots(S, frame)
    except DecompositionError as exc:
        raise InputError(str(exc)) from exc
    _emit(
        {
            "cartan_dim": rep.cartan.dim,
            "zero_part_dim": rep.zero_part.dim,
            "roots": [
                {
                    "label": r.label,
                    "ambient": list(r.ambient),
                    "signs": list(r.signs),
                    "riesz": vector_to_pairs(r.riesz),
                    "dim": r.part.dim,
                }
                for r in rep.roots
            ],
            "restricted_values": {str(k): v for k, v in sorted(rep.restricted_values.items())},
            "direct_sum_dim": rep.direct_sum().dim,
        }
    )
    return 0


def cmd_angle(args) -> int:
    doc = _load_json(args.input)
    _validate(doc, SUBSPACE_SCHEMA)
    vecs = _vectors(doc["basis"], doc["m"], "basis")
    out = []
    for j, v in enumerate(vecs):
        if np.linalg.norm(v) == 0:
            raise InputError(f"field basis/{j}: zero vector has no characteristic angle")
        out.append(characteristic_angle(v))
    _emit({"angles": out})
    return 0


def cmd_period(args) -> int:
    if args.num < 0 or args.den < 1:
        raise InputError("need --num >= 0 and --den >= 1")
    g = gcd(args.num, args.den)
    case = PeriodCase(args.num // g, args.den // g)
    L, O = minimal_period(case), minimal_period_oracle(case)
    _emit({"num": case.tan_num, "den": case.tan_den, "formula": L, "oracle": O, "agree": abs(L - O) <= 1e-9})
    return 0 if abs(L - O) <= 1e-9 else 1


EMBEDDINGS = ("inclusion", "sphere-product", "torus", "projective", "segre")


def _descriptor(args):
    m = args.m
    if args.type == "inclusion":
        return inclusion_descriptor(_need(args.k, "--k"), m)
    if args.type == "sphere-product":
        return sphere_product_descriptor(_need(args.k1, "--k1"), _need(args.k2, "--k2"), m)
    if args.type == "torus":
        return torus_descriptor(m)
    if args.type == "projective":
        return projective_descriptor(_need(args.k, "--k"), m, args.real)
    return segre_descriptor(m, real_circle=not args.complex_circle)


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required for this embedding")
    return value


def cmd_verify_embedding(args) -> int:
    if args.samples < 0:
        raise InputError("--samples must be non-negative")
    try:
        desc = _descriptor(args)
    except EmbeddingError as exc:
        raise InputError(str(exc)) from exc
    rng = np.random.default_rng(args.seed)
    worst_quadric = 0.0
    for _ in range(args.samples):
        curve = desc.sample(rng)
        t = float(rng.uniform(-np.pi, np.pi))
        worst_quadric = max(worst_quadric, quadric_residual(ProjPoint(curve(t))))
    S = tangent_space_of_embedding(desc, samples=min(args.samples, 10), seed=args.seed, tol=1e-7)
    got = classify_detailed(S).type
    ok = worst_quadric <= 1e-12 and str(got.canonical()) == desc.expected
    _emit(
        {
            "embedding": desc.name,
            "m": args.m,
            "samples": args.samples,
            "max_quadric_residual": worst_quadric,
            "tangent_dim": S.dim,
            "expected_type": desc.expected,
            "tangent_type": str(got.canonical()),
            "pass": ok,
        }
    )
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    if args.m < 2 or args.trials < 1:
        raise InputError("need m >= 2 and --trials >= 1")
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    if args.check == "curvature":
        for _ in range(args.trials):
            u, v, w = rng.normal(size=(3, args.m)) + 1j * rng.normal(size=(3, args.m))
            a = curvature(u, v, w, mode="formula")
            b = curvature(u, v, w, mode="bracket")
            worst = max(worst, float(np.linalg.norm(a - b) / max(np.linalg.norm(a), 1e-300)))
        threshold = 1e-9
    else:
        frame = canonical_cartan(args.m)
        for _ in range(args.trials):
            Zs = [frame.from_plane(rng.normal(size=2))]
            for d in root_table(frame):
                worst = max(worst, root_eigen_residual(d, frame, Zs))
        threshold = 1e-9
    ok = worst <= threshold
    _emit({"check": args.check, "m": args.m, "trials": args.trials, "seed": args.seed, "max_deviation": worst, "pass": ok})
    return 0 if ok else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quadric-lts", description="Lie triple systems of the complex quadric Q^m.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify a subspace document")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("--tol", type=float)
    c.set_defaults(func=cmd_classify)

    g = sub.add_parser("generate", help="emit a canonical instance of a type")
    g.add_argument("--type", required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--k1", type=int)
    g.add_argument("--k2", type=int)
    g.add_argument("-m", type=int, required=True)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("roots", help="root table of Q^m")
    r.add_argument("-m", type=int, required=True)
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.set_defaults(func=cmd_roots)

    d = sub.add_parser("decompose", help="restricted-root decomposition of a Lie triple system")
    d.add_argument("-i", "--input", required=True)
    d.add_argument("-m", type=int)
    d.set_defaults(func=cmd_decompose)

    a = sub.add_parser("angle", help="characteristic angles of the vectors in a document")
    a.add_argument("-i", "--input", required=True)
    a.set_defaults(func=cmd_angle)

    pe = sub.add_parser("period", help="minimal period of a closed geodesic with tan(phi) = num/den")
    pe.add_argument("--num", type=int, required=True)
    pe.add_argument("--den", type=int, required=True)
    pe.set_defaults(func=cmd_period)

    v = sub.add_parser("verify-embedding", help="check an explicit totally geodesic embedding")
    v.add_argument("--type", required=True, choices=EMBEDDINGS)
    v.add_argument("--k", type=int)
    v.add_argument("--k1", type=int)
    v.add_argument("--k2", type=int)
    v.add_argument("--real", action="store_true", help="restrict the projective embedding to RP^k")
    v.add_argument("--complex-circle", action="store_true", help="Segre with a full CP^1 second factor")
    v.add_argument("-m", type=int, required=True)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.set_defaults(func=cmd_verify_embedding)

    o = sub.add_parser("oracle", help="numerical self-checks")
    o.add_argument("--check", choices=("curvature", "roots"), default="curvature")
    o.add_argument("-m", type=int, required=True)
    o.add_argument("--trials", type=int, default=200)
    o.add_argument("--seed", type=int, default=DEFAULT_SEED)
    o.set_defaults(func=cmd_oracle)
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InadmissibleType, EmbeddingError) as exc:
        print(f"quadric-lts: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
