"""JSON file formats: pair files, report files, generation specs and truth sidecars.

Floats are written with 17 significant digits, which round-trips every
double exactly. Matrices are nested row-major lists.
"""
import json
import math
from pathlib import Path

import numpy as np

from cspair import __version__
from cspair.canonical import GenerationSpec, assemble_models, canonical_model, invariant_from_dict
from cspair.decompose import DecompositionReport, Summand
from cspair.errors import DimensionMismatch, InputError, InvalidMatrix, InvalidSpec
from cspair.matlin import as_matrix
from cspair.spectral import ReciprocalClass


class MalformedFile(InputError):
    pass


def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise InvalidMatrix("cannot serialize non-finite number")
    if x == 0.0:
        return "0.0" if math.copysign(1.0, x) > 0 else "-0.0"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """Deterministic JSON text with 17-significant-digit floats and a trailing newline."""
    return _encode(obj, indent, 0) + "\n"


def load_json(source):
    """Parse JSON from a path, ``-`` (stdin) or an already-open text stream."""
    try:
        if hasattr(source, "read"):
            return json.load(source)
        return json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedFile(f"cannot read JSON from {source}: {exc}") from None


def _matrix(data, key):
    if key not in data:
        raise MalformedFile(f"missing field {key!r}")
    rows = data[key]
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InvalidMatrix(f"{key} must be a nested list")
    if rows and len({len(r) for r in rows}) != 1:
        raise InvalidMatrix(f"{key} is not rectangular")
    return as_matrix(rows, key)


# pair files

def pair_to_dict(J1, J2):
    return {"dim": int(np.shape(J1)[0]), "J1": np.asarray(J1), "J2": np.asarray(J2)}


def pair_from_dict(data):
    if not isinstance(data, dict):
        raise MalformedFile("pair file must be a JSON object")
    J1 = _matrix(data, "J1")
    J2 = _matrix(data, "J2")
    dim = data.get("dim", J1.shape[0])
    if dim != J1.shape[0] or J1.shape != J2.shape or J1.shape[0] != J1.shape[1]:
        raise DimensionMismatch(f"declared dim {dim} does not match J1 {J1.shape} / J2 {J2.shape}")
    return J1, J2


# report files

def report_to_dict(report):
    groups = []
    for inv, count in report.grouped_invariants():
        entry = inv.to_dict()
        entry["count"] = count
        # self-dual roots are snapped onto the unit circle during decomposition
        entry["self_dual"] = abs(inv.factor.modulus - 1.0) <= 1e-12
        groups.append(entry)
    classes = [
        {
            "p": c.p.to_dict(),
            "p_tilde": c.p_tilde.to_dict(),
            "self_dual": c.self_dual,
            "multiplicity": c.total_multiplicity,
        }
        for c in report.classes
    ]
    return {
        "tool_version": __version__,
        "dim": report.dim,
        "invariants": groups,
        "classes": classes,
        "S": report.S,
        "canonical_a": report.canonical_a,
        "canonical_b": report.canonical_b,
        "residuals": {k: float(v) for k, v in report.residuals.items()},
        "warnings": list(report.warnings),
    }


def _factor_from_dict(d):
    return invariant_from_dict({**d, "n": 1}).factor


def report_from_dict(data):
    """Rebuild a :class:`DecompositionReport` from its file form.

    Summand objects are recovered from the column blocks of ``S``; the
    generator of each block is its last ``a``-side chain vector.
    """
    if not isinstance(data, dict):
        raise MalformedFile("report file must be a JSON object")
    try:
        invariants = []
        for entry in data["invariants"]:
            inv = invariant_from_dict(entry)
            invariants.extend([inv] * int(entry.get("count", 1)))
        S = _matrix(data, "S")
        canonical_a = _matrix(data, "canonical_a")
        canonical_b = _matrix(data, "canonical_b")
        classes = [
            ReciprocalClass(
                _factor_from_dict(c["p"]), _factor_from_dict(c["p_tilde"]),
                bool(c["self_dual"]), int(c["multiplicity"]),
            )
            for c in data.get("classes", [])
        ]
        residuals = {k: float(v) for k, v in data.get("residuals", {}).items()}
        report_warnings = [str(w) for w in data.get("warnings", [])]
    except (KeyError, TypeError, ValueError, InvalidSpec) as exc:
        raise MalformedFile(f"malformed report: {exc}") from None
    summands = []
    start = 0
    for inv in invariants:
        block = S[:, start:start + inv.dim]
        half = inv.dim // 2
        w = block[:, half - inv.degree] if block.shape[1] == inv.dim else np.zeros(S.shape[0])
        summands.append(Summand(inv, w, block))
        start += inv.dim
    return DecompositionReport(
        summands, invariants, S, canonical_a, canonical_b, residuals, report_warnings, classes
    )


# generation specs and sidecars

def spec_from_dict(data, seed=None, cond_bound=None):
    if not isinstance(data, dict) or "invariants" not in data:
        raise InvalidSpec("generation spec needs an 'invariants' list")
    invariants = []
    for entry in data["invariants"]:
        if not isinstance(entry, dict):
            raise InvalidSpec(f"invariant entry must be an object, got {entry!r}")
        count = entry.get("count", 1)
        if not isinstance(count, int) or count < 1:
            raise InvalidSpec(f"count must be a positive integer, got {count!r}")
        invariants.extend([invariant_from_dict(entry)] * count)
    seed = data.get("seed", 0) if seed is None else seed
    cond_bound = data.get("cond_bound", 100.0) if cond_bound is None else cond_bound
    try:
        return GenerationSpec(tuple(invariants), int(seed), float(cond_bound))
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(str(exc)) from None


def grouped(invariants):
    out = []
    for inv in invariants:
        if out and out[-1][0] == inv:
            out[-1][1] += 1
        else:
            out.append([inv, 1])
    return [{**inv.to_dict(), "count": c} for inv, c in out]


def truth_to_dict(spec, generated):
    return {
        "tool_version": __version__,
        "seed": spec.seed,
        "cond_bound": spec.cond_bound,
        "spec_invariants": grouped(spec.invariants),
        "invariants": grouped(generated.invariants),
        "dim": generated.pair.dim,
        "cond_S": generated.cond_S,
        "draws": generated.draws,
    }


def sidecar_path(out_path):
    out_path = Path(out_path)
    if out_path.suffix == ".json":
        return out_path.with_suffix(".truth.json")
    return out_path.with_name(out_path.name + ".truth.json")


def canonical_to_dict(invariants):
    models = [canonical_model(inv) for inv in invariants]
    a, b, J1, J2 = assemble_models(invariants)
    return {
        "tool_version": __version__,
        "invariants": grouped(invariants),
        "models": [
            {"invariant": m.invariant.to_dict(), "A": m.A, "A_inv": m.A_inv} for m in models
        ],
        "a": a,
        "b": b,
        "dim": int(a.shape[0]),
        "J1": J1,
        "J2": J2,
    }
