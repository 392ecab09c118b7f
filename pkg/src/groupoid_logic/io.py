"""Structured-text (JSON) formats and builtin groupoid names.

Groupoid document::

    {"objects": [...], "morphisms": [{"id", "src", "tgt"}, ...],
     "compose": [[a, b, a∘b], ...], "inverse": [[a, a⁻¹], ...]}

Measure document: ``{"lambda": {label: number}, "haar": "counting" |
"normalized" | {morphism-id: number}}``.  Phase document: ``{"S":
{morphism-id: number}}`` or ``{"potential": {object: number}}``.  Function
document: ``{morphism-id: [re, im]}``.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .decoherence import PhaseAction, phase_from_potential
from .errors import InputError, StructureError
from .groupoid import (
    FiniteGroupoid,
    cyclic_group,
    disjoint_union,
    pair_groupoid,
    unit_groupoid,
)
from .haar import MeasuredGroupoid, counting_haar, custom_haar, normalized_haar

_BUILTIN = re.compile(r"^(pair|units):(\d+)$|^group:z:(\d+)$")


def dumps(data) -> str:
    """Canonical JSON: sorted keys, shortest round-trip floats, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=True) + "\n"


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def parse_builtin(name: str) -> FiniteGroupoid:
    """``pair:n``, ``units:n``, ``group:z:k``, joined by ``+`` for disjoint unions."""
    parts = [p.strip() for p in name.split("+")]
    out = None
    for part in parts:
        m = _BUILTIN.match(part)
        if not m:
            raise InputError(f"unknown builtin groupoid {part!r}")
        if m.group(1) == "pair":
            g = pair_groupoid(int(m.group(2)))
        elif m.group(1) == "units":
            g = unit_groupoid(int(m.group(2)))
        else:
            g = cyclic_group(int(m.group(3)))
        out = g if out is None else disjoint_union(out, g)
    return out


def groupoid_from_dict(data: dict, name: str = "file") -> FiniteGroupoid:
    try:
        objects = [str(o) for o in data["objects"]]
        morphs = data["morphisms"]
        ids = [str(m["id"]) for m in morphs]
        obj_ix = {o: i for i, o in enumerate(objects)}
        mor_ix = {m: i for i, m in enumerate(ids)}
        source = [obj_ix[str(m["src"])] for m in morphs]
        target = [obj_ix[str(m["tgt"])] for m in morphs]
        n = len(ids)
        comp = np.full((n, n), -1, dtype=np.int32)
        for a, b, c in data.get("compose", []):
            comp[mor_ix[str(a)], mor_ix[str(b)]] = mor_ix[str(c)]
        inverse = np.full(n, -1, dtype=np.int64)
        for a, b in data["inverse"]:
            inverse[mor_ix[str(a)]] = mor_ix[str(b)]
    except KeyError as exc:
        raise StructureError(f"groupoid document refers to unknown or missing {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise StructureError(f"malformed groupoid document: {exc}") from None
    if np.any(inverse < 0):
        missing = ids[int(np.flatnonzero(inverse < 0)[0])]
        raise StructureError(f"no inverse given for morphism {missing!r}")
    return FiniteGroupoid(objects, ids, source, target, comp, inverse, name=name)


def groupoid_to_dict(g: FiniteGroupoid) -> dict:
    s = str
    a, b, c = g.composable_pairs()
    return {
        "objects": [s(o) for o in g.objects],
        "morphisms": [
            {"id": s(m), "src": s(g.objects[g.source[i]]), "tgt": s(g.objects[g.target[i]])}
            for i, m in enumerate(g.morphisms)
        ],
        "compose": [[s(g.morphisms[x]), s(g.morphisms[y]), s(g.morphisms[z])] for x, y, z in zip(a, b, c)],
        "inverse": [[s(m), s(g.morphisms[g.inverse[i]])] for i, m in enumerate(g.morphisms)],
    }


def load_groupoid(spec: str) -> FiniteGroupoid:
    """A builtin name or a path to a groupoid document."""
    if _BUILTIN.match(spec.split("+")[0].strip()):
        return parse_builtin(spec)
    return groupoid_from_dict(_read_json(spec), name=Path(spec).stem)


def parse_lambda(g: FiniteGroupoid, text: str | None) -> np.ndarray:
    """``uniform``, a comma-separated list in object order, or a JSON file."""
    if text is None or text == "uniform":
        return np.full(g.n_objects, 1.0 / g.n_objects)
    if Path(text).is_file():
        data = _read_json(text)
        return _lambda_from_map(g, data.get("lambda", data))
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse λ from {text!r}") from None
    if len(vals) != g.n_objects:
        raise InputError(f"λ has {len(vals)} values but the groupoid has {g.n_objects} objects")
    return np.array(vals)


def _lambda_from_map(g: FiniteGroupoid, mapping: dict) -> np.ndarray:
    lam = np.zeros(g.n_objects)
    for key, val in mapping.items():
        lam[g.object_index(key)] = float(val)
    return lam


def build_measured(g: FiniteGroupoid, lam: np.ndarray, haar: str | None) -> MeasuredGroupoid:
    """``haar`` is ``counting``, ``normalized`` (default), or a measure-document path."""
    if haar is None or haar == "normalized":
        return normalized_haar(g, lam)
    if haar == "counting":
        return counting_haar(g, lam)
    data = _read_json(haar)
    if "lambda" in data:
        lam = _lambda_from_map(g, data["lambda"])
    kind = data.get("haar", "normalized")
    if kind in ("normalized", "counting"):
        return build_measured(g, lam, kind)
    if not isinstance(kind, dict):
        raise InputError(f"unknown haar specification {kind!r}")
    w = np.full(g.n_morphisms, math.nan)
    for key, val in kind.items():
        w[g.morphism_index(key)] = float(val)
    if np.any(np.isnan(w)):
        missing = g.morphisms[int(np.flatnonzero(np.isnan(w))[0])]
        raise InputError(f"haar weights missing for morphism {missing!r}")
    return custom_haar(g, lam, w)


def parse_phase(g: FiniteGroupoid, text: str | None) -> PhaseAction | None:
    """``potential:φ1,φ2,...`` or a phase-document path."""
    if not text:
        return None
    if text.startswith("potential:"):
        try:
            phi = [float(x) for x in text[len("potential:") :].split(",")]
        except ValueError:
            raise InputError(f"cannot parse potential {text!r}") from None
        if len(phi) != g.n_objects:
            raise InputError(f"potential has {len(phi)} values but the groupoid has {g.n_objects} objects")
        return phase_from_potential(g, phi)
    data = _read_json(text)
    if "potential" in data:
        return phase_from_potential(g, _lambda_from_map(g, data["potential"]))
    S = np.zeros(g.n_morphisms)
    for key, val in data.get("S", {}).items():
        S[g.morphism_index(key)] = float(val)
    return PhaseAction(g, S)
