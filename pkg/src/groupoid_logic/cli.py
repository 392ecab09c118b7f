"""Command-line front end.

Exit codes: 0 success, 1 tolerance exceeded, 2 input or axiom error,
3 measure/phase validation error, 4 resource cap.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io
from .algebra import bridge_certified, bridge_decoherence
from .decoherence import decoherence, decoherence_report, sorkin_audit, validate_phase
from .errors import InputError, MeasureError, PreconditionError, ResourceError
from .gns import gns_report
from .groupoid import validate
from .lattice import (
    distributive_audit,
    irreducible_elements,
    is_irreducible,
    lattice_from_dict,
    modular_audit,
    orthocomplement_report,
    powerset_lattice,
)
from .subsets import ObjectSet, relation_report, transition_set

EXIT_OK, EXIT_TOLERANCE, EXIT_INPUT, EXIT_MEASURE, EXIT_RESOURCE = 0, 1, 2, 3, 4


def _num(x):
    """JSON-ready scalar; complex values become ``[re, im]``."""
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _fmt(x) -> str:
    if isinstance(x, (complex, np.complexfloating)):
        if abs(x.imag) < 5e-16 * max(1.0, abs(x.real)):
            return f"{x.real:.6g}"
        return f"{x.real:.6g}{x.imag:+.6g}j"
    if isinstance(x, float) and np.isnan(x):
        return "-"
    if abs(x) < 1e-14:
        return "0"
    return f"{x:.6g}"


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(io.dumps(payload))
    else:
        print(text)


def _subset(g, text: str | None) -> ObjectSet:
    if text is None or text.strip() == "":
        return ObjectSet.empty(g)
    return ObjectSet.from_labels(g, [x.strip() for x in text.split(",") if x.strip()])


def _family(g, text: str | None) -> list[ObjectSet]:
    if not text:
        return []
    return [_subset(g, part) for part in text.split(";")]


def _groupoid_arg(args):
    spec = args.groupoid_opt or args.groupoid
    if spec is None:
        raise InputError("no groupoid given")
    return io.load_groupoid(spec)


def _measured(args, g):
    lam = io.parse_lambda(g, args.lam)
    return io.build_measured(g, lam, args.haar)


# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    g = _groupoid_arg(args)
    rep = validate(g)
    payload = {"groupoid": g.name, "axioms": rep.to_dict()}
    if not rep.ok:
        total = sum(rep.counts.values())
        lines = [f"{g.name}: {total} axiom violation(s)"]
        lines += [f"  [{v.kind}] {v.message}" for v in rep.violations[:12]]
        if total > 12:
            lines.append(f"  ... {total - 12} more (use --format json for the full list)")
        _emit(args, payload, "\n".join(lines))
        return EXIT_INPUT
    lines = [f"{g.name}: groupoid axioms OK (|Ω|={g.n_objects}, |G|={g.n_morphisms})"]
    if args.lam is not None or args.haar is not None:
        mg = _measured(args, g)
        payload["haar"] = {"ok": True, "kind": mg.kind}
        lines.append(f"haar ({mg.kind}): left invariance OK")
    if args.phase:
        ph = io.parse_phase(g, args.phase)
        prep = validate_phase(g, ph.S)
        payload["phase"] = prep.to_dict()
        lines.append("phase: logarithmic laws OK")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_decohere(args) -> int:
    g = _groupoid_arg(args)
    mg = _measured(args, g)
    phase = io.parse_phase(g, args.phase)
    family = _family(g, args.subsets) or None
    rep = decoherence_report(mg, family, phase)
    labels = rep.labels()
    payload = {
        "groupoid": g.name,
        "haar": mg.kind,
        "family": labels,
        "D": [[_num(v) for v in row] for row in rep.matrix],
        "mu2": [_num(v) for v in rep.mu2],
        "interference": [[None if np.isnan(v) else _num(v) for v in row] for row in rep.interference],
        "sorkin_residual": rep.sorkin_residual,
        "hermitian_residual": rep.hermitian_residual,
    }
    rows = [["D(b,a)"] + labels + ["mu2"]]
    for i, lab in enumerate(labels):
        rows.append([lab] + [_fmt(v) for v in rep.matrix[i]] + [_fmt(float(rep.mu2[i]))])
    irows = [["I(a,b)"] + labels]
    for i, lab in enumerate(labels):
        irows.append([lab] + [_fmt(float(v)) for v in rep.interference[i]])
    text = "\n".join(
        [
            f"{g.name}  haar={mg.kind}" + ("  phase=on" if phase is not None else ""),
            _table(rows),
            "",
            _table(irows),
            "",
            f"max |I3| over family: {rep.sorkin_residual:.3e}",
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_sorkin_audit(args) -> int:
    g = _groupoid_arg(args)
    mg = _measured(args, g)
    phase = io.parse_phase(g, args.phase)
    audit = sorkin_audit(mg, phase, jobs=args.jobs)
    tol = args.tolerance if args.tolerance is not None else 1e-12
    ok = audit.max_residual <= tol
    payload = {"groupoid": g.name, "tolerance": tol, "pass": ok, **audit.to_dict()}
    a, b, c = audit.witness
    text = (
        f"{g.name}: max |I3| = {audit.max_residual:.3e} over {audit.n_triples} assignments "
        f"(tolerance {tol:g}) -> {'PASS' if ok else 'FAIL'}\n"
        f"worst triple: a={a} b={b} c={c}"
    )
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_gns_report(args) -> int:
    g = _groupoid_arg(args)
    mg = _measured(args, g)
    rep = gns_report(mg)
    payload = {"groupoid": g.name, **rep}
    text = "\n".join(
        [
            f"{g.name}: GNS dimension {rep['dimension']}",
            f"spectrum: min {rep['min_eigenvalue']:.6g}  max {rep['max_eigenvalue']:.6g}",
            "atomic null sets: " + (", ".join("{" + a + "}" for a in rep["null_atoms"]) or "none"),
        ]
        + (["(computed on the support sub-groupoid: λ has zeros)"] if rep["restricted_to_support"] else [])
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_relation(args) -> int:
    g = _groupoid_arg(args)
    if args.a is not None or args.b is not None:
        a, b = _subset(g, args.a), _subset(g, args.b)
        T = transition_set(g, b, a)
        payload = {"a": [str(x) for x in a.labels()], "b": [str(x) for x in b.labels()],
                   "conditioned": bool(T), "transition_set": [str(x) for x in T.labels()]}
        text = f"conditioned({a.labels()}, {b.labels()}) = {bool(T)}; t⁻¹(b)∘s⁻¹(a) = {T.labels()}"
        _emit(args, payload, text)
        return EXIT_OK
    rep = relation_report(g, sample=args.sample)
    payload = {"groupoid": g.name, **rep.to_dict()}
    lines = [
        f"{g.name}: {rep.n_subsets} non-empty subsets ({'sampled' if rep.sampled else 'exhaustive'})",
        f"reflexive on non-empty: {rep.reflexive_on_nonempty}",
        f"symmetric: {rep.symmetric}",
        f"transitive: {rep.transitive}",
    ]
    for kind, sets in rep.counterexamples.items():
        lines.append(f"{kind} counterexample: " + "  ".join("{" + ",".join(map(str, s)) + "}" for s in sets))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_bridge(args) -> int:
    g = _groupoid_arg(args)
    mg = _measured(args, g)
    a, b = _subset(g, args.a), _subset(g, args.b)
    d = decoherence(mg, b, a)
    w = bridge_decoherence(mg, b, a, mode=args.convolution)
    certified = bridge_certified(mg) and args.convolution == "haar"
    tol = args.tolerance if args.tolerance is not None else 1e-12
    diff = abs(d - w)
    payload = {"D": d, "omega": _num(w), "difference": diff, "certified": certified, "convolution": args.convolution}
    text = (
        f"D(b,a) = {d:.17g}\nω(χ_B† ⋆ χ_A) = {_fmt(w)}  [{args.convolution} convolution]\n"
        f"|difference| = {diff:.3e}  ({'certified' if certified else 'uncertified'})"
    )
    _emit(args, payload, text)
    return EXIT_TOLERANCE if certified and diff > tol else EXIT_OK


def cmd_lattice(args) -> int:
    spec = args.lattice
    if spec.startswith("powerset:"):
        L = powerset_lattice(int(spec.split(":", 1)[1]))
    else:
        import json
        from pathlib import Path

        try:
            L = lattice_from_dict(json.loads(Path(spec).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(str(exc)) from None
    lab = lambda i: str(L.elements[i])  # noqa: E731
    mod = modular_audit(L)
    dist = distributive_audit(L)
    payload = {
        "size": len(L),
        "distributive_violations": [[lab(i) for i in t] for t in dist],
        "modular_violations": [[lab(i) for i in t] for t in mod],
        "irreducible_elements": [lab(i) for i in irreducible_elements(L)],
        "irreducible": is_irreducible(L),
        **orthocomplement_report(L),
    }
    text = "\n".join(
        [
            f"lattice with {len(L)} elements",
            f"distributive: {not dist}" + (f" (e.g. {payload['distributive_violations'][0]})" if dist else ""),
            f"modular: {not mod}" + (f" (e.g. {payload['modular_violations'][0]})" if mod else ""),
            f"irreducible: {payload['irreducible']}",
            f"complement involutive: {payload['involution']}, order-reversing: {payload['order_reversing']}",
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("groupoid", nargs="?", help="builtin (pair:n, units:n, group:z:k, joined by +) or JSON file")
    common.add_argument("--groupoid", dest="groupoid_opt", help="same as the positional argument")
    common.add_argument("--lambda", dest="lam", help="'uniform', comma list in object order, or JSON file")
    common.add_argument("--haar", help="'normalized' (default), 'counting', or measure JSON file")
    common.add_argument("--phase", help="'potential:φ1,φ2,...' or phase JSON file")
    common.add_argument("--a")
    common.add_argument("--b")
    common.add_argument("--c")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--convolution", choices=("haar", "literal"), default="haar")

    p = argparse.ArgumentParser(prog="groupoid-logic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check groupoid axioms, Haar invariance, phase laws").set_defaults(fn=cmd_validate)
    d = sub.add_parser("decohere", parents=[common], help="D-table over atoms or a subset family")
    d.add_argument("--subsets", help="family as 'a1,a2;b1;...' (default: atoms)")
    d.set_defaults(fn=cmd_decohere)
    sub.add_parser("sorkin-audit", parents=[common], help="max |I3| over all disjoint triples").set_defaults(fn=cmd_sorkin_audit)
    sub.add_parser("gns-report", parents=[common], help="GNS dimension, spectrum, atomic null sets").set_defaults(fn=cmd_gns_report)
    r = sub.add_parser("relation", parents=[common], help="conditioning relation report, or one pair with --a/--b")
    r.add_argument("--sample", type=int, help="sample this many subsets instead of scanning all")
    r.set_defaults(fn=cmd_relation)
    sub.add_parser("bridge", parents=[common], help="compare D(b,a) with ω(χ† ⋆ χ)").set_defaults(fn=cmd_bridge)
    lat = sub.add_parser("lattice", help="lattice audits for powerset:n or a lattice JSON file")
    lat.add_argument("lattice")
    lat.add_argument("--format", choices=("text", "json"), default="text")
    lat.set_defaults(fn=cmd_lattice)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except MeasureError as exc:
        witness = getattr(exc, "witness", None)
        report = getattr(exc, "report", None)
        print(f"error: {exc}" + (f" witness={list(map(str, witness))}" if witness else ""), file=sys.stderr)
        if report is not None:
            for v in report.violations:
                print(f"  [{v.kind}] {v.message}", file=sys.stderr)
        return EXIT_MEASURE
    except (InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
