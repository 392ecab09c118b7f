"""Decoherence functional, grade-2 measure, interference and Sorkin audits.

``D(b, a)`` is the ``Λ``-measure of the transition set ``t⁻¹(b) ∘ s⁻¹(a)``,
optionally weighted pointwise by a phase ``exp(i S)``.  Unconditioned pairs
have an empty transition set and ``D = 0``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import GroupoidLogicError, PhaseValidationError, PreconditionError, ResourceError
from .groupoid import FiniteGroupoid, ValidationReport
from .haar import MeasuredGroupoid
from .subsets import MAX_EXHAUSTIVE_OBJECTS, MismatchError, ObjectSet

PHASE_ATOL = 1e-12


def validate_phase(g: FiniteGroupoid, S, atol: float = PHASE_ATOL) -> ValidationReport:
    """Check ``S(β∘α) = S(β) + S(α)`` and ``S(α⁻¹) = −S(α)``."""
    S = np.asarray(S, dtype=float)
    rep = ValidationReport()
    if S.shape != (g.n_morphisms,):
        rep.add("shape", (S.shape,), f"phase needs {g.n_morphisms} values")
        return rep
    scale = max(1.0, float(np.max(np.abs(S))))
    a, b, c = g.composable_pairs()
    bad = np.abs(S[c] - S[a] - S[b]) > atol * scale
    for x, y in zip(a[bad][:64], b[bad][:64]):
        rep.add("logarithmic", (int(x), int(y)), f"S({g.morphisms[x]} ∘ {g.morphisms[y]}) != S + S")
    rep.counts["logarithmic"] = int(bad.sum()) or rep.counts.get("logarithmic", 0)
    if not rep.counts["logarithmic"]:
        del rep.counts["logarithmic"]
    bad = np.flatnonzero(np.abs(S[g.inverse] + S) > atol * scale)
    for x in bad[:64]:
        rep.add("antisymmetric", (int(x),), f"S({g.morphisms[x]}⁻¹) != -S({g.morphisms[x]})")
    if bad.size:
        rep.counts["antisymmetric"] = int(bad.size)
    return rep


class PhaseAction:
    """A logarithmic real function ``S`` on morphisms; validated on construction."""

    def __init__(self, groupoid: FiniteGroupoid, S):
        report = validate_phase(groupoid, S)
        if not report.ok:
            raise PhaseValidationError("phase is not logarithmic", report=report)
        self.groupoid = groupoid
        self.S = np.asarray(S, dtype=float)
        self.S.setflags(write=False)

    def factor(self) -> np.ndarray:
        return np.exp(1j * self.S)

    def __repr__(self) -> str:
        return f"PhaseAction({self.groupoid.name!r})"


def phase_from_potential(g: FiniteGroupoid, phi) -> PhaseAction:
    """``S(γ) = φ(t(γ)) − φ(s(γ))``; always logarithmic, zero on isotropy."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (g.n_objects,):
        raise PreconditionError(f"potential needs {g.n_objects} values")
    return PhaseAction(g, phi[g.target] - phi[g.source])


def _weights(mg: MeasuredGroupoid, phase: PhaseAction | None) -> np.ndarray:
    if phase is None:
        return mg.Lambda
    if phase.groupoid is not mg.groupoid:
        raise MismatchError("phase belongs to a different groupoid")
    return mg.Lambda * phase.factor()


def _transition_mask(g: FiniteGroupoid, b_mask: np.ndarray, a_mask: np.ndarray) -> np.ndarray:
    return _kernels.set_product(
        a_mask[g.source], b_mask[g.target], g.compose_table, g.by_source_ptr, g.by_source_idx, g.target
    )


def _check_sets(mg: MeasuredGroupoid, *sets: ObjectSet) -> None:
    for x in sets:
        if x.groupoid is not mg.groupoid:
            raise MismatchError(f"{x!r} does not index objects of {mg.groupoid!r}")


def decoherence(mg: MeasuredGroupoid, b: ObjectSet, a: ObjectSet, phase: PhaseAction | None = None):
    """``D(b, a)``: real without a phase, complex with one."""
    _check_sets(mg, a, b)
    w = _weights(mg, phase)
    val = w[_transition_mask(mg.groupoid, b.mask, a.mask)].sum()
    return complex(val) if phase is not None else float(val)


def grade2(mg: MeasuredGroupoid, a: ObjectSet, phase: PhaseAction | None = None) -> float:
    """``μ₂(a) = D(a, a)``, real even with a phase."""
    return float(np.real(decoherence(mg, a, a, phase)))


def interference(mg: MeasuredGroupoid, a: ObjectSet, b: ObjectSet, phase: PhaseAction | None = None):
    """``I(a, b) = μ₂(a∪b) − μ₂(a) − μ₂(b)`` for disjoint ``a, b``.

    Cross-checked against ``D(a, b) + D(b, a)``; a disagreement beyond
    rounding raises :class:`GroupoidLogicError`.
    """
    _check_sets(mg, a, b)
    if not a.isdisjoint(b):
        raise PreconditionError("interference needs disjoint sets")
    via_mu2 = grade2(mg, a | b, phase) - grade2(mg, a, phase) - grade2(mg, b, phase)
    via_d = decoherence(mg, a, b, phase) + decoherence(mg, b, a, phase)
    scale = max(1.0, float(np.abs(mg.Lambda).sum()))
    if abs(via_mu2 - via_d) > 1e-10 * scale:
        raise GroupoidLogicError(f"interference cross-check failed: {via_mu2} vs {via_d}")
    return via_mu2


def sorkin_third_order(
    mg: MeasuredGroupoid, a: ObjectSet, b: ObjectSet, c: ObjectSet, phase: PhaseAction | None = None
) -> float:
    """The alternating sum ``I3(a, b, c)`` over pairwise disjoint sets."""
    _check_sets(mg, a, b, c)
    if not (a.isdisjoint(b) and a.isdisjoint(c) and b.isdisjoint(c)):
        raise PreconditionError("third-order sum needs pairwise disjoint sets")

    def m(x):
        return grade2(mg, x, phase)

    return (
        m(a | b | c) - m(a | b) - m(a | c) - m(b | c) + m(a) + m(b) + m(c)
    )


@dataclass
class DecoherenceReport:
    """``D`` over a subset family, with ``μ₂``, ``I`` and the worst ``|I3|``.

    ``interference[i, k]`` is ``nan`` when members ``i`` and ``k`` overlap.
    """

    family: list[ObjectSet]
    matrix: np.ndarray
    mu2: np.ndarray
    interference: np.ndarray
    sorkin_residual: float
    hermitian_residual: float = field(default=0.0)

    def labels(self) -> list[str]:
        return ["{" + ",".join(str(x) for x in s.labels()) + "}" for s in self.family]


def atoms(g: FiniteGroupoid) -> list[ObjectSet]:
    return [ObjectSet.from_indices(g, [j]) for j in range(g.n_objects)]


def decoherence_matrix(mg: MeasuredGroupoid, family: Sequence[ObjectSet], phase: PhaseAction | None = None) -> np.ndarray:
    """``M[i, k] = D(family[i], family[k])`` evaluated through transition sets."""
    _check_sets(mg, *family)
    g = mg.groupoid
    w = _weights(mg, phase)
    out = np.zeros((len(family), len(family)), dtype=np.complex128 if phase is not None else float)
    for i, b in enumerate(family):
        for k, a in enumerate(family):
            out[i, k] = w[_transition_mask(g, b.mask, a.mask)].sum()
    return out


def decoherence_report(
    mg: MeasuredGroupoid, family: Sequence[ObjectSet] | None = None, phase: PhaseAction | None = None
) -> DecoherenceReport:
    family = list(family) if family is not None else atoms(mg.groupoid)
    M = decoherence_matrix(mg, family, phase)
    mu2 = np.real(np.diagonal(M)).copy()
    n = len(family)
    inter = np.full((n, n), np.nan)
    unions = {}
    for i in range(n):
        for k in range(n):
            if family[i].isdisjoint(family[k]):
                key = (i, k) if i <= k else (k, i)
                if key not in unions:
                    unions[key] = grade2(mg, family[i] | family[k], phase)
                inter[i, k] = unions[key] - mu2[i] - mu2[k]
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = family[i], family[j], family[k]
                if a.isdisjoint(b) and a.isdisjoint(c) and b.isdisjoint(c):
                    worst = max(worst, abs(sorkin_third_order(mg, a, b, c, phase)))
    return DecoherenceReport(
        family=family,
        matrix=M,
        mu2=mu2,
        interference=inter,
        sorkin_residual=worst,
        hermitian_residual=float(np.max(np.abs(M - M.conj().T))) if n else 0.0,
    )


def grade2_table(mg: MeasuredGroupoid, phase: PhaseAction | None = None) -> np.ndarray:
    """``μ₂`` of every subset of objects, indexed by bitmask (complex dtype)."""
    g = mg.groupoid
    if g.n_objects > MAX_EXHAUSTIVE_OBJECTS:
        raise ResourceError(f"|Ω| = {g.n_objects} is over the exhaustive cap of {MAX_EXHAUSTIVE_OBJECTS}")
    return _kernels.grade2_table(g.source, g.target, _weights(mg, phase), g.n_objects)


@dataclass
class SorkinAudit:
    max_residual: float
    witness: tuple[list, list, list]
    n_triples: int
    max_imag_mu2: float

    def to_dict(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "witness": [[str(x) for x in s] for s in self.witness],
            "n_triples": self.n_triples,
            "max_imag_mu2": self.max_imag_mu2,
        }


def sorkin_audit(mg: MeasuredGroupoid, phase: PhaseAction | None = None, jobs: int = 1) -> SorkinAudit:
    """Worst ``|I3|`` over every ordered disjoint triple of subsets of ``Ω``.

    The ``4**|Ω|`` assignments are split into ``jobs`` contiguous chunks;
    the reduction keeps the smallest assignment code on ties, so the result
    does not depend on ``jobs``.
    """
    g = mg.groupoid
    n = g.n_objects
    mu2 = grade2_table(mg, phase)
    total = 4**n
    jobs = max(1, int(jobs))
    bounds = np.linspace(0, total, jobs + 1).astype(np.int64)
    spans = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    if len(spans) == 1:
        results = [_kernels.sorkin_scan(mu2, n, *spans[0])]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda s: _kernels.sorkin_scan(mu2, n, *s), spans))
    worst, code = max(results, key=lambda r: (r[0], -r[1]))
    masks = _kernels.decode_triple(code, n)
    witness = tuple([g.objects[i] for i in range(n) if (m >> i) & 1] for m in masks)
    return SorkinAudit(
        max_residual=worst,
        witness=witness,
        n_triples=total,
        max_imag_mu2=float(np.max(np.abs(mu2.imag))),
    )
