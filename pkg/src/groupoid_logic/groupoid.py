"""Finite groupoids stored as dense index tables.

Objects and morphisms are addressed by dense integer indices; labels are kept
in side tuples.  Composition is an explicit ``int32`` table with ``-1`` where
undefined, and ``compose[a, b]`` is ``a ∘ b`` (apply ``b`` first, so it is
defined when ``source[a] == target[b]``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (
    EmptyGroupoidError,
    GroupValidationError,
    ResourceError,
    StructureError,
    UnknownLabelError,
)

DEFAULT_MAX_MORPHISMS = 4096


def max_morphisms() -> int:
    """Size cap on ``|G|``, read from ``GROUPOID_LOGIC_MAX_MORPHISMS``."""
    raw = os.environ.get("GROUPOID_LOGIC_MAX_MORPHISMS")
    return int(raw) if raw else DEFAULT_MAX_MORPHISMS


def _csr(keys: np.ndarray, n_bins: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable").astype(np.int64)
    counts = np.bincount(keys, minlength=n_bins)
    ptr = np.zeros(n_bins + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, order


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "witness": list(self.witness), "message": self.message}


@dataclass
class ValidationReport:
    """Axiom violations found by a validator; empty means valid."""

    violations: list[Violation] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.violations)

    def add(self, kind: str, witness: tuple, message: str) -> None:
        self.violations.append(Violation(kind, tuple(witness), message))
        self.counts[kind] = self.counts.get(kind, 0) + 1

    def of_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def extend(self, other: "ValidationReport") -> None:
        for v in other.violations:
            self.add(v.kind, v.witness, v.message)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "counts": dict(sorted(self.counts.items())),
            "violations": [v.to_dict() for v in self.violations],
        }


class FiniteGroupoid:
    """A finite groupoid ``G ⇉ Ω`` given by explicit tables.

    Parameters
    ----------
    objects, morphisms : sequences of hashable labels
    source, target : int arrays of length ``|G|`` indexing ``objects``
    compose : ``(|G|, |G|)`` int array, ``-1`` where undefined
    inverse : int array of length ``|G|``
    units : optional int array of length ``|Ω|``.  When omitted, the unit at
        ``j`` is the idempotent loop at ``j`` (``-1`` if there is none, which
        :func:`validate` then reports).

    Raises
    ------
    StructureError
        Shapes or indices that do not refer to declared objects/morphisms.
    ResourceError
        ``|G|`` above :func:`max_morphisms`.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        morphisms: Sequence[Hashable],
        source,
        target,
        compose,
        inverse,
        units=None,
        name: str = "groupoid",
    ):
        n_obj = len(objects)
        n_mor = len(morphisms)
        if n_obj == 0 or n_mor == 0:
            raise EmptyGroupoidError("a groupoid needs at least one object and one morphism")
        if n_mor > max_morphisms():
            raise ResourceError(f"|G| = {n_mor} exceeds the cap of {max_morphisms()} morphisms")
        if len(set(objects)) != n_obj:
            raise StructureError("duplicate object labels")
        if len(set(morphisms)) != n_mor:
            raise StructureError("duplicate morphism labels")

        source = np.asarray(source, dtype=np.int64)
        target = np.asarray(target, dtype=np.int64)
        inverse = np.asarray(inverse, dtype=np.int64)
        compose = np.asarray(compose, dtype=np.int32)
        for nm, arr in (("source", source), ("target", target), ("inverse", inverse)):
            if arr.shape != (n_mor,):
                raise StructureError(f"{nm} must have length {n_mor}, got shape {arr.shape}")
        if compose.shape != (n_mor, n_mor):
            raise StructureError(f"compose must be {n_mor}x{n_mor}, got {compose.shape}")
        if source.min() < 0 or source.max() >= n_obj or target.min() < 0 or target.max() >= n_obj:
            raise StructureError("source/target refer to unknown objects")
        if inverse.min() < 0 or inverse.max() >= n_mor:
            raise StructureError("inverse refers to unknown morphisms")
        if compose.min() < -1 or compose.max() >= n_mor:
            raise StructureError("composition table refers to unknown morphisms")

        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.source = source
        self.target = target
        self.inverse = inverse
        self.compose_table = compose
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self._mor_index = {m: i for i, m in enumerate(self.morphisms)}
        self.by_source_ptr, self.by_source_idx = _csr(source, n_obj)
        self.by_target_ptr, self.by_target_idx = _csr(target, n_obj)

        if units is None:
            units = np.full(n_obj, -1, dtype=np.int64)
            for g in range(n_mor):
                if source[g] == target[g] and compose[g, g] == g and units[source[g]] < 0:
                    units[source[g]] = g
        units = np.asarray(units, dtype=np.int64)
        if units.shape != (n_obj,) or units.max() >= n_mor:
            raise StructureError("units must map each object to a morphism")
        self.units = units

        for arr in (self.source, self.target, self.inverse, self.compose_table, self.units):
            arr.setflags(write=False)

    # -- sizes and lookups ------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def __len__(self) -> int:
        return self.n_morphisms

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.name!r}, |Ω|={self.n_objects}, |G|={self.n_morphisms})"

    def object_index(self, label) -> int:
        try:
            return self._obj_index[label]
        except KeyError:
            # CLI input arrives as strings
            for key, idx in self._obj_index.items():
                if str(key) == str(label):
                    return idx
            raise UnknownLabelError(f"unknown object {label!r}") from None

    def morphism_index(self, label) -> int:
        try:
            return self._mor_index[label]
        except KeyError:
            for key, idx in self._mor_index.items():
                if str(key) == str(label):
                    return idx
            raise UnknownLabelError(f"unknown morphism {label!r}") from None

    def composable(self, a: int, b: int) -> bool:
        return bool(self.source[a] == self.target[b])

    def compose(self, a: int, b: int) -> int:
        """Index of ``a ∘ b``; raises ``ValueError`` when not composable."""
        c = int(self.compose_table[a, b])
        if c < 0:
            raise ValueError(f"{self.morphisms[a]} ∘ {self.morphisms[b]} is undefined")
        return c

    def unit_at(self, j: int) -> int:
        return int(self.units[j])

    def target_fiber(self, j: int) -> np.ndarray:
        """Indices of ``G^j`` (target ``j``), ascending."""
        self._check_object(j)
        return self.by_target_idx[self.by_target_ptr[j] : self.by_target_ptr[j + 1]]

    def source_fiber(self, j: int) -> np.ndarray:
        """Indices of ``G_j`` (source ``j``), ascending."""
        self._check_object(j)
        return self.by_source_idx[self.by_source_ptr[j] : self.by_source_ptr[j + 1]]

    def is_unit(self, g: int) -> bool:
        return bool(self.units[self.source[g]] == g)

    def composable_pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All ``(a, b, a∘b)`` with ``a∘b`` defined, sorted by ``(a∘b, a)``."""
        a, b = np.nonzero(self.compose_table >= 0)
        c = self.compose_table[a, b].astype(np.int64)
        order = np.lexsort((a, c))
        return a[order], b[order], c[order]

    def _check_object(self, j: int) -> None:
        if not 0 <= j < self.n_objects:
            raise UnknownLabelError(f"unknown object index {j}")


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def validate(g: FiniteGroupoid, limit: int = 64) -> ValidationReport:
    """Check every groupoid axiom by enumeration.

    At most ``limit`` witnesses per axiom are listed; ``report.counts`` holds
    the full totals.
    """
    rep = ValidationReport()
    s, t, comp, inv = g.source, g.target, g.compose_table, g.inverse
    n = g.n_morphisms

    composable = s[:, None] == t[None, :]
    defined = comp >= 0
    for a, b in zip(*np.nonzero(composable & ~defined)):
        rep.add("composition-domain", (int(a), int(b)), f"{g.morphisms[a]} ∘ {g.morphisms[b]} should be defined")
    for a, b in zip(*np.nonzero(~composable & defined)):
        rep.add("composition-domain", (int(a), int(b)), f"{g.morphisms[a]} ∘ {g.morphisms[b]} should be undefined")

    a, b = np.nonzero(composable & defined)
    c = comp[a, b]
    bad = (s[c] != s[b]) | (t[c] != t[a])
    for x, y, z in zip(a[bad], b[bad], c[bad]):
        rep.add(
            "source-target",
            (int(x), int(y), int(z)),
            f"{g.morphisms[x]} ∘ {g.morphisms[y]} = {g.morphisms[z]} has the wrong endpoints",
        )

    if rep.counts.get("composition-domain", 0) == 0:
        triples, count = _kernels.associativity_violations(
            comp, g.by_target_ptr, g.by_target_idx, s, limit
        )
        for x, y, z in triples:
            a_, b_, c_ = (g.morphisms[int(v)] for v in (x, y, z))
            rep.add("associativity", (int(x), int(y), int(z)), f"({a_}∘{b_})∘{c_} != {a_}∘({b_}∘{c_})")
        if count > len(triples):
            rep.counts["associativity"] = count

    for j in range(g.n_objects):
        u = int(g.units[j])
        if u < 0:
            rep.add("unit-missing", (j,), f"no unit at object {g.objects[j]}")
            continue
        if s[u] != j or t[u] != j:
            rep.add("unit-endpoints", (j, u), f"unit at {g.objects[j]} is not a loop at it")

    for x in range(n):
        i, j = int(s[x]), int(t[x])
        ui, uj = int(g.units[i]), int(g.units[j])
        if ui >= 0 and comp[x, ui] != x:
            rep.add("unit-law", (x, ui), f"{g.morphisms[x]} ∘ 1_{g.objects[i]} != {g.morphisms[x]}")
        if uj >= 0 and comp[uj, x] != x:
            rep.add("unit-law", (uj, x), f"1_{g.objects[j]} ∘ {g.morphisms[x]} != {g.morphisms[x]}")
        y = int(inv[x])
        if s[y] != j or t[y] != i:
            rep.add("inverse-endpoints", (x, y), f"inverse of {g.morphisms[x]} has the wrong endpoints")
            continue
        if ui >= 0 and comp[y, x] != ui:
            rep.add("inverse-law", (y, x), f"{g.morphisms[x]}⁻¹ ∘ {g.morphisms[x]} != 1_{g.objects[i]}")
        if uj >= 0 and comp[x, y] != uj:
            rep.add("inverse-law", (x, y), f"{g.morphisms[x]} ∘ {g.morphisms[x]}⁻¹ != 1_{g.objects[j]}")
        if inv[y] != x:
            rep.add("inverse-involution", (x,), f"({g.morphisms[x]}⁻¹)⁻¹ != {g.morphisms[x]}")

    # keep witness lists bounded
    trimmed = ValidationReport(counts=dict(rep.counts))
    seen: dict[str, int] = {}
    for v in rep.violations:
        seen[v.kind] = seen.get(v.kind, 0) + 1
        if seen[v.kind] <= limit:
            trimmed.violations.append(v)
    return trimmed


def left_translation(g: FiniteGroupoid, alpha: int) -> tuple[np.ndarray, np.ndarray]:
    """``L_α : G^{s(α)} → G^{t(α)}`` as (domain, image) index arrays."""
    dom = g.target_fiber(int(g.source[alpha]))
    return dom, g.compose_table[alpha, dom].astype(np.int64)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def _from_pairs(objects, morphisms, source, target, pairs, inverse, units=None, name="groupoid"):
    n = len(morphisms)
    comp = np.full((n, n), -1, dtype=np.int32)
    for a, b, c in pairs:
        comp[a, b] = c
    return FiniteGroupoid(objects, morphisms, source, target, comp, inverse, units=units, name=name)


def pair_groupoid(n: int) -> FiniteGroupoid:
    """Pair groupoid on objects ``1..n``; morphism ``(j, i)`` runs ``i → j``."""
    if n < 1:
        raise EmptyGroupoidError("pair_groupoid needs n >= 1")
    if n * n > max_morphisms():
        raise ResourceError(f"pair_groupoid({n}) has {n * n} morphisms, over the cap")
    objects = tuple(range(1, n + 1))
    pairs = [(j, i) for j in objects for i in objects]
    idx = {p: k for k, p in enumerate(pairs)}
    source = [i - 1 for (_, i) in pairs]
    target = [j - 1 for (j, _) in pairs]
    inverse = [idx[(i, j)] for (j, i) in pairs]
    comp = np.full((n * n, n * n), -1, dtype=np.int32)
    for (k, j), a in idx.items():
        for i in objects:
            comp[a, idx[(j, i)]] = idx[(k, i)]
    units = [idx[(i, i)] for i in objects]
    return FiniteGroupoid(objects, pairs, source, target, comp, inverse, units=units, name=f"pair:{n}")


def unit_groupoid(n: int) -> FiniteGroupoid:
    """The set ``1..n`` seen as a groupoid with only unit morphisms."""
    if n < 1:
        raise EmptyGroupoidError("unit_groupoid needs n >= 1")
    if n > max_morphisms():
        raise ResourceError(f"unit_groupoid({n}) exceeds the cap")
    objects = tuple(range(1, n + 1))
    if n == 1:
        # identical labelling to pair_groupoid(1)
        morphisms = [(1, 1)]
    else:
        morphisms = [f"1_{i}" for i in objects]
    idx = list(range(n))
    return _from_pairs(objects, morphisms, idx, idx, [(k, k, k) for k in idx], idx, units=idx, name=f"units:{n}")


def check_group_table(cayley, inverses, identity: int) -> None:
    """Raise :class:`GroupValidationError` unless the table is a group."""
    table = np.asarray(cayley, dtype=np.int64)
    inverses = np.asarray(inverses, dtype=np.int64)
    k = table.shape[0]
    if table.ndim != 2 or table.shape != (k, k) or k == 0:
        raise GroupValidationError("Cayley table must be square and non-empty")
    if table.min() < 0 or table.max() >= k or inverses.shape != (k,):
        raise GroupValidationError("Cayley table or inverse list refers to unknown elements")
    if not 0 <= identity < k:
        raise GroupValidationError("identity index out of range")
    e = np.arange(k)
    lhs = table[table[:, :, None], e[None, None, :]]  # (ab)c at [a, b, c]
    rhs = table[e[:, None, None], table[None, :, :]]  # a(bc)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a, b, c = bad[0]
        raise GroupValidationError(f"not associative: ({a}{b}){c} != {a}({b}{c})")
    if not (np.array_equal(table[identity], e) and np.array_equal(table[:, identity], e)):
        raise GroupValidationError(f"element {identity} is not a two-sided identity")
    if not (np.all(table[e, inverses] == identity) and np.all(table[inverses, e] == identity)):
        raise GroupValidationError("inverse list does not invert")


def group_groupoid(cayley, inverses, identity: int = 0, labels=None, name: str = "group") -> FiniteGroupoid:
    """A group as a one-object groupoid; ``cayley[a][b]`` is ``a·b``."""
    check_group_table(cayley, inverses, identity)
    table = np.asarray(cayley, dtype=np.int32)
    k = table.shape[0]
    labels = tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(k))
    zeros = np.zeros(k, dtype=np.int64)
    units = [identity]
    return FiniteGroupoid(("*",), labels, zeros, zeros, table, inverses, units=units, name=name)


def cyclic_group(k: int) -> FiniteGroupoid:
    if k < 1:
        raise EmptyGroupoidError("cyclic group needs order >= 1")
    e = np.arange(k)
    table = (e[:, None] + e[None, :]) % k
    inverses = (-e) % k
    return group_groupoid(table, inverses, 0, labels=[f"z{i}" for i in e], name=f"group:z:{k}")


def disjoint_union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """Disjoint copies of ``g1`` and ``g2``; labels gain ``1.``/``2.`` prefixes."""
    n1, m1 = g1.n_objects, g1.n_morphisms
    objects = [f"1.{o}" for o in g1.objects] + [f"2.{o}" for o in g2.objects]
    morphisms = [f"1.{m}" for m in g1.morphisms] + [f"2.{m}" for m in g2.morphisms]
    m = m1 + g2.n_morphisms
    comp = np.full((m, m), -1, dtype=np.int32)
    c1 = g1.compose_table
    c2 = g2.compose_table
    comp[:m1, :m1] = c1
    comp[m1:, m1:] = np.where(c2 >= 0, c2 + m1, -1)
    return FiniteGroupoid(
        objects,
        morphisms,
        np.concatenate([g1.source, g2.source + n1]),
        np.concatenate([g1.target, g2.target + n1]),
        comp,
        np.concatenate([g1.inverse, g2.inverse + m1]),
        units=np.concatenate([g1.units, np.where(g2.units >= 0, g2.units + m1, -1)]),
        name=f"{g1.name}+{g2.name}",
    )


def full_subgroupoid(g: FiniteGroupoid, object_indices: Iterable[int]) -> tuple[FiniteGroupoid, np.ndarray]:
    """Restriction to the given objects and all morphisms between them.

    Returns the subgroupoid and the array mapping its morphism indices back
    into ``g``.
    """
    keep_obj = np.zeros(g.n_objects, dtype=bool)
    keep_obj[list(object_indices)] = True
    if not keep_obj.any():
        raise EmptyGroupoidError("full subgroupoid on no objects")
    obj_map = np.cumsum(keep_obj) - 1
    keep = keep_obj[g.source] & keep_obj[g.target]
    mor = np.flatnonzero(keep)
    mor_map = np.full(g.n_morphisms, -1, dtype=np.int64)
    mor_map[mor] = np.arange(mor.size)
    sub = g.compose_table[np.ix_(mor, mor)]
    comp = np.where(sub >= 0, mor_map[np.maximum(sub, 0)], -1)
    units = mor_map[g.units[keep_obj]]
    return (
        FiniteGroupoid(
            [g.objects[i] for i in np.flatnonzero(keep_obj)],
            [g.morphisms[i] for i in mor],
            obj_map[g.source[mor]],
            obj_map[g.target[mor]],
            comp,
            mor_map[g.inverse[mor]],
            units=units,
            name=f"{g.name}|sub",
        ),
        mor,
    )


# ---------------------------------------------------------------------------
# orbits and isotropy
# ---------------------------------------------------------------------------


def orbits(g: FiniteGroupoid) -> list[tuple[int, ...]]:
    """Partition of object indices by reachability, sorted by least element."""
    parent = list(range(g.n_objects))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in zip(g.source.tolist(), g.target.tolist()):
        rs, rt = find(s), find(t)
        if rs != rt:
            parent[max(rs, rt)] = min(rs, rt)
    groups: dict[int, list[int]] = {}
    for j in range(g.n_objects):
        groups.setdefault(find(j), []).append(j)
    return sorted((tuple(v) for v in groups.values()), key=lambda o: o[0])


def orbit_index(g: FiniteGroupoid) -> np.ndarray:
    """Orbit number of each object, consistent with :func:`orbits`."""
    out = np.empty(g.n_objects, dtype=np.int64)
    for k, orb in enumerate(orbits(g)):
        out[list(orb)] = k
    return out


def isotropy(g: FiniteGroupoid, j: int) -> np.ndarray:
    """Indices of the isotropy group ``G^j_j``."""
    fib = g.target_fiber(j)
    return fib[g.source[fib] == j]
