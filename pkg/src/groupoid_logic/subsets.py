"""Subsets of morphisms and objects, the subset product and conditioning."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import MismatchError, ResourceError
from .groupoid import FiniteGroupoid

MAX_EXHAUSTIVE_OBJECTS = 12


class _IndexSet:
    """Immutable membership mask over one index space of a fixed groupoid."""

    __slots__ = ("groupoid", "mask")
    _space = ""

    def __init__(self, groupoid: FiniteGroupoid, mask):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (self._size(groupoid),):
            raise MismatchError(f"mask of shape {mask.shape} does not index {self._space} of {groupoid!r}")
        mask.setflags(write=False)
        self.groupoid = groupoid
        self.mask = mask

    @classmethod
    def _size(cls, g: FiniteGroupoid) -> int:
        raise NotImplementedError

    @classmethod
    def empty(cls, g: FiniteGroupoid):
        return cls(g, np.zeros(cls._size(g), dtype=bool))

    @classmethod
    def full(cls, g: FiniteGroupoid):
        return cls(g, np.ones(cls._size(g), dtype=bool))

    @classmethod
    def from_indices(cls, g: FiniteGroupoid, indices: Iterable[int]):
        mask = np.zeros(cls._size(g), dtype=bool)
        mask[np.fromiter(indices, dtype=np.int64)] = True
        return cls(g, mask)

    @classmethod
    def from_bits(cls, g: FiniteGroupoid, bits: int):
        n = cls._size(g)
        return cls(g, np.array([(bits >> i) & 1 for i in range(n)], dtype=bool))

    @property
    def bits(self) -> int:
        return sum(1 << int(i) for i in np.flatnonzero(self.mask))

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def _same(self, other) -> None:
        if type(other) is not type(self) or other.groupoid is not self.groupoid:
            raise MismatchError(f"cannot combine {self!r} with {other!r}")

    def __or__(self, other):
        self._same(other)
        return type(self)(self.groupoid, self.mask | other.mask)

    def __and__(self, other):
        self._same(other)
        return type(self)(self.groupoid, self.mask & other.mask)

    def __sub__(self, other):
        self._same(other)
        return type(self)(self.groupoid, self.mask & ~other.mask)

    def complement(self):
        return type(self)(self.groupoid, ~self.mask)

    def isdisjoint(self, other) -> bool:
        self._same(other)
        return not np.any(self.mask & other.mask)

    def issubset(self, other) -> bool:
        self._same(other)
        return not np.any(self.mask & ~other.mask)

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __iter__(self):
        return iter(int(i) for i in np.flatnonzero(self.mask))

    def __contains__(self, i) -> bool:
        return bool(self.mask[i])

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and other.groupoid is self.groupoid
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self) -> int:
        return hash((type(self), id(self.groupoid), self.mask.tobytes()))


class MorphismSet(_IndexSet):
    __slots__ = ()
    _space = "morphisms"

    @classmethod
    def _size(cls, g):
        return g.n_morphisms

    @classmethod
    def from_labels(cls, g: FiniteGroupoid, labels):
        return cls.from_indices(g, (g.morphism_index(x) for x in labels))

    def labels(self) -> list:
        return [self.groupoid.morphisms[i] for i in self]

    def __repr__(self) -> str:
        return f"MorphismSet({self.labels()})"


class ObjectSet(_IndexSet):
    __slots__ = ()
    _space = "objects"

    @classmethod
    def _size(cls, g):
        return g.n_objects

    @classmethod
    def from_labels(cls, g: FiniteGroupoid, labels):
        return cls.from_indices(g, (g.object_index(x) for x in labels))

    def labels(self) -> list:
        return [self.groupoid.objects[i] for i in self]

    def __repr__(self) -> str:
        return f"ObjectSet({self.labels()})"


def _check(g: FiniteGroupoid, *sets) -> None:
    for x in sets:
        if x.groupoid is not g:
            raise MismatchError(f"{x!r} is indexed against {x.groupoid!r}, not {g!r}")


def set_product(g: FiniteGroupoid, A: MorphismSet, B: MorphismSet) -> MorphismSet:
    """``B ∘ A = {β∘α : α ∈ A, β ∈ B, s(β) = t(α)}``."""
    _check(g, A, B)
    mask = _kernels.set_product(
        A.mask, B.mask, g.compose_table, g.by_source_ptr, g.by_source_idx, g.target
    )
    return MorphismSet(g, mask)


def inverse_set(g: FiniteGroupoid, A: MorphismSet) -> MorphismSet:
    """Image ``τ(A)`` of a set under inversion."""
    _check(g, A)
    mask = np.zeros(g.n_morphisms, dtype=bool)
    mask[g.inverse[A.mask]] = True
    return MorphismSet(g, mask)


def source_fiber(g: FiniteGroupoid, a: ObjectSet) -> MorphismSet:
    """``s⁻¹(a)``."""
    _check(g, a)
    return MorphismSet(g, a.mask[g.source])


def target_fiber(g: FiniteGroupoid, b: ObjectSet) -> MorphismSet:
    """``t⁻¹(b)``, which equals ``τ(s⁻¹(b))``."""
    _check(g, b)
    return MorphismSet(g, b.mask[g.target])


def transition_set(g: FiniteGroupoid, b: ObjectSet, a: ObjectSet) -> MorphismSet:
    """The product ``t⁻¹(b) ∘ s⁻¹(a)`` that decides conditioning of ``(b, a)``."""
    return set_product(g, source_fiber(g, a), target_fiber(g, b))


def conditioned(g: FiniteGroupoid, a: ObjectSet, b: ObjectSet) -> bool:
    """Whether some morphism runs from a point of ``a`` to a point of ``b``."""
    return bool(transition_set(g, b, a))


@dataclass
class RelationReport:
    reflexive_on_nonempty: bool
    symmetric: bool
    transitive: bool
    n_subsets: int
    sampled: bool = False
    counterexamples: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "reflexive_on_nonempty": self.reflexive_on_nonempty,
            "symmetric": self.symmetric,
            "transitive": self.transitive,
            "n_subsets": self.n_subsets,
            "status": "sampled" if self.sampled else "exhaustive",
            "counterexamples": {k: [list(map(str, s)) for s in v] for k, v in sorted(self.counterexamples.items())},
        }


def _labels_of(g: FiniteGroupoid, bits: int) -> list:
    return [g.objects[i] for i in range(g.n_objects) if (bits >> i) & 1]


def relation_report(
    g: FiniteGroupoid,
    sample: int | None = None,
    rng: np.random.Generator | None = None,
) -> RelationReport:
    """Reflexivity, symmetry and transitivity of conditioning on ``P(Ω)``.

    Scans all non-empty subsets when ``|Ω| <= 12``.  Larger groupoids raise
    :class:`ResourceError` unless ``sample`` is given, in which case that many
    non-empty subsets are drawn uniformly and the report is marked sampled.
    """
    n = g.n_objects
    sampled = False
    if n <= MAX_EXHAUSTIVE_OBJECTS and sample is None:
        masks = np.arange(1, 1 << n, dtype=np.int64)
    elif sample is None:
        raise ResourceError(f"|Ω| = {n} is over the exhaustive cap of {MAX_EXHAUSTIVE_OBJECTS}")
    else:
        if n > 62:
            raise ResourceError("subset sampling needs |Ω| <= 62")
        rng = rng or np.random.default_rng(0)
        masks = rng.integers(1, 1 << n, size=sample, dtype=np.int64)
        sampled = True

    reach_obj = np.zeros(n, dtype=np.int64)
    np.bitwise_or.at(reach_obj, g.source, np.left_shift(1, g.target).astype(np.int64))
    reach = _kernels.subset_reach(reach_obj, masks)
    rel = (reach[:, None] & masks[None, :]) != 0

    report = RelationReport(
        reflexive_on_nonempty=bool(np.all(np.diagonal(rel))),
        symmetric=bool(np.array_equal(rel, rel.T)),
        transitive=True,
        n_subsets=int(masks.size),
        sampled=sampled,
    )
    if not report.reflexive_on_nonempty:
        k = int(np.flatnonzero(~np.diagonal(rel))[0])
        report.counterexamples["reflexive"] = [_labels_of(g, int(masks[k]))]
    if not report.symmetric:
        x, y = (int(v[0]) for v in np.nonzero(rel != rel.T))
        report.counterexamples["symmetric"] = [_labels_of(g, int(masks[x])), _labels_of(g, int(masks[y]))]
    a, b, c = _kernels.transitivity_witness(rel)
    if a >= 0:
        report.transitive = False
        report.counterexamples["transitive"] = [_labels_of(g, int(masks[i])) for i in (a, b, c)]
    return report
