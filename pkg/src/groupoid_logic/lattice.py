"""Finite lattices with a complement: power sets, modularity, irreducibility."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from . import _kernels
from .errors import PreconditionError, ResourceError, StructureError

MAX_POWERSET_ATOMS = 12


class DomainError(PreconditionError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """Tables for a finite lattice with a chosen complement map.

    ``leq[a, b]`` is ``a ⊂ b``; ``meet``/``join`` are index tables and
    ``complement[a]`` is ``a⊥``.  Construct through :func:`lattice_from_order`
    or :func:`powerset_lattice`, which check the invariants.
    """

    elements: tuple
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    complement: np.ndarray
    top: int
    bottom: int

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise StructureError(f"unknown lattice element {label!r}") from None


def _check_complement(L: FiniteLattice) -> None:
    x = np.arange(len(L))
    c = L.complement
    if c.shape != x.shape or c.min() < 0 or c.max() >= len(L):
        raise StructureError("complement map must send every element to an element")
    if np.any(L.join[x, c] != L.top) or np.any(L.meet[x, c] != L.bottom):
        bad = int(np.flatnonzero((L.join[x, c] != L.top) | (L.meet[x, c] != L.bottom))[0])
        raise StructureError(f"{L.elements[bad]!r} and its complement violate a∨a⊥=𝕀, a∧a⊥=∅")


def lattice_from_order(
    elements: Sequence[Hashable],
    order_pairs: Sequence[tuple],
    complement_pairs: Sequence[tuple],
) -> FiniteLattice:
    """Build a lattice from generating ``a ⊂ b`` pairs and complement pairs.

    The order is the reflexive-transitive closure of ``order_pairs``.  Each
    complement pair ``(a, a⊥)`` sets ``a⊥`` for ``a`` only; list both
    directions when the complement should be symmetric.
    """
    elements = tuple(elements)
    m = len(elements)
    if m == 0:
        raise StructureError("empty lattice")
    pos = {e: i for i, e in enumerate(elements)}
    try:
        leq = np.eye(m, dtype=bool)
        for a, b in order_pairs:
            leq[pos[a], pos[b]] = True
        comp_list = [(pos[a], pos[b]) for a, b in complement_pairs]
    except KeyError as exc:
        raise StructureError(f"unknown lattice element {exc.args[0]!r}") from None
    # Warshall closure
    for k in range(m):
        leq |= leq[:, [k]] & leq[[k], :]
    if np.any(leq & leq.T & ~np.eye(m, dtype=bool)):
        raise StructureError("order relation is not antisymmetric")

    meet = np.empty((m, m), dtype=np.int64)
    join = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            lower = np.flatnonzero(leq[:, a] & leq[:, b])
            glb = [x for x in lower if leq[lower, x].all()]
            upper = np.flatnonzero(leq[a, :] & leq[b, :])
            lub = [x for x in upper if leq[x, upper].all()]
            if len(glb) != 1 or len(lub) != 1:
                raise StructureError(f"{elements[a]!r}, {elements[b]!r} lack a unique meet or join")
            meet[a, b] = glb[0]
            join[a, b] = lub[0]
    tops = np.flatnonzero(leq.all(axis=0))
    bottoms = np.flatnonzero(leq.all(axis=1))
    complement = np.full(m, -1, dtype=np.int64)
    for a, b in comp_list:
        complement[a] = b
    if np.any(complement < 0):
        missing = elements[int(np.flatnonzero(complement < 0)[0])]
        raise StructureError(f"no complement given for {missing!r}")
    L = FiniteLattice(elements, leq, meet, join, complement, int(tops[0]), int(bottoms[0]))
    _check_complement(L)
    return L


def lattice_from_dict(data: dict) -> FiniteLattice:
    """Load the structured-text form ``{elements, order, complement}``."""
    try:
        elements = [str(e) for e in data["elements"]]
        order = [(str(a), str(b)) for a, b in data.get("order", [])]
        comp = [(str(a), str(b)) for a, b in data["complement"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed lattice document: {exc}") from None
    return lattice_from_order(elements, order, comp)


def powerset_lattice(n: int) -> FiniteLattice:
    """``P({1..n})`` under ⊆, ∩, ∪ and set complement.

    Element ``k`` is the subset whose bitmask is ``k``; labels are tuples.
    """
    if n < 0:
        raise PreconditionError("n must be non-negative")
    if n > MAX_POWERSET_ATOMS:
        raise ResourceError(f"powerset_lattice({n}) exceeds the cap of {MAX_POWERSET_ATOMS} atoms")
    size = 1 << n
    x = np.arange(size, dtype=np.int64)
    labels = tuple(tuple(i + 1 for i in range(n) if (k >> i) & 1) for k in range(size))
    meet = np.bitwise_and.outer(x, x)
    join = np.bitwise_or.outer(x, x)
    leq = meet == x[:, None]
    return FiniteLattice(labels, leq, meet, join, (size - 1) ^ x, size - 1, 0)


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


def modular_check(L: FiniteLattice, a: int, b: int, c: int) -> bool:
    """One instance of ``a ⊂ c ⇒ a ∨ (b ∧ c) = (a ∨ b) ∧ c``."""
    if not L.leq[a, c]:
        return True
    return bool(L.join[a, L.meet[b, c]] == L.meet[L.join[a, b], c])


def modular_audit(L: FiniteLattice, limit: int = 64) -> list[tuple[int, int, int]]:
    """Violating triples ``(a, b, c)`` of the modular identity (at most ``limit``)."""
    out, _ = _kernels.modular_violations(L.leq, L.meet, L.join, limit)
    return [tuple(int(v) for v in row) for row in out]


def distributive_audit(L: FiniteLattice, limit: int = 64) -> list[tuple[int, int, int]]:
    """Triples with ``a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c)``."""
    out, _ = _kernels.distributive_violations(L.meet, L.join, limit)
    return [tuple(int(v) for v in row) for row in out]


def orthocomplement_report(L: FiniteLattice) -> dict:
    """Whether ``⊥`` is an involution and order-reversing."""
    x = np.arange(len(L))
    c = L.complement
    involution = bool(np.all(c[c] == x))
    a, b = np.nonzero(L.leq)
    reversing = bool(np.all(L.leq[c[b], c[a]]))
    return {"involution": involution, "order_reversing": reversing}


def irreducible_elements(L: FiniteLattice) -> list[int]:
    """Every ``x`` with ``a = (a ∧ x) ∨ (a ∧ x⊥)`` for all ``a``."""
    a = np.arange(len(L))
    out = []
    for x in range(len(L)):
        if np.all(L.join[L.meet[a, x], L.meet[a, L.complement[x]]] == a):
            out.append(x)
    return out


def is_irreducible(L: FiniteLattice) -> bool:
    return sorted(irreducible_elements(L)) == sorted({L.bottom, L.top})


@dataclass
class DimensionReport:
    monotonicity: list[tuple[int, int]] = field(default_factory=list)
    valuation: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.monotonicity or self.valuation)


def dimension_check(L: FiniteLattice, d, tol: float = 1e-12) -> DimensionReport:
    """Check a candidate dimension function given as a table over elements.

    Monotonicity is read on distinct comparable pairs only: ``b ⊂ a, b != a``
    must give ``d(a) > d(b)``.  The valuation law
    ``d(a) + d(b) = d(a∧b) + d(a∨b)`` is checked on all pairs within ``tol``.
    Reported pairs are ``(a, b)`` index tuples.
    """
    if isinstance(d, dict):
        d = np.array([d[e] for e in L.elements], dtype=float)
    d = np.asarray(d, dtype=float)
    if d.shape != (len(L),):
        raise DomainError(f"dimension table needs {len(L)} values")
    if np.any(d < 0) or np.any(d > 1) or not np.all(np.isfinite(d)):
        raise DomainError("dimension values must lie in [0, 1]")
    rep = DimensionReport()
    strict = L.leq.T & ~np.eye(len(L), dtype=bool)  # strict[a, b]: b ⊂ a, b != a
    bad = strict & ~(d[:, None] > d[None, :])
    rep.monotonicity = [(int(a), int(b)) for a, b in zip(*np.nonzero(bad))]
    resid = np.abs(d[:, None] + d[None, :] - d[L.meet] - d[L.join])
    rep.valuation = [(int(a), int(b)) for a, b in zip(*np.nonzero(resid > tol))]
    return rep
