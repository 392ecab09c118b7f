"""GNS data for the state ``ω_μ``: Gram matrix, Gelfand ideal, dimension."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import GroupoidFunction, convolve, involution, state
from .decoherence import grade2
from .errors import PreconditionError
from .haar import MeasuredGroupoid
from .subsets import ObjectSet, source_fiber

IDEAL_TOL = 1e-12
RANK_RTOL = 1e-10
PSD_TOL = 1e-10


@dataclass
class GramMatrix:
    """``⟨α, β⟩ = ω(δ_α† ⋆ δ_β)`` over all morphisms of the groupoid.

    When ``λ`` has zeros the entries are computed on the support
    sub-groupoid and the rows and columns outside it are zero;
    ``restricted`` flags that case and ``support`` marks the rows kept.
    """

    matrix: np.ndarray
    support: np.ndarray
    restricted: bool

    def hermitian_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def blocks(self, mg: MeasuredGroupoid) -> list[np.ndarray]:
        """Index sets of the diagonal blocks (one per target fiber)."""
        g = mg.groupoid
        return [g.target_fiber(j) for j in range(g.n_objects)]

    def eigenvalues(self, mg: MeasuredGroupoid) -> np.ndarray:
        """Spectrum of the hermitian part, assembled block by block."""
        H = 0.5 * (self.matrix + self.matrix.conj().T)
        return np.sort(np.concatenate([np.linalg.eigvalsh(H[np.ix_(ix, ix)]) for ix in self.blocks(mg)]))

    def quadratic_form(self, f: GroupoidFunction) -> complex:
        v = f.coeffs
        return complex(np.conj(v) @ self.matrix @ v)


def _gram_positive(mg: MeasuredGroupoid) -> np.ndarray:
    g = mg.groupoid
    G = np.zeros((g.n_morphisms, g.n_morphisms), dtype=np.complex128)
    inv = g.inverse
    for j in range(g.n_objects):
        fib = g.target_fiber(j)
        ai = inv[fib]
        comp = g.compose_table[np.ix_(ai, fib)]
        G[np.ix_(fib, fib)] = (mg.delta[ai] * mg.fiber_weight[ai])[:, None] * mg.mu[comp]
    return G


def gram(mg: MeasuredGroupoid) -> GramMatrix:
    """Gram matrix of the GNS pre-inner product on basis functions."""
    g = mg.groupoid
    if mg.positive:
        return GramMatrix(_gram_positive(mg), np.ones(g.n_morphisms, dtype=bool), restricted=False)
    sub, mor = mg.support_restriction()
    G = np.zeros((g.n_morphisms, g.n_morphisms), dtype=np.complex128)
    G[np.ix_(mor, mor)] = _gram_positive(sub)
    keep = np.zeros(g.n_morphisms, dtype=bool)
    keep[mor] = True
    return GramMatrix(G, keep, restricted=True)


def is_psd(mg: MeasuredGroupoid, tol: float = PSD_TOL) -> bool:
    G = gram(mg)
    return G.hermitian_residual() <= 1e-12 * max(1.0, np.abs(G.matrix).max()) and G.eigenvalues(mg)[0] >= -tol


def gelfand_norm2(mg: MeasuredGroupoid, f: GroupoidFunction) -> float:
    """``ω(f† ⋆ f)``, taken on the support sub-groupoid when ``λ`` has zeros."""
    if not mg.positive:
        sub, mor = mg.support_restriction()
        f = GroupoidFunction(sub.groupoid, f.coeffs[mor])
        mg = sub
    return float(np.real(state(mg, convolve(mg, involution(mg, f), f))))


def in_gelfand_ideal(mg: MeasuredGroupoid, f: GroupoidFunction, tol: float = IDEAL_TOL) -> bool:
    """Whether ``ω(f† ⋆ f) <= tol``."""
    return gelfand_norm2(mg, f) <= tol


def gns_dimension(mg: MeasuredGroupoid, tol: float = RANK_RTOL) -> int:
    """Numerical rank of the Gram matrix, i.e. ``dim C(G)/N_ω``.

    Eigenvalues at or below ``tol × λ_max`` count as zero.

    Raises
    ------
    PreconditionError
        If the Gram matrix is not hermitian, which happens when the state is
        not positive (a non-unimodular Haar choice).
    """
    G = gram(mg)
    scale = max(1.0, float(np.abs(G.matrix).max()))
    if G.hermitian_residual() > 1e-9 * scale:
        raise PreconditionError("Gram matrix is not hermitian: ω is not a positive state for this Haar system")
    ev = G.eigenvalues(mg)
    top = ev[-1]
    if top <= 0:
        return 0
    return int(np.sum(ev > tol * top))


@dataclass
class NullSetCheck:
    mu2: float
    in_ideal: bool
    consistent: bool
    near_threshold: bool


def null_set_correspondence(mg: MeasuredGroupoid, a: ObjectSet, tol: float = IDEAL_TOL) -> NullSetCheck:
    """Compare ``μ₂(a) = 0`` with ``χ_{s⁻¹(a)} ∈ N_ω``.

    ``near_threshold`` flags values within a factor 100 of ``tol`` on either
    side, where the two tests could disagree through rounding alone.
    """
    mu2 = grade2(mg, a)
    chi = GroupoidFunction(mg.groupoid, source_fiber(mg.groupoid, a).mask.astype(float))
    norm2 = gelfand_norm2(mg, chi)
    in_ideal = norm2 <= tol
    near = any(tol / 100 < abs(x) <= tol * 100 for x in (mu2, norm2))
    return NullSetCheck(mu2=mu2, in_ideal=in_ideal, consistent=(abs(mu2) <= tol) == in_ideal, near_threshold=near)


def gns_report(mg: MeasuredGroupoid, tol: float = RANK_RTOL, ideal_tol: float = IDEAL_TOL) -> dict:
    g = mg.groupoid
    G = gram(mg)
    ev = G.eigenvalues(mg)
    null_atoms = []
    for j in range(g.n_objects):
        chk = null_set_correspondence(mg, ObjectSet.from_indices(g, [j]), ideal_tol)
        if chk.in_ideal:
            null_atoms.append(str(g.objects[j]))
    return {
        "dimension": gns_dimension(mg, tol),
        "min_eigenvalue": float(ev[0]),
        "max_eigenvalue": float(ev[-1]),
        "null_atoms": null_atoms,
        "restricted_to_support": G.restricted,
        "haar": mg.kind,
    }
