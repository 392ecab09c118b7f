"""Object measures, left Haar systems and the measures they induce on ``G``.

A left Haar system is stored as one weight per morphism,
``fiber_weight[γ] = ν^{t(γ)}({γ})``.  Left invariance forces the weight to
depend on the source of ``γ`` only, and the induced measure is
``mu[γ] = λ(t(γ)) · fiber_weight[γ]``.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import HaarValidationError, MeasureError
from .groupoid import FiniteGroupoid, full_subgroupoid, isotropy, orbit_index
from .subsets import MorphismSet

HAAR_RTOL = 1e-12


def left_invariance_witness(g: FiniteGroupoid, weight, rtol: float = HAAR_RTOL):
    """First ``(α, γ)`` with ``weight[α∘γ] != weight[γ]``, or ``None``.

    ``γ`` ranges over ``G^{s(α)}``, i.e. every pair composable as ``α∘γ``.
    """
    weight = np.asarray(weight, dtype=float)
    a, b, c = g.composable_pairs()
    bad = ~np.isclose(weight[c], weight[b], rtol=rtol, atol=0.0)
    if not bad.any():
        return None
    k = int(np.flatnonzero(bad)[0])
    return int(a[k]), int(b[k])


def factors_through_source(g: FiniteGroupoid, weight, rtol: float = HAAR_RTOL) -> bool:
    """Whether ``weight`` is constant on every source fiber ``G_j``."""
    weight = np.asarray(weight, dtype=float)
    ref = np.empty(g.n_objects)
    for j in range(g.n_objects):
        fib = g.source_fiber(j)
        ref[j] = weight[fib[0]] if fib.size else np.nan
    return bool(np.allclose(weight, ref[g.source], rtol=rtol, atol=0.0))


def _check_lambda(g: FiniteGroupoid, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (g.n_objects,):
        raise MeasureError(f"λ needs {g.n_objects} values, got {lam.shape}")
    if not np.all(np.isfinite(lam)) or np.any(lam < 0):
        raise MeasureError("λ must be finite and non-negative")
    if not np.any(lam > 0):
        raise MeasureError("λ must have at least one positive value")
    return lam


class MeasuredGroupoid:
    """A finite groupoid with an object measure ``λ`` and a left Haar system.

    Derived measures (``mu``, ``delta``, ``Lambda``) are computed once on
    first access.  Build through :func:`counting_haar`,
    :func:`normalized_haar` or :func:`custom_haar`.
    """

    def __init__(self, groupoid: FiniteGroupoid, lam, fiber_weight, kind: str = "custom"):
        self.groupoid = groupoid
        self.lam = _check_lambda(groupoid, lam)
        w = np.asarray(fiber_weight, dtype=float)
        if w.shape != (groupoid.n_morphisms,):
            raise MeasureError(f"fiber weights need {groupoid.n_morphisms} values")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise MeasureError("fiber weights must be finite and strictly positive")
        witness = left_invariance_witness(groupoid, w)
        if witness is not None:
            a, c = witness
            raise HaarValidationError(
                f"left invariance fails: weight({groupoid.morphisms[a]} ∘ {groupoid.morphisms[c]}) "
                f"!= weight({groupoid.morphisms[c]})",
                witness=(groupoid.morphisms[a], groupoid.morphisms[c]),
            )
        self.fiber_weight = w
        self.kind = kind
        self.lam.setflags(write=False)
        self.fiber_weight.setflags(write=False)

    def __repr__(self) -> str:
        return f"MeasuredGroupoid({self.groupoid.name!r}, haar={self.kind})"

    @property
    def positive(self) -> bool:
        """``λ > 0`` everywhere, so every derived quantity is defined on all of ``G``."""
        return bool(np.all(self.lam > 0))

    @cached_property
    def mu(self) -> np.ndarray:
        g = self.groupoid
        out = self.lam[g.target] * self.fiber_weight
        out.setflags(write=False)
        return out

    @cached_property
    def delta(self) -> np.ndarray:
        """Modular function ``mu(γ) / mu(γ⁻¹)``; ``nan`` where undefined."""
        g = self.groupoid
        mu, mu_inv = self.mu, self.mu[g.inverse]
        out = np.full(g.n_morphisms, np.nan)
        ok = (mu > 0) & (mu_inv > 0)
        out[ok] = mu[ok] / mu_inv[ok]
        # a homomorphism into R+ is 1 on involutions
        out[g.inverse == np.arange(g.n_morphisms)] = 1.0
        out.setflags(write=False)
        return out

    @property
    def delta_defined(self) -> np.ndarray:
        return ~np.isnan(self.delta)

    @cached_property
    def Lambda(self) -> np.ndarray:
        out = np.sqrt(self.mu * self.mu[self.groupoid.inverse])
        out.setflags(write=False)
        return out

    def measure(self, A: MorphismSet) -> float:
        """``μ(A)`` as a direct sum of point masses."""
        return float(self.mu[A.mask].sum())

    def disintegrated_measure(self, A: MorphismSet) -> float:
        """``Σ_j λ(j) ν^j(A ∩ G^j)``, summed fiber by fiber."""
        g = self.groupoid
        total = 0.0
        for j in range(g.n_objects):
            fib = g.target_fiber(j)
            total += self.lam[j] * self.fiber_weight[fib[A.mask[fib]]].sum()
        return float(total)

    def support_restriction(self) -> tuple["MeasuredGroupoid", np.ndarray]:
        """Restriction to the full subgroupoid on ``{λ > 0}``.

        Returns the restricted measured groupoid and the map from its
        morphism indices back into this one.
        """
        g = self.groupoid
        keep = np.flatnonzero(self.lam > 0)
        sub, mor = full_subgroupoid(g, keep)
        return MeasuredGroupoid(sub, self.lam[keep], self.fiber_weight[mor], kind=self.kind), mor


def _lambda_from(g: FiniteGroupoid, lam) -> np.ndarray:
    if lam is None or (isinstance(lam, str) and lam == "uniform"):
        return np.full(g.n_objects, 1.0 / g.n_objects)
    return np.asarray(lam, dtype=float)


def counting_haar(g: FiniteGroupoid, lam=None) -> MeasuredGroupoid:
    """Haar system with unit weight on every morphism."""
    return MeasuredGroupoid(g, _lambda_from(g, lam), np.ones(g.n_morphisms), kind="counting")


def normalized_weights(g: FiniteGroupoid, lam) -> np.ndarray:
    """Left Haar weights making each ``ν^j`` a probability measure adapted to ``λ``.

    On an orbit ``O`` with isotropy of order ``h``, a morphism with source
    ``k`` gets ``λ(k) / (h · λ(O))``.  This is ``1/|G^j|`` when ``λ`` is
    constant on ``O``, and it is the choice under which ``mu`` is
    inversion-invariant.  Sources with ``λ(k) = 0`` fall back to
    ``1/|G^k|`` so weights stay positive; morphisms at such sources lie
    outside :meth:`MeasuredGroupoid.support_restriction` and carry ``Λ = 0``.
    """
    lam = _check_lambda(g, lam)
    orb = orbit_index(g)
    lam_orbit = np.bincount(orb, weights=lam)
    h = np.array([isotropy(g, j).size for j in range(g.n_objects)], dtype=float)
    fib_size = np.diff(g.by_target_ptr).astype(float)
    per_object = np.where(
        lam > 0,
        lam / (h * np.where(lam_orbit[orb] > 0, lam_orbit[orb], 1.0)),
        1.0 / fib_size,
    )
    return per_object[g.source]


def normalized_haar(g: FiniteGroupoid, lam=None) -> MeasuredGroupoid:
    """Probability Haar system adapted to ``λ``; see :func:`normalized_weights`."""
    lam = _lambda_from(g, lam)
    return MeasuredGroupoid(g, lam, normalized_weights(g, lam), kind="normalized")


def custom_haar(g: FiniteGroupoid, lam, fiber_weight) -> MeasuredGroupoid:
    """User-supplied weights, accepted only if left invariant.

    Raises
    ------
    HaarValidationError
        With ``.witness = (α, γ)`` for the first failing translation.
    """
    return MeasuredGroupoid(g, _lambda_from(g, lam), fiber_weight, kind="custom")


def modular_function(mg: MeasuredGroupoid) -> np.ndarray:
    """``δ(γ) = mu(γ)/mu(γ⁻¹)``, so that ``τ_* μ = δ⁻¹ μ``.

    Entries where ``mu`` vanishes on ``γ`` or ``γ⁻¹`` are ``nan`` (flagged
    as undefined), except on self-inverse morphisms where ``δ = 1``.
    """
    return mg.delta


def modular_homomorphism_residual(mg: MeasuredGroupoid) -> float:
    """Max relative ``|δ(β∘α) − δ(β)δ(α)|`` over composable pairs where defined."""
    d = mg.delta
    a, b, c = mg.groupoid.composable_pairs()
    ok = ~(np.isnan(d[a]) | np.isnan(d[b]) | np.isnan(d[c]))
    if not ok.any():
        return 0.0
    prod = d[a[ok]] * d[b[ok]]
    return float(np.max(np.abs(d[c[ok]] - prod) / np.maximum(np.abs(prod), 1e-300)))


def invariant_representative(mg: MeasuredGroupoid) -> np.ndarray:
    """``Λ(γ) = sqrt(mu(γ) mu(γ⁻¹))``, exactly inversion-invariant."""
    return mg.Lambda
