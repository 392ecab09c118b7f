"""Convolution *-algebra of complex functions on a measured groupoid.

The product integrates against the left Haar system,

    (f ⋆ h)(γ) = Σ_{α ∈ G^{t(γ)}} f(α) h(α⁻¹∘γ) ν^{t(γ)}(α),

the involution is ``f†(γ) = δ(γ) conj(f(γ⁻¹))`` and the state is
integration against ``mu``.  ``convolve(..., mode="literal")`` instead puts
the measure of the composite in front of the plain pair sum; it is provided
for comparison only and carries no algebra guarantees.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import GroupoidLogicError, MismatchError, ModularDomainError
from .groupoid import FiniteGroupoid
from .haar import MeasuredGroupoid
from .subsets import MorphismSet, ObjectSet, source_fiber


class GroupoidFunction:
    """Coefficient vector ``f = Σ f_α δ_α`` over the morphisms of a groupoid."""

    __slots__ = ("groupoid", "coeffs")

    def __init__(self, groupoid: FiniteGroupoid, coeffs):
        coeffs = np.array(coeffs, dtype=np.complex128)
        if coeffs.shape != (groupoid.n_morphisms,):
            raise MismatchError(f"function needs {groupoid.n_morphisms} coefficients, got {coeffs.shape}")
        coeffs.setflags(write=False)
        self.groupoid = groupoid
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, g: FiniteGroupoid) -> "GroupoidFunction":
        return cls(g, np.zeros(g.n_morphisms))

    @classmethod
    def delta(cls, g: FiniteGroupoid, alpha: int) -> "GroupoidFunction":
        c = np.zeros(g.n_morphisms)
        c[alpha] = 1.0
        return cls(g, c)

    def _same(self, other) -> None:
        if not isinstance(other, GroupoidFunction) or other.groupoid is not self.groupoid:
            raise MismatchError("functions live on different groupoids")

    def __add__(self, other):
        self._same(other)
        return GroupoidFunction(self.groupoid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same(other)
        return GroupoidFunction(self.groupoid, self.coeffs - other.coeffs)

    def __neg__(self):
        return GroupoidFunction(self.groupoid, -self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, GroupoidFunction):
            return NotImplemented
        return GroupoidFunction(self.groupoid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupoidFunction)
            and other.groupoid is self.groupoid
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def allclose(self, other, atol: float = 1e-12) -> bool:
        self._same(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    def to_dict(self) -> dict:
        """``{morphism-id: [re, im]}`` over the non-zero coefficients."""
        g = self.groupoid
        return {
            str(g.morphisms[i]): [float(self.coeffs[i].real), float(self.coeffs[i].imag)]
            for i in np.flatnonzero(self.coeffs)
        }

    @classmethod
    def from_dict(cls, g: FiniteGroupoid, data: dict) -> "GroupoidFunction":
        c = np.zeros(g.n_morphisms, dtype=np.complex128)
        for key, value in data.items():
            re, im = (value, 0.0) if isinstance(value, (int, float)) else value
            c[g.morphism_index(key)] = complex(re, im)
        return cls(g, c)

    def __repr__(self) -> str:
        return f"GroupoidFunction({self.to_dict()})"


def _check(mg: MeasuredGroupoid, *fs: GroupoidFunction) -> None:
    for f in fs:
        if f.groupoid is not mg.groupoid:
            raise MismatchError(f"function is not defined on {mg.groupoid!r}")


def convolve(mg: MeasuredGroupoid, f: GroupoidFunction, h: GroupoidFunction, mode: str = "haar") -> GroupoidFunction:
    """``f ⋆ h``; ``mode`` is ``"haar"`` (default) or ``"literal"``."""
    _check(mg, f, h)
    g = mg.groupoid
    if mode == "haar":
        weight = mg.fiber_weight
    elif mode == "literal":
        weight = np.ones(g.n_morphisms)
    else:
        raise ValueError(f"unknown convolution mode {mode!r}")
    out = _kernels.convolve(
        f.coeffs, h.coeffs, weight, g.by_target_ptr, g.by_target_idx, g.inverse, g.compose_table, g.target
    )
    if mode == "literal":
        out = out * mg.mu
    return GroupoidFunction(g, out)


def involution(mg: MeasuredGroupoid, f: GroupoidFunction) -> GroupoidFunction:
    """``f†(γ) = δ(γ) conj(f(γ⁻¹))``.

    Raises
    ------
    ModularDomainError
        If ``f`` is non-zero at some ``γ⁻¹`` where ``δ(γ)`` is undefined.
    """
    _check(mg, f)
    g = mg.groupoid
    pulled = np.conj(f.coeffs[g.inverse])
    touched = pulled != 0
    if np.any(touched & ~mg.delta_defined):
        bad = int(np.flatnonzero(touched & ~mg.delta_defined)[0])
        raise ModularDomainError(f"modular function undefined at {g.morphisms[bad]} (zero-measure morphism)")
    out = np.where(touched, np.nan_to_num(mg.delta) * pulled, 0.0)
    return GroupoidFunction(g, out)


def state(mg: MeasuredGroupoid, f: GroupoidFunction) -> complex:
    """``ω_μ(f) = Σ_γ f(γ) mu(γ)``."""
    _check(mg, f)
    return complex(np.dot(f.coeffs, mg.mu))


def char_fn(A: MorphismSet) -> GroupoidFunction:
    return GroupoidFunction(A.groupoid, A.mask.astype(float))


def support(f: GroupoidFunction, tol: float = 0.0) -> MorphismSet:
    """``{γ : |f(γ)| > tol}``."""
    return MorphismSet(f.groupoid, np.abs(f.coeffs) > tol)


def algebra_unit(mg: MeasuredGroupoid, rtol: float = 1e-12) -> GroupoidFunction:
    """``u = Σ_j ν^j(1_j)⁻¹ δ_{1_j}``, checked to be a two-sided unit.

    The check is exhaustive over basis functions: ``u ⋆ δ_β = δ_β`` and
    ``δ_α ⋆ u = δ_α`` for every morphism, read off the composable pairs.
    """
    g = mg.groupoid
    w = mg.fiber_weight
    c = np.zeros(g.n_morphisms)
    c[g.units] = 1.0 / w[g.units]
    a, b, _ = g.composable_pairs()
    is_unit = np.zeros(g.n_morphisms, dtype=bool)
    is_unit[g.units] = True
    # (u ⋆ δ_b) has coefficient u[a] w[a] at a∘b; (δ_a ⋆ u) has u[b] w[a]
    left = c[a] * w[a]
    right = c[b] * w[a]
    if not (
        np.allclose(left, is_unit[a], rtol=rtol, atol=rtol)
        and np.allclose(right, is_unit[b], rtol=rtol, atol=rtol)
    ):
        raise GroupoidLogicError("unit check failed; the Haar system is not left invariant")
    return GroupoidFunction(g, c)


def _restrict(mg: MeasuredGroupoid, b: ObjectSet, a: ObjectSet):
    sub, _ = mg.support_restriction()
    keep = np.flatnonzero(mg.lam > 0)
    return (
        sub,
        ObjectSet(sub.groupoid, b.mask[keep]),
        ObjectSet(sub.groupoid, a.mask[keep]),
    )


def bridge_certified(mg: MeasuredGroupoid) -> bool:
    """The state-side formula for ``D`` is certified for the normalized Haar system."""
    return mg.kind == "normalized"


def bridge_decoherence(mg: MeasuredGroupoid, b: ObjectSet, a: ObjectSet, mode: str = "haar") -> complex:
    """``ω_μ((χ_{s⁻¹(b)})† ⋆ χ_{s⁻¹(a)})``.

    When ``λ`` has zeros the value is taken on the support sub-groupoid,
    where the modular function is defined; ``Λ`` vanishes off it.
    """
    if not mg.positive:
        mg, b, a = _restrict(mg, b, a)
    g = mg.groupoid
    chi_b = char_fn(source_fiber(g, b))
    chi_a = char_fn(source_fiber(g, a))
    return state(mg, convolve(mg, involution(mg, chi_b), chi_a, mode=mode))
