"""
Kähler geometry at a point for KahlerLab.

Metrics, curvature and the first-order operators (∂̄, ∂̄*_f, Δ_f, div_f, ♯,
contraction with ω, the bracket of vector-valued forms) evaluated on jets.
Index conventions are listed in docs/CONVENTIONS.md:

    g[i, j]       = g_{ij̄}
    ginv[i, j]    = g^{ij̄}         (Σ_j ginv[i, j] g[k, j] = δ_ik)
    Γ[k, i, a]    = Γ^k_{ia}
    R[i, j, k, l] = R_{ij̄kl̄}

Forms carry fully antisymmetric components with the 1/(p!q!) normalization;
holomorphic indices come first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .errors import DegreeError, NotAMetricError, ShapeError
from .jets import (
    Jet,
    JetSpace,
    aligned_add,
    aligned_einsum,
    jmat_inverse,
    jmat_logdet,
    perm_sign,
)

_LETTERS = "abcdefghjklmnopq"


_ein = aligned_einsum
_add = aligned_add


def _real_tol(jet: Jet) -> float:
    return 1e-10 * max(1.0, jet.max_abs())


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------

@dataclass
class WeightJet:
    """Real weight f (the Ricci potential, or a bundle weight).

    Scalar at a point; a batch of scalars when evaluated over grid nodes.
    """

    f: Jet

    def __post_init__(self):
        if not (self.f.real or self.f.is_real(_real_tol(self.f))):
            raise ShapeError("Weight jet is not real")
        self.f = Jet(self.f.space, self.f.coeffs, real=True)


@dataclass
class FormJet:
    """A (p,q)-form; comp has p holomorphic then q antiholomorphic axes."""

    p: int
    q: int
    comp: Jet

    def __post_init__(self):
        if self.comp.ndim != self.p + self.q or any(n != self.comp.m for n in self.comp.shape):
            raise ShapeError(f"({self.p},{self.q})-form needs shape {(self.comp.m,) * (self.p + self.q)}, "
                             f"got {self.comp.shape}")

    @property
    def m(self) -> int:
        return self.comp.m

    def _like(self, other: "FormJet") -> None:
        if (self.p, self.q) != (other.p, other.q):
            raise ShapeError(f"Bidegrees differ: ({self.p},{self.q}) vs ({other.p},{other.q})")

    def __add__(self, other: "FormJet") -> "FormJet":
        self._like(other)
        return FormJet(self.p, self.q, _add(self.comp, other.comp))

    def __sub__(self, other: "FormJet") -> "FormJet":
        return self + (-other)

    def __neg__(self) -> "FormJet":
        return FormJet(self.p, self.q, -self.comp)

    def __mul__(self, scalar) -> "FormJet":
        return FormJet(self.p, self.q, self.comp * scalar)

    __rmul__ = __mul__

    def truncate(self, order: Optional[int] = None, t_order: Optional[int] = None) -> "FormJet":
        return FormJet(self.p, self.q, self.comp.truncate(order, t_order))

    def max_abs(self) -> float:
        return self.comp.max_abs()

    def antisymmetry_gap(self) -> float:
        return max(_antisymmetry_gap(self.comp, 0, self.p), _antisymmetry_gap(self.comp, self.p, self.q))


@dataclass
class VectorFormJet:
    """A T′-valued (0,q)-form φ^i_{j̄₁…j̄_q}; axis 0 is the upper index."""

    q: int
    comp: Jet

    def __post_init__(self):
        if self.comp.ndim != self.q + 1 or any(n != self.comp.m for n in self.comp.shape):
            raise ShapeError(f"Vector-valued (0,{self.q})-form needs shape {(self.comp.m,) * (self.q + 1)}, "
                             f"got {self.comp.shape}")

    @property
    def m(self) -> int:
        return self.comp.m

    def __add__(self, other: "VectorFormJet") -> "VectorFormJet":
        if self.q != other.q:
            raise ShapeError(f"Form degrees differ: {self.q} vs {other.q}")
        return VectorFormJet(self.q, _add(self.comp, other.comp))

    def __sub__(self, other: "VectorFormJet") -> "VectorFormJet":
        return self + (-other)

    def __neg__(self) -> "VectorFormJet":
        return VectorFormJet(self.q, -self.comp)

    def __mul__(self, scalar) -> "VectorFormJet":
        return VectorFormJet(self.q, self.comp * scalar)

    __rmul__ = __mul__

    def truncate(self, order: Optional[int] = None, t_order: Optional[int] = None) -> "VectorFormJet":
        return VectorFormJet(self.q, self.comp.truncate(order, t_order))

    def max_abs(self) -> float:
        return self.comp.max_abs()


@dataclass
class CurvatureData:
    christoffel: Jet
    riemann: Jet
    ricci: Jet
    scalar: Jet


@dataclass
class MetricJet:
    """Kähler metric g_{ij̄} as a jet matrix; derived tensors are cached."""

    g: Jet

    def __post_init__(self):
        if self.g.shape != (self.g.m, self.g.m):
            raise ShapeError(f"Metric must have shape {(self.g.m, self.g.m)}, got {self.g.shape}")
        g0 = self.g.value()
        if not np.allclose(g0, g0.conj().T, atol=1e-12 * max(1.0, np.abs(g0).max())):
            raise NotAMetricError("Metric constant term is not Hermitian")
        if np.min(np.linalg.eigvalsh(0.5 * (g0 + g0.conj().T))) <= 0:
            raise NotAMetricError("Metric constant term is not positive definite")

    @property
    def m(self) -> int:
        return self.g.m

    @property
    def order(self) -> int:
        return self.g.order

    def value(self) -> np.ndarray:
        return self.g.value()

    @cached_property
    def ginv(self) -> Jet:
        return jmat_inverse(self.g).T

    @cached_property
    def christoffel(self) -> Jet:
        if self.g.order < 1:
            raise DegreeError("Christoffel symbols need a metric of order >= 1")
        return _ein("kl,ial->kia", self.ginv, self.g.grad_z())

    @cached_property
    def curvature(self) -> CurvatureData:
        return curvature(self)

    def truncate(self, order: Optional[int] = None, t_order: Optional[int] = None) -> "MetricJet":
        return MetricJet(self.g.truncate(order, t_order))


def as_weight(f: Union[WeightJet, Jet, None], like: Jet) -> Jet:
    if f is None:
        return Jet.zeros(like.space)
    return f.f if isinstance(f, WeightJet) else f


# --------------------------------------------------------------------------
# Metric and curvature
# --------------------------------------------------------------------------

def metric_from_potential(K: Jet, m: Optional[int] = None) -> MetricJet:
    """g_{ij̄} = ∂_i∂_j̄ K."""
    if m is not None and m != K.m:
        raise ShapeError(f"Potential lives in m={K.m}, expected m={m}")
    if K.ndim != 0:
        raise ShapeError("Potential must be a scalar jet")
    if K.order < 3:
        raise DegreeError(f"Potential order {K.order} < 3")
    if not (K.real or K.is_real(_real_tol(K))):
        raise NotAMetricError("Potential is not real")
    return MetricJet(K.grad_zbar().grad_z())


def metric_from_components(g: Jet) -> MetricJet:
    """Metric from explicit component jets; Hermitian symmetry is checked at every order."""
    gap = (g - g.T.conj()).max_abs()
    if gap > _real_tol(g):
        raise NotAMetricError(f"Metric components are not Hermitian (gap {gap:.3e})")
    return MetricJet(g)


def curvature(metric: MetricJet) -> CurvatureData:
    g = metric.g
    if g.order < 2:
        raise DegreeError(f"Curvature needs a metric of order >= 2, got {g.order}")
    ddg = g.grad_zbar().grad_z()
    half = _ein("pq,ikq->ikp", metric.ginv, g.grad_z())
    riemann = _add(ddg, -_ein("ikp,jpl->ijkl", half, g.grad_zbar()))
    ricci = -_ein("kl,ijkl->ij", metric.ginv, riemann)
    scalar = _ein("ij,ij->", metric.ginv, ricci)
    return CurvatureData(metric.christoffel, riemann, ricci, scalar)


def ricci_via_logdet(metric: MetricJet) -> Jet:
    """R_{ij̄} = −∂_i∂_j̄ log det g."""
    return -jmat_logdet(metric.g).grad_zbar().grad_z()


def random_potential(space: JetSpace, rng: np.random.Generator, scale: float = 0.25) -> Jet:
    """Σ|z^i|² plus a small random real perturbation of degree >= 2."""
    noise = Jet.random(space, rng, real=True, scale=scale)
    noise.coeffs[space.zdeg < 2] = 0.0
    flat = sum(Jet.variable(space, ("z", i)) * Jet.variable(space, ("zbar", i)) for i in range(space.m))
    return (flat + noise).realpart()


def flat_potential(space: JetSpace) -> Jet:
    return sum(Jet.variable(space, ("z", i)) * Jet.variable(space, ("zbar", i)) for i in range(space.m)).realpart()


def fubini_study_potential(space: JetSpace) -> Jet:
    """2 log(1 + |z|²), the potential of the Fubini–Study metric in 2πc₁ (m = 1)."""
    return (flat_potential(space) + 1.0).log().realpart() * 2.0


# --------------------------------------------------------------------------
# Covariant derivative and the ∂̄ family
# --------------------------------------------------------------------------

def covariant_d(T: Jet, metric: MetricJet, kinds: str, direction: str = "z") -> Jet:
    """Covariant derivative; the derivative index becomes the new leading axis.

    kinds labels each axis of T: 'l' lower holomorphic, 'u' upper holomorphic,
    'b' lower antiholomorphic, 'v' upper antiholomorphic.
    """
    if len(kinds) != T.ndim:
        raise ShapeError(f"kinds {kinds!r} do not match tensor rank {T.ndim}")
    letters = _LETTERS[:T.ndim]
    if direction == "z":
        out, gamma, down, up = T.grad_z(), metric.christoffel, "l", "u"
    elif direction == "zbar":
        out, gamma, down, up = T.grad_zbar(), metric.christoffel.conj(), "b", "v"
    else:
        raise ValueError(f"Unknown direction: {direction!r}")
    for pos, kind in enumerate(kinds):
        if kind not in (down, up):
            continue
        swapped = letters[:pos] + "x" + letters[pos + 1:]
        if kind == down:
            term = -_ein(f"xr{letters[pos]},{swapped}->r{letters}", gamma, T)
        else:
            term = _ein(f"{letters[pos]}rx,{swapped}->r{letters}", gamma, T)
        out = _add(out, term)
    return out


def _alternating_sum(d: Jet, lead: int) -> Jet:
    """Σ_β (−1)^β with the new index moved to antiholomorphic slot β."""
    nslots = d.ndim - lead
    out = None
    for beta in range(nslots):
        term = d.moveaxis(lead, lead + beta)
        if beta % 2:
            term = -term
        out = term if out is None else out + term
    return out


def _dbar_components(comp: Jet, lead: int, sign_exp: int) -> Jet:
    d = comp.grad_zbar().moveaxis(0, lead)
    out = _alternating_sum(d, lead)
    return -out if sign_exp % 2 else out


def dbar(eta: Union[FormJet, VectorFormJet]) -> Union[FormJet, VectorFormJet]:
    """Coordinate ∂̄ with the (−1)^p alternating-sum convention."""
    if eta.comp.order < 1:
        raise DegreeError("dbar needs a jet of order >= 1")
    if isinstance(eta, VectorFormJet):
        return VectorFormJet(eta.q + 1, _dbar_components(eta.comp, 1, 0))
    return FormJet(eta.p, eta.q + 1, _dbar_components(eta.comp, eta.p, eta.p))


def dbar_covariant(eta: FormJet, metric: MetricJet) -> FormJet:
    """∂̄ through the metric connection; agrees with dbar()."""
    kinds = "l" * eta.p + "b" * eta.q
    d = covariant_d(eta.comp, metric, kinds, "zbar").moveaxis(0, eta.p)
    out = _alternating_sum(d, eta.p)
    return FormJet(eta.p, eta.q + 1, -out if eta.p % 2 else out)


def dbar_star_f(eta: Union[FormJet, VectorFormJet], metric: MetricJet,
                f: Union[WeightJet, Jet, None] = None) -> Union[FormJet, VectorFormJet]:
    """Weighted adjoint: −(−1)^p g^{ij̄}(∇_i + f_i) η_{I j̄ J}."""
    if eta.q < 1:
        raise DegreeError("dbar_star_f needs q >= 1")
    weight = as_weight(f, eta.comp)
    if isinstance(eta, VectorFormJet):
        lead, kinds, sign = 1, "u" + "b" * eta.q, -1.0
    else:
        lead, kinds, sign = eta.p, "l" * eta.p + "b" * eta.q, -((-1.0) ** eta.p)
    nabla = covariant_d(eta.comp, metric, kinds, "z")
    letters = _LETTERS[:eta.comp.ndim]
    weighted = _ein(f"r,{letters}->r{letters}", weight.grad_z(), eta.comp)
    total = _add(nabla, weighted)
    contracted_slot = letters[lead]
    rest = letters[:lead] + letters[lead + 1:]
    out = _ein(f"r{contracted_slot},r{letters}->{rest}", metric.ginv, total) * sign
    if isinstance(eta, VectorFormJet):
        return VectorFormJet(eta.q - 1, out)
    return FormJet(eta.p, eta.q - 1, out)


def laplacian_f(eta: FormJet, metric: MetricJet, f: Union[WeightJet, Jet, None] = None) -> FormJet:
    """Δ_f = ∂̄*_f∂̄ + ∂̄∂̄*_f; on functions −g^{ij̄}(∂_i + f_i)∂_j̄."""
    out = dbar_star_f(dbar(eta), metric, f)
    if eta.q > 0:
        out = out + dbar(dbar_star_f(eta, metric, f))
    return out


def contract_omega(phi: VectorFormJet, metric: MetricJet) -> FormJet:
    """(0,2)-form with components −√−1(φ_{j̄k̄} − φ_{k̄j̄}), φ_{j̄k̄} = g_{ij̄}φ^i_{k̄}."""
    if phi.q != 1:
        raise ShapeError(f"contract_omega needs q = 1, got q = {phi.q}")
    if phi.m != metric.m:
        raise ShapeError("Chart dimensions of φ and g differ")
    lowered = _ein("ij,ik->jk", metric.g, phi.comp)
    return FormJet(0, 2, (lowered - lowered.T) * (-1j))


def div_f(phi: Union[VectorFormJet, Jet], metric: MetricJet,
          f: Union[WeightJet, Jet, None] = None) -> FormJet:
    """(∇_i + f_i)φ^i_{J}; a plain Jet of shape (m,) is read as a vector field."""
    if isinstance(phi, Jet):
        phi = VectorFormJet(0, phi)
    weight = as_weight(f, phi.comp)
    rest = _LETTERS[:phi.q]
    nabla = covariant_d(phi.comp, metric, "u" + "b" * phi.q, "z")
    out = _add(_ein(f"ii{rest}->{rest}", nabla), _ein(f"i,i{rest}->{rest}", weight.grad_z(), phi.comp))
    return FormJet(0, phi.q, out)


def sharp(eta: FormJet, metric: MetricJet) -> Jet:
    """Raise every antiholomorphic index with g^{ij̄}."""
    if eta.p != 0:
        raise ShapeError("sharp expects a (0,q)-form")
    out = eta.comp
    letters = _LETTERS[:eta.q]
    for pos in range(eta.q):
        raised = letters[:pos] + "x" + letters[pos + 1:]
        out = _ein(f"x{letters[pos]},{letters}->{raised}", metric.ginv, out)
    return out


def grad_field(u: Jet, metric: MetricJet) -> Jet:
    """(∂̄u)♯ = g^{ij̄}∂_j̄u ∂_i."""
    return sharp(dbar(FormJet(0, 0, u)), metric)


def tensor_norm(arr: np.ndarray, kinds: str, g0: np.ndarray) -> float:
    """Pointwise norm of a tensor measured with the constant metric g0."""
    ginv0 = np.linalg.inv(g0).T
    mats = {"u": g0, "l": ginv0, "b": ginv0.T, "v": g0.T}
    weighted = np.asarray(arr, dtype=complex)
    for axis, kind in enumerate(kinds):
        weighted = np.moveaxis(np.tensordot(weighted, mats[kind], axes=([axis], [0])), -1, axis)
    return float(np.sqrt(abs(np.sum(weighted * np.conj(arr)).real)))


def holomorphy_residual(X: Jet, metric: MetricJet) -> float:
    """Norm of ∇″X at the base point; X carries upper holomorphic indices."""
    return tensor_norm(X.grad_zbar().value(), "b" + "u" * X.ndim, metric.value())


# --------------------------------------------------------------------------
# Bracket of vector-valued forms
# --------------------------------------------------------------------------

def _antisymmetry_gap(T: Jet, start: int, count: int) -> float:
    gap = 0.0
    for a, b in itertools.combinations(range(start, start + count), 2):
        gap = max(gap, (T + T.swapaxes(a, b)).max_abs())
    return gap


def alternate(T: Jet, lead: int, norm: float = 1.0) -> Jet:
    """norm · Σ_σ sgn(σ) σ(T) over the axes after `lead`."""
    n = T.ndim - lead
    out = None
    for perm in itertools.permutations(range(n)):
        axes = tuple(range(lead)) + tuple(lead + p for p in perm)
        term = T.transpose(*axes) * (perm_sign(perm) * norm)
        out = term if out is None else out + term
    return out


def _contract_derivative(a: VectorFormJet, b: VectorFormJet) -> Jet:
    """a^k ∧ ∂_k b^i."""
    left = _LETTERS[:a.q]
    right = _LETTERS[a.q:a.q + b.q]
    T = _ein(f"x{left},xi{right}->i{left}{right}", a.comp, b.comp.grad_z())
    return alternate(T, 1, 1.0 / (math.factorial(a.q) * math.factorial(b.q)))


def bracket(phi: VectorFormJet, psi: VectorFormJet) -> VectorFormJet:
    """[φ,ψ] = φ^k∧∂_kψ − (−1)^{q₁q₂}ψ^k∧∂_kφ; ∂̄φ = ½[φ,φ] is integrability."""
    if phi.m != psi.m:
        raise ShapeError("Chart dimensions differ")
    if min(phi.comp.order, psi.comp.order) < 1:
        raise DegreeError("bracket needs jets of order >= 1")
    sign = (-1.0) ** (phi.q * psi.q)
    out = _add(_contract_derivative(phi, psi), -sign * _contract_derivative(psi, phi))
    return VectorFormJet(phi.q + psi.q, out)


# --------------------------------------------------------------------------
# Ricci potentials and random data
# --------------------------------------------------------------------------

def ricci_potential_from_potentials(f0: Union[WeightJet, Jet], psi: Jet, g0: Union[MetricJet, Jet],
                                    g_psi: Union[MetricJet, Jet]) -> WeightJet:
    """f′ = f₀ − log(det g′/det g₀) − ψ for ω′ = ω + √−1∂∂̄ψ.

    The metrics may be MetricJets or batches of matrices with shape (..., m, m).
    """
    f0 = as_weight(f0, psi)
    g0 = g0.g if isinstance(g0, MetricJet) else g0
    g_psi = g_psi.g if isinstance(g_psi, MetricJet) else g_psi
    ratio = _add(jmat_logdet(g_psi), -jmat_logdet(g0))
    out = _add(_add(f0, -ratio), -psi)
    return WeightJet(out.realpart())


def random_form(space: JetSpace, rng: np.random.Generator, p: int, q: int, scale: float = 1.0) -> FormJet:
    raw = Jet.random(space, rng, shape=(space.m,) * (p + q), scale=scale)
    raw = alternate(raw, p, 1.0 / math.factorial(q))
    raw = alternate(raw.transpose(*range(p, p + q), *range(p)), q, 1.0 / math.factorial(p))
    return FormJet(p, q, raw.transpose(*range(q, p + q), *range(q)))


def random_vector_form(space: JetSpace, rng: np.random.Generator, q: int, scale: float = 1.0) -> VectorFormJet:
    raw = Jet.random(space, rng, shape=(space.m,) * (q + 1), scale=scale)
    return VectorFormJet(q, alternate(raw, 1, 1.0 / math.factorial(q)))
