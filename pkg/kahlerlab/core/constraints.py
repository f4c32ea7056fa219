"""
Constrained random deformation data for KahlerLab.

random_constrained_phi() draws a vector-valued (0,1)-form φ whose coefficients
are fixed level by level in z-degree. At each level every active constraint is
affine in the new coefficients, so the level is a linear system solved by a
minimum-norm projection of a random draw.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import DegreeError, InfeasibleError
from .jets import Jet, jet_space
from .kahler import (
    MetricJet,
    VectorFormJet,
    WeightJet,
    as_weight,
    bracket,
    contract_omega,
    dbar,
    dbar_star_f,
    div_f,
)

try:
    from config import PHI_SCALE, SOLVER_TOLERANCE
except ImportError:
    PHI_SCALE = 0.3
    SOLVER_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ConstraintSet:
    """Through-order of each imposed constraint; None leaves it off."""

    integrable: Optional[int] = None        # ∂̄φ = ½[φ,φ]
    omega_compatible: Optional[int] = None  # φ⌟ω = 0
    gauge: Optional[int] = None             # ∂̄*_f φ = 0
    divergence_free: Optional[int] = None   # div_f φ = 0
    dbar_closed: Optional[int] = None       # ∂̄φ = 0
    fano_relation: bool = False             # R_{ij̄} − f_{ij̄} = g_{ij̄} at the base point

    def without(self, name: str) -> "ConstraintSet":
        return replace(self, **{name: False if name == "fano_relation" else None})

    def active(self) -> Dict[str, Union[int, bool]]:
        out: Dict[str, Union[int, bool]] = {}
        for field in fields(self):
            value = getattr(self, field.name)
            if value is not None and value is not False:
                out[field.name] = value
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Union[int, bool, None]]) -> "ConstraintSet":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"Unknown constraint(s): {', '.join(sorted(unknown))}")
        return cls(**data)


_Residual = Callable[[VectorFormJet, MetricJet, Jet], Jet]


def _integrable(phi: VectorFormJet, g: MetricJet, f: Jet) -> Jet:
    return (dbar(phi) - bracket(phi, phi) * 0.5).comp


def _omega(phi: VectorFormJet, g: MetricJet, f: Jet) -> Jet:
    return contract_omega(phi, g).comp


def _gauge(phi: VectorFormJet, g: MetricJet, f: Jet) -> Jet:
    return dbar_star_f(phi, g, f).comp


def _divergence(phi: VectorFormJet, g: MetricJet, f: Jet) -> Jet:
    return div_f(phi, g, f).comp


def _dbar_closed(phi: VectorFormJet, g: MetricJet, f: Jet) -> Jet:
    return dbar(phi).comp


# residual function and whether it differentiates φ
RESIDUALS: Dict[str, Tuple[_Residual, bool]] = {
    "integrable": (_integrable, True),
    "omega_compatible": (_omega, False),
    "gauge": (_gauge, True),
    "divergence_free": (_divergence, True),
    "dbar_closed": (_dbar_closed, True),
}


def constraint_residuals(phi: VectorFormJet, constraints: ConstraintSet, g: MetricJet,
                         f: Union[WeightJet, Jet, None] = None) -> Dict[str, float]:
    """Largest coefficient of each active constraint through its stated order."""
    weight = as_weight(f, phi.comp)
    out: Dict[str, float] = {}
    for name, (func, _) in RESIDUALS.items():
        through = getattr(constraints, name)
        if through is None:
            continue
        res = func(phi, g, weight)
        mask = res.space.zdeg <= through
        out[name] = float(np.max(np.abs(res.coeffs[mask]), initial=0.0))
    if constraints.fano_relation:
        out["fano_relation"] = fano_residual(g, weight)
    return out


def fano_residual(g: MetricJet, f: Union[WeightJet, Jet], rhs: Optional[np.ndarray] = None) -> float:
    """max |R_{ij̄} − f_{ij̄} − rhs_{ij̄}| at the base point (rhs defaults to g)."""
    f = as_weight(f, g.g)
    rhs = g.value() if rhs is None else rhs
    ricci = g.curvature.ricci.value()
    hessian = f.grad_zbar().grad_z().value()
    return float(np.max(np.abs(ricci - hessian - rhs)))


def fano_adjust_weight(g: MetricJet, f_seed: Union[WeightJet, Jet],
                       rhs: Optional[np.ndarray] = None) -> WeightJet:
    """Overwrite the z^i z̄^j coefficients of f so R_{ij̄} − f_{ij̄} = rhs_{ij̄} at the base point."""
    f = as_weight(f_seed, g.g)
    if f.order < 2:
        raise DegreeError(f"Weight order {f.order} < 2")
    m = g.m
    target = g.curvature.ricci.value() - (g.value() if rhs is None else rhs)
    coeffs = f.coeffs.copy()
    for i in range(m):
        for j in range(m):
            exps = [0] * (2 * m + 1)
            exps[i] += 1
            exps[m + j] += 1
            coeffs[f.space.index(exps)] = target[i, j]
    return WeightJet(Jet(f.space, coeffs, real=True))


def random_weight(space, rng: np.random.Generator, scale: float = 0.5) -> WeightJet:
    return WeightJet(Jet.random(space, rng, real=True, scale=scale))


def _level_rows(res: Jet, degree: int) -> np.ndarray:
    return res.coeffs[res.space.zdeg == degree].reshape(-1)


def random_constrained_phi(seed: Union[int, np.random.Generator], m: int, order: int,
                           constraints: ConstraintSet, g: MetricJet,
                           f: Union[WeightJet, Jet, None] = None, t_order: int = 0,
                           scale: float = PHI_SCALE) -> VectorFormJet:
    """Random φ satisfying every active constraint through its stated order."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    space = jet_space(m, order, t_order)
    weight = as_weight(f, Jet.zeros(space))
    if weight.t_order < t_order:
        weight = weight.embed(t_order)
    metric = g if g.g.t_order == t_order else MetricJet(g.g.embed(t_order))

    if constraints.fano_relation:
        gap = fano_residual(metric, weight)
        if gap > 1e-10 * max(1.0, np.abs(metric.value()).max()):
            raise InfeasibleError(f"Fano relation fails at the base point (residual {gap:.3e})", 0)

    active: List[Tuple[str, _Residual, bool, int]] = []
    for name, (func, differential) in RESIDUALS.items():
        through = getattr(constraints, name)
        if through is None:
            continue
        limit = order - 1 if differential else order
        if through > limit:
            raise DegreeError(f"Constraint {name} through order {through} needs φ of order "
                              f"{through + 1 if differential else through}")
        active.append((name, func, differential, through))

    coeffs = np.zeros((space.size, m, m), dtype=complex)
    for degree in range(order + 1):
        level = np.nonzero(space.zdeg == degree)[0]
        draw_shape = (len(level), m, m)
        radius = np.sqrt(rng.uniform(0.0, 1.0, size=draw_shape))
        angle = rng.uniform(0.0, 2.0 * np.pi, size=draw_shape)
        u_rand = (scale * radius * np.exp(1j * angle)).reshape(-1)

        rows = []
        for _, func, differential, through in active:
            row_degree = degree - 1 if differential else degree
            if 0 <= row_degree <= through:
                rows.append((func, row_degree))
        if not rows:
            coeffs[level] = u_rand.reshape(draw_shape)
            continue

        def evaluate(top: np.ndarray) -> np.ndarray:
            trial = coeffs.copy()
            trial[level] = top.reshape(draw_shape)
            phi = VectorFormJet(1, Jet(space, trial))
            return np.concatenate([_level_rows(func(phi, metric, weight), d) for func, d in rows])

        c = evaluate(np.zeros(u_rand.size, dtype=complex))
        M = np.empty((c.size, u_rand.size), dtype=complex)
        for k in range(u_rand.size):
            unit = np.zeros(u_rand.size, dtype=complex)
            unit[k] = 1.0
            M[:, k] = evaluate(unit) - c
        correction, *_ = np.linalg.lstsq(M, M @ u_rand + c, rcond=None)
        u = u_rand - correction
        residual = float(np.linalg.norm(M @ u + c))
        tol = SOLVER_TOLERANCE * max(1.0, float(np.linalg.norm(c)))
        if residual > tol:
            raise InfeasibleError(f"Constraint system inconsistent (residual {residual:.3e})", degree)
        coeffs[level] = u.reshape(draw_shape)

    return VectorFormJet(1, Jet(space, coeffs))
