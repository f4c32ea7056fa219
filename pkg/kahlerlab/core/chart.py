"""
Deformed holomorphic charts for KahlerLab.

Given an integrable vector-valued (0,1)-form φ, build_deformed_chart() solves
∂w^β/∂z̄^j = φ^i_{j̄} ∂w^β/∂z^i order by order and packages the derived frames
used by the deformation identities:

    A[β, i] = ∂_i w^β,   B = A⁻¹,   Q = (I − φφ̄)⁻¹,   P = Q B = ∂z/∂w
    T_i  = ∂_i − conj(φ^k_{ī}) ∂_k̄        T_j̄ = ∂_j̄ − φ^k_{j̄} ∂_k
    D_α  = Σ_j P[j, α] T_j                 D̄_β = Σ_j conj(P[j, β]) T_j̄
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional

import numpy as np

from .errors import DegreeError, ObstructionError, ShapeError
from .jets import (
    Jet,
    aligned_add,
    aligned_einsum,
    block,
    jet_space,
    jmat_inverse,
    jmat_mul,
)
from .kahler import MetricJet, VectorFormJet

try:
    from config import SOLVER_TOLERANCE, W_ORDER
except ImportError:
    SOLVER_TOLERANCE = 1e-12
    W_ORDER = 3


def _eye(like: Jet, n: int) -> Jet:
    return Jet.constant(like.space, np.eye(n))


def _matmul(a: Jet, b: Jet) -> Jet:
    return aligned_einsum("ij,jk->ik", a, b)


@dataclass
class DeformedChart:
    phi: VectorFormJet
    w: Jet
    A: Jet
    B: Jet

    @property
    def m(self) -> int:
        return self.phi.m

    @property
    def Phi(self) -> Jet:
        return self.phi.comp

    @cached_property
    def Phibar(self) -> Jet:
        return self.phi.comp.conj()

    @cached_property
    def Q(self) -> Jet:
        """(I − ΦΦ̄)⁻¹."""
        return jmat_inverse(_eye(self.Phi, self.m) - jmat_mul(self.Phi, self.Phibar))

    @cached_property
    def Qbar(self) -> Jet:
        """(I − Φ̄Φ)⁻¹."""
        return self.Q.conj()

    @cached_property
    def P(self) -> Jet:
        """∂z^i/∂w^α as the matrix P[i, α]."""
        return _matmul(self.Q, self.B)

    # -- frame operators; the frame index becomes the new leading axis ----

    def T(self, F: Jet) -> Jet:
        letters = "abcdefgh"[:F.ndim]
        return aligned_add(F.grad_z(), -aligned_einsum(f"ki,k{letters}->i{letters}", self.Phibar, F.grad_zbar()))

    def Tbar(self, F: Jet) -> Jet:
        letters = "abcdefgh"[:F.ndim]
        return aligned_add(F.grad_zbar(), -aligned_einsum(f"kj,k{letters}->j{letters}", self.Phi, F.grad_z()))

    def D(self, F: Jet) -> Jet:
        letters = "abcdefgh"[:F.ndim]
        return aligned_einsum(f"jx,j{letters}->x{letters}", self.P, self.T(F))

    def Dbar(self, F: Jet) -> Jet:
        letters = "abcdefgh"[:F.ndim]
        return aligned_einsum(f"jx,j{letters}->x{letters}", self.P.conj(), self.Tbar(F))

    # -- consistency ---------------------------------------------------

    def coordinate_residual(self) -> float:
        """max coefficient of ∂̄w − φ·∂w."""
        return _coordinate_gap(self.w, self.Phi).max_abs()

    @cached_property
    def jacobian_inverse(self) -> Jet:
        """Inverse of ∂(w, w̄)/∂(z, z̄)."""
        AP = _matmul(self.A, self.Phi)
        A = self.A.truncate(AP.order, AP.t_order)
        return jmat_inverse(block([[A, AP], [AP.conj(), A.conj()]]))

    def jacobian_residuals(self) -> Dict[str, float]:
        """A(I − φφ̄)∂z/∂w = I and ∂z/∂w̄ = −φ ∂z̄/∂w̄."""
        m = self.m
        inv = self.jacobian_inverse
        dz_dw = inv[:m, :m]
        dz_dwbar = inv[:m, m:]
        dzbar_dwbar = inv[m:, m:]
        left = _matmul(_matmul(self.A, _eye(self.Phi, m) - jmat_mul(self.Phi, self.Phibar)), dz_dw)
        return {
            "jacobian_identity": (left - np.eye(m)).max_abs(),
            "antiholomorphic_jacobian": aligned_add(dz_dwbar, _matmul(self.Phi, dzbar_dwbar)).max_abs(),
            "frame": aligned_add(dz_dw, -self.P).max_abs(),
        }


def _coordinate_gap(w: Jet, Phi: Jet) -> Jet:
    """E[j, β] = ∂_j̄ w^β − Σ_i φ^i_{j̄} ∂_i w^β."""
    return aligned_add(w.grad_zbar(), -aligned_einsum("ij,ib->jb", Phi, w.grad_z()))


def build_deformed_chart(phi: VectorFormJet, order: int = W_ORDER) -> DeformedChart:
    """Solve for holomorphic coordinates w = z + φ(0)z̄ + … of the deformed structure."""
    if phi.q != 1:
        raise ShapeError(f"build_deformed_chart needs q = 1, got q = {phi.q}")
    if order < 1:
        raise DegreeError("Chart order must be >= 1")
    if phi.comp.order < order - 1:
        raise DegreeError(f"φ of order {phi.comp.order} cannot determine w through order {order}")
    m = phi.m
    t_order = phi.comp.t_order
    space = jet_space(m, order, t_order)
    Phi = phi.comp.truncate(order - 1)

    coeffs = np.zeros((space.size, m), dtype=complex)
    for beta in range(m):
        unit = [0] * (2 * m + 1)
        unit[beta] = 1
        coeffs[space.index(unit), beta] = 1.0
    # linear z̄ terms carry φ(0), including its t-dependence
    for row in np.nonzero(Phi.space.zdeg == 0)[0]:
        tpow = int(Phi.space.tdeg[row])
        for j in range(m):
            exps = [0] * (2 * m + 1)
            exps[m + j] = 1
            exps[-1] = tpow
            coeffs[space.index(exps), :] = Phi.coeffs[row, :, j]

    for degree in range(2, order + 1):
        level = np.nonzero(space.zdeg == degree)[0]
        shape = (len(level), m)

        def residual(top: np.ndarray) -> np.ndarray:
            trial = coeffs.copy()
            trial[level] = top.reshape(shape)
            E = _coordinate_gap(Jet(space, trial), Phi)
            return E.coeffs[E.space.zdeg == degree - 1].reshape(-1)

        c = residual(np.zeros(len(level) * m, dtype=complex))
        M = np.empty((c.size, len(level) * m), dtype=complex)
        for k in range(M.shape[1]):
            e = np.zeros(M.shape[1], dtype=complex)
            e[k] = 1.0
            M[:, k] = residual(e) - c
        u, *_ = np.linalg.lstsq(M, -c, rcond=None)
        gap = float(np.linalg.norm(M @ u + c))
        if gap > SOLVER_TOLERANCE * max(1.0, float(np.linalg.norm(c))):
            raise ObstructionError(f"φ is not integrable; the coordinate equation has no solution (residual {gap:.3e})",
                                   degree - 1)
        coeffs[level] = u.reshape(shape)

    w = Jet(space, coeffs)
    A = w.grad_z().T
    B = jmat_inverse(A)
    return DeformedChart(phi=VectorFormJet(1, Phi.truncate(A.order)), w=w, A=A, B=B)


def complex_structure_tensor(chart: DeformedChart, metric: Optional[MetricJet] = None) -> Dict[str, object]:
    """Blocks of J_t in the (∂_z, ∂_z̄) basis plus the J² and ω-compatibility checks.

    hh = √−1(Q + ΦQ̄Φ̄)       hb = √−1(QΦ + ΦQ̄)
    bh = −√−1(Φ̄Q + Q̄Φ̄)      bb = −√−1(Q̄ + Φ̄QΦ)
    """
    Q, Qbar, Phi, Phibar = chart.Q, chart.Qbar, chart.Phi, chart.Phibar
    hh = aligned_add(Q, _matmul(_matmul(Phi, Qbar), Phibar)) * 1j
    hb = aligned_add(_matmul(Q, Phi), _matmul(Phi, Qbar)) * 1j
    bh = aligned_add(_matmul(Phibar, Q), _matmul(Qbar, Phibar)) * (-1j)
    bb = aligned_add(Qbar, _matmul(_matmul(Phibar, Q), Phi)) * (-1j)
    order = min(x.order for x in (hh, hb, bh, bb))
    hh, hb, bh, bb = (x.truncate(order) for x in (hh, hb, bh, bb))
    J = block([[hh, hb], [bh, bb]])
    m = chart.m
    out: Dict[str, object] = {
        "hh": hh, "hb": hb, "bh": bh, "bb": bb, "J": J,
        "square_residual": (jmat_mul(J, J) + np.eye(2 * m)).max_abs(),
    }
    if metric is not None:
        g = metric.g.embed(J.t_order) if metric.g.t_order < J.t_order else metric.g
        g = g.truncate(min(g.order, J.order))
        zero = Jet.zeros(g.space, (m, m))
        omega = block([[zero, g * 1j], [g.T * (-1j), zero]])
        J = J.truncate(omega.order)
        pulled = aligned_einsum("ai,ab->ib", J, aligned_einsum("ab,bj->aj", omega, J))
        gap = aligned_add(pulled, -omega)
        out["omega_residual"] = float(np.max(np.abs(gap.coeffs[gap.space.zdeg == 0])))
    if J.t_order >= 1:
        out["dJ_hb"] = hb.dt().at_t0()
        out["dJ_bh"] = bh.dt().at_t0()
    return out
