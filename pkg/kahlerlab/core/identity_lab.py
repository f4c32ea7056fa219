"""
Pointwise identity checks for KahlerLab.

Every check_* function draws random data from its seed, evaluates both sides
of one identity independently and returns an IdentityReport. Checks whose
identity rests on a hypothesis also rerun with that hypothesis dropped and
record the result as the control residual.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np

from .chart import DeformedChart, build_deformed_chart, complex_structure_tensor
from .constraints import (
    ConstraintSet,
    fano_adjust_weight,
    random_constrained_phi,
    random_weight,
)
from .errors import ConfigError
from .jets import Jet, aligned_add, aligned_einsum, jet_space, jmat_inverse, jmat_logdet
from .kahler import (
    FormJet,
    MetricJet,
    VectorFormJet,
    WeightJet,
    contract_omega,
    covariant_d,
    dbar,
    dbar_star_f,
    div_f,
    laplacian_f,
    metric_from_potential,
    random_form,
    random_potential,
    ricci_via_logdet,
)

try:
    from config import (
        COMPONENT_TOLERANCE,
        F_ORDER,
        G_ORDER,
        IDENTITY_TOLERANCE,
        PHI_ORDER,
        T_ORDER,
        W_ORDER,
    )
except ImportError:
    G_ORDER = 3
    F_ORDER = 3
    PHI_ORDER = 2
    W_ORDER = 3
    T_ORDER = 1
    IDENTITY_TOLERANCE = 1e-8
    COMPONENT_TOLERANCE = 1e-10

_A = "abcd"
_J = "efgh"


@dataclass
class IdentityReport:
    identity: str
    m: int
    seed: int
    absolute: float
    relative: float
    lhs_norm: float
    rhs_norm: float
    tolerance: float
    passed: bool
    p: Optional[int] = None
    q: Optional[int] = None
    params: Dict[str, Any] = field(default_factory=dict)
    control: Optional[float] = None
    components: Dict[str, float] = field(default_factory=dict)
    component_tolerance: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def gate_components(self, tolerance: Optional[float] = None) -> "IdentityReport":
        """Pass only if the main residual and every component are within their tolerances."""
        limit = self.tolerance if tolerance is None else tolerance
        self.component_tolerance = limit
        self.passed = bool(self.relative <= self.tolerance
                           and all(value <= limit for value in self.components.values()))
        return self


def _flatten(x: Union[Jet, np.ndarray]) -> np.ndarray:
    return (x.coeffs if isinstance(x, Jet) else np.asarray(x)).reshape(-1)


def compare(lhs: Union[Jet, np.ndarray], rhs: Union[Jet, np.ndarray],
            floor: float = 1e-30) -> Tuple[float, float, float, float]:
    """(absolute, relative, |lhs|, |rhs|); relative uses the larger side, floored at `floor`."""
    if isinstance(lhs, Jet) and isinstance(rhs, Jet):
        lhs, rhs = lhs.truncate(min(lhs.order, rhs.order), min(lhs.t_order, rhs.t_order)), \
            rhs.truncate(min(lhs.order, rhs.order), min(lhs.t_order, rhs.t_order))
    a, b = _flatten(lhs), _flatten(rhs)
    absolute = float(np.linalg.norm(a - b))
    nl, nr = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    return absolute, absolute / max(nl, nr, floor), nl, nr


def _report(name: str, m: int, seed: int, lhs, rhs, tolerance: float, **extra) -> IdentityReport:
    absolute, relative, nl, nr = compare(lhs, rhs)
    return IdentityReport(identity=name, m=m, seed=seed, absolute=absolute, relative=relative,
                          lhs_norm=nl, rhs_norm=nr, tolerance=tolerance, passed=relative <= tolerance,
                          **extra)


def random_background(m: int, rng: np.random.Generator, order: int = G_ORDER) -> MetricJet:
    """Random Kähler metric jet of the given order, from a potential of order + 2."""
    return metric_from_potential(random_potential(jet_space(m, order + 2), rng), m)


def _fano_weight(g: MetricJet, rng: np.random.Generator, rhs: Optional[np.ndarray] = None) -> WeightJet:
    return fano_adjust_weight(g, random_weight(jet_space(g.m, F_ORDER), rng), rhs)


def _t_family(psi: VectorFormJet, t_order: int = T_ORDER) -> VectorFormJet:
    """φ(t) = tψ as a jet in t."""
    lifted = psi.comp.embed(t_order)
    return VectorFormJet(psi.q, lifted * Jet.variable(lifted.space, "t"))


def _embed_metric(g: MetricJet, t_order: int) -> MetricJet:
    return g if g.g.t_order == t_order else MetricJet(g.g.embed(t_order))


def _embed(f: Jet, t_order: int) -> Jet:
    return f if f.t_order == t_order else f.embed(t_order)


# --------------------------------------------------------------------------
# Bochner–Kodaira
# --------------------------------------------------------------------------

def bochner_kodaira_rhs(eta: FormJet, g: MetricJet, f: Jet, weighted: bool) -> np.ndarray:
    """Curvature side at the base point: −g^{ij̄}(∇_i + f_i)∇_j̄η + curvature terms."""
    p, q = eta.p, eta.q
    kinds = "l" * p + "b" * q
    letters = (_A[:p] + _J[:q])
    inner = covariant_d(eta.comp, g, kinds, "zbar")
    outer = covariant_d(inner, g, "b" + kinds, "z")
    weighted_d = aligned_einsum(f"i,j{letters}->ij{letters}", f.grad_z(), inner)
    rough = -aligned_einsum(f"ij,ij{letters}->{letters}", g.ginv, aligned_add(outer, weighted_d)).value()

    ginv0 = g.ginv.value()
    eta0 = eta.comp.value()
    A, J = _A[:p], _J[:q]
    out = rough.copy()
    riemann0 = g.curvature.riemann.value()
    for alpha in range(p):
        for beta in range(q):
            sub = A[:alpha] + "k" + A[alpha + 1:] + J[:beta] + "j" + J[beta + 1:]
            out = out + np.einsum(f"ij,ks,i{J[beta]}{A[alpha]}s,{sub}->{A}{J}",
                                  ginv0, ginv0, riemann0, eta0)
    if weighted:
        out = out + q * eta0
    else:
        shifted = g.curvature.ricci.value() - f.grad_zbar().grad_z().value()
        for beta in range(q):
            sub = A + J[:beta] + "k" + J[beta + 1:]
            out = out + np.einsum(f"ik,i{J[beta]},{sub}->{A}{J}", ginv0, shifted, eta0)
    return out


def _bochner_sides(m: int, p: int, q: int, seed: int, weighted: bool, fano: bool = True):
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    weight = random_weight(jet_space(m, F_ORDER), rng)
    if weighted and fano:
        weight = fano_adjust_weight(g, weight)
    eta = random_form(jet_space(m, PHI_ORDER), rng, p, q)
    lhs = laplacian_f(eta, g, weight.f).comp.value()
    return lhs, bochner_kodaira_rhs(eta, g, weight.f, weighted)


def check_bochner_kodaira(m: int, p: int, q: int, seed: int, weighted: bool = False,
                          tolerance: float = IDENTITY_TOLERANCE, control: bool = True) -> IdentityReport:
    """Δ_f η from the definitions against the Bochner–Kodaira curvature expression.

    The weighted form replaces the Ricci terms by qη using the Fano relation; its
    control keeps that replacement but draws f without imposing the relation.
    """
    if not (0 <= p <= m and 0 <= q <= m):
        raise ConfigError(f"Bidegree ({p},{q}) invalid for m={m}")
    lhs, rhs = _bochner_sides(m, p, q, seed, weighted)
    name = "bochner_kodaira_weighted" if weighted else "bochner_kodaira"
    report = _report(name, m, seed, lhs, rhs, tolerance, p=p, q=q, params={"weighted": weighted})
    # for q = 0 the relation never enters
    if control and weighted and q > 0:
        report.control = compare(*_bochner_sides(m, p, q, seed, weighted, fano=False))[1]
    return report


# --------------------------------------------------------------------------
# ∂̄∂̄*_f of φ⌟ω
# --------------------------------------------------------------------------

def _omega_contraction_sides(m: int, seed: int, constraints: ConstraintSet):
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    f = _fano_weight(g, rng)
    phi = random_constrained_phi(rng, m, PHI_ORDER, constraints, g, f)
    C = contract_omega(phi, g)
    lhs = dbar(dbar_star_f(C, g, f)).comp.value()
    rhs = (div_f(dbar(phi), g, f).comp * 1j).value() + C.comp.value()
    return lhs, rhs


def check_omega_contraction_laplacian(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE,
                                       control: bool = True) -> IdentityReport:
    """∂̄∂̄*_f(φ⌟ω) = √−1 div_f(∂̄φ) + φ⌟ω under the gauge ∂̄*_f φ = 0."""
    if m < 2:
        raise ConfigError("omega_contraction_laplacian needs m >= 2")
    constraints = ConstraintSet(gauge=1, fano_relation=True)
    lhs, rhs = _omega_contraction_sides(m, seed, constraints)
    report = _report("omega_contraction_laplacian", m, seed, lhs, rhs, tolerance)
    if control:
        report.control = compare(*_omega_contraction_sides(m, seed, constraints.without("gauge")))[1]
    return report


# --------------------------------------------------------------------------
# Deformed metrics
# --------------------------------------------------------------------------

def pulled_back_metric(chart: DeformedChart, g: MetricJet) -> Tuple[Jet, Jet]:
    """(W, g_t): W = −√−1ω(T_i, T_j̄) and g_t = −√−1ω(D_α, D̄_β) = PᵀW P̄."""
    gg = _embed_metric(g, chart.Phi.t_order).g
    cross = aligned_einsum("li,kl->ik", chart.Phibar, gg)
    W = aligned_add(gg, -aligned_einsum("ik,kj->ij", cross, chart.Phi))
    left = aligned_einsum("ia,ij->aj", chart.P, W)
    return W, aligned_einsum("aj,jb->ab", left, chart.P.conj())


def _deformed_metric_sides(m: int, seed: int, constraints: ConstraintSet):
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    phi = random_constrained_phi(rng, m, PHI_ORDER, constraints, g)
    chart = build_deformed_chart(phi, W_ORDER)
    W, g_t = pulled_back_metric(chart, g)
    gg = g.g
    formula = aligned_einsum("ia,ib->ab", chart.P, aligned_einsum("ij,jb->ib", gg, chart.B.conj()))
    intermediate = aligned_einsum("il,lj->ij", gg, aligned_add(
        Jet.constant(chart.Phi.space, np.eye(m)), -aligned_einsum("lk,kj->lj", chart.Phibar, chart.Phi)))
    return g_t, formula, W, intermediate


def check_deformed_metric(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE,
                          control: bool = True) -> IdentityReport:
    """g_t from the frame pairing against the closed formula PᵀgB̄."""
    constraints = ConstraintSet(omega_compatible=PHI_ORDER, integrable=PHI_ORDER - 1)
    g_t, formula, W, intermediate = _deformed_metric_sides(m, seed, constraints)
    report = _report("deformed_metric", m, seed, g_t, formula, tolerance)
    report.components["frame_pairing"] = compare(W, intermediate)[1]
    report.gate_components()
    if control:
        g_t, formula, _, _ = _deformed_metric_sides(m, seed, constraints.without("omega_compatible"))
        report.control = compare(g_t, formula)[1]
    return report


def _divergence0(Phi: Jet) -> Jet:
    """Σ_i ∂_i φ^i_{j̄}."""
    return aligned_einsum("iij->j", Phi.grad_z())


def helper_identities(chart: DeformedChart) -> Dict[str, float]:
    """Relative residuals of the frame identities used by the Ricci-form computation.

    Each residual is relative to max(|lhs|, |rhs|, max|φ|).
    """
    Phi, B = chart.Phi, chart.B
    Bbar, Pbar = B.conj(), chart.P.conj()
    logdetA = jmat_logdet(chart.A)
    div0 = _divergence0(Phi)
    out: Dict[str, float] = {}
    scale = max(Phi.max_abs(), 1e-30)

    expected_dbar_logdetA = aligned_einsum("jb,j->b", Pbar, div0)
    out["dbar_logdetA"] = compare(chart.Dbar(logdetA), expected_dbar_logdetA, scale)[1]

    first = aligned_einsum("ig,jgi->jg", Bbar, chart.A.grad_z().conj())
    first = aligned_einsum("jb,jg->b", Bbar, first)
    second = aligned_einsum("jb,kj->bk", Pbar, Phi)
    second = aligned_einsum("bk,k->b", second, div0.conj())
    out["dbar_logdetAbar"] = compare(chart.Dbar(logdetA.conj()), aligned_add(first, -second), scale)[1]

    expected_T_Bbar = -aligned_einsum("kb,kji->ijb", Bbar, Phi.grad_z().conj())
    out["frame_T_Bbar"] = compare(chart.T(Bbar), expected_T_Bbar, scale)[1]

    inner = aligned_einsum("lb,l->b", B, logdetA.grad_z()).conj()
    expected_T_logdetA = aligned_einsum("lb,li->ib", B, div0.grad_z()).conj()
    out["frame_T_logdetA"] = compare(chart.T(inner), expected_T_logdetA, scale)[1]
    return out


def _ricci_form_sides(m: int, seed: int, constraints: ConstraintSet):
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    f = _fano_weight(g, rng)
    phi = random_constrained_phi(rng, m, PHI_ORDER, constraints, g, f)
    chart = build_deformed_chart(phi, W_ORDER)
    _, g_t = pulled_back_metric(chart, g)

    lhs = -chart.D(chart.Dbar(jmat_logdet(g_t)))
    volume = jmat_logdet(Jet.constant(chart.Phi.space, np.eye(m)) - aligned_einsum("ij,jk->ik", chart.Phi, chart.Phibar))
    rhs = aligned_add(g_t, chart.D(chart.Dbar(aligned_add(f.f, volume))))

    logdetA = jmat_logdet(chart.A)
    potential = aligned_add(aligned_add(logdetA, logdetA.conj()), -aligned_add(f.f, jmat_logdet(g.g)))
    ddbar_pair = (chart.D(chart.Dbar(potential)), g_t)
    return chart, lhs.value(), rhs.value(), ddbar_pair


def check_ricci_form_deformation(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE,
                                  control: bool = True) -> IdentityReport:
    """Ric of the deformed metric against ω + √−1∂∂̄(f + log det(I − φφ̄)) in the w-frame."""
    constraints = ConstraintSet(omega_compatible=PHI_ORDER, divergence_free=1, integrable=1,
                                fano_relation=True)
    chart, lhs, rhs, ddbar_pair = _ricci_form_sides(m, seed, constraints)
    report = _report("ricci_form_deformation", m, seed, lhs, rhs, tolerance)
    report.components["ddbar_logdet"] = compare(ddbar_pair[0].value(), ddbar_pair[1].value())[1]
    report.components.update(helper_identities(chart))
    report.gate_components(COMPONENT_TOLERANCE)
    if control:
        _, lhs_c, rhs_c, _ = _ricci_form_sides(m, seed, constraints.without("divergence_free"))
        report.control = compare(lhs_c, rhs_c)[1]
    return report


# --------------------------------------------------------------------------
# First-order variations along φ(t) = tψ
# --------------------------------------------------------------------------

def _deformed_ricci(chart: DeformedChart, g: MetricJet) -> Tuple[Jet, Jet]:
    _, g_t = pulled_back_metric(chart, g)
    return -chart.D(chart.Dbar(jmat_logdet(g_t))), g_t


def _scalar_sides(m: int, seed: int, constraints: ConstraintSet):
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    psi = random_constrained_phi(rng, m, PHI_ORDER, constraints, g)
    chart = build_deformed_chart(_t_family(psi), W_ORDER)
    ricci_t, g_t = _deformed_ricci(chart, g)
    ginv_t = jmat_inverse(g_t.truncate(ricci_t.order)).T
    scalar_t = aligned_einsum("ab,ab->", ginv_t, ricci_t)
    lhs = scalar_t.dt().value()
    X = dbar_star_f(div_f(psi, g), g).comp.value()
    rhs = -(X + np.conj(X))
    return lhs, rhs


def check_scalar_linearization(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE,
                               control: bool = True) -> IdentityReport:
    """d/dt s(J_t) at t = 0 against −(∂̄*₀div₀ψ + conjugate)."""
    constraints = ConstraintSet(dbar_closed=1, omega_compatible=PHI_ORDER)
    lhs, rhs = _scalar_sides(m, seed, constraints)
    report = _report("scalar_linearization", m, seed, lhs, rhs, tolerance)
    if control:
        report.control = compare(*_scalar_sides(m, seed, constraints.without("omega_compatible")))[1]
    return report


def _volume_sides(m: int, seed: int, constraints: ConstraintSet):
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    f0 = _fano_weight(g, rng)
    psi = random_constrained_phi(rng, m, PHI_ORDER, constraints, g, f0)
    chart = build_deformed_chart(_t_family(psi), W_ORDER)
    ricci_t, g_t = _deformed_ricci(chart, g)
    hessian = chart.D(chart.Dbar(_embed(f0.f, chart.Phi.t_order)))
    lhs = aligned_add(aligned_add(ricci_t, -g_t), -hessian).dt().value()
    V = div_f(psi, g, f0).comp
    rhs = V.grad_z().value() + V.conj().grad_zbar().value().T
    return lhs, rhs


def check_ricci_volume_variation(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE,
                                 control: bool = True) -> IdentityReport:
    """∂_i∂_k̄ f′(0) against ∂_i(div_f ψ)_k̄ + ∂_k̄ conj((div_f ψ)_ī)."""
    constraints = ConstraintSet(dbar_closed=1, omega_compatible=PHI_ORDER)
    lhs, rhs = _volume_sides(m, seed, constraints)
    report = _report("ricci_volume_variation", m, seed, lhs, rhs, tolerance)
    if control:
        report.control = compare(*_volume_sides(m, seed, constraints.without("omega_compatible")))[1]
    return report


# --------------------------------------------------------------------------
# Coupled metrics
# --------------------------------------------------------------------------

def _coupled_sides(k: int, m: int, q: int, seed: int, coupled: bool = True):
    rng = np.random.default_rng(seed)
    metrics = [random_background(m, rng) for _ in range(k)]
    total = sum(g.value() for g in metrics)
    if coupled:
        weights = [_fano_weight(g, rng, rhs=total).f for g in metrics]
    else:
        weights = [random_weight(jet_space(m, F_ORDER), rng).f for _ in metrics]
    space = jet_space(m, PHI_ORDER)
    if k == 1:
        forms = [random_form(space, rng, 0, q)]
    elif q == 0:
        u = Jet.random(space, rng)
        forms = [FormJet(0, 0, u) for _ in metrics]
    else:
        X = Jet.random(space, rng, shape=(m,))
        forms = [FormJet(0, 1, aligned_einsum("ij,i->j", g.g, X).truncate(PHI_ORDER)) for g in metrics]
    common = sum(form.comp.value() for form in forms)

    lhs, rhs, residuals = [], [], {}
    for alpha, (g, f, eta) in enumerate(zip(metrics, weights, forms)):
        left = laplacian_f(eta, g, f).comp.value()
        right = bochner_kodaira_rhs(eta, g, f, weighted=True) - q * eta.comp.value() + q * common
        lhs.append(left)
        rhs.append(right)
        residuals[f"metric_{alpha + 1}"] = compare(left, right)[1]
    return np.stack(lhs), np.stack(rhs), residuals


def check_coupled_bk(k: int, m: int, q: int, seed: int, tolerance: float = IDENTITY_TOLERANCE,
                     control: bool = True) -> IdentityReport:
    """Weighted Bochner–Kodaira for k coupled metrics with a common ψ = η_α♯.

    The control draws each f_α without the coupled relation Ric(ω_α) − ∂∂̄f_α = Σ_β ω_β.
    """
    if k < 1 or not 0 <= q <= m:
        raise ConfigError(f"Invalid coupled parameters k={k}, q={q}, m={m}")
    if k >= 2 and q > 1:
        raise ConfigError("Coupled check supports q <= 1 when k >= 2")
    lhs, rhs, residuals = _coupled_sides(k, m, q, seed)
    report = _report("coupled_bk", m, seed, lhs, rhs, tolerance, q=q, params={"k": k})
    report.components.update(residuals)
    report.gate_components()
    if control and q > 0:
        lhs_c, rhs_c, _ = _coupled_sides(k, m, q, seed, coupled=False)
        report.control = compare(lhs_c, rhs_c)[1]
    return report


# --------------------------------------------------------------------------
# Supplementary checks
# --------------------------------------------------------------------------

def check_ricci_identities(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE) -> IdentityReport:
    """Commutators of covariant derivatives, both Ricci formulas and curvature symmetries."""
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    space = jet_space(m, PHI_ORDER)
    ginv0 = g.ginv.value()
    R0 = g.curvature.riemann.value()

    def commutator(T: Jet, kinds: str) -> np.ndarray:
        ij = covariant_d(covariant_d(T, g, kinds, "zbar"), g, "b" + kinds, "z").value()
        ji = covariant_d(covariant_d(T, g, kinds, "z"), g, "l" + kinds, "zbar").value()
        return ij - np.swapaxes(ji, 0, 1)

    X = Jet.random(space, rng, shape=(m,))
    alpha = Jet.random(space, rng, shape=(m,))
    lower = Jet.random(space, rng, shape=(m,))
    pairs = {
        "vector": (commutator(X, "u"), -np.einsum("ks,ijls,l->ijk", ginv0, R0, X.value())),
        "form01": (commutator(alpha, "b"), -np.einsum("sl,ijsb,l->ijb", ginv0, R0, alpha.value())),
        "lower": (commutator(lower, "l"), np.einsum("ks,ijas,k->ija", ginv0, R0, lower.value())),
    }
    curv = g.curvature
    riemann = curv.riemann
    lhs = [pair[0].reshape(-1) for pair in pairs.values()]
    rhs = [pair[1].reshape(-1) for pair in pairs.values()]
    report = _report("ricci_identities", m, seed, np.concatenate(lhs), np.concatenate(rhs), tolerance)
    for name, (left, right) in pairs.items():
        report.components[name] = compare(left, right)[1]
    report.components["ricci_formulas"] = compare(curv.ricci, ricci_via_logdet(g))[1]
    report.components["symmetry_ik"] = compare(riemann, riemann.transpose(2, 1, 0, 3))[1]
    report.components["symmetry_jl"] = compare(riemann, riemann.transpose(0, 3, 2, 1))[1]
    report.components["conjugation"] = compare(riemann, riemann.transpose(1, 0, 3, 2).conj())[1]
    report.gate_components(COMPONENT_TOLERANCE)
    return report


def check_chart_consistency(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE) -> IdentityReport:
    """Coordinate equation, Jacobian identities, frame helpers and J_t for a random integrable φ."""
    rng = np.random.default_rng(seed)
    g = random_background(m, rng)
    phi = random_constrained_phi(rng, m, PHI_ORDER,
                                 ConstraintSet(integrable=PHI_ORDER - 1, omega_compatible=PHI_ORDER), g)
    chart = build_deformed_chart(phi, W_ORDER)
    components: Dict[str, float] = {"holomorphic_coords": chart.coordinate_residual()}
    components.update(chart.jacobian_residuals())
    components.update(helper_identities(chart))
    structure = complex_structure_tensor(chart, g)
    components["j_squared"] = structure["square_residual"]
    components["omega_compatible"] = structure["omega_residual"]

    psi = random_constrained_phi(rng, m, PHI_ORDER, ConstraintSet(dbar_closed=1), g)
    family = complex_structure_tensor(build_deformed_chart(_t_family(psi), W_ORDER))
    psi_c = psi.comp.truncate(family["dJ_hb"].order)
    components["dJ_hb"] = compare(family["dJ_hb"], psi_c * 2j)[1]
    components["dJ_bh"] = compare(family["dJ_bh"], psi_c.conj() * (-2j))[1]

    values = np.array(list(components.values()))
    report = _report("chart_consistency", m, seed, values, np.zeros_like(values), tolerance)
    report.absolute = report.relative = float(values.max())
    report.components = components
    return report.gate_components()


def check_gauge_divergence(m: int, seed: int, tolerance: float = IDENTITY_TOLERANCE,
                           control: bool = True) -> IdentityReport:
    """∂̄*_f φ = 0 together with φ⌟ω = 0 forces div_f φ = 0 through order 1."""

    def divergence(constraints: ConstraintSet) -> Tuple[float, float]:
        rng = np.random.default_rng(seed)
        g = random_background(m, rng)
        f = random_weight(jet_space(m, F_ORDER), rng)
        phi = random_constrained_phi(rng, m, PHI_ORDER, constraints, g, f)
        div = div_f(phi, g, f).comp.truncate(1)
        return div.max_abs(), phi.max_abs()

    constraints = ConstraintSet(gauge=1, omega_compatible=PHI_ORDER)
    size, scale = divergence(constraints)
    relative = size / max(scale, 1e-30)
    report = IdentityReport(identity="gauge_divergence", m=m, seed=seed, absolute=size, relative=relative,
                            lhs_norm=size, rhs_norm=0.0, tolerance=tolerance, passed=relative <= tolerance)
    if control:
        size_c, scale_c = divergence(constraints.without("omega_compatible"))
        report.control = size_c / max(scale_c, 1e-30)
    return report


# name -> (function, parameter names it takes besides seed/tolerance)
CHECKS: Dict[str, Tuple[Callable[..., IdentityReport], Tuple[str, ...]]] = {
    "bochner_kodaira": (check_bochner_kodaira, ("m", "p", "q", "weighted", "control")),
    "omega_contraction_laplacian": (check_omega_contraction_laplacian, ("m", "control")),
    "deformed_metric": (check_deformed_metric, ("m", "control")),
    "ricci_form_deformation": (check_ricci_form_deformation, ("m", "control")),
    "scalar_linearization": (check_scalar_linearization, ("m", "control")),
    "ricci_volume_variation": (check_ricci_volume_variation, ("m", "control")),
    "coupled_bk": (check_coupled_bk, ("k", "m", "q", "control")),
    "ricci_identities": (check_ricci_identities, ("m",)),
    "chart_consistency": (check_chart_consistency, ("m",)),
    "gauge_divergence": (check_gauge_divergence, ("m", "control")),
}


def run_check(name: str, seed: int, tolerance: float = IDENTITY_TOLERANCE, **params: Any) -> IdentityReport:
    """Dispatch one check by name; unknown parameters for that check are ignored."""
    try:
        func, accepted = CHECKS[name]
    except KeyError:
        raise ConfigError(f"Unknown check: {name!r}") from None
    kwargs = {key: params[key] for key in accepted if key in params}
    return func(seed=seed, tolerance=tolerance, **kwargs)
