"""
Spectral diagnostics for KahlerLab.

Galerkin discretisation of the weighted ∂̄-Laplacian Δ_f on CP¹ for metrics in
2πc₁, written in the affine chart z. Quadrature uses the height variable
u = (|z|² − 1)/(|z|² + 1) and the angle θ = arg z, so the Fubini–Study area
element is du dθ. The trial functions

    b_ab = z^a z̄^b / (1 + |z|²)^N,   0 ≤ a, b ≤ N

are smooth on the whole sphere. Every operator is applied exactly at each node
by expanding the integrand in jets centred at that node.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import ConditioningError, ConfigError, NotAMetricError, SolverError, ZeroFieldError
from .jets import Jet, align, jet_space, stack
from .kahler import ricci_potential_from_potentials

try:
    from config import (
        BASIS_N,
        CLUSTER_TOLERANCE,
        COND_LIMIT,
        GRID_ANGULAR,
        GRID_RADIAL,
        HOLOMORPHY_TOLERANCE,
        IDENTITY_TOLERANCE,
        MOMENT_PAIRS,
        PSI_SAMPLES,
        SPECTRAL_TOLERANCE,
    )
except ImportError:
    BASIS_N = 12
    CLUSTER_TOLERANCE = 1e-5
    COND_LIMIT = 1e12
    GRID_ANGULAR = 64
    GRID_RADIAL = 32
    HOLOMORPHY_TOLERANCE = 1e-5
    IDENTITY_TOLERANCE = 1e-8
    MOMENT_PAIRS = 25
    PSI_SAMPLES = 100
    SPECTRAL_TOLERANCE = 1e-6

MODES = ("quad", "nonaxial")

# basis derivatives needed: ∂_z̄, then ∂_z̄ of the field, then two ∂_z
_BASIS_ORDER = 4
_METRIC_ORDER = _BASIS_ORDER + 2


# --------------------------------------------------------------------------
# Grid and basis
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    n_radial: int
    n_angular: int
    u: np.ndarray
    theta: np.ndarray
    z: np.ndarray           # nodes, radial-major
    weights: np.ndarray     # Fubini–Study area weights, sum 4π
    exactness: int

    @property
    def size(self) -> int:
        return int(self.z.size)

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.sum(values * self.weights, axis=-1))


def build_grid(n_radial: int = GRID_RADIAL, n_angular: int = GRID_ANGULAR) -> QuadratureGrid:
    """Gauss–Legendre in u times uniform angular nodes."""
    if n_radial < 4 or n_angular < 4:
        raise ConfigError(f"Grid needs at least 4 nodes per direction, got {n_radial} x {n_angular}")
    u, wu = np.polynomial.legendre.leggauss(n_radial)
    theta = 2.0 * np.pi * (np.arange(n_angular) + 0.5) / n_angular
    r = np.sqrt((1.0 + u) / (1.0 - u))
    z = (r[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)
    weights = np.repeat(wu * (2.0 * np.pi / n_angular), n_angular)
    return QuadratureGrid(
        n_radial=n_radial, n_angular=n_angular, u=u, theta=theta, z=z, weights=weights,
        exactness=min(2 * n_radial - 1, n_angular - 1),
    )


@dataclass(frozen=True)
class BasisSet:
    N: int = BASIS_N

    def __post_init__(self):
        if self.N < 1:
            raise ConfigError(f"Basis degree must be >= 1, got {self.N}")

    @property
    def size(self) -> int:
        return (self.N + 1) ** 2

    @property
    def indices(self) -> List[Tuple[int, int]]:
        return [(a, b) for a in range(self.N + 1) for b in range(self.N + 1)]

    def position(self, a: int, b: int) -> int:
        return a * (self.N + 1) + b

    def conjugation(self) -> np.ndarray:
        """Permutation k(a, b) -> k(b, a); conj(b_ab) = b_ba."""
        return np.array([self.position(b, a) for a, b in self.indices])

    def constant(self) -> np.ndarray:
        """Coefficients of the constant function 1."""
        out = np.zeros(self.size, dtype=complex)
        for j in range(self.N + 1):
            out[self.position(j, j)] = comb(self.N, j)
        return out

    def check_grid(self, grid: QuadratureGrid) -> None:
        if grid.exactness < 2 * self.N:
            raise ConfigError(f"Grid exactness {grid.exactness} is below 2N = {2 * self.N}; "
                              "increase n_radial/n_angular")


# --------------------------------------------------------------------------
# Metrics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Perturbation:
    """Kähler potential perturbation ε·mode added to 2 log(1 + |z|²)."""

    eps: float = 0.0
    mode: str = "quad"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"Unknown perturbation mode {self.mode!r} (expected one of {', '.join(MODES)})")

    @property
    def label(self) -> str:
        return "fubini-study" if self.eps == 0 else f"{self.eps:g}:{self.mode}"

    def to_dict(self) -> Dict[str, object]:
        return {"eps": self.eps, "mode": self.mode}


def _node_coordinates(space, z: np.ndarray) -> Tuple[Jet, Jet]:
    Z = Jet.constant(space, z) + Jet.variable(space, ("z", 0))
    Zb = Jet.constant(space, z.conj()) + Jet.variable(space, ("zbar", 0))
    return Z, Zb


def _mode_jet(mode: str, Z: Jet, Zb: Jet) -> Jet:
    S = Z * Zb
    if mode == "quad":
        height = (S - 1.0) * (S + 1.0).inv()
        out = (height * height * 3.0 - 1.0) * 0.5
    else:
        out = (Z * Z + Zb * Zb) * ((S + 1.0) ** 2).inv() * 0.5
    return out.realpart()


@dataclass(eq=False)
class MetricOnGrid:
    grid: QuadratureGrid
    perturbation: Perturbation
    g: Jet                  # g_{11̄} jets at the nodes
    f: Jet                  # normalised Ricci potential jets
    g_fs: np.ndarray
    relation_residual: float
    cache: Dict[object, object] = field(default_factory=dict, repr=False)

    @property
    def g_values(self) -> np.ndarray:
        return self.g.value().real

    @property
    def ef(self) -> np.ndarray:
        return np.exp(self.f.value().real)

    @property
    def area(self) -> np.ndarray:
        """Quadrature weights of ω for this metric."""
        return self.grid.weights * self.g_values / self.g_fs

    def measure(self, weighted: bool = True) -> np.ndarray:
        return self.area * self.ef if weighted else self.area

    @property
    def scalar_curvature(self) -> np.ndarray:
        ricci = -self.g.log().dz(0).dzb(0).value().real
        return ricci / self.g_values


def perturb_metric(perturbation: Perturbation, grid: Optional[QuadratureGrid] = None,
                   volume: Optional[float] = None) -> MetricOnGrid:
    """ω = ω_FS + √−1∂∂̄(ε·mode) with its Ricci potential, normalised so ∫e^f ω = volume."""
    grid = grid if grid is not None else build_grid()
    space = jet_space(1, _METRIC_ORDER)
    Z, Zb = _node_coordinates(space, grid.z)
    k_fs = (Z * Zb + 1.0).log() * 2.0
    psi = _mode_jet(perturbation.mode, Z, Zb) * perturbation.eps
    g_fs = k_fs.dz(0).dzb(0)
    g = (k_fs + psi).dz(0).dzb(0)

    values = g.value().real
    bad = np.nonzero(values <= 0.0)[0]
    if bad.size:
        node = int(bad[0])
        raise NotAMetricError(f"Perturbation {perturbation.label} is not positive at node {node} "
                              f"(z = {grid.z[node]:.4g}, g = {values[node]:.3e})", node=node)

    n = grid.size
    weight = ricci_potential_from_potentials(Jet.zeros(g.space), psi.truncate(g.order),
                                             g_fs.reshape(n, 1, 1), g.reshape(n, 1, 1))
    area = grid.weights * values / g_fs.value().real
    target = float(np.sum(area)) if volume is None else volume
    total = float(np.sum(np.exp(weight.f.value().real) * area))
    f = weight.f + np.log(target / total)

    ricci = -g.log().dz(0).dzb(0)
    gap = ricci.value() - values - f.dz(0).dzb(0).value()
    return MetricOnGrid(grid=grid, perturbation=perturbation, g=g.truncate(_BASIS_ORDER),
                        f=f.truncate(_BASIS_ORDER), g_fs=g_fs.value().real,
                        relation_residual=float(np.max(np.abs(gap))))


def average_scalar_curvature(metric: MetricOnGrid) -> float:
    area = metric.area
    return float(np.sum(metric.scalar_curvature * area) / np.sum(area))


# --------------------------------------------------------------------------
# Basis functions and the operators applied to them
# --------------------------------------------------------------------------

@dataclass(eq=False)
class BasisArrays:
    """Node values of each basis function and its derived quantities, shape (K, nodes)."""

    val: np.ndarray
    dbar: np.ndarray        # ∂_z̄ b
    dbar2: np.ndarray       # ∂_z̄ of the trial form ∂̄b
    field: np.ndarray       # (∂̄b)♯ = g⁻¹ ∂_z̄ b
    psi: np.ndarray         # ∂_z̄ of the field: ∇″∇′b
    lap: np.ndarray         # Δ_f b = ∂̄*_f ∂̄ b
    dbar_lap: np.ndarray    # ∂_z̄ Δ_f b
    divf_psi: np.ndarray    # div_f ψ for ψ = ∇″∇′b
    lin0: np.ndarray        # ∂̄*_0 div_0 ψ


def _mul(a: Jet, b: Jet) -> Jet:
    a, b = align(a, b)
    return a * b


def _ratio(a: Jet, b: Jet) -> Jet:
    return a * b.truncate(min(a.order, b.order)).inv().truncate(a.order)


def _plus(a: Jet, b: Jet) -> Jet:
    a, b = align(a, b)
    return a + b


def _check_consistent(grid: QuadratureGrid, basis: BasisSet, metric: MetricOnGrid) -> None:
    if metric.grid is not grid:
        raise ConfigError("Metric was built on a different grid")
    basis.check_grid(grid)


def basis_arrays(basis: BasisSet, metric: MetricOnGrid) -> BasisArrays:
    key = ("basis", basis.N)
    cached = metric.cache.get(key)
    if cached is not None:
        return cached

    N = basis.N
    space = metric.g.space
    Z, Zb = _node_coordinates(space, metric.grid.z)
    decay = (Z * Zb + 1.0).inv() ** N
    g = metric.g
    f_z = metric.f.dz(0)
    gamma = g.log().dz(0)

    ones = Jet.constant(space, np.ones(metric.grid.size))
    z_powers = [ones]
    zb_powers = [ones]
    for _ in range(N):
        z_powers.append(z_powers[-1] * Z)
        zb_powers.append(zb_powers[-1] * Zb)
    zb_stack = stack(zb_powers)

    names = [f for f in BasisArrays.__dataclass_fields__]
    out = {name: np.empty((basis.size, metric.grid.size), dtype=complex) for name in names}
    for a in range(N + 1):
        b = zb_stack * (z_powers[a] * decay)
        db = b.dzb(0)
        fld = _ratio(db, g)
        psi = fld.dzb(0)
        lap = -_ratio(_plus(db.dz(0), _mul(f_z, db)), g)
        div0 = _plus(psi.dz(0), _mul(gamma, psi))
        divf = _plus(div0, _mul(f_z, psi))
        rows = slice(a * (N + 1), (a + 1) * (N + 1))
        out["val"][rows] = b.value()
        out["dbar"][rows] = db.value()
        out["dbar2"][rows] = db.dzb(0).value()
        out["field"][rows] = fld.value()
        out["psi"][rows] = psi.value()
        out["lap"][rows] = lap.value()
        out["dbar_lap"][rows] = lap.dzb(0).value()
        out["divf_psi"][rows] = divf.value()
        out["lin0"][rows] = -_ratio(div0.dz(0), g).value()

    arrays = BasisArrays(**out)
    metric.cache[key] = arrays
    return arrays


def _gram(F: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """G_kl = Σ_n conj(F_kn) F_ln w_n."""
    G = (F.conj() * weights) @ F.T
    return 0.5 * (G + G.conj().T)


# --------------------------------------------------------------------------
# Pencils and eigensolves
# --------------------------------------------------------------------------

@dataclass(eq=False)
class Pencil:
    """Hermitian pencil (A, B) in scaled coordinates; basis coefficients = transform @ x."""

    A: np.ndarray
    B: np.ndarray
    transform: np.ndarray
    kind: str


@dataclass(eq=False)
class SpectrumResult:
    kind: str
    eigenvalues: np.ndarray
    vectors: np.ndarray     # basis coefficients, one column per eigenvalue
    residuals: np.ndarray
    clusters: np.ndarray
    diagnostics: Dict[str, float] = field(default_factory=dict)

    @property
    def multiplicities(self) -> List[int]:
        counts = Counter(self.clusters.tolist())
        return [counts[c] for c in sorted(counts)]

    def cluster_near(self, value: float) -> np.ndarray:
        """Indices of the cluster holding the eigenvalue closest to value."""
        nearest = int(np.argmin(np.abs(self.eigenvalues - value)))
        return np.nonzero(self.clusters == self.clusters[nearest])[0]

    def rows(self) -> List[Dict[str, object]]:
        return [
            {"index": i, "value": float(lam), "cluster": int(c), "residual": float(r), "kind": self.kind}
            for i, (lam, c, r) in enumerate(zip(self.eigenvalues, self.clusters, self.residuals))
        ]


def cluster_ids(values: Sequence[float], tolerance: float = CLUSTER_TOLERANCE) -> np.ndarray:
    """Consecutive ascending values within tolerance·max(1, |λ|) share a cluster id."""
    values = np.asarray(values, dtype=float)
    ids = np.zeros(values.size, dtype=int)
    for i in range(1, values.size):
        close = abs(values[i] - values[i - 1]) <= tolerance * max(1.0, abs(values[i]))
        ids[i] = ids[i - 1] if close else ids[i - 1] + 1
    return ids


def _jacobi_scaling(B: np.ndarray) -> np.ndarray:
    diag = np.real(np.diag(B))
    if np.any(diag <= 0):
        raise ConditioningError("Gram matrix has a non-positive diagonal entry")
    return 1.0 / np.sqrt(diag)


def assemble_laplacian_functions(grid: QuadratureGrid, basis: BasisSet, metric: MetricOnGrid) -> Pencil:
    """A_kl = ∫ g⁻¹ conj(∂_z̄b_k) ∂_z̄b_l e^f ω,  B_kl = ∫ conj(b_k) b_l e^f ω."""
    _check_consistent(grid, basis, metric)
    arrays = basis_arrays(basis, metric)
    weights = metric.measure(weighted=True)
    A = _gram(arrays.dbar, weights / metric.g_values)
    B = _gram(arrays.val, weights)
    d = _jacobi_scaling(B)
    scale = np.outer(d, d)
    return Pencil(A=A * scale, B=B * scale, transform=np.diag(d), kind="functions")


def closure_gram(basis: BasisSet, metric: MetricOnGrid) -> np.ndarray:
    """C_kl = ⟨∂̄η_k, ∂̄η_l⟩_f for the trial forms η_k = ∂̄b_k.

    (∂̄η)_{j̄k̄} = ∂_j̄η_k̄ − ∂_k̄η_j̄, paired with ½ g^{jj'} g^{kk'} and e^f ω.
    """
    arrays = basis_arrays(basis, metric)
    weights = metric.measure(weighted=True) / metric.g_values ** 2
    # derivative tensor (K, j̄, k̄, nodes); one antiholomorphic direction on CP¹
    D = arrays.dbar2[:, None, None, :]
    two_form = D - np.swapaxes(D, 1, 2)
    C = 0.5 * np.einsum("ajkn,bjkn,n->ab", two_form.conj(), two_form, weights)
    return 0.5 * (C + C.conj().T)


def assemble_laplacian_01forms(grid: QuadratureGrid, basis: BasisSet, metric: MetricOnGrid) -> Pencil:
    """Galerkin pencil for Δ_f on (0,1)-forms over the trial forms ∂̄b_k.

    ⟨Δ_f η, η⟩ = ‖∂̄η‖² + ‖∂̄*_f η‖². Constants map to the zero form, so the
    pencil is restricted to the range of the form Gram matrix.
    """
    _check_consistent(grid, basis, metric)
    arrays = basis_arrays(basis, metric)
    weights = metric.measure(weighted=True)
    inv_g = 1.0 / metric.g_values
    B = _gram(arrays.dbar, weights * inv_g)
    A = _gram(arrays.lap, weights) + closure_gram(basis, metric)

    d = _jacobi_scaling(B)
    scale = np.outer(d, d)
    vals, vecs = np.linalg.eigh(B * scale)
    keep = vals > SPECTRAL_TOLERANCE * 1e-4 * vals[-1]
    V = vecs[:, keep]
    A_r = V.conj().T @ (A * scale) @ V
    B_r = np.diag(vals[keep]).astype(complex)
    return Pencil(A=0.5 * (A_r + A_r.conj().T), B=B_r, transform=np.diag(d) @ V, kind="forms01")


def solve_pencil(pencil: Pencil, tolerance: float = CLUSTER_TOLERANCE) -> SpectrumResult:
    """Cholesky-reduced dense Hermitian eigensolve with residuals and clustering."""
    A, B = pencil.A, pencil.B
    try:
        scipy.linalg.cho_factor(B)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"Gram matrix is not positive definite: {exc}") from None
    extremes = np.linalg.eigvalsh(B)
    cond = float(extremes[-1] / extremes[0])
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ConditioningError(f"Gram condition number {cond:.3e} exceeds {COND_LIMIT:.1e}")
    try:
        lam, X = scipy.linalg.eigh(A, B)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"Eigensolve failed: {exc}") from None
    BX = B @ X
    residuals = np.linalg.norm(A @ X - BX * lam, axis=0) / np.linalg.norm(BX, axis=0)
    return SpectrumResult(
        kind=pencil.kind, eigenvalues=lam, vectors=pencil.transform @ X, residuals=residuals,
        clusters=cluster_ids(lam, tolerance), diagnostics={"condition": cond},
    )


def fubini_study_eigenvalues(count: int) -> np.ndarray:
    """l(l+1)/2 with multiplicity 2l+1."""
    out: List[float] = []
    level = 0
    while len(out) < count:
        out.extend([level * (level + 1) / 2.0] * (2 * level + 1))
        level += 1
    return np.array(out[:count])


def fubini_study_check(functions: "SpectrumResult", count: int = 15) -> "SpectralCheck":
    """Lowest eigenvalues and the first nonzero multiplicities against l(l+1)/2, 2l+1."""
    error = float(np.max(np.abs(functions.eigenvalues[:count] - fubini_study_eigenvalues(count))))
    multiplicities = functions.multiplicities[1:4]
    passed = error <= SPECTRAL_TOLERANCE and multiplicities == [3, 5, 7]
    return SpectralCheck("fubini_study_oracle", error, SPECTRAL_TOLERANCE, bool(passed),
                         f"nonzero multiplicities {multiplicities}")


# --------------------------------------------------------------------------
# Eigenvector diagnostics
# --------------------------------------------------------------------------

def holomorphy_residual(u: np.ndarray, basis: BasisSet, metric: MetricOnGrid) -> float:
    """‖∇″(∂̄u)♯‖ / ‖(∂̄u)♯‖ on the grid."""
    arrays = basis_arrays(basis, metric)
    area = metric.area
    X = u @ arrays.field
    dX = u @ arrays.psi
    den = float(np.sum(metric.g_values * np.abs(X) ** 2 * area))
    scale = float(np.sum(np.abs(u @ arrays.val) ** 2 * area))
    if den <= 1e-20 * max(scale, np.finfo(float).tiny):
        raise ZeroFieldError("(∂̄u)♯ vanishes on the grid; u is constant")
    return float(np.sqrt(np.sum(np.abs(dX) ** 2 * area) / den))


def harmonic_form_residual(c: np.ndarray, basis: BasisSet, metric: MetricOnGrid, q: int = 1) -> float:
    """‖η − (1/q)∂̄∂̄*_f η‖ / ‖η‖ for η = Σ c_k ∂̄b_k."""
    arrays = basis_arrays(basis, metric)
    weights = metric.measure(weighted=True) / metric.g_values
    eta = c @ arrays.dbar
    gap = eta - (c @ arrays.dbar_lap) / q
    norm = float(np.sum(np.abs(eta) ** 2 * weights))
    if norm == 0.0:
        raise ZeroFieldError("η vanishes on the grid")
    return float(np.sqrt(np.sum(np.abs(gap) ** 2 * weights) / norm))


@dataclass(eq=False)
class XiResult:
    values: np.ndarray
    coeffs: np.ndarray
    residual: float
    mean: float


def xi_psi(a: np.ndarray, basis: BasisSet, metric: MetricOnGrid) -> XiResult:
    """Solve ∂̄ξ = div_f ψ for ψ = ∂̄∇′a in the Galerkin space, with ∫ξ e^f ω = 0.

    Every T′-valued (0,1)-form on CP¹ is ∂̄ of a vector field and every vector
    field is ∇′a for some complex a, so ψ is given by the coefficients of a.
    """
    arrays = basis_arrays(basis, metric)
    weights = metric.measure(weighted=True)
    form_weights = weights / metric.g_values
    rhs = a @ arrays.divf_psi
    A = _gram(arrays.dbar, form_weights)
    r = (arrays.dbar.conj() * form_weights) @ rhs
    try:
        x, *_ = np.linalg.lstsq(A, r, rcond=None)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"ξ_ψ normal equations failed: {exc}") from None
    mean = complex(np.sum((x @ arrays.val) * weights) / np.sum(weights))
    x = x - mean * basis.constant()
    values = x @ arrays.val

    rhs_norm = float(np.sum(np.abs(rhs) ** 2 * form_weights))
    gap = float(np.sum(np.abs(x @ arrays.dbar - rhs) ** 2 * form_weights))
    residual = float(np.sqrt(gap / rhs_norm)) if rhs_norm > 0 else float(np.sqrt(gap))
    return XiResult(values=values, coeffs=x, residual=residual,
                    mean=abs(complex(np.sum(values * weights))))


def psi_norm(a: np.ndarray, basis: BasisSet, metric: MetricOnGrid) -> float:
    arrays = basis_arrays(basis, metric)
    return float(np.sum(np.abs(a @ arrays.psi) ** 2 * metric.measure(weighted=True)))


def hermitian_form_G(a: np.ndarray, basis: BasisSet, metric: MetricOnGrid) -> float:
    """∫ (|ψ|² − |ξ_ψ|²) e^f ω for ψ = ∂̄∇′a."""
    xi = xi_psi(a, basis, metric)
    weights = metric.measure(weighted=True)
    return psi_norm(a, basis, metric) - float(np.sum(np.abs(xi.values) ** 2 * weights))


def moment_map_pairing(v: np.ndarray, u: np.ndarray, basis: BasisSet,
                       metric: MetricOnGrid) -> Tuple[float, float, float]:
    """(lhs, rhs, relative residual) of the scalar-curvature moment map identity.

    ψ = ∂̄∇′v, ṡ = −(∂̄*div ψ + conj), lhs = ∫ ṡ u ω, rhs = 2ℜ∫ ψ conj(∂̄∇′u) ω.
    """
    arrays = basis_arrays(basis, metric)
    area = metric.area
    X = v @ arrays.lin0
    lhs = float(np.real(np.sum(-(X + X.conj()) * (u @ arrays.val) * area)))
    rhs = float(2.0 * np.real(np.sum((v @ arrays.psi) * (u @ arrays.psi).conj() * area)))
    scale = max(abs(lhs), abs(rhs))
    residual = abs(lhs - rhs) / scale if scale > 1e-14 else abs(lhs - rhs)
    return lhs, rhs, residual


def random_function(basis: BasisSet, metric: MetricOnGrid, rng: np.random.Generator,
                    real: bool = False) -> np.ndarray:
    """Random mean-zero coefficients, optionally of a real function."""
    c = (rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)) / np.sqrt(basis.size)
    if real:
        c = 0.5 * (c + c[basis.conjugation()].conj())
    arrays = basis_arrays(basis, metric)
    area = metric.area
    mean = complex(np.sum((c @ arrays.val) * area) / np.sum(area))
    if real:
        mean = mean.real
    return c - mean * basis.constant()


# --------------------------------------------------------------------------
# Full analysis and convergence
# --------------------------------------------------------------------------

@dataclass
class SpectralCheck:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "passed": self.passed, "detail": self.detail}


def _upper(name: str, value: float, tolerance: float, detail: str = "") -> SpectralCheck:
    return SpectralCheck(name, float(value), tolerance, bool(value <= tolerance), detail)


@dataclass
class SpectralAnalysis:
    metric: MetricOnGrid
    basis: BasisSet
    functions: SpectrumResult
    forms: SpectrumResult
    checks: List[SpectralCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def analyze_spectrum(grid: QuadratureGrid, basis: BasisSet, metric: MetricOnGrid, seed: int = 0,
                     samples: int = PSI_SAMPLES, pairs: int = MOMENT_PAIRS,
                     count: int = 15) -> SpectralAnalysis:
    """Eigenvalue bounds, holomorphy at λ = 1 and the global identities for one metric."""
    functions = solve_pencil(assemble_laplacian_functions(grid, basis, metric))
    forms = solve_pencil(assemble_laplacian_01forms(grid, basis, metric))
    lam = functions.eigenvalues
    checks: List[SpectralCheck] = [
        _upper("ricci_potential_relation", metric.relation_residual, IDENTITY_TOLERANCE),
        _upper("average_scalar_curvature", abs(average_scalar_curvature(metric) - 1.0), SPECTRAL_TOLERANCE),
        _upper("eigen_residual_functions", float(np.max(functions.residuals)), IDENTITY_TOLERANCE),
        _upper("eigen_residual_forms01", float(np.max(forms.residuals)), IDENTITY_TOLERANCE),
    ]

    zero = int(np.sum(np.abs(lam) <= SPECTRAL_TOLERANCE))
    checks.append(SpectralCheck("zero_multiplicity", zero, 1, zero == 1, "constants only"))
    nonzero = lam[zero:]
    checks.append(SpectralCheck("first_eigenvalue_functions", float(nonzero[0]), 1.0 - SPECTRAL_TOLERANCE,
                                bool(nonzero[0] >= 1.0 - SPECTRAL_TOLERANCE), "λ₁ ≥ 1"))
    checks.append(SpectralCheck("first_eigenvalue_forms01", float(forms.eigenvalues[0]),
                                1.0 - SPECTRAL_TOLERANCE,
                                bool(forms.eigenvalues[0] >= 1.0 - SPECTRAL_TOLERANCE), "λ₁ ≥ q = 1"))
    k = min(count, nonzero.size, forms.eigenvalues.size)
    checks.append(_upper("intertwining", float(np.max(np.abs(nonzero[:k] - forms.eigenvalues[:k]))),
                         SPECTRAL_TOLERANCE))

    cluster = functions.cluster_near(1.0)
    at_one = bool(abs(lam[cluster[0]] - 1.0) <= SPECTRAL_TOLERANCE)
    checks.append(SpectralCheck("eigenvalue_one_multiplicity", len(cluster), 3,
                                at_one and len(cluster) == 3, "holomorphic fields on CP¹"))
    if at_one:
        worst = max(holomorphy_residual(functions.vectors[:, i], basis, metric) for i in cluster)
        checks.append(_upper("holomorphy_residual", worst, HOLOMORPHY_TOLERANCE))
    form_cluster = forms.cluster_near(1.0)
    if abs(forms.eigenvalues[form_cluster[0]] - 1.0) <= SPECTRAL_TOLERANCE:
        worst = max(harmonic_form_residual(forms.vectors[:, i], basis, metric) for i in form_cluster)
        checks.append(_upper("equality_form_is_dbar_exact", worst, SPECTRAL_TOLERANCE))

    rng = np.random.default_rng(seed)
    worst_g = np.inf
    for _ in range(samples):
        a = random_function(basis, metric, rng)
        value = hermitian_form_G(a, basis, metric)
        worst_g = min(worst_g, value / max(psi_norm(a, basis, metric), np.finfo(float).tiny))
    if samples:
        checks.append(SpectralCheck("hermitian_form_positive", float(worst_g), -1e-10,
                                    bool(worst_g >= -1e-10), f"min G/‖ψ‖² over {samples} draws"))
    worst_mm = 0.0
    for _ in range(pairs):
        v = random_function(basis, metric, rng, real=True)
        u = random_function(basis, metric, rng, real=True)
        worst_mm = max(worst_mm, moment_map_pairing(v, u, basis, metric)[2])
    if pairs:
        checks.append(_upper("moment_map_pairing", worst_mm, SPECTRAL_TOLERANCE))

    functions.diagnostics["average_scalar_curvature"] = average_scalar_curvature(metric)
    return SpectralAnalysis(metric=metric, basis=basis, functions=functions, forms=forms, checks=checks)


def convergence_table(degrees: Sequence[int], perturbation: Perturbation,
                      grid: Optional[QuadratureGrid] = None, count: int = 15) -> List[Dict[str, float]]:
    """Error of the lowest eigenvalues against Fubini–Study values or the finest basis."""
    degrees = sorted(set(degrees))
    if (degrees[0] + 1) ** 2 < count:
        raise ConfigError(f"Basis degree {degrees[0]} has fewer than {count} functions")
    grid = grid if grid is not None else build_grid()
    metric = perturb_metric(perturbation, grid)
    spectra = {}
    for N in degrees:
        basis = BasisSet(N)
        spectra[N] = solve_pencil(assemble_laplacian_functions(grid, basis, metric)).eigenvalues[:count]
    reference = fubini_study_eigenvalues(count) if perturbation.eps == 0 else spectra[degrees[-1]]
    return [{"N": N, "size": (N + 1) ** 2, "error": float(np.max(np.abs(spectra[N] - reference)))}
            for N in degrees]


def is_monotone(table: Sequence[Dict[str, float]], floor: float = 1e-9) -> bool:
    """Errors never increase beyond the round-off floor as N grows."""
    errors = [row["error"] for row in table]
    return all(b <= a + floor for a, b in zip(errors, errors[1:]))


def plot_convergence(tables: Mapping[str, Sequence[Dict[str, float]]], path: str, title: str = "") -> str:
    """One semilog curve per metric label; static SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for label, table in tables.items():
        degrees = [row["N"] for row in table]
        errors = [max(row["error"], 1e-17) for row in table]
        ax.semilogy(degrees, errors, marker="o", label=label)
    if len(tables) > 1:
        ax.legend()
    ax.set_xlabel("basis degree N")
    ax.set_ylabel("max eigenvalue error")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path
