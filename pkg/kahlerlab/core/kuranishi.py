"""
Kuranishi solver for KahlerLab.

Formal power-series solutions φ(t) of the Maurer–Cartan equation
dφ = ½[φ, φ] on a finite-dimensional differential graded Lie algebra with an
inner product, in the gauge d*φ = 0 with harmonic linear term:

    φ(t) = Σ_{|I|=1} t^I φ_I + ½ d* G [φ(t), φ(t)]

All arithmetic is exact (fractions.Fraction). The harmonic part of the bracket
is checked at every order; a nonzero part is an obstruction and stops the solve.
"""

from __future__ import annotations

import glob
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import ConfigError, DGLAValidationError, GaugeError, ObstructionError, ShapeError
from .rational import (
    QMatrix,
    Vector,
    format_rational,
    is_zero_vector,
    parse_rational,
    vadd,
    vector,
    vscale,
    zero_vector,
)

try:
    from config import DGLA_DIR, KURANISHI_ORDER
except ImportError:
    DGLA_DIR = Path(__file__).resolve().parent.parent.parent / "dgla"
    KURANISHI_ORDER = 8

MultiIndex = Tuple[int, ...]
Element = Tuple[int, int]  # (degree, basis index)
HALF = Fraction(1, 2)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


# --------------------------------------------------------------------------
# DGLA
# --------------------------------------------------------------------------

@dataclass
class DGLA:
    name: str
    dims: Dict[int, int]
    d: Dict[int, QMatrix] = field(default_factory=dict)
    # (deg_a, i, deg_b, j) -> coefficient vector in degree deg_a + deg_b
    structure: Dict[Tuple[int, int, int, int], Vector] = field(default_factory=dict)
    inner: Dict[int, QMatrix] = field(default_factory=dict)
    basis_names: Dict[int, List[str]] = field(default_factory=dict)

    def __post_init__(self):
        for k, n in self.dims.items():
            self.d.setdefault(k, QMatrix.zeros(self.dim(k + 1), n))
            self.inner.setdefault(k, QMatrix.identity(n))
            self.basis_names.setdefault(k, [f"e{k}_{i + 1}" for i in range(n)])
            if self.d[k].shape != (self.dim(k + 1), n):
                raise ConfigError(f"Differential in degree {k} must be {self.dim(k + 1)}x{n}, "
                                  f"got {self.d[k].rows}x{self.d[k].cols}")
            if self.inner[k].shape != (n, n):
                raise ConfigError(f"Inner product in degree {k} must be {n}x{n}")

    @property
    def degrees(self) -> List[int]:
        return sorted(self.dims)

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def differential(self, degree: int) -> QMatrix:
        return self.d.get(degree, QMatrix.zeros(self.dim(degree + 1), self.dim(degree)))

    def basis_vector(self, degree: int, i: int) -> Vector:
        out = [Fraction(0)] * self.dim(degree)
        out[i] = Fraction(1)
        return tuple(out)

    def elements(self) -> Iterator[Element]:
        for k in self.degrees:
            for i in range(self.dims[k]):
                yield k, i

    def apply_d(self, degree: int, v: Vector) -> Vector:
        return self.differential(degree).apply(v)

    def bracket(self, deg_a: int, a: Vector, deg_b: int, b: Vector) -> Vector:
        """Bilinear extension of the structure constants."""
        out = zero_vector(self.dim(deg_a + deg_b))
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0:
                    continue
                coeffs = self.structure.get((deg_a, i, deg_b, j))
                if coeffs is not None:
                    out = vadd(out, vscale(x * y, coeffs))
        return out

    def name_of(self, degree: int, v: Vector) -> str:
        names = self.basis_names.get(degree, [])
        terms = [f"{format_rational(c)}*{names[i]}" for i, c in enumerate(v) if c != 0]
        return " + ".join(terms) or "0"


def _matrix_from_json(rows: Any, shape: Tuple[int, int], what: str) -> QMatrix:
    if not isinstance(rows, list):
        raise ConfigError(f"{what} must be a list of rows")
    try:
        matrix = QMatrix(shape[0], shape[1], rows) if rows else QMatrix.zeros(*shape)
    except (ValueError, ShapeError) as exc:
        raise ConfigError(f"{what}: {exc}") from None
    if matrix.shape != shape:
        raise ConfigError(f"{what} must be {shape[0]}x{shape[1]}")
    return matrix


def dgla_from_dict(data: Dict[str, Any], name: str = "") -> DGLA:
    """Build a DGLA from its JSON form.

    Fields: degrees, dims, differential {deg: rows}, bracket [[deg_a, i, deg_b, j, k, "p/q"], ...],
    optional inner_product {deg: rows} and basis {deg: names}. Bracket triples are taken
    literally; graded antisymmetry is validated, not filled in.
    """
    try:
        degrees = [int(k) for k in data["degrees"]]
        dims = [int(n) for n in data["dims"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"DGLA needs integer 'degrees' and 'dims': {exc}") from None
    if len(degrees) != len(dims) or len(set(degrees)) != len(degrees) or any(n < 0 for n in dims):
        raise ConfigError("DGLA 'degrees' and 'dims' must be equal-length, distinct and non-negative")
    dim_map = dict(zip(degrees, dims))

    def _dim(k: int) -> int:
        return dim_map.get(k, 0)

    d = {}
    for key, rows in (data.get("differential") or {}).items():
        k = int(key)
        if k not in dim_map:
            raise ConfigError(f"Differential given for unknown degree {k}")
        d[k] = _matrix_from_json(rows, (_dim(k + 1), _dim(k)), f"differential[{k}]")
    inner = {}
    for key, rows in (data.get("inner_product") or {}).items():
        k = int(key)
        if k not in dim_map:
            raise ConfigError(f"Inner product given for unknown degree {k}")
        inner[k] = _matrix_from_json(rows, (_dim(k), _dim(k)), f"inner_product[{k}]")

    structure: Dict[Tuple[int, int, int, int], Vector] = {}
    for entry in data.get("bracket") or []:
        try:
            da, i, db, j, k = (int(x) for x in entry[:5])
            coef = parse_rational(entry[5])
        except (TypeError, ValueError, IndexError) as exc:
            raise ConfigError(f"Unrecognized bracket entry {entry!r}: {exc}") from None
        target = da + db
        if not (0 <= i < _dim(da) and 0 <= j < _dim(db) and 0 <= k < _dim(target)):
            raise ConfigError(f"Bracket entry {entry!r} is out of range")
        key = (da, i, db, j)
        current = list(structure.get(key, zero_vector(_dim(target))))
        current[k] += coef
        structure[key] = tuple(current)

    names = {int(k): list(v) for k, v in (data.get("basis") or {}).items()}
    return DGLA(name=str(data.get("name") or name), dims=dim_map, d=d, structure=structure,
                inner=inner, basis_names=names)


def find_dgla_path(name_or_path: Union[str, Path]) -> Path:
    """Resolve a DGLA file path, a built-in name, or a built-in `name` field."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    explicit = Path(DGLA_DIR) / f"{name_or_path}.json"
    if explicit.exists():
        return explicit
    for path_str in glob.glob(str(Path(DGLA_DIR) / "*.json")):
        p = Path(path_str)
        try:
            with p.open("r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, ValueError):
            continue
        if str(data.get("name", "")).lower() == str(name_or_path).lower():
            return p
    raise FileNotFoundError(f"DGLA '{name_or_path}' not found (looked in '{DGLA_DIR}').")


def load_dgla(name_or_path: Union[str, Path]) -> DGLA:
    path = find_dgla_path(name_or_path)
    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except ValueError as exc:
        raise ConfigError(f"Malformed DGLA file {path}: {exc}") from None
    return dgla_from_dict(data, name=path.stem)


def list_builtin_dglas() -> List[str]:
    return sorted(Path(p).stem for p in glob.glob(str(Path(DGLA_DIR) / "*.json")))


# --------------------------------------------------------------------------
# Validation and Hodge theory
# --------------------------------------------------------------------------

@dataclass
class ValidationReport:
    name: str
    failures: List[Dict[str, Any]] = field(default_factory=list)
    checked: Dict[str, int] = field(default_factory=dict)
    hodge: Optional["HodgeData"] = None

    @property
    def valid(self) -> bool:
        return not self.failures

    def raise_if_invalid(self) -> None:
        if self.failures:
            axioms = sorted({f["axiom"] for f in self.failures})
            raise DGLAValidationError(f"DGLA '{self.name}' violates: {', '.join(axioms)}", self.failures)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "valid": self.valid, "checked": self.checked, "failures": self.failures}


def _element_label(D: DGLA, x: Element) -> str:
    return D.basis_names[x[0]][x[1]]


def _witness(axiom: str, D: DGLA, elements: Sequence[Element], residual: Vector, degree: int) -> Dict[str, Any]:
    return {
        "axiom": axiom,
        "witness": [_element_label(D, x) for x in elements],
        "residual": D.name_of(degree, residual) if degree in D.dims else [format_rational(c) for c in residual],
    }


def dgla_validate(D: DGLA, limit: int = 5) -> ValidationReport:
    """Check every axiom exactly on basis elements; compute Hodge data when valid."""
    report = ValidationReport(name=D.name)
    elems = list(D.elements())

    def fail(axiom: str, *args) -> None:
        if sum(1 for f in report.failures if f["axiom"] == axiom) < limit:
            report.failures.append(_witness(axiom, D, *args))

    for k in D.degrees:
        if not D.inner[k].is_positive_definite():
            report.failures.append({"axiom": "inner_product", "witness": [f"degree {k}"], "residual": ""})
        dd = D.differential(k + 1) @ D.differential(k)
        for i in range(D.dims[k]):
            column = dd.column(i) if dd.rows else ()
            if not is_zero_vector(column):
                fail("d_squared", [(k, i)], column, k + 2)
    report.checked["d_squared"] = len(elems)

    pairs = 0
    for x, y in itertools.product(elems, repeat=2):
        pairs += 1
        ex, ey = D.basis_vector(*x), D.basis_vector(*y)
        xy = D.bracket(x[0], ex, y[0], ey)
        yx = D.bracket(y[0], ey, x[0], ex)
        gap = vadd(xy, vscale(_sign(x[0] * y[0]), yx))
        if not is_zero_vector(gap):
            fail("antisymmetry", [x, y], gap, x[0] + y[0])
        # d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
        lhs = D.apply_d(x[0] + y[0], xy)
        rhs = vadd(D.bracket(x[0] + 1, D.apply_d(x[0], ex), y[0], ey),
                   vscale(_sign(x[0]), D.bracket(x[0], ex, y[0] + 1, D.apply_d(y[0], ey))))
        gap = vadd(lhs, vscale(-1, rhs))
        if not is_zero_vector(gap):
            fail("leibniz", [x, y], gap, x[0] + y[0] + 1)
    report.checked["antisymmetry"] = report.checked["leibniz"] = pairs

    triples = 0
    for x, y, z in itertools.product(elems, repeat=3):
        triples += 1
        ex, ey, ez = D.basis_vector(*x), D.basis_vector(*y), D.basis_vector(*z)
        # [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
        lhs = D.bracket(x[0], ex, y[0] + z[0], D.bracket(y[0], ey, z[0], ez))
        first = D.bracket(x[0] + y[0], D.bracket(x[0], ex, y[0], ey), z[0], ez)
        second = D.bracket(y[0], ey, x[0] + z[0], D.bracket(x[0], ex, z[0], ez))
        gap = vadd(lhs, vscale(-1, vadd(first, vscale(_sign(x[0] * y[0]), second))))
        if not is_zero_vector(gap):
            fail("jacobi", [x, y, z], gap, x[0] + y[0] + z[0])
    report.checked["jacobi"] = triples

    if report.valid:
        report.hodge = hodge_data(D)
    return report


@dataclass
class HodgeData:
    """Per degree: adjoint d* (degree k+1 -> k), Laplacian, harmonic projector, Green operator."""

    adjoint: Dict[int, QMatrix]
    laplacian: Dict[int, QMatrix]
    harmonic: Dict[int, QMatrix]
    green: Dict[int, QMatrix]

    def d_star(self, D: DGLA, degree: int) -> QMatrix:
        """d*: degree -> degree − 1."""
        return self.adjoint.get(degree - 1, QMatrix.zeros(D.dim(degree - 1), D.dim(degree)))


def hodge_data(D: DGLA) -> HodgeData:
    adjoint: Dict[int, QMatrix] = {}
    for k in D.degrees:
        if D.dim(k + 1) == 0 and k + 1 not in D.dims:
            adjoint[k] = QMatrix.zeros(D.dim(k), 0)
            continue
        inner_next = D.inner.get(k + 1, QMatrix.identity(D.dim(k + 1)))
        adjoint[k] = D.inner[k].inverse() @ D.differential(k).T @ inner_next

    laplacian, harmonic, green = {}, {}, {}
    for k in D.degrees:
        n = D.dims[k]
        lap = QMatrix.zeros(n, n)
        if k - 1 in D.dims:
            lap = lap + D.differential(k - 1) @ adjoint[k - 1]
        lap = lap + adjoint[k] @ D.differential(k)
        kernel = lap.nullspace()
        if kernel:
            N = QMatrix.from_columns(kernel, n)
            G = D.inner[k]
            H = N @ (N.T @ G @ N).inverse() @ N.T @ G
        else:
            H = QMatrix.zeros(n, n)
        laplacian[k] = lap
        harmonic[k] = H
        green[k] = (lap + H).inverse() - H
    return HodgeData(adjoint=adjoint, laplacian=laplacian, harmonic=harmonic, green=green)


# --------------------------------------------------------------------------
# Formal series
# --------------------------------------------------------------------------

def multi_indices(n: int, total: int) -> List[MultiIndex]:
    """All multi-indices of n parameters with |I| = total, in lexicographic descending order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n), total):
        index = [0] * n
        for c in combo:
            index[c] += 1
        out.append(tuple(index))
    return out


def _index_label(index: MultiIndex) -> str:
    return ",".join(str(i) for i in index)


@dataclass
class FormalSeries:
    """Σ_I t^I v_I with every coefficient in the same DGLA degree, truncated at |I| ≤ order."""

    n: int
    order: int
    degree: int
    dim: int
    coeffs: Dict[MultiIndex, Vector] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for index, v in self.coeffs.items():
            if len(index) != self.n:
                raise ShapeError(f"Multi-index {index} does not have {self.n} entries")
            if len(v) != self.dim:
                raise ShapeError(f"Coefficient at {index} has length {len(v)}, expected {self.dim}")
            if sum(index) <= self.order and not is_zero_vector(v):
                clean[tuple(index)] = tuple(v)
        self.coeffs = clean

    @classmethod
    def zero(cls, n: int, order: int, degree: int, dim: int) -> "FormalSeries":
        return cls(n, order, degree, dim)

    def coefficient(self, index: MultiIndex) -> Vector:
        return self.coeffs.get(tuple(index), zero_vector(self.dim))

    def at_order(self, k: int) -> Dict[MultiIndex, Vector]:
        return {i: v for i, v in self.coeffs.items() if sum(i) == k}

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def max_degree(self) -> int:
        return max((sum(i) for i in self.coeffs), default=0)

    def _check(self, other: "FormalSeries") -> None:
        if self.n != other.n:
            raise ShapeError(f"Series have {self.n} and {other.n} parameters")

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        self._check(other)
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise ShapeError(f"Cannot add series of degrees {self.degree} and {other.degree}")
        coeffs = dict(self.coeffs)
        for index, v in other.coeffs.items():
            coeffs[index] = vadd(coeffs.get(index, zero_vector(self.dim)), v)
        return FormalSeries(self.n, min(self.order, other.order), self.degree, self.dim, coeffs)

    def scale(self, c: Union[int, Fraction]) -> "FormalSeries":
        return FormalSeries(self.n, self.order, self.degree, self.dim,
                            {i: vscale(c, v) for i, v in self.coeffs.items()})

    def __neg__(self) -> "FormalSeries":
        return self.scale(-1)

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + (-other)

    def truncate(self, order: int) -> "FormalSeries":
        return FormalSeries(self.n, min(order, self.order), self.degree, self.dim, self.coeffs)

    def with_order(self, order: int) -> "FormalSeries":
        """Same coefficients (those with |I| <= order) declared through `order`."""
        return FormalSeries(self.n, order, self.degree, self.dim, self.coeffs)

    def apply(self, matrix: QMatrix, degree: int) -> "FormalSeries":
        """Apply a linear map coefficientwise; the result lives in `degree`."""
        if matrix.cols != self.dim:
            raise ShapeError(f"Cannot apply a {matrix.rows}x{matrix.cols} map to degree-{self.degree} series")
        return FormalSeries(self.n, self.order, degree, matrix.rows,
                            {i: matrix.apply(v) for i, v in self.coeffs.items()})

    def to_dict(self, D: Optional[DGLA] = None) -> Dict[str, Any]:
        terms = {}
        for index in sorted(self.coeffs, key=lambda i: (sum(i), tuple(-x for x in i))):
            v = self.coeffs[index]
            terms[_index_label(index)] = [format_rational(c) for c in v]
        out: Dict[str, Any] = {"parameters": self.n, "order": self.order, "degree": self.degree,
                               "coefficients": terms}
        if D is not None:
            out["readable"] = {k: D.name_of(self.degree, self.coeffs[tuple(int(x) for x in k.split(","))])
                               for k in terms}
        return out


def bracket_series(a: FormalSeries, b: FormalSeries, D: DGLA) -> FormalSeries:
    """[a, b] with multi-index convolution, truncated at the smaller order."""
    a._check(b)
    order = min(a.order, b.order)
    degree = a.degree + b.degree
    out: Dict[MultiIndex, Vector] = {}
    for I, x in a.coeffs.items():
        for J, y in b.coeffs.items():
            K = tuple(i + j for i, j in zip(I, J))
            if sum(K) > order:
                continue
            value = D.bracket(a.degree, x, b.degree, y)
            out[K] = vadd(out.get(K, zero_vector(D.dim(degree))), value)
    return FormalSeries(a.n, order, degree, D.dim(degree), out)


def apply_differential(a: FormalSeries, D: DGLA) -> FormalSeries:
    return a.apply(D.differential(a.degree), a.degree + 1)


def series_ops(a: FormalSeries, b: Optional[FormalSeries], op: str, D: Optional[DGLA] = None,
               matrix: Optional[QMatrix] = None, degree: Optional[int] = None,
               order: Optional[int] = None) -> FormalSeries:
    """Dispatch for add / bracket / apply / truncate."""
    if op == "add":
        return a + b
    if op == "bracket":
        if D is None:
            raise ShapeError("bracket needs the DGLA")
        return bracket_series(a, b, D)
    if op == "apply":
        if matrix is None:
            if D is None:
                raise ShapeError("apply needs a matrix or the DGLA (for d)")
            return apply_differential(a, D)
        return a.apply(matrix, a.degree if degree is None else degree)
    if op == "truncate":
        return a.truncate(a.order if order is None else order)
    raise ValueError(f"Unknown series op: {op!r}")


# --------------------------------------------------------------------------
# Solver
# --------------------------------------------------------------------------

@dataclass
class ObstructionRecord:
    order: int
    index: MultiIndex
    component: Vector

    def to_dict(self, D: DGLA) -> Dict[str, Any]:
        return {"order": self.order, "index": _index_label(self.index),
                "component": [format_rational(c) for c in self.component],
                "readable": D.name_of(2, self.component)}


@dataclass
class KuranishiSolution:
    dgla: DGLA
    phi: FormalSeries
    requested_order: int
    solved_order: int
    obstruction: Optional[ObstructionRecord] = None
    gauge_residual: Optional[FormalSeries] = None
    mc_residual: Optional[FormalSeries] = None

    @property
    def obstructed(self) -> bool:
        return self.obstruction is not None

    @property
    def order_flags(self) -> Dict[int, bool]:
        """Order -> obstructed; orders past the obstruction are not solved."""
        last = self.obstruction.order if self.obstruction else self.requested_order
        return {k: bool(self.obstruction and k == self.obstruction.order) for k in range(1, last + 1)}

    @property
    def exact(self) -> bool:
        return (not self.obstructed and self.gauge_residual is not None and self.gauge_residual.is_zero()
                and self.mc_residual is not None and self.mc_residual.is_zero())

    def to_dict(self) -> Dict[str, Any]:
        D = self.dgla
        return {
            "dgla": D.name,
            "requested_order": self.requested_order,
            "solved_order": self.solved_order,
            "phi": self.phi.to_dict(D),
            "obstruction": self.obstruction.to_dict(D) if self.obstruction else None,
            "order_flags": {str(k): v for k, v in self.order_flags.items()},
            "gauge_residual": self.gauge_residual.to_dict() if self.gauge_residual else None,
            "mc_residual": self.mc_residual.to_dict() if self.mc_residual else None,
            "exact": self.exact,
        }


def linear_series(D: DGLA, harmonic: Sequence[Sequence[Union[int, str, Fraction]]], order: int) -> FormalSeries:
    n = len(harmonic)
    coeffs = {}
    for p, raw in enumerate(harmonic):
        v = vector(raw)
        if len(v) != D.dim(1):
            raise ShapeError(f"Linear term {p + 1} has length {len(v)}, expected dim V¹ = {D.dim(1)}")
        index = tuple(int(q == p) for q in range(n))
        coeffs[index] = v
    return FormalSeries(n, order, 1, D.dim(1), coeffs)


def mc_residual(sol: Union[KuranishiSolution, FormalSeries], D: DGLA) -> FormalSeries:
    """dφ − ½[φ, φ] through the series order."""
    phi = sol.phi if isinstance(sol, KuranishiSolution) else sol
    return apply_differential(phi, D) - bracket_series(phi, phi, D).scale(HALF)


def gauge_residual(phi: FormalSeries, D: DGLA, hodge: HodgeData) -> FormalSeries:
    return phi.apply(hodge.d_star(D, 1), 0)


def kuranishi_solve(D: DGLA, harmonic: Sequence[Sequence[Union[int, str, Fraction]]],
                    order: int = KURANISHI_ORDER, raise_on_obstruction: bool = False) -> KuranishiSolution:
    """Solve order by order; halt at the first order whose bracket has a harmonic part."""
    if order < 1:
        raise ConfigError(f"Kuranishi order must be >= 1, got {order}")
    if not harmonic:
        raise ConfigError("At least one harmonic linear term is required")
    if 1 not in D.dims:
        raise ShapeError(f"DGLA '{D.name}' has no degree-1 space")
    report = dgla_validate(D)
    report.raise_if_invalid()
    hodge = report.hodge

    phi = linear_series(D, harmonic, order)
    H1 = hodge.harmonic[1]
    for index, v in phi.coeffs.items():
        if H1.apply(v) != v:
            raise GaugeError(f"Linear term at {_index_label(index)} is not harmonic: {D.name_of(1, v)}")

    H2 = hodge.harmonic.get(2)
    G2 = hodge.green.get(2)
    d_star = hodge.d_star(D, 2)
    obstruction = None
    solved = 1
    for k in range(2, order + 1):
        current = bracket_series(phi, phi, D)
        new: Dict[MultiIndex, Vector] = {}
        for index in multi_indices(phi.n, k):
            B = current.coefficient(index)
            if is_zero_vector(B):
                continue
            if H2 is not None:
                component = H2.apply(B)
                if not is_zero_vector(component):
                    obstruction = ObstructionRecord(order=k, index=index, component=component)
                    break
                B = G2.apply(B)
            new[index] = vscale(HALF, d_star.apply(B))
        if obstruction is not None:
            if raise_on_obstruction:
                raise ObstructionError(
                    f"Obstructed at order {k}: harmonic component {D.name_of(2, obstruction.component)}",
                    k, obstruction.component)
            break
        phi = FormalSeries(phi.n, order, 1, phi.dim, {**phi.coeffs, **new})
        solved = k

    phi = phi.truncate(solved)
    return KuranishiSolution(
        dgla=D, phi=phi, requested_order=order, solved_order=solved, obstruction=obstruction,
        gauge_residual=gauge_residual(phi, D, hodge), mc_residual=mc_residual(phi, D),
    )


def default_linear_terms(D: DGLA, hodge: Optional[HodgeData] = None) -> List[Vector]:
    """One parameter per harmonic basis vector of V¹ (kernel basis of Δ₁)."""
    hodge = hodge or hodge_data(D)
    return hodge.laplacian[1].nullspace()
