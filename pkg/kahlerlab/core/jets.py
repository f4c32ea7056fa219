"""
Truncated Taylor series ("jets") at a base point.

A jet lives in a JetSpace(m, order, t_order): monomials in the chart
variables z^1..z^m, their conjugates z̄^1..z̄^m and a deformation parameter t,
with z-degree at most `order` and t-degree at most `t_order`. Coefficients are
stored densely as a complex array of shape (n_monomials, *tensor_shape), so a
single Jet can carry a whole tensor (a metric matrix, a form, a batch of grid
nodes) while products stay exact on the stored coefficients.

Spaces never mix silently: combining jets from different spaces raises
ShapeError, and callers use align() or truncate() to make the common order
explicit.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from .errors import DegreeError, ShapeError, SingularInputError

# Reserved einsum letter for the monomial axis
MONOMIAL_AXIS = "Z"

VarId = Union[str, Tuple[str, int]]
Operand = Union["Jet", np.ndarray, complex, float, int]


class JetSpace:
    """Monomial basis and multiplication tables for one (m, order, t_order)."""

    def __init__(self, m: int, order: int, t_order: int = 0):
        if m < 1 or order < 0 or t_order < 0:
            raise ShapeError(f"Invalid jet space (m={m}, order={order}, t_order={t_order})")
        self.m = m
        self.order = order
        self.t_order = t_order
        self.nvars = 2 * m + 1

        exps = [
            e + (k,)
            for e in itertools.product(range(order + 1), repeat=2 * m)
            if sum(e) <= order
            for k in range(t_order + 1)
        ]
        exps.sort(key=lambda e: (sum(e[:-1]), e[-1], tuple(-x for x in e)))
        self.exponents = np.array(exps, dtype=np.int64).reshape(len(exps), self.nvars)
        self.size = len(exps)
        self.zdeg = self.exponents[:, :-1].sum(axis=1)
        self.tdeg = self.exponents[:, -1]

        bases = [order + 1] * (2 * m) + [t_order + 1]
        self._weights = np.cumprod([1] + bases[:-1]).astype(np.int64)
        codes = self.encode(self.exponents)
        self._sorter = np.argsort(codes)
        self._sorted_codes = codes[self._sorter]
        self._index: Dict[Tuple[int, ...], int] = {tuple(int(x) for x in e): i for i, e in enumerate(exps)}

        ok = (self.zdeg[:, None] + self.zdeg[None, :] <= order) & (
            self.tdeg[:, None] + self.tdeg[None, :] <= t_order
        )
        pi, pj = np.nonzero(ok)
        self.pair_i = pi
        self.pair_j = pj
        target = self.locate(self.exponents[pi] + self.exponents[pj])
        self.scatter = sparse.csr_matrix(
            (np.ones(len(pi)), (target, np.arange(len(pi)))), shape=(self.size, len(pi))
        )

        swapped = np.concatenate(
            [self.exponents[:, m:2 * m], self.exponents[:, :m], self.exponents[:, -1:]], axis=1
        )
        self.conj_perm = self.locate(swapped)

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.m, self.order, self.t_order)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, JetSpace) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __reduce__(self):
        return (jet_space, self.key)

    def __repr__(self) -> str:
        return f"JetSpace(m={self.m}, order={self.order}, t_order={self.t_order})"

    def encode(self, exps: np.ndarray) -> np.ndarray:
        return np.asarray(exps, dtype=np.int64) @ self._weights

    def locate(self, exps: np.ndarray) -> np.ndarray:
        """Indices of the given exponent rows; every row must belong to the space."""
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, self.nvars)
        codes = self.encode(exps)
        pos = np.searchsorted(self._sorted_codes, codes)
        pos = np.clip(pos, 0, self.size - 1)
        if np.any(self._sorted_codes[pos] != codes):
            raise ShapeError(f"Monomial outside {self!r}")
        return self._sorter[pos]

    def index(self, exps: Sequence[int]) -> int:
        try:
            return self._index[tuple(int(x) for x in exps)]
        except KeyError:
            raise ShapeError(f"Monomial {tuple(exps)} outside {self!r}") from None

    def derivative_table(self, var: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, "JetSpace"]:
        return _derivative_table(self.key, var)

    def truncation_table(self, order: int, t_order: int) -> Tuple[np.ndarray, np.ndarray, "JetSpace"]:
        return _truncation_table(self.key, order, t_order)


@lru_cache(maxsize=None)
def jet_space(m: int, order: int, t_order: int = 0) -> JetSpace:
    return JetSpace(m, order, t_order)


@lru_cache(maxsize=None)
def _derivative_table(key: Tuple[int, int, int], var: int):
    m, order, t_order = key
    space = jet_space(m, order, t_order)
    if var == 2 * m:
        if t_order == 0:
            raise DegreeError("t-derivative of a jet with t_order 0")
        target = jet_space(m, order, t_order - 1)
    else:
        if order == 0:
            raise DegreeError("z-derivative of a jet with order 0")
        target = jet_space(m, order - 1, t_order)
    src = np.nonzero(space.exponents[:, var] >= 1)[0]
    lowered = space.exponents[src].copy()
    factor = lowered[:, var].astype(float)
    lowered[:, var] -= 1
    dst = target.locate(lowered)
    return src, dst, factor, target


@lru_cache(maxsize=None)
def _truncation_table(key: Tuple[int, int, int], order: int, t_order: int):
    space = jet_space(*key)
    target = jet_space(space.m, order, t_order)
    keep = np.nonzero((space.zdeg <= order) & (space.tdeg <= t_order))[0]
    dst = target.locate(space.exponents[keep])
    return keep, dst, target


def parse_var(var: VarId, m: int) -> int:
    """Map a variable id to its slot: ("z", i) / ("zbar", i) 0-based, or "z1", "zbar2", "t"."""
    if isinstance(var, tuple):
        kind, i = var
    else:
        text = str(var).strip().lower()
        if text == "t":
            return 2 * m
        for prefix in ("zbar", "zb", "z"):
            if text.startswith(prefix) and text[len(prefix):].isdigit():
                kind, i = ("zbar" if prefix != "z" else "z"), int(text[len(prefix):]) - 1
                break
        else:
            raise ShapeError(f"Unrecognized variable id: {var!r}")
    if kind == "t":
        return 2 * m
    if not 0 <= i < m:
        raise ShapeError(f"Variable index {i} out of range for m={m}")
    if kind == "z":
        return i
    if kind in ("zbar", "zb"):
        return m + i
    raise ShapeError(f"Unrecognized variable id: {var!r}")


def _is_real_constant(value) -> bool:
    arr = np.asarray(value)
    return not np.iscomplexobj(arr) or bool(np.all(arr.imag == 0))


class Jet:
    """A truncated Taylor series with tensor-valued coefficients."""

    __array_ufunc__ = None
    __slots__ = ("space", "coeffs", "real")

    def __init__(self, space: JetSpace, coeffs, real: bool = False):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim == 0 or coeffs.shape[0] != space.size:
            raise ShapeError(f"Coefficient array of shape {coeffs.shape} does not fit {space!r}")
        self.space = space
        self.coeffs = coeffs
        self.real = bool(real)

    # -- construction -------------------------------------------------

    @classmethod
    def zeros(cls, space: JetSpace, shape: Tuple[int, ...] = ()) -> "Jet":
        return cls(space, np.zeros((space.size,) + tuple(shape), dtype=complex), real=True)

    @classmethod
    def constant(cls, space: JetSpace, value) -> "Jet":
        value = np.asarray(value, dtype=complex)
        coeffs = np.zeros((space.size,) + value.shape, dtype=complex)
        coeffs[0] = value
        return cls(space, coeffs, real=_is_real_constant(value))

    @classmethod
    def variable(cls, space: JetSpace, var: VarId) -> "Jet":
        slot = parse_var(var, space.m)
        exps = [0] * space.nvars
        exps[slot] = 1
        coeffs = np.zeros(space.size, dtype=complex)
        coeffs[space.index(exps)] = 1.0
        return cls(space, coeffs, real=(slot == 2 * space.m))

    @classmethod
    def from_terms(cls, space: JetSpace, terms: Dict[Tuple[int, ...], complex], real: bool = False) -> "Jet":
        coeffs = np.zeros(space.size, dtype=complex)
        for exps, value in terms.items():
            exps = tuple(exps)
            if len(exps) == 2 * space.m:
                exps = exps + (0,)
            coeffs[space.index(exps)] += value
        return cls(space, coeffs, real=real)

    @classmethod
    def random(cls, space: JetSpace, rng: np.random.Generator, shape: Tuple[int, ...] = (),
               real: bool = False, scale: float = 1.0) -> "Jet":
        """Coefficients drawn uniformly from the complex disc of radius `scale`."""
        size = (space.size,) + tuple(shape)
        radius = np.sqrt(rng.uniform(0.0, 1.0, size=size))
        angle = rng.uniform(0.0, 2.0 * np.pi, size=size)
        jet = cls(space, scale * radius * np.exp(1j * angle))
        return jet.realpart() if real else jet

    # -- basic properties ---------------------------------------------

    @property
    def m(self) -> int:
        return self.space.m

    @property
    def order(self) -> int:
        return self.space.order

    @property
    def t_order(self) -> int:
        return self.space.t_order

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.coeffs.shape[1:]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    def __repr__(self) -> str:
        return f"Jet(m={self.m}, order={self.order}, t_order={self.t_order}, shape={self.shape})"

    def value(self) -> np.ndarray:
        """Value at the base point (and t = 0)."""
        return self.coeffs[0].copy()

    def coefficient(self, exps: Sequence[int]) -> np.ndarray:
        exps = tuple(exps)
        if len(exps) == 2 * self.m:
            exps = exps + (0,)
        return self.coeffs[self.space.index(exps)].copy()

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    # -- arithmetic ---------------------------------------------------

    def _check_space(self, other: "Jet") -> None:
        if self.space != other.space:
            raise ShapeError(f"Jet spaces differ: {self.space!r} vs {other.space!r}")

    def _with_constant(self, value) -> Tuple[np.ndarray, np.ndarray]:
        value = np.asarray(value, dtype=complex)
        shape = np.broadcast_shapes(self.shape, value.shape)
        base = np.array(np.broadcast_to(_pad(self.coeffs, len(shape)), (self.space.size,) + shape), dtype=complex)
        return base, value

    def __add__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            self._check_space(other)
            ndim = max(self.ndim, other.ndim)
            return Jet(self.space, _pad(self.coeffs, ndim) + _pad(other.coeffs, ndim),
                       real=self.real and other.real)
        base, value = self._with_constant(other)
        base[0] = base[0] + value
        return Jet(self.space, base, real=self.real and _is_real_constant(value))

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.space, -self.coeffs, real=self.real)

    def __sub__(self, other: Operand) -> "Jet":
        return self + (-other)

    def __rsub__(self, other: Operand) -> "Jet":
        return (-self) + other

    def __mul__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            self._check_space(other)
            return Jet(self.space, _product(self.space, self.coeffs, other.coeffs),
                       real=self.real and other.real)
        value = np.asarray(other, dtype=complex)
        coeffs = _pad(self.coeffs, max(self.ndim, value.ndim)) * value
        return Jet(self.space, coeffs, real=self.real and _is_real_constant(value))

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "Jet":
        if isinstance(other, Jet):
            return self * other.inv()
        value = np.asarray(other, dtype=complex)
        if np.any(value == 0):
            raise SingularInputError("Division by zero constant")
        return self * (1.0 / value)

    def __rtruediv__(self, other: Operand) -> "Jet":
        return self.inv() * other

    def __pow__(self, k: int) -> "Jet":
        if not isinstance(k, (int, np.integer)):
            raise TypeError("Jet powers must be integers")
        if k < 0:
            return self.inv() ** (-k)
        result = Jet.constant(self.space, np.ones(self.shape))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __matmul__(self, other: Operand) -> "Jet":
        return jmat_mul(self, other)

    def __rmatmul__(self, other: Operand) -> "Jet":
        return jmat_mul(other, self)

    # -- tensor plumbing ----------------------------------------------

    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.space, self.coeffs[(slice(None),) + key], real=self.real)

    def _axis(self, axis: int) -> int:
        if not -self.ndim <= axis < self.ndim:
            raise ShapeError(f"Axis {axis} out of range for tensor shape {self.shape}")
        return axis % self.ndim + 1

    def sum(self, axis: Union[int, Tuple[int, ...], None] = None) -> "Jet":
        if axis is None:
            axes = tuple(range(1, self.ndim + 1))
        elif isinstance(axis, tuple):
            axes = tuple(self._axis(a) for a in axis)
        else:
            axes = (self._axis(axis),)
        return Jet(self.space, self.coeffs.sum(axis=axes), real=self.real)

    def moveaxis(self, source: int, destination: int) -> "Jet":
        return Jet(self.space, np.moveaxis(self.coeffs, self._axis(source), self._axis(destination)),
                   real=self.real)

    def swapaxes(self, a: int, b: int) -> "Jet":
        return Jet(self.space, np.swapaxes(self.coeffs, self._axis(a), self._axis(b)), real=self.real)

    def transpose(self, *axes: int) -> "Jet":
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        return Jet(self.space, np.transpose(self.coeffs, (0,) + tuple(self._axis(a) for a in axes)),
                   real=self.real)

    @property
    def T(self) -> "Jet":
        """Swap the last two tensor axes (matrix transpose)."""
        return self.swapaxes(-1, -2)

    def reshape(self, *shape: int) -> "Jet":
        return Jet(self.space, self.coeffs.reshape((self.space.size,) + tuple(shape)), real=self.real)

    # -- conjugation and realness -------------------------------------

    def conj(self) -> "Jet":
        """Swap z and z̄ exponents and conjugate coefficients."""
        return Jet(self.space, np.conj(self.coeffs[self.space.conj_perm]), real=self.real)

    def realpart(self) -> "Jet":
        return Jet(self.space, 0.5 * (self.coeffs + np.conj(self.coeffs[self.space.conj_perm])), real=True)

    def is_real(self, tol: float = 0.0) -> bool:
        gap = self.coeffs - np.conj(self.coeffs[self.space.conj_perm])
        return bool(np.max(np.abs(gap), initial=0.0) <= tol)

    # -- order management ---------------------------------------------

    def truncate(self, order: Optional[int] = None, t_order: Optional[int] = None) -> "Jet":
        order = self.order if order is None else order
        t_order = self.t_order if t_order is None else t_order
        if order > self.order or t_order > self.t_order:
            raise DegreeError(f"Cannot raise {self.space!r} to order {order}, t_order {t_order}")
        if (order, t_order) == (self.order, self.t_order):
            return self
        keep, dst, target = self.space.truncation_table(order, t_order)
        coeffs = np.zeros((target.size,) + self.shape, dtype=complex)
        coeffs[dst] = self.coeffs[keep]
        return Jet(target, coeffs, real=self.real)

    def at_t0(self) -> "Jet":
        """Drop every t-dependent term (restriction to t = 0)."""
        return self.truncate(t_order=0)

    def embed(self, t_order: int) -> "Jet":
        """Regard a t-independent jet as a jet with a larger t_order."""
        if t_order < self.t_order:
            raise DegreeError("embed() cannot lower t_order; use truncate()")
        if self.t_order != 0 and t_order != self.t_order:
            raise DegreeError("Only t-independent jets can be embedded")
        if t_order == self.t_order:
            return self
        target = jet_space(self.m, self.order, t_order)
        coeffs = np.zeros((target.size,) + self.shape, dtype=complex)
        coeffs[target.locate(self.space.exponents)] = self.coeffs
        return Jet(target, coeffs, real=self.real)

    # -- differentiation ----------------------------------------------

    def partial(self, var: VarId) -> "Jet":
        slot = parse_var(var, self.m)
        src, dst, factor, target = self.space.derivative_table(slot)
        coeffs = np.zeros((target.size,) + self.shape, dtype=complex)
        coeffs[dst] = self.coeffs[src] * factor.reshape((-1,) + (1,) * self.ndim)
        return Jet(target, coeffs)

    def dz(self, i: int) -> "Jet":
        return self.partial(("z", i))

    def dzb(self, i: int) -> "Jet":
        return self.partial(("zbar", i))

    def dt(self) -> "Jet":
        return self.partial(("t", 0))

    def grad_z(self) -> "Jet":
        """Holomorphic gradient; the derivative index becomes the new leading axis."""
        return stack([self.dz(i) for i in range(self.m)])

    def grad_zbar(self) -> "Jet":
        return stack([self.dzb(i) for i in range(self.m)])

    # -- nilpotent series ---------------------------------------------

    def _split(self) -> Tuple[np.ndarray, "Jet"]:
        c0 = self.coeffs[0]
        if np.any(c0 == 0):
            raise SingularInputError("Constant term vanishes")
        return c0, self - c0

    def _nilpotency(self) -> int:
        return self.order + self.t_order

    def inv(self) -> "Jet":
        c0, rest = self._split()
        x = rest * (-1.0 / c0)
        acc = Jet.constant(self.space, np.ones(self.shape))
        term = acc
        for _ in range(self._nilpotency()):
            term = term * x
            acc = acc + term
        return Jet(self.space, (acc * (1.0 / c0)).coeffs, real=self.real)

    def log(self) -> "Jet":
        c0, rest = self._split()
        x = rest * (1.0 / c0)
        acc = Jet.constant(self.space, np.log(c0))
        term = Jet.constant(self.space, np.ones(self.shape))
        for k in range(1, self._nilpotency() + 1):
            term = term * x
            acc = acc + term * ((-1.0) ** (k + 1) / k)
        positive = bool(np.all(np.real(c0) > 0)) and _is_real_constant(c0)
        return Jet(self.space, acc.coeffs, real=self.real and positive)

    def exp(self) -> "Jet":
        c0 = self.coeffs[0]
        x = self - c0
        acc = Jet.constant(self.space, np.ones(self.shape))
        term = acc
        for k in range(1, self._nilpotency() + 1):
            term = term * x * (1.0 / k)
            acc = acc + term
        return Jet(self.space, (acc * np.exp(c0)).coeffs, real=self.real)


def _pad(coeffs: np.ndarray, ndim: int) -> np.ndarray:
    """Insert unit tensor axes after the monomial axis so shapes broadcast from the right."""
    missing = ndim - (coeffs.ndim - 1)
    if missing <= 0:
        return coeffs
    return coeffs.reshape(coeffs.shape[:1] + (1,) * missing + coeffs.shape[1:])


def _product(space: JetSpace, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ndim = max(a.ndim, b.ndim) - 1
    a, b = _pad(a, ndim), _pad(b, ndim)
    contrib = a[space.pair_i] * b[space.pair_j]
    tail = contrib.shape[1:]
    out = space.scatter @ contrib.reshape(len(space.pair_i), -1)
    return np.asarray(out).reshape((space.size,) + tail)


def jet_einsum(subscripts: str, *operands: Operand) -> Jet:
    """einsum over tensor axes; at least one operand must be a Jet.

    Jet-Jet contractions are truncated products, so the monomial axis is
    never summed. An explicit '->' output is required.
    """
    if "->" not in subscripts:
        raise ShapeError("jet_einsum needs an explicit output ('->')")
    inputs, output = subscripts.replace(" ", "").split("->")
    subs = inputs.split(",")
    if len(subs) != len(operands) or not 1 <= len(operands) <= 2:
        raise ShapeError(f"jet_einsum takes one or two operands, got {subscripts!r}")
    if MONOMIAL_AXIS in subscripts:
        raise ShapeError(f"Index letter {MONOMIAL_AXIS!r} is reserved")
    out = MONOMIAL_AXIS + output

    if len(operands) == 1:
        (a,) = operands
        return Jet(a.space, np.einsum(f"{MONOMIAL_AXIS}{subs[0]}->{out}", a.coeffs))

    a, b = operands
    if isinstance(a, Jet) and isinstance(b, Jet):
        a._check_space(b)
        space = a.space
        contrib = np.einsum(f"{MONOMIAL_AXIS}{subs[0]},{MONOMIAL_AXIS}{subs[1]}->{out}",
                            a.coeffs[space.pair_i], b.coeffs[space.pair_j])
        tail = contrib.shape[1:]
        coeffs = np.asarray(space.scatter @ contrib.reshape(len(space.pair_i), -1))
        return Jet(space, coeffs.reshape((space.size,) + tail))
    if isinstance(a, Jet):
        return Jet(a.space, np.einsum(f"{MONOMIAL_AXIS}{subs[0]},{subs[1]}->{out}",
                                      a.coeffs, np.asarray(b, dtype=complex)))
    if isinstance(b, Jet):
        return Jet(b.space, np.einsum(f"{subs[0]},{MONOMIAL_AXIS}{subs[1]}->{out}",
                                      np.asarray(a, dtype=complex), b.coeffs))
    raise ShapeError("jet_einsum needs at least one Jet operand")


def stack(jets: Sequence[Jet], axis: int = 0) -> Jet:
    jets = list(jets)
    if not jets:
        raise ShapeError("Cannot stack an empty sequence")
    for j in jets[1:]:
        jets[0]._check_space(j)
    ndim = jets[0].ndim + 1
    axis = axis % ndim + 1
    return Jet(jets[0].space, np.stack([j.coeffs for j in jets], axis=axis),
               real=all(j.real for j in jets))


def block(rows: Sequence[Sequence[Jet]]) -> Jet:
    """Assemble a block matrix from jets whose last two axes are matrix axes."""
    first = rows[0][0]
    for row in rows:
        for j in row:
            first._check_space(j)
    return Jet(first.space, np.block([[j.coeffs for j in row] for row in rows]))


def align(*jets: Jet) -> Tuple[Jet, ...]:
    """Truncate all jets to their common (order, t_order)."""
    if not jets:
        return ()
    m = jets[0].m
    if any(j.m != m for j in jets):
        raise ShapeError("Cannot align jets with different chart dimensions")
    order = min(j.order for j in jets)
    t_order = min(j.t_order for j in jets)
    return tuple(j.truncate(order, t_order) for j in jets)


# -- matrix operations on the trailing two axes -----------------------------

def aligned_einsum(subscripts: str, *operands: Operand) -> Jet:
    """jet_einsum after truncating the Jet operands to their common order."""
    jets = [op for op in operands if isinstance(op, Jet)]
    if len(jets) > 1:
        aligned = iter(align(*jets))
        operands = tuple(next(aligned) if isinstance(op, Jet) else op for op in operands)
    return jet_einsum(subscripts, *operands)


def aligned_add(a: Jet, b: Jet) -> Jet:
    a, b = align(a, b)
    return a + b


def jmat_mul(a: Operand, b: Operand) -> Jet:
    return jet_einsum("...ij,...jk->...ik", a, b)


def _square(M: Jet) -> int:
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise ShapeError(f"Expected a square jet matrix, got shape {M.shape}")
    return M.shape[-1]


def jmat_det(M: Jet) -> Jet:
    """Determinant by the Leibniz expansion (exact on stored coefficients)."""
    n = _square(M)
    total = None
    for perm in itertools.permutations(range(n)):
        sign = perm_sign(perm)
        term = M[..., 0, perm[0]]
        for i in range(1, n):
            term = term * M[..., i, perm[i]]
        term = term if sign > 0 else -term
        total = term if total is None else total + term
    return total


def jmat_inverse(M: Jet) -> Jet:
    """Neumann-series inverse around the constant matrix."""
    n = _square(M)
    M0 = M.value()
    try:
        M0inv = np.linalg.inv(M0)
    except np.linalg.LinAlgError as exc:
        raise SingularInputError(f"Constant term of the jet matrix is singular: {exc}") from None
    if not np.all(np.isfinite(M0inv)):
        raise SingularInputError("Constant term of the jet matrix is singular")
    X = jmat_mul(-M0inv, M - M0)
    eye = Jet.constant(M.space, np.broadcast_to(np.eye(n), M.shape))
    acc, term = eye, eye
    for _ in range(M.order + M.t_order):
        term = jmat_mul(term, X)
        acc = acc + term
    return jmat_mul(acc, M0inv)


def jmat_logdet(M: Jet) -> Jet:
    return jmat_det(M).log()


def jmat_ops(M: Jet, op: str, other: Optional[Operand] = None) -> Jet:
    """Dispatch for {mul, inverse, det, logdet}."""
    if op == "mul":
        if other is None:
            raise ShapeError("mul needs a second operand")
        return jmat_mul(M, other)
    if op == "inverse":
        return jmat_inverse(M)
    if op == "det":
        return jmat_det(M)
    if op == "logdet":
        return jmat_logdet(M)
    raise ValueError(f"Unknown jet matrix op: {op!r}")


def jet_arithmetic(a: Jet, b: Optional[Operand], op: str) -> Jet:
    """Dispatch for {add, mul, div, log, exp, conj}; unary ops ignore `b`."""
    if op in ("add", "mul", "div") and b is None:
        raise ShapeError(f"{op} needs a second operand")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "log":
        return a.log()
    if op == "exp":
        return a.exp()
    if op == "conj":
        return a.conj()
    raise ValueError(f"Unknown jet op: {op!r}")


def jet_partial(a: Jet, var: VarId) -> Jet:
    return a.partial(var)


def perm_sign(perm: Iterable[int]) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign

