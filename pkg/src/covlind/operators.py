"""Dense complex operator algebra and Liouville-space machinery.

Operators are dense complex square matrices with a declared subsystem
dimension structure.  Superoperators act on column-stacked ("vec'd")
operators: the (a, b) entry of a d x d matrix maps to entry b*d + a of a
d^2 vector, so the map X -> A X B has matrix kron(B.T, A).

Qubit convention used throughout: basis order (|g>, |e>) with
sigma_z = |e><e| - |g><g| = diag(-1, +1) and sigma_minus = |g><e|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm as _scipy_expm

from .errors import ContractError, DimensionError, TruncationError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


def _as_matrix(x) -> np.ndarray:
    """Accept Operator, DensityMatrix or ndarray; return the complex matrix."""
    if isinstance(x, DensityMatrix):
        return x.op.data
    if isinstance(x, Operator):
        return x.data
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def _dims_of(x, default_flat=True):
    if isinstance(x, DensityMatrix):
        return x.op.dims
    if isinstance(x, Operator):
        return x.dims
    a = _as_matrix(x)
    return (a.shape[0],) if default_flat else None


@dataclass(frozen=True)
class Operator:
    """Dense complex square matrix with subsystem dimensions.

    ``dims`` lists the tensor factors; their product must equal the matrix
    dimension (e.g. ``(2, n_max + 1)`` for a qubit coupled to a truncated
    bosonic mode).
    """

    data: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        a = np.array(self.data, dtype=complex, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"operator must be square, got shape {a.shape}")
        dims = tuple(int(d) for d in self.dims) if self.dims else (a.shape[0],)
        if math.prod(dims) != a.shape[0]:
            raise DimensionError(
                f"dims {dims} do not multiply to matrix dimension {a.shape[0]}")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.data.conj().T, self.dims)

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return np.max(np.abs(self.data - self.data.conj().T)) <= tol

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def hs_norm(self) -> float:
        """Hilbert-Schmidt norm sqrt(tr(A^dag A))."""
        return float(np.linalg.norm(self.data))

    def __matmul__(self, other):
        return Operator(self.data @ _as_matrix(other), self.dims)

    def __add__(self, other):
        return Operator(self.data + _as_matrix(other), self.dims)

    def __sub__(self, other):
        return Operator(self.data - _as_matrix(other), self.dims)

    def __mul__(self, scalar):
        return Operator(self.data * scalar, self.dims)

    __rmul__ = __mul__

    def __neg__(self):
        return Operator(-self.data, self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated quantum state: unit trace, Hermitian, positive semi-definite."""

    op: Operator

    def __post_init__(self):
        a = self.op.data
        if abs(np.trace(a) - 1.0) > TRACE_TOL:
            raise ContractError(f"density matrix trace {np.trace(a)} != 1")
        if not self.op.is_hermitian():
            raise ContractError("density matrix is not Hermitian")
        wmin = float(np.linalg.eigvalsh(a)[0])
        if wmin < -POSITIVITY_TOL:
            raise ContractError(f"density matrix has eigenvalue {wmin} < 0")

    @classmethod
    def from_matrix(cls, data, dims: Sequence[int] = (),
                    trace_tol: float = TRACE_TOL,
                    herm_tol: float = HERMITICITY_TOL,
                    eig_tol: float = POSITIVITY_TOL) -> "DensityMatrix":
        """Build a state, allowing looser tolerances for integrated dynamics.

        The matrix is Hermitized and trace-normalized after the tolerance
        check so downstream exact identities (trace one) hold.
        """
        a = np.asarray(data, dtype=complex)
        tr = np.trace(a)
        if abs(tr - 1.0) > trace_tol:
            raise ContractError(f"trace {tr} deviates from 1 beyond {trace_tol}")
        if np.max(np.abs(a - a.conj().T)) > herm_tol:
            raise ContractError("matrix is not Hermitian within tolerance")
        a = 0.5 * (a + a.conj().T)
        wmin = float(np.linalg.eigvalsh(a)[0])
        if wmin < -eig_tol:
            raise ContractError(f"minimum eigenvalue {wmin} below -{eig_tol}")
        a = a / np.trace(a).real
        # clip the tiny negative tail so the validated invariants hold exactly
        if wmin < -POSITIVITY_TOL:
            w, v = np.linalg.eigh(a)
            w = np.clip(w, 0.0, None)
            a = (v * w) @ v.conj().T
            a /= np.trace(a).real
        return cls(Operator(a, dims))

    @classmethod
    def from_ket(cls, ket, dims: Sequence[int] = ()) -> "DensityMatrix":
        v = np.asarray(ket, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(Operator(np.outer(v, v.conj()), dims))

    @property
    def data(self) -> np.ndarray:
        return self.op.data

    @property
    def dims(self) -> tuple[int, ...]:
        return self.op.dims


@dataclass(frozen=True)
class Superoperator:
    """Matrix acting on vec'd operators (column-stacking convention)."""

    data: np.ndarray
    source_dim: int = 0

    def __post_init__(self):
        a = np.array(self.data, dtype=complex, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"superoperator must be square, got {a.shape}")
        d = int(self.source_dim) if self.source_dim else int(round(math.isqrt(a.shape[0])))
        if d * d != a.shape[0]:
            raise DimensionError(f"superoperator dimension {a.shape[0]} is not a perfect square")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)
        object.__setattr__(self, "source_dim", d)

    def apply(self, x):
        """Apply to an operator; returns an Operator with the input's dims."""
        a = _as_matrix(x)
        if a.shape[0] != self.source_dim:
            raise DimensionError(
                f"superoperator acts on dim {self.source_dim}, got {a.shape[0]}")
        out = unvec(self.data @ vec(a), self.source_dim)
        dims = _dims_of(x)
        return Operator(out, dims if dims is not None else ())

    def __matmul__(self, other):
        if isinstance(other, Superoperator):
            return Superoperator(self.data @ other.data, self.source_dim)
        return self.apply(other)

    def __add__(self, other):
        return Superoperator(self.data + other.data, self.source_dim)

    def __sub__(self, other):
        return Superoperator(self.data - other.data, self.source_dim)

    def __mul__(self, scalar):
        return Superoperator(self.data * scalar, self.source_dim)

    __rmul__ = __mul__

    @classmethod
    def zero(cls, d: int) -> "Superoperator":
        return cls(np.zeros((d * d, d * d), dtype=complex), d)

    @classmethod
    def identity(cls, d: int) -> "Superoperator":
        return cls(np.eye(d * d, dtype=complex), d)


# ---------------------------------------------------------------------------
# vec-ing and superoperator assembly
# ---------------------------------------------------------------------------

def vec(a) -> np.ndarray:
    """Column-stack an operator: entry (i, j) goes to position j*d + i."""
    return _as_matrix(a).reshape(-1, order="F")


def unvec(v, d: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if d is None:
        d = math.isqrt(v.size)
    if d * d != v.size:
        raise DimensionError(f"vector of length {v.size} is not a vec'd square matrix")
    return v.reshape((d, d), order="F")


def kron(a, b) -> Operator:
    """Kronecker product; subsystem dims concatenate."""
    am, bm = _as_matrix(a), _as_matrix(b)
    dims = tuple(_dims_of(a)) + tuple(_dims_of(b))
    return Operator(np.kron(am, bm), dims)


def sandwich_super(a, b) -> Superoperator:
    """Superoperator of X -> A X B, i.e. kron(B.T, A) on vec'd operators."""
    am, bm = _as_matrix(a), _as_matrix(b)
    if am.shape != bm.shape:
        raise DimensionError(f"incompatible shapes {am.shape} and {bm.shape}")
    return Superoperator(np.kron(bm.T, am), am.shape[0])


def commutator_super(h) -> Superoperator:
    """Superoperator of X -> [H, X]; Hermitian as a matrix for Hermitian H."""
    hm = _as_matrix(h)
    d = hm.shape[0]
    eye = np.eye(d)
    return Superoperator(np.kron(eye, hm) - np.kron(hm.T, eye), d)


def liouville_unitary(h, t: float) -> Superoperator:
    """Liouville-space map of rho -> U rho U^dag with U = exp(-i H t)."""
    u = matrix_exp(-1j * t * _as_matrix(h))
    return sandwich_super(u, u.conj().T)


# ---------------------------------------------------------------------------
# spectral decompositions
# ---------------------------------------------------------------------------

def hermitian_eig(h, tol: float = 1e-10):
    """Eigendecomposition of a Hermitian matrix with a deterministic phase.

    Returns (eigenvalues ascending, eigenvector matrix V with H V = V diag).
    Each eigenvector's first component of modulus > 1e-8 is made real and
    positive.  Within a degenerate block the basis is orthonormal but
    otherwise arbitrary.
    """
    hm = _as_matrix(h)
    if np.max(np.abs(hm - hm.conj().T)) > tol:
        raise ContractError("hermitian_eig requires a Hermitian matrix")
    w, v = np.linalg.eigh(hm)
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-8)
        if idx.size:
            phase = col[idx[0]] / abs(col[idx[0]])
            v[:, k] = col / phase
    return w, v


def matrix_exp(a) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring Pade via scipy)."""
    return _scipy_expm(_as_matrix(a))


# ---------------------------------------------------------------------------
# state operations and metrics
# ---------------------------------------------------------------------------

def partial_trace(rho, keep: int):
    """Trace out all subsystems except ``keep`` (index into dims)."""
    if isinstance(rho, DensityMatrix):
        dims, a = rho.dims, rho.data
    elif isinstance(rho, Operator):
        dims, a = rho.dims, rho.data
    else:
        raise DimensionError("partial_trace needs an Operator/DensityMatrix with dims")
    if len(dims) < 2:
        raise DimensionError("partial_trace requires at least two subsystems")
    if not 0 <= keep < len(dims):
        raise DimensionError(f"keep index {keep} out of range for dims {dims}")
    n = len(dims)
    t = a.reshape(dims + dims)
    # einsum contracts every subsystem index pair except the kept one
    letters = "abcdefghijkl"
    in_row = "".join(letters[i] for i in range(n))
    in_col = "".join(letters[i].upper() if i == keep else letters[i]
                     for i in range(n))
    out = letters[keep] + letters[keep].upper()
    reduced = np.einsum(f"{in_row}{in_col}->{out}", t)
    if isinstance(rho, DensityMatrix):
        return DensityMatrix(Operator(reduced, (dims[keep],)))
    return Operator(reduced, (dims[keep],))


def uhlmann_fidelity(rho, sigma) -> float:
    """Uhlmann fidelity F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionError("states must share a dimension")
    for m in (a, b):
        if abs(np.trace(m) - 1.0) > 1e-8 or np.max(np.abs(m - m.conj().T)) > 1e-8:
            raise ContractError("uhlmann_fidelity requires unit-trace Hermitian states")
    w, v = np.linalg.eigh(a)
    sqrt_a = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m = sqrt_a @ b @ sqrt_a
    ev = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    f = float(np.sum(np.sqrt(np.clip(ev, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def _shannon(p: np.ndarray) -> float:
    p = np.clip(np.real(p), 0.0, None)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def von_neumann_entropy(rho) -> float:
    return _shannon(np.linalg.eigvalsh(_as_matrix(rho)))


def coherence_rel_entropy(rho, basis) -> float:
    """Relative entropy of coherence in the given orthonormal basis.

    Equals S(diag of rho in the basis) - S_vn(rho); the basis is passed as
    a unitary whose columns are the reference states.
    """
    a = _as_matrix(rho)
    u = np.asarray(basis, dtype=complex)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
        raise ContractError("basis must be unitary")
    pops = np.diag(u.conj().T @ a @ u)
    return _shannon(pops) - von_neumann_entropy(a)


# ---------------------------------------------------------------------------
# elementary operators
# ---------------------------------------------------------------------------

def qubit_ops():
    """Pauli and ladder operators in the (|g>, |e>) basis."""
    sm = np.array([[0, 1], [0, 0]], dtype=complex)        # |g><e|
    sp = sm.conj().T
    sx = sm + sp
    sy = -1j * (sp - sm)
    sz = np.diag([-1.0, 1.0]).astype(complex)
    return {"sx": sx, "sy": sy, "sz": sz, "sp": sp, "sm": sm,
            "id": np.eye(2, dtype=complex)}


def destroy(n_levels: int) -> np.ndarray:
    """Bosonic annihilation operator truncated to n_levels Fock states."""
    return np.diag(np.sqrt(np.arange(1.0, n_levels)), 1).astype(complex)


def default_fock_truncation(alpha: complex) -> int:
    """Fock cutoff keeping the Poisson tail below ~1e-12 (10 sigma + margin)."""
    a = abs(alpha)
    return math.ceil(a * a + 10.0 * a + 20.0)


def coherent_state(alpha: complex, n_max: int | None = None) -> np.ndarray:
    """Normalized coherent-state amplitudes on Fock states 0..n_max.

    Amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!) are evaluated in
    log-space so very large |alpha| does not overflow; the truncated vector
    is renormalized.  An explicit n_max that loses more than 1e-12 of the
    weight raises TruncationError.
    """
    if n_max is None:
        n_max = default_fock_truncation(alpha)
    n = np.arange(n_max + 1)
    a = abs(alpha)
    if a == 0.0:
        amps = np.zeros(n_max + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    from scipy.special import gammaln
    log_mod = -0.5 * a * a + n * math.log(a) - 0.5 * gammaln(n + 1.0)
    amps = np.exp(log_mod) * np.exp(1j * n * np.angle(alpha))
    weight = float(np.sum(np.abs(amps) ** 2))
    deficit = 1.0 - weight
    if deficit > 1e-12:
        raise TruncationError(
            f"n_max={n_max} keeps only {weight:.15f} of the coherent weight",
            deficit=deficit)
    return amps / math.sqrt(weight)
