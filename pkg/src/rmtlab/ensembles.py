"""Samplers for the random matrix models, plus deterministic ingredients.

All samplers take an ``rng`` argument that may be an
:class:`~rmtlab.rng.RngStream`, a ``numpy`` Generator or an int seed, and
are pure functions of it: drawing twice from the same stream gives
bit-identical matrices.

Normalizations
--------------
GUE
    diagonal ``N(0, 1/n)``; strict upper triangle with independent real and
    imaginary parts ``N(0, 1/(2n))``.  Spectrum fills ``[-2, 2]``.
GOE
    default: diagonal ``N(0, 2/n)``, off-diagonal ``N(0, 1/n)`` so that the
    semicircle is again on ``[-2, 2]``.  ``paper_literal_goe=True`` uses
    diagonal variance ``1/n`` and off-diagonal variance ``1/(sqrt(2) n)``.
Wishart
    ``X`` is ``m x n`` with unit-variance entries, ``S = X^* X / m``.
Ginibre
    i.i.d. standard complex Gaussian entries (``E|g|^2 = 1``); divide by
    ``sqrt(n)`` before taking spectra (:func:`sample_spectrum` does this).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from . import matcore
from .errors import InvalidSpec, ShapeMismatch
from .limits import AtomicMeasure
from .rng import as_generator

KINDS = ("GUE", "GOE", "WignerGeneric", "Wishart", "Haar", "HaarPower",
         "RandomizedSum", "Compression", "QuantumSpinGlass", "Ginibre")
GROUPS = ("O", "SO", "U", "SU", "Sp")
ENTRY_DISTS = ("gaussian", "uniform")
FIELDS = ("complex", "real")
INGREDIENTS = ("signs", "equispaced", "zero")

QSG_MAX_QUBITS = 13

PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class EnsembleSpec:
    """Which ensemble to draw and with which parameters.

    ``m`` is the Wishart row count (``X`` is ``m x n``) or the HaarPower
    exponent.  ``k`` is the compression rank.  ``group`` applies to Haar,
    HaarPower, RandomizedSum and Compression (the last two use ``U`` or
    ``O``).  For QuantumSpinGlass ``n`` is the number of qubits.
    """

    kind: str
    n: int
    m: int | None = None
    k: int | None = None
    group: str = "U"
    entry: str = "gaussian"
    field: str = "complex"
    a_tag: str = "signs"
    b_tag: str = "zero"
    paper_literal_goe: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown ensemble kind {self.kind!r}")
        if int(self.n) < 1:
            raise InvalidSpec("n must be >= 1")
        if self.group not in GROUPS:
            raise InvalidSpec(f"unknown group {self.group!r}")
        if self.entry not in ENTRY_DISTS:
            raise InvalidSpec(f"unknown entry distribution {self.entry!r}")
        if self.field not in FIELDS:
            raise InvalidSpec(f"unknown field {self.field!r}")
        for tag in (self.a_tag, self.b_tag):
            if tag not in INGREDIENTS:
                raise InvalidSpec(f"unknown ingredient tag {tag!r}")
        n = self.n
        if self.kind == "Wishart":
            if self.m is None or not self.m >= n:
                raise InvalidSpec(f"Wishart needs m >= n (got m={self.m}, n={n})")
        elif self.kind == "HaarPower":
            if self.m is None or not 1 <= self.m <= n:
                raise InvalidSpec(f"HaarPower needs 1 <= m <= n (got m={self.m}, n={n})")
        elif self.kind == "Compression":
            if self.k is None or not 1 <= self.k <= n:
                raise InvalidSpec(f"Compression needs 1 <= k <= n (got k={self.k}, n={n})")
        elif self.kind == "QuantumSpinGlass":
            if not 3 <= n <= QSG_MAX_QUBITS:
                raise InvalidSpec(f"QuantumSpinGlass needs 3 <= qubits <= {QSG_MAX_QUBITS}")
        if self.kind in ("RandomizedSum", "Compression") and self.group not in ("U", "O"):
            raise InvalidSpec("randomized sums and compressions use group U or O")

    @property
    def tag(self) -> str:
        """Stream tag: the kind plus every parameter that changes the law."""
        parts = [self.kind]
        if self.kind in ("Haar", "HaarPower", "RandomizedSum", "Compression"):
            parts.append(self.group)
        if self.m is not None:
            parts.append(f"m{self.m}")
        if self.k is not None:
            parts.append(f"k{self.k}")
        if self.kind == "WignerGeneric":
            parts.append(self.entry)
        if self.kind in ("WignerGeneric", "Wishart"):
            parts.append(self.field)
        if self.kind in ("RandomizedSum", "Compression"):
            parts += [self.a_tag, self.b_tag]
        if self.paper_literal_goe:
            parts.append("literal")
        return "/".join(parts)

    @property
    def matrix_size(self) -> int:
        if self.kind == "QuantumSpinGlass":
            return 2 ** self.n
        if self.kind == "Compression":
            return self.k
        if self.kind in ("Haar", "HaarPower") and self.group == "Sp":
            return 2 * self.n
        return self.n

    @property
    def normal(self) -> bool:
        """Whether the sampled matrix is normal (Lipschitz spectral map)."""
        return self.kind != "Ginibre"

    def with_n(self, n: int) -> "EnsembleSpec":
        """Same ensemble at dimension ``n``.

        Wishart keeps the aspect ratio ``n/m`` and Compression the ratio
        ``k/n`` (both rounded); the HaarPower exponent is kept as is.
        """
        if self.kind == "Wishart":
            return replace(self, n=n, m=max(n, int(round(n * self.m / self.n))))
        if self.kind == "Compression":
            return replace(self, n=n, k=min(n, max(1, int(round(n * self.k / self.n)))))
        return replace(self, n=n)


# --- Wigner ---------------------------------------------------------------

def _centered(g: np.random.Generator, size, var: float, entry: str) -> np.ndarray:
    if entry == "gaussian":
        return g.standard_normal(size) * np.sqrt(var)
    half_width = np.sqrt(3.0 * var)
    return g.uniform(-half_width, half_width, size)


def sample_wigner(spec: EnsembleSpec, rng) -> np.ndarray:
    """Hermitian Wigner matrix with the GUE/GOE variance profile."""
    if spec.kind not in ("GUE", "GOE", "WignerGeneric"):
        raise InvalidSpec(f"{spec.kind} is not a Wigner ensemble")
    g = as_generator(rng)
    n = spec.n
    iu = np.triu_indices(n, 1)
    complex_field = spec.kind == "GUE" or (spec.kind == "WignerGeneric" and spec.field == "complex")
    entry = spec.entry if spec.kind == "WignerGeneric" else "gaussian"
    if complex_field:
        d = _centered(g, n, 1.0 / n, entry)
        re = _centered(g, len(iu[0]), 1.0 / (2 * n), entry)
        im = _centered(g, len(iu[0]), 1.0 / (2 * n), entry)
        M = np.zeros((n, n), dtype=complex)
        M[iu] = re + 1j * im
    else:
        if spec.paper_literal_goe:
            var_d, var_o = 1.0 / n, 1.0 / (np.sqrt(2.0) * n)
        else:
            var_d, var_o = 2.0 / n, 1.0 / n
        d = _centered(g, n, var_d, entry)
        off = _centered(g, len(iu[0]), var_o, entry)
        M = np.zeros((n, n))
        M[iu] = off
    M = M + M.conj().T
    M[np.diag_indices(n)] = d
    return M


# --- Wishart --------------------------------------------------------------

def sample_wishart(spec: EnsembleSpec, rng) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(S, X)`` with ``S = X^* X / m``."""
    if spec.kind != "Wishart":
        raise InvalidSpec(f"{spec.kind} is not Wishart")
    g = as_generator(rng)
    m, n = spec.m, spec.n
    if spec.field == "complex":
        X = (g.standard_normal((m, n)) + 1j * g.standard_normal((m, n))) / np.sqrt(2.0)
    else:
        X = g.standard_normal((m, n))
    S = X.conj().T @ X / m
    S = 0.5 * (S + S.conj().T)
    return S, X


# --- Haar measure on the compact groups -----------------------------------

def _haar_orthogonal(g: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(g.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def _haar_unitary(g: np.random.Generator, n: int) -> np.ndarray:
    Z = (g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def _symplectic_partner(V: np.ndarray) -> np.ndarray:
    """``-J conj(V)`` for ``J = [[0, I], [-I, 0]]``."""
    n = V.shape[0] // 2
    Vc = V.conj()
    return np.concatenate([-Vc[n:], Vc[:n]], axis=0)


def _haar_symplectic(g: np.random.Generator, n: int) -> np.ndarray:
    # quaternionic Gram-Schmidt: each new Gaussian column is orthogonalized
    # against all earlier columns and their quaternionic partners
    dim = 2 * n
    G = (g.standard_normal((dim, n)) + 1j * g.standard_normal((dim, n))) / np.sqrt(2.0)
    V = np.zeros((dim, n), dtype=complex)
    W = np.zeros((dim, n), dtype=complex)
    for k in range(n):
        v = G[:, k]
        basis = np.concatenate([V[:, :k], W[:, :k]], axis=1)
        for _ in range(2):
            v = v - basis @ (basis.conj().T @ v)
        v = v / np.linalg.norm(v)
        V[:, k] = v
        W[:, k] = _symplectic_partner(v[:, None])[:, 0]
    return np.concatenate([V, W], axis=1)


def symplectic_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def sample_haar(group: str, n: int, rng) -> np.ndarray:
    """Haar-distributed element of O(n), SO(n), U(n), SU(n) or Sp(n).

    ``Sp(n)`` is returned as a ``2n x 2n`` complex unitary matrix ``U`` with
    ``U^T J U = J``.
    """
    if group not in GROUPS:
        raise InvalidSpec(f"unknown group {group!r}")
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    g = as_generator(rng)
    if group == "O":
        return _haar_orthogonal(g, n)
    if group == "SO":
        Q = _haar_orthogonal(g, n)
        if np.linalg.det(Q) < 0:
            Q[0, :] *= -1.0
        return Q
    if group == "U":
        return _haar_unitary(g, n)
    if group == "SU":
        U = _haar_unitary(g, n)
        det = np.linalg.det(U)
        return U / np.exp(1j * np.angle(det) / n)
    return _haar_symplectic(g, n)


def unitarity_defect(U) -> float:
    U = np.asarray(U)
    return matcore.hs_norm(U.conj().T @ U - np.eye(U.shape[0]))


def sample_haar_power(group: str, n: int, m: int, rng) -> np.ndarray:
    """``M^m`` for Haar ``M``, by repeated multiplication."""
    if not 1 <= m <= n:
        raise InvalidSpec(f"need 1 <= m <= n, got m={m}, n={n}")
    M = sample_haar(group, n, rng)
    P = M.copy()
    for _ in range(m - 1):
        P = P @ M
    if unitarity_defect(P) > 1e-8 * P.shape[0]:
        raise InvalidSpec("matrix power lost unitarity beyond 1e-8 * n")
    return P


# --- randomized sums and compressions --------------------------------------

def randomized_sum(A, B, U) -> np.ndarray:
    """``U A U^* + B``, re-Hermitized."""
    A = matcore.hermitian_view(A)
    B = matcore.hermitian_view(B)
    U = matcore.as_matrix(U, square=True)
    if not A.shape == B.shape == U.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape}, {B.shape}, {U.shape}")
    M = U @ A @ U.conj().T + B
    return 0.5 * (M + M.conj().T)


def compress(A, U, k: int) -> np.ndarray:
    """Top-left ``k x k`` block of ``U A U^*``."""
    A = matcore.hermitian_view(A)
    U = matcore.as_matrix(U, square=True)
    n = A.shape[0]
    if U.shape != A.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape} vs {U.shape}")
    if not 1 <= k <= n:
        raise InvalidSpec(f"need 1 <= k <= n, got k={k}, n={n}")
    Uk = U[:k]
    M = Uk @ A @ Uk.conj().T
    return 0.5 * (M + M.conj().T)


def ingredient_matrix(tag: str, n: int) -> np.ndarray:
    """Deterministic Hermitian ingredient: ``signs``, ``equispaced`` or ``zero``."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    if tag == "signs":
        d = np.where(np.arange(n) < (n + 1) // 2, 1.0, -1.0)
    elif tag == "equispaced":
        d = np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)
    elif tag == "zero":
        d = np.zeros(n)
    else:
        raise InvalidSpec(f"unknown ingredient tag {tag!r}")
    return np.diag(d).astype(complex)


# --- quantum spin glass ----------------------------------------------------

def _pauli_word(n_qubits: int, j: int, a: int, b: int):
    """Rows, cols and values of ``sigma_j^(a) sigma_{j+1}^(b)`` (0-based j).

    Qubit 0 is the most significant tensor factor.
    """
    dim = 2 ** n_qubits
    cols = np.arange(dim)
    rows = cols.copy()
    vals = np.ones(dim, dtype=complex)
    # apply the right factor first; the two act on different qubits and commute
    for qubit, kind in (((j + 1) % n_qubits, b), (j, a)):
        shift = n_qubits - 1 - qubit
        bit = (rows >> shift) & 1
        if kind == 1:
            rows = rows ^ (1 << shift)
        elif kind == 2:
            vals = vals * np.where(bit == 0, 1j, -1j)
            rows = rows ^ (1 << shift)
        else:
            vals = vals * np.where(bit == 0, 1.0, -1.0)
    return rows, cols, vals


def qsg_hamiltonian(x, n_qubits: int) -> np.ndarray:
    """``H(x) = (1/(3 sqrt n)) sum_{a,b,j} x[a,b,j] sigma_j^(a) sigma_{j+1}^(b)``.

    ``x`` has shape ``(3, 3, n)`` (or is a flat vector in that lexicographic
    order); the chain is cyclic.
    """
    n = n_qubits
    if not 3 <= n <= QSG_MAX_QUBITS:
        raise InvalidSpec(f"need 3 <= qubits <= {QSG_MAX_QUBITS}, got {n}")
    x = np.asarray(x, dtype=float).reshape(3, 3, n)
    dim = 2 ** n
    R, C, V = [], [], []
    for a in range(3):
        for b in range(3):
            for j in range(n):
                r, c, v = _pauli_word(n, j, a + 1, b + 1)
                R.append(r)
                C.append(c)
                V.append(v * x[a, b, j])
    H = sp.coo_matrix((np.concatenate(V), (np.concatenate(R), np.concatenate(C))),
                      shape=(dim, dim)).toarray()
    H /= 3.0 * np.sqrt(n)
    return 0.5 * (H + H.conj().T)


def qsg_coefficients(n_qubits: int, rng) -> np.ndarray:
    return as_generator(rng).standard_normal((3, 3, n_qubits))


def sample_qsg(n_qubits: int, rng) -> np.ndarray:
    """Random quantum spin glass Hamiltonian on a ring of qubits."""
    if not 3 <= n_qubits <= QSG_MAX_QUBITS:
        raise InvalidSpec(f"need 3 <= qubits <= {QSG_MAX_QUBITS}, got {n_qubits}")
    return qsg_hamiltonian(qsg_coefficients(n_qubits, rng), n_qubits)


def qsg_lipschitz_constant(n_qubits: int) -> float:
    return 2.0 ** (n_qubits / 2) / (3.0 * np.sqrt(n_qubits))


# --- Ginibre ---------------------------------------------------------------

def sample_ginibre(n: int, rng) -> np.ndarray:
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    g = as_generator(rng)
    return (g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))) / np.sqrt(2.0)


# --- dispatch --------------------------------------------------------------

def sample(spec: EnsembleSpec, rng) -> np.ndarray:
    """Draw one matrix of the ensemble described by ``spec``."""
    kind = spec.kind
    if kind in ("GUE", "GOE", "WignerGeneric"):
        return sample_wigner(spec, rng)
    if kind == "Wishart":
        return sample_wishart(spec, rng)[0]
    if kind == "Haar":
        return sample_haar(spec.group, spec.n, rng)
    if kind == "HaarPower":
        return sample_haar_power(spec.group, spec.n, spec.m, rng)
    if kind == "RandomizedSum":
        U = sample_haar(spec.group, spec.n, rng)
        return randomized_sum(ingredient_matrix(spec.a_tag, spec.n),
                              ingredient_matrix(spec.b_tag, spec.n), U)
    if kind == "Compression":
        U = sample_haar(spec.group, spec.n, rng)
        return compress(ingredient_matrix(spec.a_tag, spec.n), U, spec.k)
    if kind == "QuantumSpinGlass":
        return sample_qsg(spec.n, rng)
    if kind == "Ginibre":
        return sample_ginibre(spec.n, rng)
    raise InvalidSpec(f"unknown ensemble kind {kind!r}")


def hermitian_kind(spec: EnsembleSpec) -> bool:
    return spec.kind in ("GUE", "GOE", "WignerGeneric", "Wishart",
                         "RandomizedSum", "Compression", "QuantumSpinGlass")


def spectrum_of(M, hermitian: bool) -> np.ndarray:
    if hermitian:
        return matcore.hermitian_eigenvalues(M)
    return matcore.general_eigenvalues(M)


def sample_spectrum(spec: EnsembleSpec, rng) -> np.ndarray:
    """Eigenvalues of one draw; Ginibre is scaled by ``1/sqrt(n)``.

    Hermitian ensembles return a sorted real vector, the others a complex one.
    """
    M = sample(spec, rng)
    if spec.kind == "Ginibre":
        M = M / np.sqrt(spec.n)
    return spectrum_of(M, hermitian_kind(spec))


def spectral_measure(M, kind: str = "hermitian") -> AtomicMeasure:
    """Equal-weight atomic measure on the eigenvalues of ``M``.

    ``kind`` is ``"hermitian"`` or ``"general"``.
    """
    if kind not in ("hermitian", "general"):
        raise InvalidSpec(f"unknown spectral kind {kind!r}")
    return AtomicMeasure(spectrum_of(M, kind == "hermitian"))
