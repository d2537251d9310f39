"""Dense matrix plumbing: validation, norms and spectral decompositions.

Matrices are plain ``numpy`` arrays.  The eigensolvers delegate to LAPACK
(``numpy.linalg``); what this module adds is input validation and the
numerical contracts the rest of the package relies on:

* Hermitian eigenvalues come back sorted ascending, with backward error
  ``||H V - V diag(lam)||_HS <= 1e-10 * n * ||H||_op`` (see
  :func:`hermitian_residual`).
* General eigenvalues sum to the trace within ``1e-8 * n * ||A||_op``.
* Singular values are read off the augmented Hermitian matrix
  ``[[0, X], [X^*, 0]]`` whose spectrum is ``{+-sigma_j}`` padded by zeros.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidSpec, NonConvergence, NonHermitian, ShapeMismatch

HERMITIAN_RTOL = 1e-12


def as_matrix(A, *, square: bool = False) -> np.ndarray:
    """Validate ``A`` as a finite 2-D complex-or-real matrix."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ShapeMismatch(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.issubdtype(A.dtype, np.number):
        raise InvalidSpec(f"non-numeric matrix dtype {A.dtype}")
    if not np.all(np.isfinite(A)):
        raise InvalidSpec("matrix has NaN or Inf entries")
    if square and A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


def hermitian_view(H) -> np.ndarray:
    """Return ``H`` after checking ``H[j, k] == conj(H[k, j])``.

    The check is absolute with tolerance ``1e-12 * max|H|``.
    """
    H = as_matrix(H, square=True)
    scale = float(np.max(np.abs(H)))
    if scale > 0 and np.max(np.abs(H - H.conj().T)) > HERMITIAN_RTOL * scale:
        raise NonHermitian("matrix is not Hermitian within 1e-12 * max|entry|")
    return H


def hermitian_eigenvalues(H) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, sorted ascending."""
    H = hermitian_view(H)
    try:
        lam = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    return np.sort(lam)


def hermitian_residual(H) -> tuple[float, float]:
    """Backward error of the Hermitian eigendecomposition.

    Returns ``(||H V - V diag(lam)||_HS, 1e-10 * n * ||H||_op)``; the
    contract is that the first is at most the second.
    """
    H = hermitian_view(H)
    try:
        lam, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    res = float(np.linalg.norm(H @ V - V * lam))
    op = float(np.max(np.abs(lam)))
    return res, 1e-10 * H.shape[0] * max(op, np.finfo(float).tiny)


def general_eigenvalues(A) -> np.ndarray:
    """Eigenvalues of a square matrix (complex, unordered)."""
    A = as_matrix(A, square=True)
    try:
        return np.linalg.eigvals(A).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc


def augmented(X) -> np.ndarray:
    """The Hermitian matrix ``[[0, X], [X^*, 0]]``."""
    X = as_matrix(X)
    m, n = X.shape
    Z = np.zeros((m + n, m + n), dtype=np.result_type(X.dtype, np.float64))
    Z[:m, m:] = X
    Z[m:, :m] = X.conj().T
    return Z


def singular_values(X) -> np.ndarray:
    """The ``min(m, n)`` singular values of ``X``, sorted ascending."""
    X = as_matrix(X)
    k = min(X.shape)
    lam = hermitian_eigenvalues(augmented(X))
    # the top k eigenvalues are +sigma_j; tiny negative round-off for sigma = 0
    return np.clip(lam[-k:], 0.0, None)


def matrix_norms(A) -> tuple[float, float]:
    """Hilbert-Schmidt and operator norm of ``A``."""
    A = as_matrix(A)
    hs = float(np.sqrt(np.sum(np.abs(A) ** 2)))
    op = float(singular_values(A)[-1])
    return hs, op


def hs_norm(A) -> float:
    return float(np.sqrt(np.sum(np.abs(np.asarray(A)) ** 2)))


def op_norm(A) -> float:
    return matrix_norms(A)[1]


def hs_distance(A, B) -> float:
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return hs_norm(A - B)
