"""Determinantal kernels and eigenvalue counting statistics.

Three projection kernels of rank n:

HermiteGUE
    ``K(x, y) = sum_{j<n} psi_j(x) psi_j(y)`` with Hermite functions
    ``psi_j = h_j e^{-x^2/2}``, reference measure ``dx``.  GUE eigenvalues
    ``lam`` (normalized so the spectrum fills ``[-2, 2]``) sit at kernel
    coordinates ``x = lam sqrt(n/2)``.
DysonCircle
    ``K(x, y) = sin(n(x-y)/2) / sin((x-y)/2)`` on ``[0, 2 pi)`` with
    reference measure ``dx / (2 pi)``.
Ginibre
    ``K(z, w) = (1/pi) e^{-(|z|^2+|w|^2)/2} sum_{k<n} (z conj w)^k / k!``
    with area measure; unnormalized eigenvalues of ``G_n``.

For a projection kernel and a set ``A``, the counting variable ``N_A`` is a
sum of independent Bernoullis whose parameters are the eigenvalues of the
Gram matrix ``G_jk = int_A phi_j conj(phi_k)``.  So
``E N_A = tr G`` and ``Var N_A = tr G - ||G||_F^2``, which equals the double
integral ``int_A int_{A^c} |K|^2``.  Variances are computed from ``G``;
:func:`counting_variance_double_integral` evaluates the double integral
literally and serves as the cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import InvalidSpec, KernelOverflow, QuadratureFailure

FAMILIES = ("HermiteGUE", "DysonCircle", "Ginibre")
TWO_PI = 2.0 * math.pi
HERMITE_GUARD_PAD = 100.0
_RESCALE = 1e150


@dataclass(frozen=True)
class KernelSpec:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown kernel family {self.family!r}")
        if int(self.n) < 1:
            raise InvalidSpec("n must be >= 1")

    @property
    def hermite_guard(self) -> float:
        """``|x|`` beyond which Hermite functions are treated as zero."""
        return math.sqrt(4.0 * self.n + HERMITE_GUARD_PAD)

    @property
    def domain(self) -> tuple[float, float]:
        if self.family == "HermiteGUE":
            g = self.hermite_guard
            return -g, g
        if self.family == "DysonCircle":
            return 0.0, TWO_PI
        return 0.0, math.inf


@dataclass(frozen=True)
class CountingStats:
    x: float
    mean: float
    variance: float


# --- Hermite functions ------------------------------------------------------

def hermite_functions(n: int, x) -> tuple[np.ndarray, np.ndarray]:
    """``psi_0..psi_{n-1}`` at the points ``x``; shape ``(n, len(x))``.

    Uses the weighted recurrence
    ``psi_{j+1} = x sqrt(2/(j+1)) psi_j - sqrt(j/(j+1)) psi_{j-1}``
    with a running log-scale so neither the Gaussian factor nor the
    polynomial part over/underflows.  Points with ``x^2 > 4n + 100`` are
    returned as zero; the second output flags them.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    outside = x * x > 4.0 * n + HERMITE_GUARD_PAD
    out = np.zeros((n, x.size))
    logs = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, math.pi ** -0.25)
    out[0] = cur * np.exp(logs)
    for j in range(n - 1):
        nxt = x * math.sqrt(2.0 / (j + 1)) * cur - math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if np.any(big):
            s = np.where(big, np.abs(cur), 1.0)
            cur = cur / s
            prev = prev / s
            logs = logs + np.log(s)
        out[j + 1] = cur * np.exp(logs)
    out[:, outside] = 0.0
    return out, outside


def hermite_kernel_diagonal(n: int, x) -> np.ndarray:
    psi, _ = hermite_functions(n, x)
    return np.sum(psi * psi, axis=0)


# --- kernel evaluation ------------------------------------------------------

def _dyson(n: int, t):
    t = np.asarray(t, dtype=float)
    s = np.sin(0.5 * t)
    near = np.abs(s) < 1e-8
    safe = np.where(near, 1.0, s)
    val = np.sin(0.5 * n * t) / safe
    lim = n * np.cos(0.5 * n * t) / np.cos(0.5 * t)
    return np.where(near, lim, val)


def _ginibre(n: int, z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zw = z * np.conj(w)
    gauss = -0.5 * (np.abs(z) ** 2 + np.abs(w) ** 2)
    if np.ndim(zw) == 0:
        zw, gauss = np.array([zw]), np.array([gauss])
        scalar = True
    else:
        scalar = False
    total = np.zeros(zw.shape, dtype=complex)
    nz = zw != 0
    # k = 0 term carries the Gaussian factor alone
    total += np.exp(gauss)
    if n > 1 and np.any(nz):
        k = np.arange(1, n)
        logzw = np.log(np.where(nz, zw, 1.0))
        # terms exp(k log(zw) - log k! + gauss), each finite for moderate |z|
        expo = k[:, None] * logzw.ravel()[None, :] - special.gammaln(k + 1)[:, None] + gauss.ravel()[None, :]
        if np.max(expo.real) > 700:
            raise KernelOverflow("Ginibre kernel argument too large")
        terms = np.exp(expo)
        terms[:, ~nz.ravel()] = 0.0
        total += terms.sum(axis=0).reshape(zw.shape)
    total /= math.pi
    return total[0] if scalar else total


def kernel_eval(spec: KernelSpec, x, y):
    """Kernel value in the family's native coordinates (vectorized)."""
    if spec.family == "HermiteGUE":
        px, _ = hermite_functions(spec.n, x)
        py, _ = hermite_functions(spec.n, y)
        val = np.sum(px * py, axis=0)
        return float(val[0]) if np.ndim(x) == 0 and np.ndim(y) == 0 else val
    if spec.family == "DysonCircle":
        val = _dyson(spec.n, np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
        return float(val) if np.ndim(val) == 0 else val
    return _ginibre(spec.n, x, y)


def kernel_diagonal(spec: KernelSpec, x) -> np.ndarray:
    """``K(x, x)``; for Ginibre ``x`` is a radius."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if spec.family == "HermiteGUE":
        return hermite_kernel_diagonal(spec.n, x)
    if spec.family == "DysonCircle":
        return np.full(x.shape, float(spec.n))
    # (1/pi) e^{-r^2} sum_{k<n} r^{2k}/k! = (1/pi) P(Poisson(r^2) <= n-1)
    return special.gammaincc(spec.n, x * x) / math.pi


# --- quadrature -----------------------------------------------------------------

_GL_ORDER = 16


def _gl_nodes(a: float, b: float, panels: int):
    t, w = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _adaptive(compute, a: float, b: float, panels: int, tol: float, max_doublings: int = 8):
    """Composite Gauss-Legendre, doubling panels until successive results agree."""
    prev = compute(*_gl_nodes(a, b, panels))
    for _ in range(max_doublings):
        panels *= 2
        cur = compute(*_gl_nodes(a, b, panels))
        if np.max(np.abs(np.asarray(cur) - np.asarray(prev))) <= tol:
            return cur
        prev = cur
    raise QuadratureFailure(f"quadrature did not reach tolerance {tol} on [{a}, {b}]")


def _hermite_panels(n: int, length: float) -> int:
    return max(4, int(math.ceil(length * math.sqrt(2.0 * n) / 4.0)))


def hermite_gram(n: int, x: float, tol: float = 1e-10) -> np.ndarray:
    """``G_jk = int_{-inf}^x psi_j psi_k``."""
    lo = -math.sqrt(4.0 * n + HERMITE_GUARD_PAD)
    hi = min(float(x), -lo)
    if hi <= lo:
        return np.zeros((n, n))

    def compute(nodes, weights):
        G = np.zeros((n, n))
        for chunk in np.array_split(np.arange(nodes.size), max(1, nodes.size // 2048)):
            psi, _ = hermite_functions(n, nodes[chunk])
            G += (psi * weights[chunk]) @ psi.T
        return G
    return _adaptive(compute, lo, hi, _hermite_panels(n, hi - lo), tol)


def dyson_gram(n: int, x: float) -> np.ndarray:
    """``G_jk = (1/2 pi) int_0^x e^{i (j-k) u} du`` (closed form)."""
    x = min(max(float(x), 0.0), TWO_PI)
    d = np.subtract.outer(np.arange(n), np.arange(n)).astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        G = (np.exp(1j * d * x) - 1.0) / (1j * d * TWO_PI)
    G[d == 0] = x / TWO_PI
    return G


def ginibre_disc_probabilities(n: int, r: float) -> np.ndarray:
    """Bernoulli parameters of the disc count: ``P(Gamma(k+1) <= r^2)``."""
    return special.gammainc(np.arange(1, n + 1), float(r) ** 2)


def counting_mean(spec: KernelSpec, x: float, tol: float = 1e-8) -> float:
    """``E N_x = int K(u, u)`` over ``(-inf, x]``, ``[0, x]`` or the disc of radius x."""
    n = spec.n
    x = float(x)
    if spec.family == "HermiteGUE":
        lo = -spec.hermite_guard
        hi = min(x, spec.hermite_guard)
        if hi <= lo:
            return 0.0
        val = _adaptive(lambda t, w: float(np.dot(w, hermite_kernel_diagonal(n, t))),
                        lo, hi, _hermite_panels(n, hi - lo), tol)
    elif spec.family == "DysonCircle":
        hi = min(max(x, 0.0), TWO_PI)
        val = _adaptive(lambda t, w: float(np.dot(w, kernel_diagonal(spec, t))) / TWO_PI,
                        0.0, hi, 2, tol) if hi > 0 else 0.0
    else:
        if x <= 0:
            return 0.0
        val = _adaptive(lambda t, w: float(np.dot(w, TWO_PI * t * kernel_diagonal(spec, t))),
                        0.0, x, max(4, int(math.ceil(2 * x))), tol)
    return float(min(max(val, 0.0), n))


def bernoulli_parameters(spec: KernelSpec, x: float) -> np.ndarray:
    """Eigenvalues of the Gram matrix: the Bernoulli parameters of ``N_x``."""
    if spec.family == "HermiteGUE":
        G = hermite_gram(spec.n, x)
    elif spec.family == "DysonCircle":
        G = dyson_gram(spec.n, x)
    else:
        return np.clip(ginibre_disc_probabilities(spec.n, x), 0.0, 1.0)
    return np.clip(np.linalg.eigvalsh(G), 0.0, 1.0)


def counting_variance(spec: KernelSpec, x: float) -> float:
    """``Var N_x = sum_i q_i (1 - q_i)`` over the Bernoulli parameters ``q_i``."""
    q = bernoulli_parameters(spec, x)
    return float(np.sum(q * (1.0 - q)))


def counting_stats(spec: KernelSpec, x: float) -> CountingStats:
    return CountingStats(float(x), counting_mean(spec, x), counting_variance(spec, x))


def counting_variance_double_integral(spec: KernelSpec, x: float, tol: float = 1e-8) -> float:
    """``int_{A} int_{A^c} |K(u, v)|^2`` evaluated literally (small n only).

    Hermite: ``A = (-inf, x]``; Dyson: ``A = [0, x]`` with ``dv/(2 pi)``
    weights on both variables.
    """
    if spec.family == "HermiteGUE":
        g = spec.hermite_guard
        if x <= -g:
            return 0.0
        f = lambda v, u: kernel_eval(spec, u, v) ** 2
        val, err = integrate.dblquad(f, -g, min(x, g), lambda u: min(x, g), lambda u: g,
                                     epsabs=tol, epsrel=1e-10)
        return float(val)
    if spec.family == "DysonCircle":
        x = min(max(float(x), 0.0), TWO_PI)
        if x in (0.0, TWO_PI):
            return 0.0
        f = lambda v, u: kernel_eval(spec, u, v) ** 2 / TWO_PI ** 2
        val, err = integrate.dblquad(f, 0.0, x, lambda u: x, lambda u: TWO_PI,
                                     epsabs=tol, epsrel=1e-10)
        return float(val)
    raise InvalidSpec("double-integral variance is provided for line and circle kernels")


# --- tails and coordinates -----------------------------------------------------

def bernstein_tail(variance: float, t: float) -> float:
    """``2 exp(-t^2 / (2 variance + t))``; equal to 2 at ``t = 0``."""
    if variance < 0 or t < 0:
        raise InvalidSpec("variance and t must be nonnegative")
    if t == 0:
        return 2.0
    return 2.0 * math.exp(-t * t / (2.0 * variance + t))


def gue_coordinate_map(n: int, lam):
    """Normalized GUE eigenvalue -> Hermite-kernel coordinate, ``lam sqrt(n/2)``."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    return np.asarray(lam) * math.sqrt(n / 2.0)


def gue_coordinate_inverse(n: int, x):
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    return np.asarray(x) / math.sqrt(n / 2.0)
