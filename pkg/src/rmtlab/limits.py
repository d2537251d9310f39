"""Limiting spectral laws, their n-point discretizations and the spiral order.

Scalar laws (semicircle, Marchenko-Pastur, standard Gaussian) expose
density, CDF and quantile.  The compactly supported ones are handled in an
angle variable ``phi`` in ``[-pi/2, pi/2]`` with ``y = c + h sin(phi)``;
in that variable the density has no square-root edges, which keeps both
the CDF quadrature and the transport integrals smooth.

Marchenko-Pastur with ratio ``rho = n/m`` has density
``sqrt((b - x)(x - a)) / (2 pi rho x)`` on ``(a, b)``,
``a = (1 - sqrt rho)^2``, ``b = (1 + sqrt rho)^2``.  Its CDF is obtained by
adaptive Simpson quadrature of that density (tolerance ``1e-12``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import InvalidSpec, OutOfRange, QuadratureFailure, UnsupportedLaw

LAW_TAGS = ("Semicircle", "MarchenkoPastur", "StdGaussian", "UniformCircle", "UniformDisc")
SCALAR_LAWS = ("Semicircle", "MarchenkoPastur", "StdGaussian")
PLANAR_LAWS = ("UniformCircle", "UniformDisc")

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class AtomicMeasure:
    """Equal-weight point masses on the complex plane."""

    atoms: np.ndarray

    def __post_init__(self):
        a = np.array(self.atoms, dtype=complex).ravel()
        if a.size == 0:
            raise InvalidSpec("an atomic measure needs at least one atom")
        if not np.all(np.isfinite(a)):
            raise InvalidSpec("atoms must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "atoms", a)

    def __len__(self):
        return self.atoms.size

    @property
    def weight(self) -> float:
        return 1.0 / self.atoms.size

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.atoms.imag == 0))

    def real_sorted(self) -> np.ndarray:
        return np.sort(self.atoms.real)


@dataclass(frozen=True)
class LimitLaw:
    tag: str
    rho: float | None = None

    def __post_init__(self):
        if self.tag not in LAW_TAGS:
            raise InvalidSpec(f"unknown law {self.tag!r}")
        if self.tag == "MarchenkoPastur":
            if self.rho is None or not 0.0 < float(self.rho) <= 1.0:
                raise InvalidSpec(f"Marchenko-Pastur needs 0 < rho <= 1, got {self.rho}")
        elif self.rho is not None:
            raise InvalidSpec(f"{self.tag} takes no rho parameter")

    @property
    def scalar(self) -> bool:
        return self.tag in SCALAR_LAWS

    @property
    def support(self) -> tuple[float, float]:
        if self.tag == "Semicircle":
            return -2.0, 2.0
        if self.tag == "MarchenkoPastur":
            s = math.sqrt(self.rho)
            return (1.0 - s) ** 2, (1.0 + s) ** 2
        if self.tag == "StdGaussian":
            return -math.inf, math.inf
        raise UnsupportedLaw(f"{self.tag} is not a law on the real line")


SEMICIRCLE = LimitLaw("Semicircle")
STD_GAUSSIAN = LimitLaw("StdGaussian")
UNIFORM_CIRCLE = LimitLaw("UniformCircle")
UNIFORM_DISC = LimitLaw("UniformDisc")


def marchenko_pastur(rho: float) -> LimitLaw:
    return LimitLaw("MarchenkoPastur", float(rho))


def _require_scalar(law: LimitLaw):
    if not law.scalar:
        raise UnsupportedLaw(f"{law.tag} has no scalar density/CDF; use the radial/angular forms")


# --- angle parametrization of the compact scalar laws ----------------------

def _center_halfwidth(law: LimitLaw) -> tuple[float, float]:
    lo, hi = law.support
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def phi_density(law: LimitLaw, phi):
    """Density of the law in the angle variable, ``f(y(phi)) y'(phi)``."""
    phi = np.asarray(phi, dtype=float)
    if law.tag == "Semicircle":
        return (2.0 / math.pi) * np.cos(phi) ** 2
    return np.vectorize(_mp_phi_density_scalar(law), otypes=[float])(phi)


def _phi_density_scalar(law: LimitLaw):
    if law.tag == "Semicircle":
        return lambda p: (2.0 / math.pi) * math.cos(p) ** 2
    return _mp_phi_density_scalar(law)


def _adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 60) -> float:
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
        right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth <= 0:
            raise QuadratureFailure("adaptive Simpson exceeded its depth limit")
        return (rec(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))

    return rec(a, b, fa, fm, fb, whole, tol, max_depth)


def _mp_phi_density_scalar(law: LimitLaw):
    # with psi = phi + pi/2: y = a + 2h sin^2(psi/2) and cos^2(phi) = sin^2(psi),
    # which avoids cancellation near the lower edge (rho = 1 puts it at 0)
    c, h = _center_halfwidth(law)
    a = c - h
    k = h * h / (TWO_PI * law.rho)

    def g(phi):
        psi = phi + HALF_PI
        sh = math.sin(0.5 * psi)
        y = a + 2.0 * h * sh * sh
        if y <= 0.0:
            return 2.0 * k / h
        return k * math.sin(psi) ** 2 / y
    return g


def phi_cdf(law: LimitLaw, phi: float) -> float:
    """CDF expressed in the angle variable."""
    phi = min(max(float(phi), -HALF_PI), HALF_PI)
    if law.tag == "Semicircle":
        return min(1.0, max(0.0, 0.5 + (phi + math.sin(phi) * math.cos(phi)) / math.pi))
    if phi <= -HALF_PI:
        return 0.0
    val = _adaptive_simpson(_mp_phi_density_scalar(law), -HALF_PI, phi, 1e-12)
    return min(1.0, max(0.0, val))


def _y_to_phi(law: LimitLaw, y: float) -> float:
    c, h = _center_halfwidth(law)
    return math.asin(min(1.0, max(-1.0, (y - c) / h)))


def _phi_to_y(law: LimitLaw, phi):
    c, h = _center_halfwidth(law)
    return c + h * np.sin(phi)


# --- public scalar API ----------------------------------------------------

def law_density(law: LimitLaw, x: float) -> float:
    """Lebesgue density of a scalar law (zero outside the support)."""
    _require_scalar(law)
    x = float(x)
    if law.tag == "StdGaussian":
        return math.exp(-0.5 * x * x) / math.sqrt(TWO_PI)
    a, b = law.support
    if not a < x < b:
        return 0.0
    if law.tag == "Semicircle":
        return math.sqrt(4.0 - x * x) / TWO_PI
    return math.sqrt((b - x) * (x - a)) / (TWO_PI * law.rho * x)


def law_radial_density(law: LimitLaw, r: float) -> float:
    """Density of ``|z|``; only the disc law has one (``2r`` on ``[0, 1]``)."""
    if law.tag != "UniformDisc":
        raise UnsupportedLaw(f"{law.tag} has no radial density")
    return 2.0 * r if 0.0 <= r <= 1.0 else 0.0


def law_angular_density(law: LimitLaw, theta: float) -> float:
    """Density of ``arg z`` on ``(0, 2 pi]`` for the rotation-invariant laws."""
    if law.tag not in PLANAR_LAWS:
        raise UnsupportedLaw(f"{law.tag} is not a planar law")
    return 1.0 / TWO_PI if 0.0 < theta <= TWO_PI else 0.0


def law_cdf(law: LimitLaw, x: float) -> float:
    _require_scalar(law)
    x = float(x)
    if law.tag == "StdGaussian":
        return float(special.ndtr(x))
    a, b = law.support
    if x < a:
        return 0.0
    if x >= b:
        return 1.0
    if law.tag == "Semicircle":
        return float(0.5 + x * math.sqrt(4.0 - x * x) / (4.0 * math.pi)
                     + math.asin(x / 2.0) / math.pi)
    return phi_cdf(law, _y_to_phi(law, x))


def _invert_monotone(cdf, pdf, lo: float, hi: float, u: float, tol: float) -> float:
    """Safeguarded Newton on a monotone CDF with a shrinking bracket."""
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = cdf(x) - u
        if abs(fx) <= tol:
            return x
        if fx > 0:
            hi = x
        else:
            lo = x
        d = pdf(x)
        step = x - fx / d if d > 0 else None
        x = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        if hi - lo < 1e-15 * max(1.0, abs(x)):
            return x
    return x


def quantile_phi(law: LimitLaw, u: float) -> float:
    """Quantile of a compact scalar law, in the angle variable."""
    if u <= 0.0:
        return -HALF_PI
    if u >= 1.0:
        return HALF_PI
    pdf = _phi_density_scalar(law)
    if law.tag == "Semicircle":
        return _invert_monotone(lambda p: phi_cdf(law, p), pdf, -HALF_PI, HALF_PI, u, 1e-13)
    # MP: Newton steps integrate only the increment from the last accepted point
    g = _mp_phi_density_scalar(law)
    state = {"phi": -HALF_PI, "F": 0.0}

    def cdf(p):
        p0, F0 = state["phi"], state["F"]
        val = F0 + (_adaptive_simpson(g, p0, p, 1e-13) if p >= p0
                    else -_adaptive_simpson(g, p, p0, 1e-13))
        state["phi"], state["F"] = p, val
        return val
    return _invert_monotone(cdf, pdf, -HALF_PI, HALF_PI, u, 1e-12)


def law_quantile(law: LimitLaw, u: float) -> float:
    """Smallest ``x`` with ``law_cdf(x) >= u``, for ``0 < u <= 1``."""
    _require_scalar(law)
    u = float(u)
    if not 0.0 < u <= 1.0:
        raise OutOfRange(f"quantile level must lie in (0, 1], got {u}")
    if law.tag == "StdGaussian":
        if u == 1.0:
            return math.inf
        x0 = float(special.ndtri(u))
        # one Newton polish on the closed-form CDF
        d = law_density(law, x0)
        return x0 - (law_cdf(law, x0) - u) / d if d > 0 else x0
    if u == 1.0:
        return law.support[1]
    return float(_phi_to_y(law, quantile_phi(law, u)))


@lru_cache(maxsize=64)
def quantile_breakpoints_phi(law: LimitLaw, n: int) -> np.ndarray:
    """Angle-variable quantiles at ``j/n``, ``j = 0..n``, for a compact law."""
    out = np.empty(n + 1)
    out[0], out[n] = -HALF_PI, HALF_PI
    for j in range(1, n):
        out[j] = quantile_phi(law, j / n)
    out.setflags(write=False)
    return out


def native_breakpoints(law: LimitLaw, n: int) -> np.ndarray:
    """Breakpoints at ``j/n`` in the integration variable of :func:`partial_integral`."""
    if law.tag == "StdGaussian":
        return quantile_breakpoints(law, n)
    return quantile_breakpoints_phi(law, n)


@lru_cache(maxsize=64)
def quantile_breakpoints(law: LimitLaw, n: int) -> np.ndarray:
    """Quantiles at ``j/n``, ``j = 0..n`` (``+-inf`` at the ends if unbounded)."""
    _require_scalar(law)
    if law.tag == "StdGaussian":
        out = np.array([-math.inf] + [law_quantile(law, j / n) for j in range(1, n)] + [math.inf])
    else:
        out = _phi_to_y(law, quantile_breakpoints_phi(law, n))
        out[0], out[-1] = law.support
    out.setflags(write=False)
    return out


def partial_integral(law: LimitLaw, g, u_lo: float, u_hi: float, breaks=(),
                     native_bounds: tuple[float, float] | None = None) -> float:
    """``int_{u_lo}^{u_hi} g(Q(u)) du`` by adaptive quadrature.

    Evaluated as ``int g(y) f(y) dy`` over ``[Q(u_lo), Q(u_hi)]`` (in the
    angle variable for compact laws).  ``breaks`` are points in ``y`` where
    ``g`` has a kink; they are passed to the integrator.  ``native_bounds``
    (``y`` for the Gaussian, ``phi`` otherwise) skips the quantile
    computation when cached breakpoints exist.
    """
    _require_scalar(law)
    opts = dict(epsabs=1e-12, epsrel=1e-12, limit=200)
    if law.tag == "StdGaussian":
        if native_bounds is None:
            lo = -math.inf if u_lo <= 0 else law_quantile(law, u_lo)
            hi = math.inf if u_hi >= 1 else law_quantile(law, u_hi)
        else:
            lo, hi = native_bounds
        f = lambda y: g(y) * math.exp(-0.5 * y * y) / math.sqrt(TWO_PI)
        if math.isinf(lo) or math.isinf(hi):
            # quad does not accept break points on infinite ranges: split there
            pts = sorted(b for b in breaks if lo < b < hi)
            edges = [lo] + pts + [hi]
            total = 0.0
            for a, b in zip(edges[:-1], edges[1:]):
                total += integrate.quad(f, a, b, **opts)[0]
            return total
        pts = [b for b in breaks if lo < b < hi]
        return integrate.quad(f, lo, hi, points=pts or None, **opts)[0]
    if native_bounds is None:
        p_lo = quantile_phi(law, u_lo) if u_lo > 0 else -HALF_PI
        p_hi = quantile_phi(law, u_hi) if u_hi < 1 else HALF_PI
    else:
        p_lo, p_hi = native_bounds
    if p_hi <= p_lo:
        return 0.0
    pts = [_y_to_phi(law, b) for b in breaks]
    pts = [p for p in pts if p_lo < p < p_hi]
    dens = _phi_density_scalar(law)
    f = lambda p: g(float(_phi_to_y(law, p))) * dens(p)
    return integrate.quad(f, p_lo, p_hi, points=pts or None, **opts)[0]


# --- discretizations --------------------------------------------------------

@lru_cache(maxsize=64)
def _spiral_lattice(n: int) -> np.ndarray:
    pts = [0j]
    k = 1
    scale = 1.0 / math.sqrt(n)
    while len(pts) < n:
        m = 2 * k + 1
        take = min(m, n - len(pts))
        for j in range(1, take + 1):
            if j == m:
                pts.append(complex(k * scale, 0.0))  # arg exactly 2 pi
            else:
                theta = TWO_PI * j / m
                pts.append(k * scale * complex(math.cos(theta), math.sin(theta)))
        k += 1
    out = np.array(pts[:n], dtype=complex)
    out.setflags(write=False)
    return out


def roots_of_unity(n: int) -> np.ndarray:
    """``exp(2 pi i j / n)`` for ``j = 1..n``; the last one is exactly 1."""
    j = np.arange(1, n + 1)
    z = np.exp(TWO_PI * 1j * j / n)
    z[-1] = 1.0
    return z


def discretize_law(law: LimitLaw, n: int) -> AtomicMeasure:
    """The n-atom discretization ``nu_n`` of a limiting law.

    Semicircle and Marchenko-Pastur: quantiles at ``j/n``, ``j = 1..n``
    (the last atom sits on the right support edge).  Standard Gaussian:
    quantiles at ``(j - 1/2)/n`` since ``j = n`` would be infinite.
    UniformCircle: n-th roots of unity.  UniformDisc: the spiral lattice.
    """
    n = int(n)
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    if law.tag == "UniformCircle":
        return AtomicMeasure(roots_of_unity(n))
    if law.tag == "UniformDisc":
        return AtomicMeasure(_spiral_lattice(n))
    if law.tag == "StdGaussian":
        return AtomicMeasure(special.ndtri((np.arange(1, n + 1) - 0.5) / n))
    return AtomicMeasure(quantile_breakpoints(law, n)[1:])


def spiral_lattice_rings(n: int) -> list[int]:
    """Atom counts per ring of the spiral lattice (last ring may be partial)."""
    counts, total, k = [], 0, 0
    while total < n:
        take = min(2 * k + 1, n - total)
        counts.append(take)
        total += take
        k += 1
    return counts


# --- spiral order -----------------------------------------------------------

RING_SLACK = 1e-12


def _arg_2pi(z) -> np.ndarray:
    a = np.angle(z)
    return np.where(a > 0, a, a + TWO_PI)


def spiral_keys(z, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(ring, nonzero, arg, -modulus)`` sort keys.

    Ring boundaries get a ``1e-12`` relative slack so that lattice points
    built as ``(k/sqrt n) e^{i theta}`` land in ring ``k`` despite rounding.
    """
    z = np.asarray(z, dtype=complex)
    mod = np.abs(z)
    ring = np.floor(math.sqrt(n) * mod * (1.0 + RING_SLACK)).astype(np.int64)
    nonzero = (z != 0).astype(np.int64)
    arg = np.where(nonzero == 1, _arg_2pi(z), 0.0)
    return ring, nonzero, arg, -mod


def spiral_compare(w: complex, z: complex, n: int) -> int:
    """-1 if ``w`` precedes ``z`` in the spiral order, 0 if tied, +1 otherwise."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    kw = tuple(float(k[0]) for k in spiral_keys([w], n))
    kz = tuple(float(k[0]) for k in spiral_keys([z], n))
    return (kw > kz) - (kw < kz)


def spiral_sort(spectrum, n: int) -> np.ndarray:
    """Stable sort in the spiral order; exact ties keep input order."""
    z = np.asarray(spectrum, dtype=complex).ravel()
    ring, nonzero, arg, negmod = spiral_keys(z, n)
    order = np.lexsort((np.arange(z.size), negmod, arg, nonzero, ring))
    return z[order]
