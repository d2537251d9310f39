"""Seeded Monte Carlo experiments.

Every repetition draws from its own stream
``RngStream(master_seed, tag, n, rep)``, and results are reduced in rep
order, so outputs do not depend on how many worker threads ran them.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special, stats

from . import dpp, ensembles, limits, matcore, transport
from .ensembles import EnsembleSpec
from .errors import BudgetExceeded, DegenerateFit, InsufficientReps, InvalidSpec
from .limits import AtomicMeasure, LimitLaw
from .rng import RngStream

TARGETS = ("law", "discretization", "pooled")
FUNCTIONALS = ("wp", "trace", "max_eigenvalue")


def default_threads() -> int:
    return os.cpu_count() or 1


def _map_reps(fn, reps: int, threads: int | None):
    """``[fn(r) for r in range(reps)]``, optionally on a thread pool."""
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or reps <= 1:
        return [fn(r) for r in range(reps)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(reps)))


def spectra(spec: EnsembleSpec, master_seed: int, reps: int, tag: str | None = None,
            threads: int | None = 1) -> list[np.ndarray]:
    """Spectra of ``reps`` independent draws (Ginibre scaled by ``1/sqrt(n)``)."""
    stream = RngStream(master_seed, spec.tag if tag is None else tag, spec.n)
    return _map_reps(lambda r: ensembles.sample_spectrum(spec, stream.child(rep=r)),
                     reps, threads)


# --- targets ----------------------------------------------------------------

def limit_law_for(spec: EnsembleSpec) -> LimitLaw | None:
    """The limiting law of ``spec``; ``None`` when only ``E mu_n`` is available."""
    kind = spec.kind
    if kind in ("GUE", "GOE", "WignerGeneric"):
        return limits.SEMICIRCLE
    if kind == "Wishart":
        return limits.marchenko_pastur(spec.n / spec.m)
    if kind in ("Haar", "HaarPower"):
        return limits.UNIFORM_CIRCLE
    if kind == "QuantumSpinGlass":
        return limits.STD_GAUSSIAN
    if kind == "Ginibre":
        return limits.UNIFORM_DISC
    return None


def distance_to_law(spectrum, law: LimitLaw, p: float) -> tuple[float, float]:
    """``(distance, tail)``: ``W_p`` to the law is at most their sum.

    Scalar laws are exact (tail 0); planar laws are exact to the
    discretization plus the discretization bound.
    """
    if law.scalar:
        z = np.asarray(spectrum)
        return transport.wp_quantile_vs_law(np.real(z), law, p).distance, 0.0
    exact, tail = transport.wp_to_planar_law(spectrum, law, p)
    return exact.distance, tail


def distance_to_discretization(spectrum, law: LimitLaw, p: float) -> float:
    nu = limits.discretize_law(law, len(spectrum))
    if law.scalar:
        return transport.wp_sorted_1d(np.real(spectrum), nu.real_sorted(), p).distance
    if law.tag == "UniformCircle" and len(spectrum) > transport.CYCLIC_SHIFT_THRESHOLD:
        return transport.wp_cyclic_shift(spectrum, nu.atoms, p).distance
    return transport.wp_assignment_plane(spectrum, nu.atoms, p).distance


# --- configs and reports -------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """A distance scan over sizes.

    ``target`` is ``"law"`` (exact or exact-plus-bound to the limit),
    ``"discretization"`` (exact to the n-point discretization) or
    ``"pooled"`` (an estimate of ``E mu_n`` from ``pool_reps`` independent
    draws).  ``budget_seconds`` caps wall-clock time; ``None`` is unlimited.
    """

    ensemble: EnsembleSpec
    sizes: tuple[int, ...]
    reps: int = 40
    p: float = 2.0
    target: str = "law"
    master_seed: int = 0
    pool_reps: int = 200
    budget_seconds: float | None = None
    threads: int | None = 1

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes:
            raise InvalidSpec("sizes must be nonempty")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise InvalidSpec("sizes must be strictly increasing")
        if self.reps < 1:
            raise InvalidSpec("reps must be >= 1")
        if self.target not in TARGETS:
            raise InvalidSpec(f"unknown target {self.target!r}")
        if self.p < 1:
            raise InvalidSpec("p must be >= 1")
        if self.target == "pooled" and (self.pool_reps < 50 or self.pool_reps % 2):
            raise InvalidSpec("pool_reps must be even and >= 50")
        if self.target != "pooled" and limit_law_for(self.ensemble) is None:
            raise InvalidSpec(f"{self.ensemble.kind} needs the pooled target")
        for n in sizes:
            self.ensemble.with_n(n)


@dataclass(frozen=True)
class RateRow:
    n: int
    rep: int
    distance: float
    tail_bound: float
    runtime_ms: float


@dataclass
class RateReport:
    rows: list[RateRow]
    slope: float | None
    intercept: float | None
    stderr: float | None
    complete: bool = True

    def mean_by_n(self) -> dict[int, float]:
        out: dict[int, list[float]] = {}
        for r in self.rows:
            out.setdefault(r.n, []).append(r.distance + r.tail_bound)
        return {n: float(np.mean(v)) for n, v in out.items()}


def fit_loglog_rate(pairs) -> tuple[float, float, float]:
    """Least squares of ``ln d`` on ``ln n``: ``(slope, intercept, stderr)``.

    ``stderr`` is the usual slope standard error; it is 0 for two points.
    """
    pairs = [(float(n), float(d)) for n, d in pairs]
    if len({n for n, _ in pairs}) < 2:
        raise DegenerateFit("need at least two distinct sizes")
    if any(n <= 0 or not d > 0 or not math.isfinite(d) for n, d in pairs):
        raise DegenerateFit("sizes and distances must be positive and finite")
    x = np.log([n for n, _ in pairs])
    y = np.log([d for _, d in pairs])
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    k = len(pairs)
    if k > 2:
        resid = y - (intercept + slope * x)
        stderr = math.sqrt(float(np.sum(resid ** 2)) / (k - 2) / sxx)
    else:
        stderr = 0.0
    return slope, intercept, stderr


@dataclass
class MeanMeasureEstimate:
    pooled: AtomicMeasure
    split_half: float


def mean_measure_estimate(source, reps: int, master_seed: int = 0, p: float = 2.0,
                          threads: int | None = 1) -> MeanMeasureEstimate:
    """Pool ``reps`` spectra into an estimate of ``E mu_n``.

    ``source`` is an :class:`EnsembleSpec` (drawn on the stream tagged
    ``<tag>/pool``, independent of the scan streams) or a callable
    ``rep -> spectrum``.  The split-half discrepancy is ``W_p`` between the
    pools of the first and second half of the reps.
    """
    if reps < 50 or reps % 2:
        raise InvalidSpec("reps must be even and >= 50")
    if isinstance(source, EnsembleSpec):
        specs = spectra(source, master_seed, reps, tag=source.tag + "/pool", threads=threads)
    elif callable(source):
        specs = [np.asarray(source(r)) for r in range(reps)]
    else:
        raise InvalidSpec("source must be an EnsembleSpec or a callable")
    first = np.concatenate(specs[: reps // 2])
    second = np.concatenate(specs[reps // 2:])
    pooled = np.concatenate([first, second])
    if np.all(np.imag(pooled) == 0):
        pooled = np.sort(np.real(pooled))
        split = transport.wp_sorted_1d(np.real(first), np.real(second), p).distance
    else:
        split = transport.wp_assignment_plane(first, second, p).distance
    return MeanMeasureEstimate(AtomicMeasure(pooled), split)


def run_distance_scan(config: ExperimentConfig, progress=None) -> RateReport:
    """Distances for every ``(n, rep)`` and the log-log fit of their means.

    The fitted quantity per size is the mean of ``distance + tail_bound``.
    On budget exhaustion raises :class:`BudgetExceeded` with the partial
    report (``complete=False``) attached as ``exc.report``.
    """
    start = time.perf_counter()
    rows: list[RateRow] = []
    p = config.p
    for n in config.sizes:
        spec = config.ensemble.with_n(n)
        stream = RngStream(config.master_seed, spec.tag, n)
        law = limit_law_for(spec)
        pooled = None
        if config.target == "pooled":
            pooled = mean_measure_estimate(spec, config.pool_reps, config.master_seed, p,
                                           config.threads).pooled.real_sorted()
        elif config.target == "law" and not law.scalar:
            transport.planar_tail(law, spec.matrix_size, p)  # warm the cache once

        def one(rep, spec=spec, stream=stream, law=law, pooled=pooled):
            t0 = time.perf_counter()
            z = ensembles.sample_spectrum(spec, stream.child(rep=rep))
            if config.target == "pooled":
                d, tail = transport.wp_1d_quantile(np.real(z), pooled, p).distance, 0.0
            elif config.target == "law":
                d, tail = distance_to_law(z, law, p)
            else:
                d, tail = distance_to_discretization(z, law, p), 0.0
            return RateRow(n, rep, float(d), float(tail), 1e3 * (time.perf_counter() - t0))

        rows.extend(_map_reps(one, config.reps, config.threads))
        if progress is not None:
            progress(n)
        if config.budget_seconds is not None and time.perf_counter() - start > config.budget_seconds \
                and n != config.sizes[-1]:
            report = _finish(rows, complete=False)
            exc = BudgetExceeded(f"budget of {config.budget_seconds}s exhausted after n={n}")
            exc.report = report
            raise exc
    return _finish(rows, complete=True)


def _finish(rows: list[RateRow], complete: bool) -> RateReport:
    report = RateReport(rows, None, None, None, complete)
    means = report.mean_by_n()
    if len(means) >= 2:
        report.slope, report.intercept, report.stderr = fit_loglog_rate(sorted(means.items()))
    return report


# --- rigidity ---------------------------------------------------------------------

@dataclass
class RigidityProfile:
    n: int
    msd: np.ndarray
    bulk: float


def predicted_locations(ensemble: str, n: int) -> np.ndarray:
    """``gamma_j`` (GUE semicircle quantiles at ``j/n``) or ``2 pi j/n`` (HaarU)."""
    j = np.arange(1, n + 1)
    if ensemble == "GUE":
        return np.array([limits.law_quantile(limits.SEMICIRCLE, u) for u in j / n])
    if ensemble == "HaarU":
        return 2.0 * math.pi * j / n
    raise InvalidSpec(f"rigidity is defined for GUE and HaarU, not {ensemble!r}")


def bulk_indices(n: int) -> np.ndarray:
    """Zero-based indices of the 1-based range ``n/4 <= j <= 3n/4``."""
    j = np.arange(1, n + 1)
    return np.nonzero((4 * j >= n) & (4 * j <= 3 * n))[0]


def _angles_0_2pi_closed(z) -> np.ndarray:
    """Eigenvalue angles in ``(0, 2 pi]``, sorted."""
    a = np.mod(np.angle(z), 2.0 * math.pi)
    a[a <= 0.0] = 2.0 * math.pi
    return np.sort(a)


def rigidity_profile(ensemble: str, n: int, reps: int, master_seed: int = 0,
                     threads: int | None = 1) -> RigidityProfile:
    """Mean squared deviation of each ordered eigenvalue from its prediction."""
    if reps < 1:
        raise InvalidSpec("reps must be >= 1")
    if n > 1024:
        raise InvalidSpec("rigidity profiles are limited to n <= 1024")
    gamma = predicted_locations(ensemble, n)
    spec = EnsembleSpec("GUE", n) if ensemble == "GUE" else EnsembleSpec("Haar", n, group="U")
    specs = spectra(spec, master_seed, reps, threads=threads)
    if ensemble == "HaarU":
        specs = [_angles_0_2pi_closed(z) for z in specs]
    sq = np.array([(np.real(z) - gamma) ** 2 for z in specs])
    msd = sq.mean(axis=0)
    return RigidityProfile(n, msd, float(msd[bulk_indices(n)].mean()))


# --- counting functions ------------------------------------------------------------

@dataclass
class TailEstimate:
    """Empirical ``P[|F - center| > t]`` on a grid and a fitted Gaussian rate.

    ``c`` fits ``P ~ A exp(-c n^a t^2)`` by least squares on the grid points
    with at least ``min_count`` exceedances; ``None`` if fewer than two.
    """

    t: np.ndarray
    exceedance: np.ndarray
    a: float
    n: int
    c: float | None
    reps: int
    center: float


def exceedance_curve(values, center: float, t_grid) -> np.ndarray:
    dev = np.abs(np.asarray(values, dtype=float) - center)
    t_grid = np.asarray(t_grid, dtype=float)
    return np.array([np.mean(dev > t) for t in t_grid])


def fit_gaussian_rate(t, exceedance, n: int, a: float, reps: int, min_count: int = 10):
    mask = (exceedance * reps >= min_count) & (exceedance < 1.0) & (np.asarray(t) > 0)
    if np.count_nonzero(mask) < 2:
        return None
    s = (n ** a) * np.asarray(t)[mask] ** 2
    slope = np.polyfit(s, np.log(exceedance[mask]), 1)[0]
    return float(-slope)


def counting_kernel_spec(ensemble: str, n: int) -> dpp.KernelSpec:
    if ensemble == "GUE":
        return dpp.KernelSpec("HermiteGUE", n)
    if ensemble == "HaarU":
        return dpp.KernelSpec("DysonCircle", n)
    raise InvalidSpec(f"counting experiments use GUE or HaarU, not {ensemble!r}")


def counting_values(ensemble: str, spectra_list, x: float) -> np.ndarray:
    """``N_x`` per draw: eigenvalues ``<= x`` (GUE) or angles in ``[0, x]`` (HaarU)."""
    if ensemble == "GUE":
        return np.array([np.count_nonzero(np.real(z) <= x) for z in spectra_list], dtype=float)
    out = []
    for z in spectra_list:
        a = np.mod(np.angle(z), 2.0 * math.pi)
        out.append(np.count_nonzero(a <= x))
    return np.array(out, dtype=float)


@dataclass
class CountingTailReport:
    ensemble: str
    n: int
    x: float
    kernel_mean: float
    kernel_variance: float
    empirical_mean: float
    empirical_variance: float
    mean_se: float
    variance_se: float
    tail: TailEstimate
    envelope: np.ndarray
    violations: list[float] = field(default_factory=list)

    @property
    def mean_z(self) -> float:
        return abs(self.empirical_mean - self.kernel_mean) / max(self.mean_se, 1e-300)

    @property
    def variance_z(self) -> float:
        return abs(self.empirical_variance - self.kernel_variance) / max(self.variance_se, 1e-300)


def counting_tail_experiment(ensemble: str, n: int, x: float, reps: int, master_seed: int = 0,
                             t_grid=None, threads: int | None = 1) -> CountingTailReport:
    """Empirical law of ``N_x`` against the kernel mean, variance and Bernstein envelope.

    For GUE, ``x`` is in normalized units (spectrum on ``[-2, 2]``); for
    HaarU it is an angle in ``[0, 2 pi]``.
    """
    kspec = counting_kernel_spec(ensemble, n)
    xk = float(dpp.gue_coordinate_map(n, x)) if ensemble == "GUE" else float(x)
    mean = dpp.counting_mean(kspec, xk)
    var = dpp.counting_variance(kspec, xk)
    spec = EnsembleSpec("GUE", n) if ensemble == "GUE" else EnsembleSpec("Haar", n, group="U")
    N = counting_values(ensemble, spectra(spec, master_seed, reps, threads=threads), x)
    emp_mean = float(N.mean())
    emp_var = float(N.var(ddof=1)) if reps > 1 else 0.0
    mean_se = math.sqrt(emp_var / reps)
    m4 = float(np.mean((N - emp_mean) ** 4))
    variance_se = math.sqrt(max(m4 - emp_var ** 2, 0.0) / reps)
    if t_grid is None:
        t_grid = np.arange(0.0, 8.01, 0.5)
    t_grid = np.asarray(t_grid, dtype=float)
    exc = exceedance_curve(N, mean, t_grid)
    env = np.array([dpp.bernstein_tail(var, t) for t in t_grid])
    tail = TailEstimate(t_grid, exc, 0.0, n, fit_gaussian_rate(t_grid, exc, n, 0.0, reps),
                        reps, mean)
    violations = [float(t) for t, e, b in zip(t_grid, exc, env) if e > b]
    return CountingTailReport(ensemble, n, float(x), mean, var, emp_mean, emp_var, mean_se,
                              variance_se, tail, env, violations)


# --- Rains ---------------------------------------------------------------------------

def rains_block_sizes(n: int, m: int) -> list[int]:
    """Sizes ``ceil((n - j)/m)``, ``j < m``: the ``floor/ceil(n/m)`` split summing to n."""
    if not 1 <= m <= n:
        raise InvalidSpec(f"need 1 <= m <= n, got n={n}, m={m}")
    return [-(-(n - j) // m) for j in range(m)]


@dataclass
class ArcTest:
    x: float
    statistic: float
    pvalue: float
    threshold: float
    rejected: bool


@dataclass
class RainsReport:
    n: int
    m: int
    reps: int
    alpha: float
    sizes: list[int]
    arcs: list[ArcTest]

    @property
    def passed(self) -> bool:
        return not any(a.rejected for a in self.arcs)


def rains_test(n: int, m: int, reps: int, arc_grid=None, master_seed: int = 0,
               alpha: float = 0.01) -> RainsReport:
    """Two-sample KS tests of counting functions: ``M^m`` vs independent blocks.

    Sample (i) counts eigenvalue angles of ``M^m`` (``M`` Haar in ``U(n)``)
    in ``[0, x]``; sample (ii) pools the angles of independent Haar
    unitaries with sizes :func:`rains_block_sizes`.  For ``m = 1`` the
    block sampler reuses the power sampler's streams, so the samples
    coincide.  Each arc is tested at the Bonferroni level ``alpha / #arcs``.
    """
    sizes = rains_block_sizes(n, m)
    if reps < 2:
        raise InvalidSpec("reps must be >= 2")
    arcs = np.asarray([math.pi / 2, math.pi, 3 * math.pi / 2] if arc_grid is None else arc_grid,
                      dtype=float)
    power_stream = RngStream(master_seed, f"rains/power/m{m}", n)
    block_stream = power_stream if m == 1 else RngStream(master_seed, f"rains/blocks/m{m}", n)

    def angles(z):
        return np.mod(np.angle(z), 2.0 * math.pi)

    first = np.empty((reps, arcs.size))
    second = np.empty((reps, arcs.size))
    for r in range(reps):
        M = ensembles.sample_haar_power("U", n, m, power_stream.child(rep=r))
        a = angles(matcore.general_eigenvalues(M))
        first[r] = [np.count_nonzero(a <= x) for x in arcs]
        if m == 1:
            b = angles(matcore.general_eigenvalues(
                ensembles.sample_haar("U", n, block_stream.child(rep=r))))
        else:
            g = block_stream.child(rep=r).generator()
            b = np.concatenate([angles(matcore.general_eigenvalues(
                ensembles.sample_haar("U", s, g))) for s in sizes])
        second[r] = [np.count_nonzero(b <= x) for x in arcs]
    level = alpha / arcs.size
    crit = math.sqrt(-0.5 * math.log(level / 2.0)) * math.sqrt(2.0 / reps)
    out = []
    for i, x in enumerate(arcs):
        # counts are discrete and heavily tied, so the exact null is not available
        res = stats.ks_2samp(first[:, i], second[:, i], method="asymp")
        out.append(ArcTest(float(x), float(res.statistic), float(res.pvalue), crit,
                           bool(res.pvalue < level)))
    return RainsReport(n, m, reps, alpha, sizes, out)


# --- concentration ------------------------------------------------------------------

def spectral_functional(spec: EnsembleSpec, z, functional: str, p: float = 2.0,
                        law: LimitLaw | None = None) -> float:
    if functional == "trace":
        return float(np.sum(np.real(z)))
    if functional == "max_eigenvalue":
        return float(np.max(np.real(z)))
    if functional == "wp":
        law = limit_law_for(spec) if law is None else law
        d, tail = distance_to_law(z, law, p)
        return d + tail
    raise InvalidSpec(f"unknown functional {functional!r}")


def concentration_tail_experiment(spec: EnsembleSpec, functional: str, reps: int,
                                  master_seed: int = 0, a: float | None = None,
                                  p: float = 2.0, center: float | None = None,
                                  t_grid=None, threads: int | None = 1) -> tuple[TailEstimate, np.ndarray]:
    """Tail of ``|F - center|`` for a spectral functional ``F``.

    ``center`` defaults to the sample mean.  ``a`` defaults to 1 for the
    spin glass (``n`` is then the qubit count) and 2 otherwise.  Returns the
    estimate and the raw functional values.
    """
    if reps < 1000:
        raise InsufficientReps("tail estimation needs at least 1000 reps")
    if functional not in FUNCTIONALS:
        raise InvalidSpec(f"unknown functional {functional!r}")
    if a is None:
        a = 1.0 if spec.kind == "QuantumSpinGlass" else 2.0
    values = np.array([spectral_functional(spec, z, functional, p)
                       for z in spectra(spec, master_seed, reps, threads=threads)])
    c0 = float(values.mean()) if center is None else float(center)
    if t_grid is None:
        dev = np.abs(values - c0)
        t_grid = np.linspace(0.0, float(np.quantile(dev, 0.995)), 24)
    t_grid = np.asarray(t_grid, dtype=float)
    exc = exceedance_curve(values, c0, t_grid)
    est = TailEstimate(t_grid, exc, float(a), spec.n,
                       fit_gaussian_rate(t_grid, exc, spec.n, a, reps), reps, c0)
    return est, values


def log_concavity_test(t, exceedance, reps: int, min_count: int = 20) -> tuple[float, float]:
    """Curvature of ``log P`` as a quadratic in ``s = t^2`` and its standard error.

    Fits ``log P = b0 + b1 s + b2 s^2`` by weighted least squares (binomial
    delta-method weights) on grid points with ``P < 1`` and at least
    ``min_count`` exceedances.  Log-concavity in ``s`` means ``b2 <= 0``.
    """
    t = np.asarray(t, dtype=float)
    P = np.asarray(exceedance, dtype=float)
    mask = (P * reps >= min_count) & (P < 1.0)
    if np.count_nonzero(mask) < 4:
        raise InsufficientReps("too few resolved grid points for a curvature fit")
    s = t[mask] ** 2
    y = np.log(P[mask])
    var = (1.0 - P[mask]) / (P[mask] * reps)
    w = 1.0 / np.sqrt(var)
    X = np.column_stack([np.ones_like(s), s, s * s])
    coef, *_ = np.linalg.lstsq(X * w[:, None], y * w, rcond=None)
    cov = np.linalg.inv((X * w[:, None]).T @ (X * w[:, None]))
    return float(coef[2]), float(math.sqrt(cov[2, 2]))


def gue_w2_envelope(n: int, t) -> np.ndarray:
    """``exp(-n^2 t^2 / 2)``: one-sided Gaussian concentration of ``W_2`` for GUE.

    ``W_2(mu_n, law)`` is ``1/n``-Lipschitz in the standard Gaussian vector
    parametrizing the GUE, so each one-sided tail obeys this bound.
    """
    t = np.asarray(t, dtype=float)
    return np.exp(-0.5 * n * n * t * t)


def normal_two_sided_tail(t) -> np.ndarray:
    """``P[|Z| > t] = 2 (1 - Phi(t))``."""
    return 2.0 * special.ndtr(-np.asarray(t, dtype=float))


def dkw_epsilon(reps: int, alpha: float = 0.01) -> float:
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * reps))


# --- Lipschitz inequalities ------------------------------------------------------------

@dataclass
class LipschitzCase:
    name: str
    cases: int
    max_ratio: float
    violations: int
    passed: bool
    note: str = ""


def _rand_hermitian(g, n):
    X = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    return (X + X.conj().T) / 2.0


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0:
        return 0.0 if lhs == 0 else math.inf
    return lhs / rhs


def hoffman_wielandt_case(master_seed: int = 0, cases: int = 500,
                          unitary_cases: int = 50) -> LipschitzCase:
    """``W_2(mu_A, mu_B) <= n^{-1/2} ||A - B||_HS`` for Hermitian and unitary pairs.

    ``cases`` Hermitian pairs (``2 <= n <= 32``) use the sorted coupling;
    ``unitary_cases`` further pairs of unitaries (``n <= 16``) go through
    the assignment solver on their complex spectra.
    """
    g = RngStream(master_seed, "lipschitz/hw").generator()
    worst, bad = 0.0, 0
    for i in range(cases + unitary_cases):
        n = int(g.integers(2, 33))
        if i >= cases:
            n = min(n, 16)
            A = ensembles.sample_haar("U", n, g)
            B = A @ ensembles.sample_haar("U", n, g) if g.random() < 0.5 else \
                ensembles.sample_haar("U", n, g)
            w2 = transport.wp_assignment_plane(matcore.general_eigenvalues(A),
                                               matcore.general_eigenvalues(B), 2).distance
        else:
            A = _rand_hermitian(g, n)
            eps = 10.0 ** g.uniform(-6, 0.5)
            B = A + eps * _rand_hermitian(g, n) if i % 2 else _rand_hermitian(g, n)
            w2 = transport.wp_sorted_1d(matcore.hermitian_eigenvalues(A),
                                        matcore.hermitian_eigenvalues(B), 2).distance
        rhs = matcore.hs_distance(A, B) / math.sqrt(n)
        worst = max(worst, _ratio(w2, rhs))
        bad += w2 > rhs + 1e-9
    return LipschitzCase("hoffman-wielandt", cases + unitary_cases, worst, bad, bad == 0)


def wishart_case(master_seed: int = 0, cases: int = 500) -> LipschitzCase:
    """``||X*X - Y*Y||_HS / m <= (||X||_op + ||Y||_op) ||X - Y||_HS / m``."""
    g = RngStream(master_seed, "lipschitz/wishart").generator()
    worst, bad = 0.0, 0
    for i in range(cases):
        n = int(g.integers(1, 17))
        m = n + int(g.integers(0, 17))
        cplx = bool(i % 2)
        def draw():
            X = g.standard_normal((m, n))
            return X + 1j * g.standard_normal((m, n)) if cplx else X
        X = draw()
        Y = X + 10.0 ** g.uniform(-6, 0.5) * draw() if i % 3 else draw()
        lhs = matcore.hs_distance(X.conj().T @ X, Y.conj().T @ Y) / m
        rhs = (matcore.op_norm(X) + matcore.op_norm(Y)) * matcore.hs_distance(X, Y) / m
        worst = max(worst, _ratio(lhs, rhs))
        bad += lhs > rhs + 1e-9
    return LipschitzCase("wishart", cases, worst, bad, bad == 0)


def randomized_sum_case(master_seed: int = 0, cases: int = 500) -> LipschitzCase:
    """``||(UAU* + B) - (VAV* + B)||_HS <= 2 ||A||_op ||U - V||_HS``.

    Includes the ``A = 0`` case, where both sides vanish.
    """
    g = RngStream(master_seed, "lipschitz/sums").generator()
    worst, bad = 0.0, 0
    for i in range(cases):
        n = int(g.integers(1, 17))
        A = np.zeros((n, n)) if i == 0 else _rand_hermitian(g, n)
        B = _rand_hermitian(g, n)
        U = ensembles.sample_haar("U", n, g)
        if i % 2:
            small = _rand_hermitian(g, n) * 10.0 ** g.uniform(-6, 0)
            w, Q = np.linalg.eigh(small)
            V = U @ (Q * np.exp(1j * w)) @ Q.conj().T
        else:
            V = ensembles.sample_haar("U", n, g)
        lhs = matcore.hs_distance(ensembles.randomized_sum(A, B, U),
                                  ensembles.randomized_sum(A, B, V))
        rhs = 2.0 * matcore.op_norm(A) * matcore.hs_distance(U, V)
        worst = max(worst, _ratio(lhs, rhs))
        bad += lhs > rhs + 1e-9
    return LipschitzCase("randomized-sum", cases, worst, bad, bad == 0)


def qsg_case(master_seed: int = 0, cases: int = 120, qubits=range(3, 9)) -> LipschitzCase:
    """``||H(x) - H(y)||_HS = L ||x - y||`` with ``L = 2^{n/2} / (3 sqrt n)``.

    This is an equality; the case passes when every ratio is ``1`` within
    ``1e-12`` relative.
    """
    g = RngStream(master_seed, "lipschitz/qsg").generator()
    qubits = list(qubits)
    worst_dev, worst_ratio, bad = 0.0, 0.0, 0
    for i in range(cases):
        nq = qubits[i % len(qubits)]
        x = g.standard_normal(9 * nq)
        y = g.standard_normal(9 * nq) if i % 2 else x + 1e-3 * g.standard_normal(9 * nq)
        lhs = matcore.hs_distance(ensembles.qsg_hamiltonian(x, nq), ensembles.qsg_hamiltonian(y, nq))
        rhs = ensembles.qsg_lipschitz_constant(nq) * float(np.linalg.norm(x - y))
        r = lhs / rhs
        worst_ratio = max(worst_ratio, r)
        worst_dev = max(worst_dev, abs(r - 1.0))
        bad += abs(r - 1.0) > 1e-12
    return LipschitzCase("qsg-equality", cases, worst_ratio, bad, bad == 0,
                         note=f"max |ratio - 1| = {worst_dev:.3e}")


def lipschitz_suite(master_seed: int = 0, cases: int = 500) -> list[LipschitzCase]:
    """The four Lipschitz inequalities; failures are reported, not raised."""
    if cases < 100:
        raise InvalidSpec("at least 100 cases per inequality")
    return [hoffman_wielandt_case(master_seed, cases), wishart_case(master_seed, cases),
            randomized_sum_case(master_seed, cases), qsg_case(master_seed, max(cases // 4, 100))]


# --- per-size mean distances ------------------------------------------------------------

@dataclass
class MeanDistance:
    n: int
    reps: int
    mean: float
    se: float


def mean_distances(template: EnsembleSpec, sizes, reps, p: float = 2.0, target: str = "law",
                   master_seed: int = 0, threads: int | None = 1) -> list[MeanDistance]:
    """Mean of ``distance + tail_bound`` per size, with its standard error.

    ``reps`` is a count or a sequence with one count per size, so cheap
    sizes can be averaged over more seeds than expensive ones.
    """
    sizes = [int(s) for s in sizes]
    counts = [int(reps)] * len(sizes) if np.ndim(reps) == 0 else [int(r) for r in reps]
    if len(counts) != len(sizes):
        raise InvalidSpec("one rep count per size")
    out = []
    for n, r in zip(sizes, counts):
        cfg = ExperimentConfig(template.with_n(n), (n,), r, p, target, master_seed, threads=threads)
        d = np.array([row.distance + row.tail_bound for row in run_distance_scan(cfg).rows])
        se = float(d.std(ddof=1) / math.sqrt(r)) if r > 1 else math.inf
        out.append(MeanDistance(n, r, float(d.mean()), se))
    return out
