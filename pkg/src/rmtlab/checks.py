"""Fixed-seed invariant suites, run by ``rmtlab check <suite>``.

Each suite returns a list of :class:`CheckResult`; a suite passes when all
of its results do.  Failures are collected, never raised.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import dpp, ensembles, experiments, limits, matcore, transport
from .rng import RngStream

SUITES = ("transport", "lipschitz", "dpp", "matcore", "limits")
SEED = 20240611


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.suite}/{self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(suite, name, fn) -> CheckResult:
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(suite, name, bool(passed), detail, time.perf_counter() - t0)


# --- transport -----------------------------------------------------------------------

def transport_bruteforce(seed: int = SEED, instances: int = 200) -> tuple[bool, str]:
    g = RngStream(seed, "check/bruteforce").generator()
    worst = 0.0
    for i in range(instances):
        n = 2 + i % 6
        p = (1.0, 2.0, 1.5)[i % 3]
        z = g.standard_normal(n) + 1j * g.standard_normal(n)
        w = g.standard_normal(n) + 1j * g.standard_normal(n)
        a = transport.wp_assignment_plane(z, w, p).distance
        b = transport.wp_bruteforce(z, w, p).distance
        worst = max(worst, abs(a - b))
    return worst <= 1e-9, f"max |assignment - bruteforce| = {worst:.2e} over {instances} instances"


def transport_sorted_vs_assignment(seed: int = SEED, instances: int = 200) -> tuple[bool, str]:
    g = RngStream(seed, "check/sorted").generator()
    worst = 0.0
    for i in range(instances):
        n = int(g.integers(1, 40))
        x, y = g.standard_normal(n), g.standard_normal(n) * 2.0
        p = (1.0, 2.0, 3.0)[i % 3]
        a = transport.wp_sorted_1d(x, y, p).distance
        b = transport.wp_assignment_plane(x.astype(complex), y.astype(complex), p).distance
        worst = max(worst, abs(a - b))
    return worst <= 1e-9, f"max |sorted - assignment| = {worst:.2e} over {instances} instances"


def transport_metric_axioms(seed: int = SEED, instances: int = 100) -> tuple[bool, str]:
    g = RngStream(seed, "check/metric").generator()
    bad = 0
    for _ in range(instances):
        n = int(g.integers(1, 12))
        pts = [g.standard_normal(n) + 1j * g.standard_normal(n) for _ in range(3)]
        p = float(g.choice([1.0, 2.0]))
        d = lambda a, b: transport.wp_assignment_plane(a, b, p).distance
        ab, ba, bc, ac = d(pts[0], pts[1]), d(pts[1], pts[0]), d(pts[1], pts[2]), d(pts[0], pts[2])
        bad += abs(ab - ba) > 1e-12 or ac > ab + bc + 1e-12 or d(pts[0], pts[0][::-1]) > 1e-12
    return bad == 0, f"{bad} violations of symmetry, triangle or identity in {instances} triples"


def transport_quantile_oracle() -> tuple[bool, str]:
    g = RngStream(SEED, "check/quantile").generator()
    worst = 0.0
    for law in (limits.SEMICIRCLE, limits.STD_GAUSSIAN, limits.marchenko_pastur(0.5)):
        lo, hi = law.support
        for n in (1, 7, 64):
            x = np.sort(g.uniform(max(lo, -3.0) - 0.3, min(hi, 3.0) + 0.3, n))
            a = transport.wp_quantile_vs_law(x, law, 1).distance
            b = transport.w1_cdf_integral(x, law)
            worst = max(worst, abs(a - b))
    return worst <= 1e-9, f"max |quantile route - CDF route| for W_1 = {worst:.2e}"


def transport_dual_bound() -> tuple[bool, str]:
    g = RngStream(SEED, "check/dual").generator()
    bad, worst_gap = 0, 0.0
    for _ in range(50):
        n = int(g.integers(2, 20))
        z = g.standard_normal(n) + 1j * g.standard_normal(n)
        w = 0.5 * (g.standard_normal(n) + 1j * g.standard_normal(n)) + 1.0
        primal = transport.wp_assignment_plane(z, w, 1).distance
        dual = transport.w1_dual_lower_bound(z, w)
        bad += dual > primal + 1e-12
        worst_gap = max(worst_gap, (primal - dual) / primal)
    return bad == 0, f"dual lower bound never exceeds W_1 (max relative gap {worst_gap:.2f})"


def suite_transport() -> list[CheckResult]:
    s = "transport"
    return [_timed(s, "bruteforce-oracle", transport_bruteforce),
            _timed(s, "sorted-vs-assignment", transport_sorted_vs_assignment),
            _timed(s, "metric-axioms", transport_metric_axioms),
            _timed(s, "quantile-vs-cdf", transport_quantile_oracle),
            _timed(s, "kantorovich-dual", transport_dual_bound)]


# --- lipschitz -------------------------------------------------------------------------

def suite_lipschitz(cases: int = 500) -> list[CheckResult]:
    out = []
    for case in experiments.lipschitz_suite(SEED, cases):
        detail = f"{case.cases} cases, max ratio {case.max_ratio:.12f}, {case.violations} violations"
        if case.note:
            detail += f"; {case.note}"
        out.append(CheckResult("lipschitz", case.name, case.passed, detail))
    return out


# --- matcore ---------------------------------------------------------------------------

def matcore_contracts(seed: int = SEED, count: int = 200, max_n: int = 512) -> tuple[bool, str]:
    """Trace and HS identities, residual bounds and singular values."""
    g = RngStream(seed, "check/matcore").generator()
    sizes = np.unique(np.round(np.exp(np.linspace(0.0, math.log(max_n), count))).astype(int))
    sizes = np.resize(sizes, count)
    failures = []
    for i, n in enumerate(sizes):
        n = int(n)
        kind = i % 4
        if kind == 0:
            X = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
            H = (X + X.conj().T) / 2
            lam = matcore.hermitian_eigenvalues(H)
            op = float(np.max(np.abs(lam)))
            tol = 1e-9 * n * op
            if abs(lam.sum() - np.trace(H).real) > tol:
                failures.append(f"trace n={n}")
            if abs(np.sum(lam ** 2) - matcore.hs_norm(H) ** 2) > tol * max(op, 1.0):
                failures.append(f"hs n={n}")
            res, bound = matcore.hermitian_residual(H)
            if res > bound:
                failures.append(f"residual n={n}")
        elif kind == 1:
            A = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
            ev = matcore.general_eigenvalues(A)
            if abs(ev.sum() - np.trace(A)) > 1e-8 * n * matcore.op_norm(A):
                failures.append(f"general trace n={n}")
        elif kind == 2:
            m = n + int(g.integers(0, 8))
            X = g.standard_normal((m, n)) + 1j * g.standard_normal((m, n))
            sv = matcore.singular_values(X)
            lam = matcore.hermitian_eigenvalues(X.conj().T @ X)
            if np.max(np.abs(sv ** 2 - lam) / max(lam[-1], 1e-300)) > 1e-8:
                failures.append(f"singular values n={n}")
        else:
            U = ensembles.sample_haar("U", min(n, 256), g)
            if np.max(np.abs(np.abs(matcore.general_eigenvalues(U)) - 1.0)) > 1e-8:
                failures.append(f"unitary moduli n={n}")
    return not failures, f"{count} matrices up to n={max_n}; failures: {failures or 'none'}"


def matcore_examples() -> tuple[bool, str]:
    ok = True
    ok &= np.allclose(matcore.hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])
    ok &= np.allclose(matcore.singular_values(np.array([[1.0], [1.0]])), [math.sqrt(2)])
    ok &= np.allclose(matcore.matrix_norms(np.ones((2, 2))), (2.0, 2.0))
    C = np.roll(np.eye(4), 1, axis=1)
    ev = np.sort_complex(matcore.general_eigenvalues(C))
    ok &= np.allclose(ev, np.sort_complex(np.exp(2j * np.pi * np.arange(4) / 4)), atol=1e-12)
    return bool(ok), "worked examples"


def suite_matcore() -> list[CheckResult]:
    return [_timed("matcore", "examples", matcore_examples),
            _timed("matcore", "contracts", matcore_contracts)]


# --- dpp ------------------------------------------------------------------------------------

def dpp_total_mass() -> tuple[bool, str]:
    worst = 0.0
    for n in (1, 2, 5, 10, 25, 50):
        h = dpp.KernelSpec("HermiteGUE", n)
        worst = max(worst, abs(dpp.counting_mean(h, h.hermite_guard) - n))
        worst = max(worst, abs(dpp.counting_mean(dpp.KernelSpec("DysonCircle", n), 2 * math.pi) - n))
        # the disc of radius sqrt(n) + 12 holds all but ~e^{-144} of the Ginibre mass
        worst = max(worst, abs(dpp.counting_mean(dpp.KernelSpec("Ginibre", n), math.sqrt(n) + 12) - n))
    return worst <= 1e-6, f"max |int K(x,x) - n| = {worst:.2e} for n <= 50, three kernels"


def dpp_dyson_half() -> tuple[bool, str]:
    worst = max(abs(dpp.counting_mean(dpp.KernelSpec("DysonCircle", n), math.pi) - n / 2)
                for n in (1, 2, 7, 10, 50, 200))
    return worst <= 1e-8, f"max |E N_pi - n/2| = {worst:.2e}"


def gue_center_variances(sizes=(50, 100, 200, 400, 800)) -> list[float]:
    return [dpp.counting_variance(dpp.KernelSpec("HermiteGUE", n), 0.0) for n in sizes]


def log_fit(sizes, values) -> tuple[float, float, float]:
    """``values ~ a + b log n``: returns ``(a, b, R^2)``."""
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.asarray(values, dtype=float)
    b, a = np.polyfit(x, y, 1)
    resid = y - (a + b * x)
    r2 = 1.0 - float(np.sum(resid ** 2)) / float(np.sum((y - y.mean()) ** 2))
    return float(a), float(b), r2


def dpp_log_variance() -> tuple[bool, str]:
    sizes = (50, 100, 200, 400, 800)
    a, b, r2 = log_fit(sizes, gue_center_variances(sizes))
    return r2 >= 0.95 and b > 0, f"Var N_0 = {a:.4f} + {b:.4f} log n, R^2 = {r2:.6f}"


def dpp_reproducing(seed: int = SEED) -> tuple[bool, str]:
    g = RngStream(seed, "check/reproducing").generator()
    worst = 0.0
    t, w = np.polynomial.legendre.leggauss(200)
    for n in (1, 5, 12, 30):
        h = dpp.KernelSpec("HermiteGUE", n)
        L = h.hermite_guard
        u = L * t
        for _ in range(3):
            x, y = g.uniform(-math.sqrt(2 * n), math.sqrt(2 * n), 2)
            lhs = float(np.sum(L * w * dpp.kernel_eval(h, x * np.ones_like(u), u)
                               * dpp.kernel_eval(h, u, y * np.ones_like(u))))
            worst = max(worst, abs(lhs - dpp.kernel_eval(h, x, y)))
        d = dpp.KernelSpec("DysonCircle", n)
        uu = np.pi * (t + 1.0)
        for _ in range(3):
            x, y = g.uniform(0, 2 * math.pi, 2)
            lhs = float(np.sum(np.pi * w * dpp.kernel_eval(d, x, uu) * dpp.kernel_eval(d, uu, y))) / (2 * math.pi)
            worst = max(worst, abs(lhs - dpp.kernel_eval(d, x, y)))
    return worst <= 1e-6, f"max reproducing-property defect {worst:.2e} (Hermite, Dyson; n <= 30)"


def dpp_variance_routes() -> tuple[bool, str]:
    worst = 0.0
    for fam, xs in (("HermiteGUE", (-1.0, 0.0, 0.7)), ("DysonCircle", (0.5, math.pi, 4.0))):
        for n in (1, 3, 6):
            spec = dpp.KernelSpec(fam, n)
            for x in xs:
                worst = max(worst, abs(dpp.counting_variance(spec, x)
                                       - dpp.counting_variance_double_integral(spec, x)))
    return worst <= 1e-6, f"max |Gram variance - double integral| = {worst:.2e}"


def dpp_edge_map() -> tuple[bool, str]:
    n = 50
    x = float(dpp.gue_coordinate_map(n, 2.0))
    m = dpp.counting_mean(dpp.KernelSpec("HermiteGUE", n), x)
    return abs(m - n) <= 1e-3 * n and abs(x - math.sqrt(2 * n)) <= 1e-14 * x, \
        f"edge lambda=2 maps to {x:.6f}; E N there = {m:.4f} of {n}"


def suite_dpp() -> list[CheckResult]:
    s = "dpp"
    return [_timed(s, "total-mass", dpp_total_mass),
            _timed(s, "dyson-half-circle", dpp_dyson_half),
            _timed(s, "gue-log-variance", dpp_log_variance),
            _timed(s, "reproducing", dpp_reproducing),
            _timed(s, "variance-routes", dpp_variance_routes),
            _timed(s, "edge-coordinate-map", dpp_edge_map)]


# --- limits ----------------------------------------------------------------------------------

def limits_normalization() -> tuple[bool, str]:
    from scipy import integrate
    worst = 0.0
    for law in (limits.SEMICIRCLE, limits.marchenko_pastur(0.5), limits.marchenko_pastur(1.0)):
        lo, hi = law.support
        val = integrate.quad(lambda x: limits.law_density(law, x), lo, hi, limit=200)[0]
        worst = max(worst, abs(val - 1.0))
    return worst <= 1e-7, f"max |int density - 1| = {worst:.2e}"


def limits_roundtrip(seed: int = SEED) -> tuple[bool, str]:
    g = RngStream(seed, "check/quantile-roundtrip").generator()
    worst = 0.0
    for law in (limits.SEMICIRCLE, limits.STD_GAUSSIAN, limits.marchenko_pastur(0.5)):
        for u in g.uniform(1e-6, 1.0, 30):
            worst = max(worst, abs(limits.law_cdf(law, limits.law_quantile(law, u)) - u))
    return worst <= 1e-10, f"max |F(Q(u)) - u| = {worst:.2e}"


def limits_spiral_order(seed: int = SEED, triples: int = 10_000) -> tuple[bool, str]:
    g = RngStream(seed, "check/spiral").generator()
    n = 16
    bad = 0
    pts = (g.integers(0, 5, (triples, 3)) / 4.0) * np.exp(2j * np.pi * g.integers(0, 8, (triples, 3)) / 8)
    pts = np.where(g.random((triples, 3)) < 0.5, pts, 1.3 * (g.standard_normal((triples, 3))
                                                              + 1j * g.standard_normal((triples, 3))))
    for a, b, c in pts:
        ab, bc, ac = limits.spiral_compare(a, b, n), limits.spiral_compare(b, c, n), limits.spiral_compare(a, c, n)
        bad += limits.spiral_compare(b, a, n) != -ab
        bad += ab <= 0 and bc <= 0 and ac > 0
    lattice = limits.discretize_law(limits.UNIFORM_DISC, 50).atoms
    in_order = np.array_equal(limits.spiral_sort(lattice[::-1], 50), lattice)
    return bad == 0 and in_order, f"{bad} order violations in {triples} triples; lattice order kept: {in_order}"


def limits_disc_rate() -> tuple[bool, str]:
    sizes = (64, 128, 256, 512, 1024, 2048, 4096)
    tails = [transport.disc_tail(n, 2.0) for n in sizes]
    slope = experiments.fit_loglog_rate(list(zip(sizes, tails)))[0]
    return slope <= -0.45, f"W_2(spiral lattice, disc) slope {slope:.3f} over n = 64..4096"


def suite_limits() -> list[CheckResult]:
    s = "limits"
    return [_timed(s, "normalization", limits_normalization),
            _timed(s, "quantile-roundtrip", limits_roundtrip),
            _timed(s, "spiral-order", limits_spiral_order),
            _timed(s, "disc-lattice-rate", limits_disc_rate)]


SUITE_FUNCS = {"transport": suite_transport, "lipschitz": suite_lipschitz, "dpp": suite_dpp,
               "matcore": suite_matcore, "limits": suite_limits}


def run_suite(name: str) -> list[CheckResult]:
    return SUITE_FUNCS[name]()
