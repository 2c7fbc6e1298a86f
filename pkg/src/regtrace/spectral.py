"""Numerical side of the trace formula.

Eigenvalues of the adjacency operator are computed by cyclic Jacobi
rotations. The geodesic side is a truncated sum of modified Bessel terms
weighted by the exact geodesic path counts from :mod:`regtrace.census`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping

import numpy as np

from .census import GeodesicClass, count_geodesic_paths
from .errors import (
    ConvergenceFailure,
    NotNearInteger,
    QuadratureFailure,
    SupportExceedsTruncation,
)
from .graph import Graph

EIGEN_TOL = 1e-12
QUAD_RTOL = 1e-11
QUAD_MAX_LEVEL = 20
ROUNDING_WINDOW = 1e-6


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...]
    q: int
    vertex_count: int

    def sanity(self, edge_count: int) -> dict[str, float]:
        lam = np.asarray(self.eigenvalues)
        return {
            "sum": float(lam.sum()),
            "sum_sq_minus_2E": float((lam**2).sum() - 2 * edge_count),
            "max_minus_degree": float(lam.max() - (self.q + 1)),
        }

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        return any(abs(x - value) <= tol for x in self.eigenvalues)


def jacobi_eigenvalues(a: np.ndarray, tol: float = EIGEN_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps.

    Iterates until the Frobenius norm of the off-diagonal part drops below
    ``tol``. Rotations on entries already below ``tol / n`` are skipped.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    skip = tol / n
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float(np.sum(a * a) - np.sum(np.diag(a) ** 2))))
        if off < tol:
            return np.sort(a.diagonal())
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if abs(apr) <= skip:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_r = a[:, r].copy()
                a[:, p] = c * col_p - s * col_r
                a[:, r] = s * col_p + c * col_r
                row_p = a[p, :].copy()
                row_r = a[r, :].copy()
                a[p, :] = c * row_p - s * row_r
                a[r, :] = s * row_p + c * row_r
                a[p, r] = a[r, p] = 0.0
    raise ConvergenceFailure(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def spectrum(g: Graph, tol: float = EIGEN_TOL) -> Spectrum:
    lam = jacobi_eigenvalues(g.adjacency_matrix(), tol=tol)
    return Spectrum(tuple(float(x) for x in lam), g.q, g.vertex_count)


def z_t_spectral(sp: Spectrum, t: float) -> float:
    return math.fsum(math.exp(lam * t) for lam in sp.eigenvalues)


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def bessel_i(l: int, x: float) -> float:
    """Modified Bessel function I_l(x) for integer l >= 0 by its power series."""
    if l < 0:
        raise ValueError("order must be nonnegative")
    half = x / 2.0
    if half == 0.0:
        return 1.0 if l == 0 else 0.0
    # leading term (x/2)^l / l!, formed in logs so large l does not overflow
    sign = -1.0 if (x < 0 and l % 2) else 1.0
    log_term = l * math.log(abs(half)) - math.lgamma(l + 1)
    if log_term < -745.0:
        return 0.0
    term = math.exp(log_term)
    total = term
    h2 = half * half
    m = 0
    while True:
        m += 1
        term *= h2 / (m * (l + m))
        total += term
        if term == 0.0 or term < 1e-17 * total:
            return sign * total


def chebyshev_t(l: int, x: float) -> float:
    """Chebyshev polynomial of the first kind T_l(x)."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    if abs(x) > 1.0:
        sign = -1.0 if (x < 0 and l % 2) else 1.0
        return sign * math.cosh(l * math.acosh(abs(x)))
    t_prev, t_cur = 1.0, x
    if l == 0:
        return t_prev
    for _ in range(l - 1):
        t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
    return t_cur


# ---------------------------------------------------------------------------
# contractible part
# ---------------------------------------------------------------------------

def kesten_mckay(q: int, vertex_count: int, s: float) -> float:
    """Contractible spectral density at s (zero outside [-2 sqrt q, 2 sqrt q])."""
    d = 4 * q - s * s
    if d <= 0:
        return 0.0
    return vertex_count * (q + 1) / (2 * math.pi) * math.sqrt(d) / ((q + 1) ** 2 - s * s)


def _simpson(f: Callable[[float], float], a: float, b: float, rtol: float, max_level: int) -> float:
    """Composite Simpson with interval doubling.

    Stops when successive estimates differ by less than ``rtol`` times the
    integral of |f|, so integrals that cancel to zero still terminate.
    """
    n = 2
    h = (b - a) / n
    fa, fb, fm = f(a), f(b), f(a + h)
    ends, ends_abs = fa + fb, abs(fa) + abs(fb)
    odd, odd_abs = fm, abs(fm)
    even = even_abs = 0.0
    prev = (ends + 4 * odd) * h / 3
    for level in range(max_level):
        even += odd
        even_abs += odd_abs
        n *= 2
        h = (b - a) / n
        vals = [f(a + (2 * k + 1) * h) for k in range(n // 2)]
        odd = math.fsum(vals)
        odd_abs = math.fsum(abs(v) for v in vals)
        est = (ends + 2 * even + 4 * odd) * h / 3
        scale = (ends_abs + 2 * even_abs + 4 * odd_abs) * h / 3
        # low levels can agree by accident on trigonometric integrands
        if level >= 3 and abs(est - prev) <= rtol * scale:
            return est
        prev = est
    raise QuadratureFailure(f"Simpson refinement did not reach rtol={rtol} in {max_level} levels")


def contractible_integral(q: int, vertex_count: int, f: Callable[[float], float],
                          rtol: float = QUAD_RTOL, max_level: int = QUAD_MAX_LEVEL) -> float:
    """Integral of f(s) against the contractible density.

    Uses s = 2 sqrt(q) cos(theta); the density times ds becomes
    4q sin^2 / ((q-1)^2 + 4q sin^2), which is bounded and smooth on [0, pi].
    """
    r = 2.0 * math.sqrt(q)

    def integrand(theta: float) -> float:
        sn = math.sin(theta)
        w = 4 * q * sn * sn
        den = (q - 1) ** 2 + w
        weight = (1.0 if q == 1 else 0.0) if den == 0.0 else w / den
        return f(r * math.cos(theta)) * weight

    value = _simpson(integrand, 0.0, math.pi, rtol, max_level)
    return vertex_count * (q + 1) / (2 * math.pi) * value


def contractible_term(q: int, vertex_count: int, t: float, rtol: float = QUAD_RTOL,
                      max_level: int = QUAD_MAX_LEVEL) -> float:
    return contractible_integral(q, vertex_count, lambda s: math.exp(s * t), rtol, max_level)


def geodesic_term(gc: GeodesicClass, q: int, t: float) -> float:
    return gc.lam * q ** (-gc.length / 2) * bessel_i(gc.length, 2 * math.sqrt(q) * t)


# ---------------------------------------------------------------------------
# trace formula
# ---------------------------------------------------------------------------

@dataclass
class TraceReport:
    t: float
    lhs: float
    contractible_term: float
    geodesic_sum: float
    truncation_length: int
    tail_bound: float
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.residual <= self.tolerance + self.tail_bound

    def to_dict(self) -> dict:
        return asdict(self)


def truncation_tail_bound(q: int, t: float, l_trunc: int, terms: int = 400) -> float:
    """Majorant for the dropped geodesic terms l > l_trunc.

    Uses gp_l <= p_l <= (q+1)^l and I_l(x) <= (x/2)^l / l! * exp((x/2)^2 / (l+1)).
    """
    a = math.sqrt(q) * abs(t)
    if a == 0.0:
        return 0.0
    total = 0.0
    for l in range(l_trunc + 1, l_trunc + 1 + terms):
        log_term = l * math.log((q + 1) * abs(t)) - math.lgamma(l + 1) + a * a / (l + 1)
        term = math.exp(log_term)
        total += term
        if l > (q + 1) * abs(t) and term < 1e-20 * max(total, 1e-300):
            break
    return total


def verify_trace_formula(g: Graph, t: float, l_trunc: int, *, sp: Spectrum | None = None,
                         gp: list[int] | None = None, tolerance: float = 1e-8,
                         quad_max_level: int = QUAD_MAX_LEVEL) -> TraceReport:
    if l_trunc < 3:
        raise ValueError("l_trunc must be at least 3")
    if not math.isfinite(t):
        raise ValueError("t must be a finite real number")
    sp = sp if sp is not None else spectrum(g)
    gp = gp if gp is not None else count_geodesic_paths(g, l_trunc)
    q = g.q
    lhs = z_t_spectral(sp, t)
    con = contractible_term(q, g.vertex_count, t, max_level=quad_max_level)
    x = 2 * math.sqrt(q) * t
    geo = math.fsum(gp[l] * q ** (-l / 2) * bessel_i(l, x) for l in range(3, l_trunc + 1))
    return TraceReport(
        t=t,
        lhs=lhs,
        contractible_term=con,
        geodesic_sum=geo,
        truncation_length=l_trunc,
        tail_bound=truncation_tail_bound(q, t, l_trunc),
        residual=abs(lhs - con - geo),
        tolerance=tolerance,
    )


def gp_from_spectrum(sp: Spectrum, l: int, window: float = ROUNDING_WINDOW) -> int:
    """Number of geodesic paths of length l recovered from the eigenvalues."""
    if l < 1:
        raise ValueError("l must be at least 1")
    q = sp.q
    r = 2 * math.sqrt(q)
    value = 2 * q ** (l / 2) * math.fsum(chebyshev_t(l, lam / r) for lam in sp.eigenvalues)
    if l % 2 == 0:
        value += (q - 1) * sp.vertex_count
    nearest = round(value)
    if abs(value - nearest) >= window * max(1.0, abs(value)):
        raise NotNearInteger(l, value)
    return int(nearest)


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityTable:
    """Contractible density and a truncation of the full spectral density.

    ``rho_total`` is the partial sum of a series that only converges as a
    distribution; it is a diagnostic, not a pointwise density.
    """

    grid: tuple[float, ...]
    rho_con: tuple[float, ...]
    rho_total: tuple[float, ...]
    truncation_length: int

    def write_csv(self, fh) -> None:
        import csv

        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["s", "rho_con", "rho_total"])
        for row in zip(self.grid, self.rho_con, self.rho_total):
            w.writerow([repr(x) for x in row])


def density_grid(q: int, grid_size: int) -> list[float]:
    """Points strictly inside (-2 sqrt q, 2 sqrt q), clustered towards the ends.

    s_i = -2 sqrt(q) cos(pi (i+1) / (grid_size+1)), ascending.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    r = 2 * math.sqrt(q)
    return [-r * math.cos(math.pi * (i + 1) / (grid_size + 1)) for i in range(grid_size)]


def density_table(g: Graph, l_trunc: int, grid_size: int, gp: list[int] | None = None) -> DensityTable:
    q, n = g.q, g.vertex_count
    gp = gp if gp is not None else count_geodesic_paths(g, l_trunc)
    r = 2 * math.sqrt(q)
    grid = density_grid(q, grid_size)
    con, total = [], []
    for s in grid:
        c = kesten_mckay(q, n, s)
        x = s / r
        kernel = math.pi * math.sqrt(4 * q - s * s)
        geo = math.fsum(gp[l] * q ** (-l / 2) * chebyshev_t(l, x) for l in range(3, l_trunc + 1))
        con.append(c)
        total.append(c + geo / kernel)
    return DensityTable(tuple(grid), tuple(con), tuple(total), l_trunc)


# ---------------------------------------------------------------------------
# special cases and the test-function form
# ---------------------------------------------------------------------------

def verify_polygon_identity(L: int, t: float, r_trunc: int) -> float:
    """|sum_j exp(2t cos(2 pi j/L)) - L sum_{|r|<=r_trunc} I_{|r|L}(2t)|."""
    if L < 3:
        raise ValueError("L must be at least 3")
    lhs = math.fsum(math.exp(2 * t * math.cos(2 * math.pi * j / L)) for j in range(1, L + 1))
    rhs = L * (bessel_i(0, 2 * t) + 2 * math.fsum(bessel_i(r * L, 2 * t) for r in range(1, r_trunc + 1)))
    return abs(lhs - rhs)


def polygon_truncation(L: int, t: float, eps: float = 1e-18) -> int:
    """Smallest r_trunc after which the next Bessel term is negligible."""
    r = 1
    while bessel_i(r * L, 2 * abs(t)) > eps * max(1.0, bessel_i(0, 2 * abs(t))):
        r += 1
    return r


@dataclass(frozen=True)
class TestSequence:
    """Even finitely supported sequence g(n) = g(-n), stored for n >= 0."""

    values: Mapping[int, float]

    __test__ = False  # not a pytest class

    def __call__(self, n: int) -> float:
        return float(self.values.get(abs(n), 0.0))

    @property
    def support_max(self) -> int:
        nz = [n for n, v in self.values.items() if v != 0]
        return max(nz) if nz else 0

    @classmethod
    def indicator(cls, l: int) -> "TestSequence":
        return cls({l: 1.0})

    def transform(self, z: complex) -> complex:
        """sum_n g(n) z^(-n) over all integers n."""
        total = self(0) + 0j
        for n in range(1, self.support_max + 1):
            gn = self(n)
            if gn:
                total += gn * (z**n + z ** (-n))
        return total


def ahumada_identity_term(ts: TestSequence, q: int, vertex_count: int) -> float:
    """Contour term |G| q/(2 pi i) \\oint g^(z) (1-z^2)/(q-z^2) dz/z via Laurent coefficients.

    On |z| = 1 with q > 1, (1-z^2)/(q-z^2) = q^-1 (1-z^2) sum_m (z^2/q)^m; the
    constant term of g^(z) times this leaves sum_m q^-m (g(2m) - g(2m+2)).
    """
    top = ts.support_max // 2 + 1
    return vertex_count * math.fsum(q ** (-m) * (ts(2 * m) - ts(2 * m + 2)) for m in range(top + 1))


def ahumada_contour_numeric(ts: TestSequence, q: int, vertex_count: int, nodes: int = 4096) -> float:
    """The same contour term by the trapezoid rule on z = exp(i phi).

    Needs q > 1 so the integrand has no pole on the unit circle.
    """
    if q <= 1:
        raise ValueError("contour integration on |z| = 1 needs q > 1")
    total = 0j
    for k in range(nodes):
        z = cmath.exp(2j * math.pi * k / nodes)
        total += ts.transform(z) * (1 - z * z) / (q - z * z)
    return vertex_count * q * (total / nodes).real


def verify_ahumada(g: Graph, ts: TestSequence, l_trunc: int, *, sp: Spectrum | None = None,
                   gp: list[int] | None = None) -> float:
    if ts.support_max > l_trunc:
        raise SupportExceedsTruncation(
            f"test sequence support {ts.support_max} exceeds truncation {l_trunc}"
        )
    sp = sp if sp is not None else spectrum(g)
    gp = gp if gp is not None else count_geodesic_paths(g, max(l_trunc, 3))
    q = g.q
    r = 2 * math.sqrt(q)
    support = [n for n in range(1, ts.support_max + 1) if ts(n)]
    lhs = math.fsum(
        ts(0) + 2 * math.fsum(ts(n) * chebyshev_t(n, lam / r) for n in support)
        for lam in sp.eigenvalues
    )
    identity = ahumada_identity_term(ts, q, g.vertex_count)
    geodesic = math.fsum(gp[l] * q ** (-l / 2) * ts(l) for l in range(3, l_trunc + 1))
    return abs(lhs - identity - geodesic)
