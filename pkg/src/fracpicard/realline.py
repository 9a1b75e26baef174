"""Real-line problems via the complex solution and its real part."""
import csv
import io
from dataclasses import dataclass

import numpy as np

from .conditions import CheckResult
from .fracops import frac_derivative_series
from .series import FracPowerSeries, eval_series
from .solver import HypothesisViolation, Kind, SolveReport, solve_picard

REAL_TOL = 1e-12


class RealCompatViolated(HypothesisViolation):
    pass


@dataclass
class RealSolution:
    x: np.ndarray
    u: np.ndarray
    imag_max: float
    residual: float
    residual_grid: np.ndarray
    report: SolveReport

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "u"])
        for xi, ui in zip(self.x, self.u):
            w.writerow([repr(float(xi)), repr(float(ui))])
        return buf.getvalue()


def check_real_compat(F, b):
    """All coefficients of F and the initial value are real."""
    worst = max(float(np.max(np.abs(F.coeffs.imag))), abs(complex(b).imag))
    return CheckResult(worst <= REAL_TOL, worst)


def default_grid(R, n=101):
    """``n`` uniform points on ``[R/100, R]``, away from the singular origin."""
    return np.linspace(R / 100.0, R, n)


def real_residual(u, F, a, b, kind, grid):
    """``max |D^a[u - b*[Caputo]](x) - x**(-a) F(x, u(x))|`` over ``grid``.

    D^a is the exact monomial rule, so this does not reuse the integral form
    the solver iterated on.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0):
        raise ValueError("residual grid must be strictly positive")
    kind = Kind(kind)
    v = u - complex(b) if kind in (Kind.REAL_CAPUTO, Kind.REGULARIZED) else u
    lhs = eval_series(frac_derivative_series(v, a), grid.astype(complex))
    rhs = grid ** (-a) * F(grid, eval_series(u, grid.astype(complex)))
    return float(np.max(np.abs(lhs - rhs)))


def solve_real(p, grid_n=101, residual_grid=None, seed=None):
    """Solve a real-line problem and sample ``Re u`` on ``[0, R]``."""
    if p.kind not in (Kind.REAL_RL, Kind.REAL_CAPUTO):
        raise ValueError(f"solve_real needs a real-line problem kind, got {p.kind.value}")
    rc = check_real_compat(p.rhs, p.b)
    if not rc:
        raise RealCompatViolated(f"imaginary parts up to {rc.value:.3g} in the data", rc)
    report = solve_picard(p, seed=seed)
    report.diagnostics["realCompat"] = rc.to_json()
    R = report.radius
    x = np.linspace(0.0, R, grid_n)
    vals = eval_series(report.solution, x.astype(complex))
    rgrid = default_grid(R) if residual_grid is None else np.asarray(residual_grid, dtype=float)
    res = real_residual(report.solution, p.rhs, p.a, p.b, p.kind, rgrid)
    return RealSolution(x, vals.real, float(np.max(np.abs(vals.imag))), res, rgrid, report)
