"""Picard iteration for ``D^a u = f(z, u)`` on the unit disc.

With ``F = z**a f`` the integral form of the problem is

    u(z) = [b] + 1/Gamma(a) int_0^z zeta**(-a) F(zeta, u(zeta)) (z - zeta)**(a-1) dzeta

and on monomials the integral operator is diagonal:
``z**k -> Gamma(k+1-a)/Gamma(k+1) z**k``. One Picard step is therefore a
truncated composition ``F(z, u(z))`` followed by a coefficient-wise scaling.
"""
import csv
import enum
import io
import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import conditions as cond
from .conditions import CheckResult, GrowthEnvelope
from .fracops import gauss_jacobi_rule
from .series import (
    DEFAULT_TRUNC,
    BivariateSeries,
    FracPowerSeries,
    compose_rhs,
    disc_grid,
    eval_series,
    schwarz_check,
    sup_norm_estimate,
)
from .specfun import gamma_ratio, rgamma

__all__ = [
    "Kind",
    "ProblemSpec",
    "GrowthEnvelope",
    "ContractionEstimate",
    "SolveReport",
    "SolverError",
    "HypothesisViolation",
    "ConditionIIViolated",
    "RegularizedCompatViolated",
    "MaxIterExceeded",
    "DivergenceError",
    "NoContractionWarning",
    "picard_multipliers",
    "picard_step",
    "solve_picard",
    "estimate_radius",
    "estimate_lipschitz",
    "shift_to_homogeneous",
    "univalence_check",
    "probe_invariant_ball",
    "picard_quad",
    "coeff_distance",
]


RATE_TOL = 1e-12


class Kind(str, enum.Enum):
    RL = "rl"
    REGULARIZED = "regularized"
    REAL_RL = "real-rl"
    REAL_CAPUTO = "real-caputo"

    @property
    def complex_kind(self):
        if self in (Kind.RL, Kind.REAL_RL):
            return Kind.RL
        return Kind.REGULARIZED


class SolverError(RuntimeError):
    report = None


class HypothesisViolation(SolverError):
    """A premise of the existence theory fails for the given data."""

    def __init__(self, message, check):
        super().__init__(message)
        self.check = check

    @property
    def gap(self):
        return self.check.value


class ConditionIIViolated(HypothesisViolation):
    pass


class RegularizedCompatViolated(HypothesisViolation):
    pass


class MaxIterExceeded(SolverError):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class DivergenceError(SolverError):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class NoContractionWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    kind: Kind
    a: float
    rhs: BivariateSeries
    b: complex = 0j
    trunc: int = DEFAULT_TRUNC
    tol: float = 1e-12
    max_iter: int = 200
    envelope: GrowthEnvelope = None
    ball_radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "b", complex(self.b))
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"order must lie in (0, 1), got {self.a!r}")
        if self.trunc < 1:
            raise ValueError("trunc must be at least 1")

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class ContractionEstimate:
    kappa: float
    a: float

    @property
    def rate(self):
        return self.kappa * gamma_ratio(2.0 - self.a, 1.0)

    @property
    def threshold(self):
        return rgamma(2.0 - self.a)

    @property
    def contracts(self):
        # rates within RATE_TOL of 1 are the boundary case, not a contraction
        return self.rate < 1.0 - RATE_TOL

    def to_json(self):
        return {"kappa": self.kappa, "rate": self.rate, "threshold": self.threshold}


@dataclass
class SolveReport:
    solution: FracPowerSeries
    radius: float
    iterations: int
    status: str
    distances: list
    observed_ratios: list
    residual_series: float
    residual_quad: float
    contraction: ContractionEstimate
    radius_source: str
    diagnostics: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def converged(self):
        return self.status == "converged"

    def to_json(self):
        return {
            "status": self.status,
            "solution": self.solution.to_json(),
            "radius": self.radius,
            "radiusSource": self.radius_source,
            "iterations": self.iterations,
            "distances": list(self.distances),
            "observedRatios": list(self.observed_ratios),
            "residualSeries": self.residual_series,
            "residualQuad": self.residual_quad,
            "contraction": self.contraction.to_json(),
            "conditions": self.diagnostics,
            "warnings": list(self.warnings),
        }

    def convergence_csv(self):
        """Iteration table with columns ``n, distance, ratio``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "distance", "ratio"])
        for i, d in enumerate(self.distances, start=1):
            ratio = self.distances[i - 1] / self.distances[i - 2] if i > 1 and self.distances[i - 2] > 0 else ""
            w.writerow([i, repr(float(d)), "" if ratio == "" else repr(float(ratio))])
        return buf.getvalue()


@lru_cache(maxsize=64)
def _multipliers(a, n):
    m = np.array([gamma_ratio(k + 1.0 - a, k + 1.0) for k in range(n + 1)])
    m.flags.writeable = False
    return m


def picard_multipliers(a, n):
    """``Gamma(k+1-a)/Gamma(k+1)`` for k = 0..n."""
    return _multipliers(float(a), int(n))


def picard_step(F, u, a, kind=Kind.RL, b=0j, n=DEFAULT_TRUNC):
    """One application of the integral operator to an analytic series ``u``."""
    kind = Kind(kind).complex_kind
    phi = compose_rhs(F, u, n)
    coeffs = phi.coeffs * picard_multipliers(a, n)
    if kind is Kind.REGULARIZED:
        coeffs = coeffs.copy()
        coeffs[0] += b
    return FracPowerSeries(coeffs)


def coeff_distance(u, v, R):
    """``max_k |u_k - v_k| R**k``.

    By the Cauchy estimates this never exceeds the sup norm of ``u - v`` on
    ``|z| = R``, and it vanishes only when the coefficients agree.
    """
    n = max(u.trunc, v.trunc)
    d = u.padded(n).coeffs - v.padded(n).coeffs
    return float(np.max(np.abs(d) * R ** np.arange(n + 1)))


def picard_quad(F, u, a, z, rule):
    """Quadrature image ``1/Gamma(a) int_0^1 t**(-a) (1-t)**(a-1) F(tz, u(tz)) dt``.

    ``rule`` must carry the left exponent ``-a``. Evaluates F pointwise,
    independently of the truncated composition.
    """
    pts = rule.nodes * complex(z)
    vals = F(pts, eval_series(u, pts))
    return rgamma(a) * complex(np.dot(rule.weights, vals))


def estimate_radius(env, r, a, tol=1e-12):
    """Largest R in (0, 1] with ``c r^n0 R^n0 G(n0+1-a)/G(n0+1) + Mg R G(2-a) <= r``."""
    if not r > 0:
        raise ValueError("ball radius r must be positive")
    k1 = env.c * r**env.n0 * gamma_ratio(env.n0 + 1.0 - a, env.n0 + 1.0)
    k2 = env.Mg * gamma_ratio(2.0 - a, 1.0)

    def bound(R):
        return k1 * R**env.n0 + k2 * R

    if bound(1.0) <= r:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bound(mid) <= r:
            lo = mid
        else:
            hi = mid
    return lo


def estimate_lipschitz(F, a, n_z=64, n_t=16, t_radius=1.0):
    """Lipschitz constant of ``t -> F(z, t)`` and the induced contraction rate.

    Affine F is handled exactly (sup over ``|z| = 1`` of the ``t`` coefficient);
    otherwise difference quotients are sampled over ``|z| = 1`` and pairs of
    points in the disc ``|t| <= t_radius``.
    """
    if n_z < 8 or n_t < 8:
        raise ValueError("sample counts must be at least 8")
    if F.is_affine_in_t():
        return ContractionEstimate(sup_norm_estimate(F.t_column(1), 1.0, n_z), a)
    z = np.exp(2j * np.pi * np.arange(n_z) / n_z)
    t = np.concatenate([[0.0], disc_grid(t_radius, 4, n_t)])
    vals = F(z[:, None], t[None, :])
    i, j = np.triu_indices(t.size, 1)
    q = np.abs(vals[:, i] - vals[:, j]) / np.abs(t[i] - t[j])[None, :]
    return ContractionEstimate(float(np.max(q)), a)


def probe_invariant_ball(F, a, r, R, kind=Kind.RL, b=0j, n=DEFAULT_TRUNC, n_samples=128):
    """Sampled test that P maps the ball ``sup_{|z|<=R} |u - b| <= r`` into itself.

    Probes are ``b + r e^{i theta} (z/R)**k`` for k = 1..4 and eight phases, plus
    their normalized sums. Returns the largest ``sup |Pu - b| / r`` seen; a
    value above 1 is a witness that the ball is not invariant.
    """
    kind = Kind(kind).complex_kind
    offset = b if kind is Kind.REGULARIZED else 0j
    probes = []
    for k in range(1, 5):
        for theta in np.arange(8) * np.pi / 4:
            probes.append(FracPowerSeries.monomial(k, r * np.exp(1j * theta) / R**k))
    probes.append(FracPowerSeries(np.r_[0.0, r * np.ones(4) / (4 * R ** np.arange(1, 5))]))
    worst = 0.0
    for v in probes:
        pu = picard_step(F, v + offset, a, kind, b, n) - offset
        worst = max(worst, sup_norm_estimate(pu, R, n_samples) / r)
    return worst


def shift_to_homogeneous(F, b, a):
    """Right-hand side for ``v = u - b``: ``H(z, s) = F(z, s + b) - b / Gamma(1 - a)``."""
    b = complex(b)
    if b == 0:
        return F
    K = F.coeffs.shape[1]
    T = np.zeros((K, K), dtype=np.complex128)
    for k in range(K):
        for m in range(k + 1):
            T[k, m] = math.comb(k, m) * b ** (k - m)
    H = F.coeffs @ T
    H[0, 0] -= b * rgamma(1.0 - a)
    return BivariateSeries(H)


def univalence_check(u, R=1.0, n=16, close=1e-10, apart=1e-3):
    """Search a polar grid of the disc for two separated points with equal image.

    Returns False as soon as a witness pair is found. The angle count is
    rounded up to a multiple of 12 so rotations by 2pi/m, m in {2, 3, 4, 6},
    map the grid onto itself. A True result is evidence, not proof.
    """
    if n < 16:
        raise ValueError("n must be at least 16")
    n_angles = 12 * math.ceil(n / 12)
    z = disc_grid(R, n, n_angles)
    w = eval_series(u, z)
    i, j = np.triu_indices(z.size, 1)
    hit = (np.abs(w[i] - w[j]) < close) & (np.abs(z[i] - z[j]) >= apart)
    return not bool(np.any(hit))


def _quad_points(R):
    radii = R * np.array([0.25, 0.5, 0.75, 1.0])
    ang = np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)
    return (radii[:, None] * ang[None, :]).ravel()


def _residual_quad(F, u, a, kind, b, R, n_nodes=64):
    rule = gauss_jacobi_rule(n_nodes, a, left=-a)
    shift = b if kind is Kind.REGULARIZED else 0j
    worst = 0.0
    for z in _quad_points(R):
        worst = max(worst, abs(eval_series(u, z) - shift - picard_quad(F, u, a, z, rule)))
    return worst


def solve_picard(p, seed=None, quad_nodes=64):
    """Fixed-point iteration for problem ``p``; see :class:`SolveReport`.

    Raises :class:`ConditionIIViolated` / :class:`RegularizedCompatViolated`
    when the data are incompatible with the initial value,
    :class:`DivergenceError` on growing iterates and :class:`MaxIterExceeded`
    when a contracting iteration fails to settle.
    """
    kind = p.kind.complex_kind
    a, b, n, F = p.a, p.b, p.trunc, p.rhs
    diagnostics = {"conditionI": cond.check_finite(F).to_json()}
    notes = []

    if kind is Kind.RL:
        c2 = cond.check_condition_II(F, b, a)
        diagnostics["conditionII"] = c2.to_json()
        if not c2:
            raise ConditionIIViolated(f"F(0, b) - b/Gamma(1-a) = {c2.detail['delta']} (gap {c2.value:.3g})", c2)
        work_F, work_b, offset = shift_to_homogeneous(F, b, a), 0j, b
        growth_mode_F, growth_b, growth_mode = work_F, 0j, "abs"
    else:
        cr = cond.check_regularized_compat(F, b)
        diagnostics["regularizedCompat"] = cr.to_json()
        if not cr:
            raise RegularizedCompatViolated(f"F(0, b) = {cr.detail['F0b']} must vanish", cr)
        work_F, work_b, offset = F, b, 0j
        growth_mode_F, growth_b, growth_mode = F, b, "centered"

    contraction = estimate_lipschitz(work_F, a, t_radius=max(1.0, p.ball_radius))
    diagnostics["lipschitz"] = contraction.to_json()

    growth_ok = False
    if p.envelope is not None:
        g = cond.check_growth(growth_mode_F, p.envelope, growth_b, growth_mode)
        diagnostics["growth"] = g.to_json()
        growth_ok = g.passed

    if contraction.contracts:
        R, radius_source = 1.0, "contraction"
    elif p.envelope is not None:
        R = estimate_radius(p.envelope, p.ball_radius, a)
        probe = probe_invariant_ball(work_F, a, p.ball_radius, R, kind, work_b, n)
        diagnostics["ballProbe"] = {"passed": probe <= 1 + 1e-12, "worstRatio": probe, "r": p.ball_radius}
        radius_source = "envelope" if growth_ok and probe <= 1 + 1e-12 else "envelope-unverified"
        notes.append(f"radius {R:.17g} from growth envelope with ball radius {p.ball_radius}")
    else:
        R, radius_source = 1.0, "default"
        notes.append("no contraction and no growth envelope; radius defaults to 1")

    if not contraction.contracts:
        notes.append(f"NoContraction: estimated rate {contraction.rate:.17g} is not below 1")
        warnings.warn(f"estimated contraction rate {contraction.rate:.6g} is not below 1", NoContractionWarning, stacklevel=2)

    if seed is None:
        u = FracPowerSeries([work_b])
    else:
        u = seed - offset if kind is Kind.RL else seed

    distances, ratios = [], []
    status, growing = None, 0
    it = 0
    for it in range(1, p.max_iter + 1):
        nxt = picard_step(work_F, u, a, kind, work_b, n)
        d = coeff_distance(nxt, u, R)
        u = nxt
        distances.append(d)
        if len(distances) > 1 and distances[-2] > 0:
            ratios.append(d / distances[-2])
            growing = growing + 1 if d > distances[-2] else 0
        if not math.isfinite(d) or growing >= 5:
            status = "diverged"
            break
        if d <= p.tol:
            status = "converged"
            break

    if status is None:
        if contraction.contracts:
            status = "max-iter"
        elif radius_source == "envelope":
            status = "inconclusive"
            notes.append("InvariantBallVerified|IterationInconclusive")
        else:
            status = "no-contraction"

    residual_series = coeff_distance(picard_step(work_F, u, a, kind, work_b, n), u, R)
    solution = u + offset if offset != 0 else u
    finite = status != "diverged"
    residual_quad = _residual_quad(F, solution, a, kind, b, R, quad_nodes) if finite else float("inf")

    if finite and abs(solution.coeffs[0]) <= p.tol:
        sup = sup_norm_estimate(solution, R)
        if sup > 0:
            sc = schwarz_check(solution, sup, R)
            diagnostics["schwarz"] = {"passed": sc.passed, "worstRatio": sc.worst_ratio, "r": sup}

    report = SolveReport(
        solution=solution,
        radius=R,
        iterations=it,
        status=status,
        distances=distances,
        observed_ratios=ratios,
        residual_series=residual_series,
        residual_quad=residual_quad,
        contraction=contraction,
        radius_source=radius_source,
        diagnostics=diagnostics,
        warnings=notes,
    )
    if status == "diverged":
        raise DivergenceError(f"iterates grew for 5 consecutive steps (last distance {distances[-1]:.3g})", report)
    if status == "max-iter":
        raise MaxIterExceeded(f"no convergence in {p.max_iter} iterations (last distance {distances[-1]:.3g})", report)
    return report
