"""Fractional integral and derivative on fractional power series.

Two independent routes: the exact monomial rules

    I^a z^p = Gamma(p+1)/Gamma(p+1+a) z^(p+a)
    D^a z^p = Gamma(p+1)/Gamma(p+1-a) z^(p-a)

and Gauss-Jacobi quadrature along the segment [0, z] after the substitution
zeta = t z, which turns the kernel (z - zeta)^(a-1) into the weight (1-t)^(a-1).
"""
from dataclasses import dataclass

import numpy as np

from .series import FracPowerSeries, principal_power
from .specfun import beta, gamma_ratio, rgamma

DEFAULT_NODES = 64
NODE_TOL = 1e-14


class OffsetError(ValueError):
    """Series exponent offset at or below -1 (not locally integrable)."""


class QuadratureConvergenceError(RuntimeError):
    pass


def _check_order(a):
    if not 0.0 < a < 1.0:
        raise ValueError(f"order must lie in (0, 1), got {a!r}")


def _check_mu(s):
    if not s.mu > -1.0:
        raise OffsetError(f"offset mu={s.mu} must exceed -1")


def frac_integral_series(s, a):
    """Exact I^a of a series; the result has offset ``mu + a``."""
    _check_mu(s)
    if a <= 0:
        raise ValueError(f"integral order must be positive, got {a!r}")
    k = np.arange(s.coeffs.size) + s.mu
    mult = np.array([gamma_ratio(p + 1.0, p + 1.0 + a) for p in k])
    return FracPowerSeries(s.coeffs * mult, s.mu + a)


def frac_derivative_series(s, a):
    """Exact D^a of a series; the result has offset ``mu - a``.

    Terms ``z**(a-1)`` are annihilated through the reciprocal-gamma zero.
    """
    _check_mu(s)
    _check_order(a)
    k = np.arange(s.coeffs.size) + s.mu
    mult = np.array([gamma_ratio(p + 1.0, p + 1.0 - a) for p in k])
    return FracPowerSeries(s.coeffs * mult, s.mu - a)


@dataclass(frozen=True)
class JacobiRule:
    """Gauss rule for ``int_0^1 g(t) t**left (1-t)**(a-1) dt``."""

    a: float
    nodes: np.ndarray
    weights: np.ndarray
    left: float = 0.0

    @property
    def n(self):
        return self.nodes.size

    def moment_residual(self, max_degree=None):
        """Largest relative error of ``sum w t^m`` against B(m+1+left, a)."""
        top = 2 * self.n - 1 if max_degree is None else max_degree
        worst = 0.0
        for m in range(top + 1):
            exact = beta(m + 1.0 + self.left, self.a)
            got = float(np.sum(self.weights * self.nodes**m))
            worst = max(worst, abs(got - exact) / exact)
        return worst


def _recurrence(n, alpha, beta_):
    """Monic Jacobi recurrence on [-1, 1], weight (1-x)^alpha (1+x)^beta."""
    k = np.arange(n, dtype=float)
    s = 2.0 * k + alpha + beta_
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (beta_**2 - alpha**2) / (s * (s + 2.0))
    diag[0] = (beta_ - alpha) / (alpha + beta_ + 2.0)
    off = np.zeros(n)
    if n > 1:
        off[1] = 4.0 * (1 + alpha) * (1 + beta_) / ((2 + alpha + beta_) ** 2 * (3 + alpha + beta_))
        kk = k[2:]
        ss = s[2:]
        off[2:] = 4.0 * kk * (kk + alpha) * (kk + beta_) * (kk + alpha + beta_) / (ss**2 * (ss + 1.0) * (ss - 1.0))
    return diag, off


def _orthonormal(t, n, diag, sq_off, mu0):
    """Values and derivatives of p_0..p_n (orthonormal) at points t."""
    p_prev = np.zeros_like(t)
    dp_prev = np.zeros_like(t)
    p = np.full_like(t, 1.0 / np.sqrt(mu0))
    dp = np.zeros_like(t)
    sumsq = p * p
    for k in range(n):
        b_next = sq_off[k + 1]
        p_next = ((t - diag[k]) * p - sq_off[k] * p_prev) / b_next
        dp_next = ((t - diag[k]) * dp + p - sq_off[k] * dp_prev) / b_next
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
        if k < n - 1:
            sumsq = sumsq + p * p
    return p, dp, sumsq


def gauss_jacobi_rule(n, a, left=0.0, max_newton=20):
    """Nodes and weights on (0, 1) for the weight ``t**left (1-t)**(a-1)``.

    Golub-Welsch for starting nodes, Newton polish on the orthonormal
    recurrence, weights from the Christoffel function.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if not a > 0.0 or not left > -1.0:
        raise ValueError(f"weight exponents out of range: a={a!r}, left={left!r}")
    alpha, beta_ = a - 1.0, left
    diag, off = _recurrence(n + 1, alpha, beta_)
    # map x in [-1, 1] to t = (x + 1) / 2
    diag = (diag + 1.0) / 2.0
    sq_off = np.sqrt(off) / 2.0
    mu0 = beta(left + 1.0, a)

    jac = np.diag(diag[:n]) + np.diag(sq_off[1:n], 1) + np.diag(sq_off[1:n], -1)
    t = np.sort(np.linalg.eigvalsh(jac))
    for _ in range(max_newton):
        p, dp, _ = _orthonormal(t, n, diag, sq_off, mu0)
        step = p / dp
        t = t - step
        if np.max(np.abs(step)) <= NODE_TOL * 0.1:
            break
    else:
        raise QuadratureConvergenceError(f"Newton polish did not settle for n={n}, a={a}, left={left}")
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise QuadratureConvergenceError("nodes left the open interval (0, 1)")
    _, _, sumsq = _orthonormal(t, n, diag, sq_off, mu0)
    w = 1.0 / sumsq
    rule = JacobiRule(float(a), t, w, float(left))
    if rule.moment_residual(min(2 * n - 1, 40)) > 1e3 * NODE_TOL:
        raise QuadratureConvergenceError(f"moment residual too large for n={n}, a={a}")
    return rule


def frac_integral_quad(u, a, z, rule):
    """I^a applied to ``zeta**left * u(zeta)`` at the point z, by quadrature.

    ``u`` maps an array of complex points to values. With ``rule.left = 0``
    this is the plain fractional integral of ``u``.
    """
    _check_order(a)
    if rule.a != a:
        raise ValueError(f"rule built for order {rule.a}, asked for {a}")
    z = complex(z)
    if z == 0:
        raise ValueError("quadrature point must be nonzero")
    vals = np.asarray(u(rule.nodes * z), dtype=np.complex128)
    scale = complex(principal_power(z, a + rule.left)) * rgamma(a)
    return scale * complex(np.dot(rule.weights, vals))
