"""Hypothesis checks on a right-hand side ``F(z, t) = z**a f(z, t)``."""
from dataclasses import dataclass, field

import numpy as np

from .series import FracPowerSeries, circle, disc_grid, sup_norm_estimate
from .specfun import rgamma

GAP_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    value: float
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {"passed": self.passed, "value": self.value, **self.detail}


@dataclass(frozen=True)
class GrowthEnvelope:
    """Bound ``|F(z, t)| <= c |t - center|**n0 + |g(z)|`` with ``g(0) = 0``."""

    c: float
    n0: int
    g: FracPowerSeries = field(default_factory=FracPowerSeries.zero)
    Mg: float = None

    def __post_init__(self):
        if self.c < 0 or self.n0 < 1:
            raise ValueError("envelope needs c >= 0 and n0 >= 1")
        if abs(self.g.coeffs[0]) > GAP_TOL or not self.g.is_analytic:
            raise ValueError("envelope function g must be analytic with g(0) = 0")
        sup = sup_norm_estimate(self.g, 1.0)
        if self.Mg is None:
            object.__setattr__(self, "Mg", sup)
        elif self.Mg < sup * (1 - 1e-12):
            raise ValueError(f"Mg={self.Mg} is below the sampled sup of |g| ({sup})")

    def to_json(self):
        return {"c": self.c, "n0": self.n0, "g": self.g.to_json(), "Mg": self.Mg}

    @classmethod
    def from_json(cls, obj):
        g = FracPowerSeries.from_json(obj["g"]) if "g" in obj else FracPowerSeries.zero()
        return cls(float(obj["c"]), int(obj["n0"]), g, obj.get("Mg"))


def check_condition_II(F, b, a):
    """``F(0, b) == b / Gamma(1 - a)``; value is the gap ``|F(0,b) - b/Gamma(1-a)|``."""
    b = complex(b)
    delta = F.at_origin(b) - b * rgamma(1.0 - a)
    gap = abs(delta)
    return CheckResult(gap <= GAP_TOL, gap, {"delta": [delta.real, delta.imag]})


def check_regularized_compat(F, b):
    """``F(0, b) == 0``, the compatibility premise for the Caputo-type problem."""
    v = F.at_origin(complex(b))
    return CheckResult(abs(v) <= GAP_TOL, abs(v), {"F0b": [v.real, v.imag]})


def check_finite(F, n_z=32, n_t=16, t_radius=2.0):
    """Smoke test that F stays finite on a sample of the bidisc."""
    z = disc_grid(1.0, 8, n_z)
    t = np.concatenate([[0.0], disc_grid(t_radius, 4, n_t)])
    vals = F(z[:, None], t[None, :])
    sup = float(np.max(np.abs(vals)))
    return CheckResult(bool(np.isfinite(sup)), sup)


def check_growth(F, env, b=0.0, mode="abs", n_z=32, n_t=32, t_radius=2.0, tol=GAP_TOL):
    """Sample ``|F(z,t)| <= c |t - b*[centered]|**n0 + |g(z)|`` on the closed bidisc.

    The returned margin is ``max (|F| - bound) / max(1, bound)``; it is <= 0
    (up to ``tol``) when the bound holds everywhere sampled.
    """
    if n_z < 8 or n_t < 8:
        raise ValueError("sample counts must be at least 8")
    if mode not in ("abs", "centered"):
        raise ValueError(f"unknown growth mode {mode!r}")
    center = complex(b) if mode == "centered" else 0.0
    z = np.concatenate([[0.0], disc_grid(1.0, 8, n_z)])
    t = center + np.concatenate([[0.0], disc_grid(t_radius, n_t // 4, n_t)])
    lhs = np.abs(F(z[:, None], t[None, :]))
    bound = env.c * np.abs(t - center)[None, :] ** env.n0 + np.abs(env.g(z))[:, None]
    margin = (lhs - bound) / np.maximum(1.0, bound)
    idx = np.unravel_index(np.argmax(margin), margin.shape)
    worst = float(margin[idx])
    zw, tw = complex(z[idx[0]]), complex(t[idx[1]])
    return CheckResult(
        worst <= tol,
        worst,
        {"mode": mode, "worst_z": [zw.real, zw.imag], "worst_t": [tw.real, tw.imag]},
    )


def bound_on_bidisc(F, r, n_z=64, n_t=32):
    """Sampled ``max |F(z, t)|`` over ``|z| = 1``, ``|t| = r`` (max modulus in both)."""
    vals = F(circle(1.0, n_z)[:, None], circle(r, n_t)[None, :])
    return float(np.max(np.abs(vals)))
