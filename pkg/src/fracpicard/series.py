"""Truncated fractional power series and bivariate right-hand sides.

A :class:`FracPowerSeries` stands for ``sum_k a_k z**(k + mu)`` with the
principal branch ``z**mu = |z|**mu * exp(i mu arg z)``, ``arg z`` in
``(-pi, pi]``. A :class:`BivariateSeries` holds ``F(z, t) = sum c[j, k] z**j t**k``,
the encoding of ``z**a f(z, t)``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _accel

DEFAULT_TRUNC = 64
DEFAULT_RADII = 16
DEFAULT_ANGLES = 64


class BranchError(ValueError):
    """Evaluation at the branch point of a negative power."""


def _as_coeffs(values):
    arr = np.atleast_1d(np.asarray(values, dtype=np.complex128)).copy()
    if arr.ndim != 1:
        raise ValueError("series coefficients must be one-dimensional")
    if arr.size == 0:
        arr = np.zeros(1, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


def principal_power(z, mu):
    """``z**mu`` on the principal branch, ``arg z`` in ``(-pi, pi]``."""
    z = np.asarray(z, dtype=np.complex128)
    if mu == 0:
        return np.ones_like(z)
    # numpy's angle returns +pi on the negative real axis, which is the
    # closed side of the cut we want; -0.0 imaginary parts are folded to +0.
    zc = np.where(z.imag == 0, z.real + 0j, z)
    r = np.abs(zc)
    theta = np.angle(zc)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = r**mu * np.exp(1j * mu * theta)
    return out


@dataclass(frozen=True)
class FracPowerSeries:
    """``sum_{k=0..N} coeffs[k] * z**(k + mu)``."""

    coeffs: np.ndarray
    mu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def trunc(self):
        return self.coeffs.size - 1

    @property
    def is_analytic(self):
        return self.mu == 0.0

    @classmethod
    def zero(cls, mu=0.0):
        return cls(np.zeros(1), mu)

    @classmethod
    def monomial(cls, k, c=1.0, mu=0.0):
        coeffs = np.zeros(k + 1, dtype=np.complex128)
        coeffs[k] = c
        return cls(coeffs, mu)

    def padded(self, n):
        """Copy with exactly ``n + 1`` coefficients (zero padded or truncated)."""
        out = np.zeros(n + 1, dtype=np.complex128)
        m = min(n + 1, self.coeffs.size)
        out[:m] = self.coeffs[:m]
        return FracPowerSeries(out, self.mu)

    def _check_offset(self, other):
        if other.mu != self.mu:
            raise ValueError(f"exponent offsets differ: {self.mu} vs {other.mu}")

    def __add__(self, other):
        if isinstance(other, FracPowerSeries):
            self._check_offset(other)
            n = max(self.trunc, other.trunc)
            return FracPowerSeries(self.padded(n).coeffs + other.padded(n).coeffs, self.mu)
        if self.mu != 0.0:
            return NotImplemented
        c = self.coeffs.copy()
        c[0] += other
        return FracPowerSeries(c)

    __radd__ = __add__

    def __neg__(self):
        return FracPowerSeries(-self.coeffs, self.mu)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, FracPowerSeries):
            return NotImplemented
        return FracPowerSeries(self.coeffs * scalar, self.mu)

    __rmul__ = __mul__

    def __call__(self, z):
        return eval_series(self, z)

    def to_json(self):
        return {"mu": self.mu, "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, list):
            return cls(_pairs_to_complex(obj, "coeffs"))
        if "coeffs" not in obj:
            raise ValueError("series JSON is missing field 'coeffs'")
        return cls(_pairs_to_complex(obj["coeffs"], "coeffs"), obj.get("mu", 0.0))


def _pairs_to_complex(rows, name):
    try:
        return np.array([complex(float(r[0]), float(r[1])) for r in rows], dtype=np.complex128)
    except (TypeError, IndexError, ValueError) as exc:
        raise ValueError(f"field '{name}' must be a list of [re, im] pairs") from exc


@dataclass(frozen=True)
class BivariateSeries:
    """``F(z, t) = sum_{j,k} coeffs[j, k] z**j t**k``."""

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros((1, 1)))

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("bivariate coefficients must form a non-empty matrix")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def degrees(self):
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @classmethod
    def from_terms(cls, terms):
        """Build from ``{(j, k): c}``."""
        jmax = max(j for j, _ in terms)
        kmax = max(k for _, k in terms)
        c = np.zeros((jmax + 1, kmax + 1), dtype=np.complex128)
        for (j, k), v in terms.items():
            c[j, k] += v
        return cls(c)

    def __call__(self, z, t):
        return _accel.bivariate(self.coeffs, z, t)

    def at_origin(self, t):
        """``F(0, t)``, the value probed by the initial-value compatibility test."""
        return complex(np.polyval(self.coeffs[0, ::-1], complex(t)))

    def t_column(self, k):
        """The z-series multiplying ``t**k``."""
        if k >= self.coeffs.shape[1]:
            return FracPowerSeries.zero()
        return FracPowerSeries(self.coeffs[:, k])

    def is_affine_in_t(self):
        return self.coeffs.shape[1] <= 2 or not np.any(self.coeffs[:, 2:])

    def to_json(self):
        return [[[float(v.real), float(v.imag)] for v in row] for row in self.coeffs]

    @classmethod
    def from_json(cls, rows):
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise ValueError("field 'rhs.bivariate' must be a non-empty list of rows")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("field 'rhs.bivariate' rows must have equal length")
        return cls(np.array([_pairs_to_complex(r, "rhs.bivariate") for r in rows]))


def eval_series(s, z):
    """Evaluate ``s`` at scalar or array ``z`` (Horner times principal ``z**mu``)."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    poly = _accel.horner(s.coeffs, z)
    if s.mu != 0.0:
        zero = z == 0
        if np.any(zero) and s.mu < 0:
            raise BranchError(f"z**{s.mu} is singular at z = 0")
        out = poly * principal_power(z, s.mu)
        out[zero] = 0.0
    else:
        out = poly
    return complex(out[0]) if scalar else out


def compose_rhs(F, u, n=DEFAULT_TRUNC):
    """Coefficients 0..n of ``F(z, u(z))`` for an analytic ``u``."""
    if not u.is_analytic:
        raise ValueError("compose_rhs needs an analytic series (mu = 0)")
    return FracPowerSeries(_accel.compose(F.coeffs, u.coeffs[: n + 1], n))


def circle(R, n):
    return R * np.exp(2j * np.pi * np.arange(n) / n)


def disc_grid(R, n_radii=DEFAULT_RADII, n_angles=DEFAULT_ANGLES):
    """Polar sample grid of the closed disc of radius R, origin excluded."""
    radii = R * np.arange(1, n_radii + 1) / n_radii
    return (radii[:, None] * np.exp(2j * np.pi * np.arange(n_angles) / n_angles)[None, :]).ravel()


def sup_norm_estimate(s, R, n_samples=DEFAULT_ANGLES):
    """Max of ``|s|`` over ``n_samples`` equally spaced points of ``|z| = R``."""
    if n_samples < 8:
        raise ValueError("n_samples must be at least 8")
    if not np.any(s.coeffs):
        return 0.0
    return float(np.max(np.abs(eval_series(s, circle(R, n_samples)))))


@dataclass(frozen=True)
class SchwarzResult:
    passed: bool
    worst_ratio: float
    precondition_ok: bool = True
    sup_norm: float = 0.0


def schwarz_check(s, r, R, n_samples=DEFAULT_ANGLES, n_radii=DEFAULT_RADII, tol=1e-12):
    """Sample ``|s(z)| <= (r/R) |z|`` on the disc of radius R.

    ``worst_ratio`` is the largest ``|s(z)| R / (r |z|)`` seen; 1.0 means the
    bound is attained. A series that breaks ``sup|s| <= r`` or ``s(0) = 0``
    fails with ``precondition_ok = False``.
    """
    sup = sup_norm_estimate(s, R, n_samples)
    if abs(s.coeffs[0]) > tol or sup > r * (1 + tol) or not s.is_analytic:
        return SchwarzResult(False, float("nan"), False, sup)
    z = disc_grid(R, n_radii, n_samples)
    ratio = np.abs(eval_series(s, z)) * R / (r * np.abs(z))
    worst = float(np.max(ratio))
    return SchwarzResult(worst <= 1 + tol, worst, True, sup)
