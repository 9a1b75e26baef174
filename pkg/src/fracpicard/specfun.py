"""Real log-gamma, gamma ratios and beta values."""
import math

# Arguments this close to a nonpositive integer are treated as poles of Gamma.
# Exponent bookkeeping such as (a - 1) + 1 - a can miss zero by an ulp.
POLE_TOL = 1e-12


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


def _near_pole(x):
    n = round(x)
    return n <= 0 and abs(x - n) <= POLE_TOL * max(1.0, abs(x))


def log_gamma(x):
    """Return ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires 0 < x < inf, got {x!r}")
    return math.lgamma(x)


def _log_abs_gamma(x):
    """(ln|Gamma(x)|, sign Gamma(x)) for x that is not a pole."""
    if x > 0.0:
        return log_gamma(x), 1.0
    # reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    s = math.sin(math.pi * x)
    lg = math.log(math.pi) - math.log(abs(s)) - log_gamma(1.0 - x)
    return lg, math.copysign(1.0, s)


def gamma_ratio(p, q):
    """Gamma(p) / Gamma(q).

    A pole in the denominator gives exactly 0 (1/Gamma vanishes there); a
    pole in the numerator is a domain error.
    """
    p = float(p)
    q = float(q)
    if _near_pole(p):
        raise DomainError(f"gamma_ratio numerator has a pole at p={p!r}")
    if _near_pole(q):
        return 0.0
    if p == q:
        return 1.0
    lp, sp = _log_abs_gamma(p)
    lq, sq = _log_abs_gamma(q)
    return sp * sq * math.exp(lp - lq)


def gamma(x):
    """Gamma(x) for x not a nonpositive integer."""
    return gamma_ratio(x, 1.0)


def rgamma(x):
    """1/Gamma(x); zero at the poles."""
    return gamma_ratio(1.0, x)


def beta(p, q):
    """B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q) for p, q > 0."""
    p = float(p)
    q = float(q)
    if not (p > 0.0 and q > 0.0):
        raise DomainError(f"beta requires p, q > 0, got ({p!r}, {q!r})")
    return math.exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q))
