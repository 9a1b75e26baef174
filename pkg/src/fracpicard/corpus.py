"""Closed-form examples and counterexamples with their expected outcomes."""
import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .fracops import frac_derivative_series
from .series import BivariateSeries, FracPowerSeries
from .solver import (
    ConditionIIViolated,
    Kind,
    NoContractionWarning,
    ProblemSpec,
    picard_step,
    solve_picard,
    univalence_check,
)
from .specfun import gamma_ratio

FAMILY_SAMPLES = 10
DEFAULT_SEED = 20240


class Outcome(str, enum.Enum):
    UNIQUE_SOLUTION = "UniqueSolution"
    SOLUTION_FAMILY = "SolutionFamily"
    CONDITION_II_VIOLATED = "ConditionIIViolated"
    NO_CONTRACTION = "NoContraction"
    ANNIHILATED = "Annihilated"


class UnknownEntry(KeyError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    outcome: Outcome
    tol: float
    description: str

    def problem(self, a=0.5, n=2):
        return _PROBLEMS[self.name](a, n)


def _rand_complex(rng, k):
    return rng.normal(size=k) + 1j * rng.normal(size=k)


def _linear(coef, const=0.0, z_coef=0.0):
    return BivariateSeries.from_terms({(0, 0): const, (0, 1): coef, (1, 0): z_coef})


_PROBLEMS = {
    "kernel": lambda a, n: None,
    "nonunique-linear": lambda a, n: ProblemSpec(Kind.RL, a, _linear(gamma_ratio(1.0, 2.0 - a))),
    "nonunivalent-n": lambda a, n: ProblemSpec(Kind.RL, a, _linear(gamma_ratio(n + 1.0, n + 1.0 - a))),
    "prop310": lambda a, n: ProblemSpec(Kind.RL, a, _linear(0.5, const=1.0)),
    "contract-linear": lambda a, n: ProblemSpec(Kind.RL, a, _linear(0.5)),
    "forced": lambda a, n: ProblemSpec(Kind.RL, a, _linear(0.0, z_coef=1.0)),
    "caputo-linear-rhs": lambda a, n: ProblemSpec(Kind.REGULARIZED, a, _linear(0.0, z_coef=1.0), b=1.0),
}

_ENTRIES = [
    CorpusEntry("kernel", Outcome.ANNIHILATED, 0.0, "D^a (c z^(a-1)) = 0"),
    CorpusEntry("nonunique-linear", Outcome.NO_CONTRACTION, 1e-10, "F = t/Gamma(2-a): family c z, rate exactly 1"),
    CorpusEntry("nonunivalent-n", Outcome.SOLUTION_FAMILY, 1e-12, "F = Gamma(n+1)/Gamma(n+1-a) t: family c z^n, not univalent"),
    CorpusEntry("prop310", Outcome.CONDITION_II_VIOLATED, 1e-12, "F = 0.5 t + 1, b = 0: no analytic solution"),
    CorpusEntry("contract-linear", Outcome.UNIQUE_SOLUTION, 1e-10, "F = 0.5 t: unique solution 0, rate 0.5 Gamma(2-a)"),
    CorpusEntry("forced", Outcome.UNIQUE_SOLUTION, 1e-12, "F = z: u = Gamma(2-a) z"),
    CorpusEntry("caputo-linear-rhs", Outcome.UNIQUE_SOLUTION, 1e-12, "regularized, b = 1, F = z: u = 1 + Gamma(2-a) z"),
]


def corpus_list():
    return list(_ENTRIES)


def _get(name):
    for e in _ENTRIES:
        if e.name == name:
            return e
    raise UnknownEntry(name)


def _family_fixed(F, a, power, rng, tol):
    """Max relative error of P(c z^power) = c z^power over random c."""
    worst = 0.0
    for c in _rand_complex(rng, FAMILY_SAMPLES):
        u = FracPowerSeries.monomial(power, c)
        pu = picard_step(F, u, a, Kind.RL, 0j, power + 2)
        err = np.max(np.abs(pu.padded(power + 2).coeffs - u.padded(power + 2).coeffs)) / abs(c)
        worst = max(worst, float(err))
    return worst


def _run_kernel(entry, a, n, rng):
    worst = 0.0
    for c in _rand_complex(rng, FAMILY_SAMPLES):
        out = frac_derivative_series(FracPowerSeries([c], a - 1.0), a)
        worst = max(worst, float(np.max(np.abs(out.coeffs))))
    return worst == 0.0, {"maxCoefficient": worst}


def _run_nonunique(entry, a, n, rng):
    p = entry.problem(a, n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoContractionWarning)
        rep = solve_picard(p)
    rate = rep.contraction.rate
    fam = _family_fixed(p.rhs, a, 1, rng, entry.tol)
    flagged = any(w.startswith("NoContraction") for w in rep.warnings)
    ok = flagged and abs(rate - 1.0) <= entry.tol and fam <= 1e-14
    return ok, {"rate": rate, "familyError": fam, "noContraction": flagged, "status": rep.status}


def _run_nonunivalent(entry, a, n, rng):
    p = entry.problem(a, n)
    fam = _family_fixed(p.rhs, a, n, rng, entry.tol)
    univalent = univalence_check(FracPowerSeries.monomial(n), 1.0, 16)
    return fam <= 1e-14 and not univalent, {"n": n, "familyError": fam, "univalent": univalent}


def _run_prop310(entry, a, n, rng):
    try:
        solve_picard(entry.problem(a, n))
    except ConditionIIViolated as exc:
        return abs(exc.gap - 1.0) <= entry.tol, {"raised": "ConditionIIViolated", "gap": exc.gap}
    return False, {"raised": None}


def _run_unique(entry, a, n, rng):
    p = entry.problem(a, n)
    g = gamma_ratio(2.0 - a, 1.0)
    if entry.name == "contract-linear":
        rep = solve_picard(p, seed=FracPowerSeries([0.0, 1.0]))
        expected = FracPowerSeries([0.0])
        rate = 0.5 * g
        ratio_err = max((abs(r - rate) for r in rep.observed_ratios), default=float("inf"))
        extra = {"expectedRate": rate, "maxRatioError": ratio_err}
        ok_extra = ratio_err <= entry.tol
    elif entry.name == "forced":
        rep = solve_picard(p)
        expected = FracPowerSeries([0.0, g])
        extra, ok_extra = {}, True
    else:
        rep = solve_picard(p)
        expected = FracPowerSeries([1.0, g])
        extra, ok_extra = {}, True
    m = max(rep.solution.trunc, expected.trunc)
    err = float(np.max(np.abs(rep.solution.padded(m).coeffs - expected.padded(m).coeffs)))
    ok = rep.converged and err <= max(entry.tol, p.tol) and ok_extra
    return ok, {"coefficientError": err, "iterations": rep.iterations, "residual": rep.residual_series, **extra}


_RUNNERS = {
    "kernel": _run_kernel,
    "nonunique-linear": _run_nonunique,
    "nonunivalent-n": _run_nonunivalent,
    "prop310": _run_prop310,
    "contract-linear": _run_unique,
    "forced": _run_unique,
    "caputo-linear-rhs": _run_unique,
}


def corpus_run(name, a=0.5, n=2, seed=DEFAULT_SEED):
    """Run one entry; returns ``(passed, details)``."""
    entry = _get(name)
    rng = np.random.default_rng(seed)
    passed, details = _RUNNERS[name](entry, a, n, rng)
    return bool(passed), {"name": name, "a": a, "expected": entry.outcome.value, "passed": bool(passed), **details}


def corpus_run_all(a=0.5, n=2, seed=DEFAULT_SEED):
    return [corpus_run(e.name, a, n, seed)[1] for e in _ENTRIES]
