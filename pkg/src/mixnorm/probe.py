"""Numerical probes of open contractive inequalities between Bergman spaces
``A^p_{cp-2}`` (which grow with ``p``) and their Hardy-space limit.

Conjectures, by key:

* ``eq14``: ``||f||_{A^p_{cp-2}} <= ||f||_{A^q_{cq-2}}`` for ``1/c < q < p``;
* ``eq15``: the case ``c = alpha + 1/2``, ``q = 2``, i.e.
  ``||f||_{A^p_{(2 alpha + 1)p/2 - 2}} <= ||f||_{A^2_{2 alpha - 1}}``, ``p >= 2``;
* ``eq16``: ``||f||_{A^p_{cp-2}} <= ||f||_{H^{1/c}}`` for ``p > 1/c``;
* ``eq17``: the case ``c = 1/2`` of ``eq16``, against the ``H^2`` norm.

A probe never asserts anything: a margin below minus its error estimate is
recorded as a candidate violation and reported with everything needed to
reproduce it.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from mixnorm.errors import DomainError
from mixnorm.funcs import Monomial, Polynomial
from mixnorm.norms import bergman_norm, hardy_norm
from mixnorm.specfun import log_beta

CONJECTURES = ("eq14", "eq15", "eq16", "eq17")

DEFAULT_REL_TOL = 1e-8
DEFAULT_MEAN_REL_TOL = 1e-9
DEFAULT_SEED = 0
DEFAULT_DEGREE = 32
DEFAULT_COUNT = 1000

DEFAULT_GRIDS = {
    "eq14": [(0.5, 3.0, 4.0), (0.5, 3.0, 6.0), (1.0, 2.0, 3.0), (1.0, 1.5, 4.0)],
    "eq15": [(0.5, 4.0), (1.0, 3.0), (1.5, 4.0)],
    "eq16": [(0.5, 4.0), (1.0, 2.0), (1.0, 4.0)],
    "eq17": [(3.0,), (4.0,), (6.0,), (8.0,)],
}


@dataclass(frozen=True)
class Corpus:
    """Seeded random polynomials: degree uniform in ``1..degree``, real and
    imaginary parts of the coefficients uniform in ``[-1, 1]``."""

    count: int = DEFAULT_COUNT
    degree: int = DEFAULT_DEGREE
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.count < 0 or self.degree < 1:
            raise DomainError(f"need count >= 0 and degree >= 1, got {self.count}, {self.degree}")

    def functions(self):
        rng = np.random.default_rng(self.seed)
        for _ in range(self.count):
            deg = int(rng.integers(1, self.degree + 1))
            re = rng.uniform(-1.0, 1.0, deg + 1)
            im = rng.uniform(-1.0, 1.0, deg + 1)
            yield Polynomial(tuple(complex(x, y) for x, y in zip(re, im)))

    def to_json(self):
        return {"count": self.count, "degree": self.degree, "seed": self.seed}


@dataclass(frozen=True)
class Margin:
    """``margin = upper - lower`` for a conjectured ``lower <= upper``."""

    conjecture: str
    function: str
    params: dict
    lower: float
    upper: float
    margin: float
    error: float

    @property
    def violation(self):
        return self.margin < -self.error

    def to_json(self):
        return {
            "conjecture": self.conjecture,
            "function": self.function,
            "params": self.params,
            "lower": self.lower,
            "upper": self.upper,
            "margin": self.margin,
            "error": self.error,
            "violation": self.violation,
        }


def _check_weight(c, p):
    if not c * p - 2.0 > -1.0:
        raise DomainError(f"Bergman weight c p - 2 = {c * p - 2.0:g} must be > -1")


def _monomial_bergman(k, p, alpha):
    # ||z^k||^p_{A^p_alpha} = (alpha + 1) B(alpha + 1, kp/2 + 1)
    return math.exp((math.log(alpha + 1.0) + log_beta(alpha + 1.0, 0.5 * k * p + 1.0)) / p)


def _bergman(f, p, alpha, tols):
    if isinstance(f, Monomial):
        return _monomial_bergman(f.k, p, alpha), 0.0
    result = bergman_norm(f, p, alpha, rel_tol=tols[0], mean_rel_tol=tols[1])
    return result.value, result.abs_error_estimate


def _hardy(f, p, tols):
    if isinstance(f, Monomial):
        return 1.0, 0.0
    result = hardy_norm(f, p, mean_rel_tol=tols[1])
    return result.value, result.abs_error_estimate


def _tols(rel_tol, mean_rel_tol):
    return (rel_tol, DEFAULT_MEAN_REL_TOL if mean_rel_tol is None else mean_rel_tol)


def probe_contract(f, c, q, p, rel_tol=DEFAULT_REL_TOL, mean_rel_tol=None, conjecture="eq14"):
    """Margin ``||f||_{A^q_{cq-2}} - ||f||_{A^p_{cp-2}}`` for ``1/c < q < p < inf``."""
    if not (c > 0 and 1.0 / c < q < p < math.inf):
        raise DomainError(f"need 1/c < q < p < inf, got c={c!r}, q={q!r}, p={p!r}")
    _check_weight(c, p)
    _check_weight(c, q)
    tols = _tols(rel_tol, mean_rel_tol)
    lower, lower_err = _bergman(f, p, c * p - 2.0, tols)
    upper, upper_err = _bergman(f, q, c * q - 2.0, tols)
    params = {"c": c, "q": q, "p": p}
    return Margin(conjecture, f.literal(), params, lower, upper, upper - lower, lower_err + upper_err)


def probe_lieb_solovej(f, alpha, p, rel_tol=DEFAULT_REL_TOL, mean_rel_tol=None):
    """``eq15``: ``probe_contract`` with ``c = alpha + 1/2`` and ``q = 2``."""
    if not (alpha > 0 and p > 2):
        raise DomainError(f"need alpha > 0 and p > 2, got alpha={alpha!r}, p={p!r}")
    m = probe_contract(f, alpha + 0.5, 2.0, p, rel_tol, mean_rel_tol, conjecture="eq15")
    return Margin("eq15", m.function, {"alpha": alpha, "p": p}, m.lower, m.upper, m.margin, m.error)


def probe_hardy(f, c, p, rel_tol=DEFAULT_REL_TOL, mean_rel_tol=None, conjecture="eq16"):
    """Margin ``||f||_{H^{1/c}} - ||f||_{A^p_{cp-2}}`` for ``p > 1/c``."""
    if not (c > 0 and 1.0 / c < p < math.inf):
        raise DomainError(f"need 1/c < p < inf, got c={c!r}, p={p!r}")
    _check_weight(c, p)
    tols = _tols(rel_tol, mean_rel_tol)
    lower, lower_err = _bergman(f, p, c * p - 2.0, tols)
    upper, upper_err = _hardy(f, 1.0 / c, tols)
    return Margin(conjecture, f.literal(), {"c": c, "p": p}, lower, upper, upper - lower, lower_err + upper_err)


def probe_one(f, conjecture, params, rel_tol=DEFAULT_REL_TOL, mean_rel_tol=None):
    """Run one probe; ``params`` is a grid point for ``conjecture``."""
    kw = {"rel_tol": rel_tol, "mean_rel_tol": mean_rel_tol}
    if conjecture == "eq14":
        c, q, p = params
        return probe_contract(f, c, q, p, **kw)
    if conjecture == "eq15":
        alpha, p = params
        return probe_lieb_solovej(f, alpha, p, **kw)
    if conjecture == "eq16":
        c, p = params
        return probe_hardy(f, c, p, **kw)
    if conjecture == "eq17":
        (p,) = params
        m = probe_hardy(f, 0.5, p, conjecture="eq17", **kw)
        return Margin("eq17", m.function, {"p": p}, m.lower, m.upper, m.margin, m.error)
    raise DomainError(f"unknown conjecture {conjecture!r}; expected one of {', '.join(CONJECTURES)}")


@dataclass
class Summary:
    conjecture: str
    corpus: dict
    grid: list
    probes: int = 0
    min_margin: float = math.inf
    argmin: dict = None
    violations: list = field(default_factory=list)

    def to_json(self):
        return {
            "conjecture": self.conjecture,
            "corpus": self.corpus,
            "grid": [list(g) for g in self.grid],
            "probes": self.probes,
            "min_margin": self.min_margin if self.probes else None,
            "argmin": self.argmin,
            "violations": self.violations,
        }


def probe_sweep(corpus, conjecture, grid=None, rel_tol=DEFAULT_REL_TOL, mean_rel_tol=None, csv_file=None):
    """Probe every corpus function at every grid point.

    The summary keeps the smallest margin (ties go to the earliest function,
    then the earliest grid point) and every candidate violation in input
    order.  If ``csv_file`` is given, one row per probe is written to it.
    """
    if conjecture not in CONJECTURES:
        raise DomainError(f"unknown conjecture {conjecture!r}; expected one of {', '.join(CONJECTURES)}")
    grid = [tuple(g) for g in (DEFAULT_GRIDS[conjecture] if grid is None else grid)]
    summary = Summary(conjecture, corpus.to_json(), grid)
    writer = None
    if csv_file is not None:
        writer = csv.writer(csv_file, lineterminator="\n")
        writer.writerow(["index", "function", "params", "lower", "upper", "margin", "error", "violation"])
    for index, f in enumerate(corpus.functions()):
        for point in grid:
            m = probe_one(f, conjecture, point, rel_tol, mean_rel_tol)
            summary.probes += 1
            if m.margin < summary.min_margin:
                summary.min_margin = m.margin
                summary.argmin = {"index": index, **m.to_json()}
            if m.violation:
                summary.violations.append({"index": index, **m.to_json()})
            if writer is not None:
                params = ";".join(f"{k}={v!r}" for k, v in m.params.items())
                writer.writerow([index, m.function, params, repr(m.lower), repr(m.upper), repr(m.margin), repr(m.error), int(m.violation)])
    return summary
