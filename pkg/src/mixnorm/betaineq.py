"""Beta-function inequalities implied by the contractive inclusions.

``F(q) = (aq B(aq, nq + 1))^{1/q}`` is the norm of ``z^{2n}`` in every
``H(p, q, a)``; contractivity for ``q <= v`` makes it nonincreasing in ``q``.
Comparing ``z^{2n}`` in ``H(p, q, a)`` and ``H(p, v, b)`` with ``aq = bv``
gives, after renaming, ``y^{n delta} B(x, y)^{x - 1 + n delta} <=
B(x + n delta, y)^{x - 1}`` for ``x > 1``, ``y > 0``, ``delta >= 0``.

Everything is evaluated in log space; the raw powers overflow quickly.
"""

import csv
import io
import math
from dataclasses import dataclass, field

from mixnorm.errors import DomainError
from mixnorm.specfun import log_beta

F_TOL = 1e-12
MARGIN_TOL = 1e-12


def _log_F(q, a, n):
    return (math.log(a * q) + log_beta(a * q, n * q + 1.0)) / q


def F(q, a, n):
    """``(aq B(aq, nq + 1))^{1/q}``."""
    if not (q > 0 and a > 0):
        raise DomainError(f"q and a must be > 0, got q={q!r}, a={a!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return math.exp(_log_F(q, a, n))


@dataclass
class MonotonicityReport:
    a: float
    n: int
    q_grid: list
    max_violation: float
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {
            "check": "F_decreasing",
            "a": self.a,
            "n": self.n,
            "points": len(self.q_grid),
            "q_min": self.q_grid[0] if self.q_grid else None,
            "q_max": self.q_grid[-1] if self.q_grid else None,
            "max_violation": self.max_violation,
            "violations": self.violations,
            "ok": self.ok,
        }


def check_F_decreasing(a, n, q_grid, tol=F_TOL):
    """Check ``F(q_{i+1}) <= F(q_i) + tol`` along an increasing grid.

    ``max_violation`` is the largest ``F(q_{i+1}) - F(q_i)`` (negative when
    strictly decreasing; ``-inf`` for fewer than two points).
    """
    grid = [float(q) for q in q_grid]
    if any(hi <= lo for lo, hi in zip(grid, grid[1:])):
        raise DomainError("q grid must be strictly increasing")
    values = [F(q, a, n) for q in grid]
    worst = -math.inf
    bad = []
    for (q0, f0), (q1, f1) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        step = f1 - f0
        worst = max(worst, step)
        if step > tol:
            bad.append({"q": q0, "q_next": q1, "F": f0, "F_next": f1, "increase": step})
    return MonotonicityReport(float(a), int(n), grid, worst, bad)


def cor32_margin(x, y, delta, n):
    """``log`` of ``B(x + n delta, y)^{x-1}`` over ``y^{n delta} B(x, y)^{x-1+n delta}``.

    Nonnegative whenever ``x > 1``, ``y > 0``, ``delta >= 0`` and ``n`` is a
    positive integer.
    """
    if not x > 1:
        raise DomainError(f"x must be > 1, got {x!r}")
    if not y > 0:
        raise DomainError(f"y must be > 0, got {y!r}")
    if not delta >= 0:
        raise DomainError(f"delta must be >= 0, got {delta!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if delta == 0:
        return 0.0
    nd = n * delta
    return (x - 1.0) * log_beta(x + nd, y) - nd * math.log(y) - (x - 1.0 + nd) * log_beta(x, y)


@dataclass
class MarginReport:
    rows: list
    min_margin: float
    argmin: dict
    violations: list
    # (x, y, delta) triples where the margin decreased as n grew
    non_monotone: list

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {
            "check": "cor32",
            "points": len(self.rows),
            "min_margin": self.min_margin,
            "argmin": self.argmin,
            "violations": self.violations,
            "non_monotone_in_n": self.non_monotone,
            "ok": self.ok,
        }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y", "delta", "n", "margin"])
        for row in self.rows:
            writer.writerow([row["x"], row["y"], row["delta"], row["n"], repr(row["margin"])])
        return buf.getvalue()


def check_cor32(xs, ys, deltas, ns, tol=MARGIN_TOL):
    """Evaluate :func:`cor32_margin` over a grid; rows in grid order."""
    rows = []
    for x in xs:
        for y in ys:
            for d in deltas:
                for n in ns:
                    rows.append({"x": x, "y": y, "delta": d, "n": n, "margin": cor32_margin(x, y, d, n)})
    if not rows:
        return MarginReport([], math.inf, {}, [], [])
    best = min(rows, key=lambda r: r["margin"])
    violations = [r for r in rows if r["margin"] < -tol]
    non_monotone = []
    for x in xs:
        for y in ys:
            for d in deltas:
                seq = [r["margin"] for r in rows if (r["x"], r["y"], r["delta"]) == (x, y, d)]
                nsorted = [m for _, m in sorted(zip(ns, seq))]
                if any(m1 < m0 - tol for m0, m1 in zip(nsorted, nsorted[1:])):
                    non_monotone.append({"x": x, "y": y, "delta": d})
    argmin = {k: best[k] for k in ("x", "y", "delta", "n")}
    return MarginReport(rows, best["margin"], argmin, violations, non_monotone)
