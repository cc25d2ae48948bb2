"""Independent checks of generated rules.

Nothing here touches the eigensolvers or the linear algebra module: the
moment-system oracle carries its own small elimination routine and the
Legendre roots come from bisection on the three-term recurrence.
"""

import json
import math
from typing import NamedTuple

import numpy as np

from .errors import NoSolutionFound
from .model import QuadratureRule

__all__ = [
    "ExactnessRow",
    "ExactnessReport",
    "check_exactness",
    "brute_force_rule",
    "legendre_roots",
]

DEFAULT_TOL = 1e-9


class ExactnessRow(NamedTuple):
    degree: int
    moment: complex
    value: complex
    defect: float
    passed: bool


class ExactnessReport:
    """Per-degree defects ``|sum w x^k - m_k|`` of a rule."""

    def __init__(self, rows, tol):
        self.rows = tuple(rows)
        self.tol = tol

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def max_defect(self):
        return max(r.defect for r in self.rows)

    def failures(self):
        return [r for r in self.rows if not r.passed]

    def to_records(self):
        return [{"degree": r.degree, "defect": r.defect, "pass": r.passed} for r in self.rows]

    def to_json(self, **kwargs):
        return json.dumps(self.to_records(), **kwargs)

    def to_text(self):
        lines = [f"{'degree':>6}  {'defect':>12}  {'bound':>12}  pass"]
        for r in self.rows:
            bound = self.tol * max(1.0, abs(r.moment))
            lines.append(f"{r.degree:>6}  {r.defect:>12.3e}  {bound:>12.3e}  {'yes' if r.passed else 'NO':>4}")
        verdict = "PASS" if self.passed else f"FAIL ({len(self.failures())} degrees)"
        lines.append(f"max defect {self.max_defect:.3e} at tol {self.tol:g}: {verdict}")
        return "\n".join(lines)

    def __repr__(self):
        return f"ExactnessReport(passed={self.passed}, max_defect={self.max_defect:.3e})"


def check_exactness(rule, moments, tol=DEFAULT_TOL, degrees=None):
    """Compare ``sum_i w_i x_i^k (+ sum_a v_a y_a^k)`` with the moments.

    ``degrees`` defaults to the rule's exact range. Degree ``k`` passes when
    the defect is at most ``tol * max(1, |m_k|)``; an undefined sum (negative
    power of a node at the origin) counts as an infinite defect.
    """
    if degrees is None:
        lo, hi = rule.exact_range
        degrees = range(lo, hi + 1)
    xs = rule.all_nodes
    ws = rule.all_weights
    rows = []
    for k in degrees:
        mk = moments(k)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = np.sum(ws * xs.astype(complex if rule.flavor == "circle" else float) ** k)
        defect = float(abs(value - mk))
        if not np.isfinite(defect):
            # a node at the origin leaves negative powers undefined
            defect = math.inf
        rows.append(ExactnessRow(int(k), mk, value, defect, defect <= tol * max(1.0, abs(mk))))
    return ExactnessReport(rows, tol)


def _gauss_solve(M, rhs):
    # dense elimination with partial pivoting on python lists
    n = len(rhs)
    a = [list(map(float, row)) + [float(r)] for row, r in zip(M, rhs)]
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[p][k] == 0:
            return None
        a[k], a[p] = a[p], a[k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n + 1):
                a[i][j] -= f * a[k][j]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        x[i] = (a[i][n] - sum(a[i][j] * x[j] for j in range(i + 1, n))) / a[i][i]
    return x


def _residual(x, w, m):
    return [sum(wi * xi ** k for xi, wi in zip(x, w)) - mk for k, mk in enumerate(m)]


def _newton(x, w, m, iters=100):
    size = len(x)
    res = _residual(x, w, m)
    norm = max(abs(r) for r in res)
    for _ in range(iters):
        if norm < 1e-15:
            break
        jac = []
        for k in range(len(m)):
            row = [k * wi * xi ** (k - 1) if k else 0.0 for xi, wi in zip(x, w)]
            row += [xi ** k for xi in x]
            jac.append(row)
        step = _gauss_solve(jac, [-r for r in res])
        if step is None:
            return x, w, math.inf
        t = 1.0
        while t > 1e-6:
            xn = [xi + t * s for xi, s in zip(x, step[:size])]
            wn = [wi + t * s for wi, s in zip(w, step[size:])]
            rn = _residual(xn, wn, m)
            nn = max(abs(r) for r in rn)
            if nn < norm:
                break
            t /= 2
        else:
            break
        x, w, res, norm = xn, wn, rn, nn
    return x, w, norm


def brute_force_rule(moments, n, support=None, *, restarts=50, seed=0, tol=1e-12):
    """Solve the moment equations ``sum_i w_i x_i^k = m_k``, ``k <= 2n + 1``,
    by damped Newton iteration from several starting points.

    Meant for tiny rules (``n <= 2``). Accepts only real, distinct nodes
    inside ``support`` with positive weights and a residual below ``tol``
    (relative to ``max(1, |m_k|)``).
    """
    if not 0 <= n <= 2:
        raise ValueError("the moment-system oracle is limited to n <= 2")
    a, b = support if support is not None else moments.support
    m = [float(moments(k)) for k in range(2 * n + 2)]
    scale = [max(1.0, abs(mk)) for mk in m]
    size = n + 1
    rng = np.random.default_rng(seed)

    def starts():
        yield ([(a + b) / 2 - (b - a) / 2 * math.cos(math.pi * (i + 0.5) / size) for i in range(size)],
               [m[0] / size] * size)
        for _ in range(restarts):
            yield (sorted(rng.uniform(a, b, size)), list(m[0] / size * rng.uniform(0.5, 1.5, size)))

    slack = 1e-10 * (b - a)
    for x0, w0 in starts():
        x, w, _ = _newton(list(map(float, x0)), list(map(float, w0)), m)
        res = _residual(x, w, m)
        if any(not math.isfinite(r) or abs(r) >= tol * s for r, s in zip(res, scale)):
            continue
        order = sorted(range(size), key=lambda i: x[i])
        x = [x[i] for i in order]
        w = [w[i] for i in order]
        if any(not a - slack <= xi <= b + slack for xi in x) or any(wi <= 0 for wi in w):
            continue
        if any(x2 - x1 <= 1e-8 * (b - a) for x1, x2 in zip(x, x[1:])):
            continue
        return QuadratureRule(np.array(x), np.array(w), "interval", 2 * n + 1)
    raise NoSolutionFound(f"no admissible solution of the {2 * size}-equation moment system")


def _legendre(d, x):
    p_prev, p = 1.0, x
    if d == 0:
        return 1.0
    for k in range(1, d):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


def _bisect(f, lo, hi):
    flo = f(lo)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= 1e-15:
            return mid
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid


def legendre_roots(degree):
    """Roots of the Legendre polynomial of the given degree, ascending.

    The roots of consecutive degrees interlace, so each root of ``P_d`` is
    bracketed by neighbouring roots of ``P_{d-1}`` (or by -1 and 1), then
    located by bisection down to adjacent floating-point numbers.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    roots = []
    for d in range(1, degree + 1):
        fences = [-1.0] + roots + [1.0]
        roots = [_bisect(lambda x, d=d: _legendre(d, x), lo, hi)
                 for lo, hi in zip(fences, fences[1:])]
    return roots
