"""Weight registry, analytic moments and pencil builders.

A pencil is the pair of Gram matrices

    B_ij = int w q_i q_j,        A_ij = int w x q_i q_j

for a chosen basis ``q`` (on the unit circle: ``w q_i conj(q_j)`` and
``w z q_i conj(q_j)``; with fixed nodes ``y`` the weight is replaced by
``w(x) prod(x - y)``). Builders in this module produce those matrices in
closed form, either from the moment sequence of the weight (monomial basis)
or from the Jacobi matrix of the Legendre recurrence (orthonormal and
augmented bases), which stays well conditioned as ``n`` grows.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import IndefiniteModifiedWeight, MissingBoundaryData, NotPositiveDefinite, UnknownWeight
from .linalg import cholesky, solve_linear
from .model import BasisSpec, MomentOracle, QuadraturePencil, RealDomain

__all__ = [
    "WeightRegistryEntry",
    "register_weight",
    "get_weight",
    "registered_weights",
    "moments",
    "legendre_recursion",
    "pencil_monomial",
    "pencil_paper_augmented",
    "pencil_augmented_orthonormal",
    "pencil_orthonormal",
    "pencil_legendre",
    "pencil_from_recursion",
    "pencil_circle",
    "pencil_circle_sin2",
    "pencil_fixed_nodes",
    "build_pencil",
]


@dataclass(frozen=True)
class WeightRegistryEntry:
    """A weight function with closed-form moments.

    ``interval_moment(k, a, b)`` integrates ``w(x) x**k`` over ``[a, b]``;
    ``circle_moment(r)`` is the ``r``-th normalized Fourier coefficient.
    ``bases`` lists the interval bases with closed-form pencils. Weights of
    the form ``1/(x - pole)`` set ``pole``, which enables the Legendre basis.
    """

    weight_id: str
    description: str
    domain: Optional[tuple] = None
    interval_moment: Optional[Callable] = None
    circle_moment: Optional[Callable] = None
    bases: tuple = ("monomial",)
    density: Optional[Callable] = None
    admissible: Optional[Callable] = None
    pole: Optional[float] = None

    @property
    def on_interval(self):
        return self.interval_moment is not None

    @property
    def on_circle(self):
        return self.circle_moment is not None


_REGISTRY = {}


def register_weight(entry):
    _REGISTRY[entry.weight_id] = entry
    return entry


def get_weight(weight):
    if isinstance(weight, WeightRegistryEntry):
        return weight
    try:
        return _REGISTRY[weight]
    except KeyError:
        raise UnknownWeight(weight) from None


def registered_weights():
    return dict(_REGISTRY)


def _unit_moment(k, a, b):
    return (b ** (k + 1) - a ** (k + 1)) / (k + 1)


def _inv_one_plus_x_moment(k, a, b):
    # int x^k/(1+x) = int x^(k-1) - int x^(k-1)/(1+x)
    m = math.log((1 + b) / (1 + a))
    for j in range(1, k + 1):
        m = (b ** j - a ** j) / j - m
    return m


def _sin2_moment(r):
    return {0: 0.5, 2: -0.25, -2: -0.25}.get(r, 0.0) + 0j


register_weight(WeightRegistryEntry(
    "unit", "w(x) = 1 on [a, b]; w(t) = 1 on the circle",
    domain=(-1.0, 1.0),
    interval_moment=_unit_moment,
    circle_moment=lambda r: (1.0 if r == 0 else 0.0) + 0j,
    bases=("monomial", "recursion"),
    density=lambda x: np.ones_like(np.asarray(x, dtype=float)),
))
register_weight(WeightRegistryEntry(
    "inv_one_plus_x", "w(x) = 1/(1 + x) on [a, b], a > -1",
    domain=(0.0, 1.0),
    interval_moment=_inv_one_plus_x_moment,
    bases=("monomial", "augmented", "augmented_orthonormal", "recursion"),
    density=lambda x: 1.0 / (1.0 + np.asarray(x, dtype=float)),
    admissible=lambda a, b: a > -1,
    pole=-1.0,
))
register_weight(WeightRegistryEntry(
    "sin2", "w(t) = sin(t)**2 on the unit circle",
    circle_moment=_sin2_moment,
    density=lambda t: np.sin(t) ** 2,
))


def _check_domain(entry, domain):
    if domain is None:
        raise ValueError(f"weight {entry.weight_id!r} needs an interval")
    if entry.admissible is not None and not entry.admissible(domain.a, domain.b):
        raise ValueError(f"weight {entry.weight_id!r} is not defined on [{domain.a}, {domain.b}]")


def _domain_for(entry, domain):
    if domain is None:
        if entry.domain is None:
            raise ValueError(f"weight {entry.weight_id!r} has no default interval")
        domain = entry.domain
    if not isinstance(domain, RealDomain):
        domain = RealDomain(domain[0], domain[1], entry.weight_id)
    elif domain.weight_id != entry.weight_id:
        domain = RealDomain(domain.a, domain.b, entry.weight_id)
    _check_domain(entry, domain)
    return domain


def moments(weight, domain=None, max_degree=None):
    """Moment oracle of a registered weight.

    Interval weights give ``m_k``; circle-only weights (or ``domain="circle"``)
    give the Fourier moments ``mu_r``. With ``max_degree`` the interval
    moments ``0..max_degree`` are tabulated up front.
    """
    entry = get_weight(weight)
    if domain == "circle" or not entry.on_interval:
        if not entry.on_circle:
            raise UnknownWeight(entry.weight_id)
        return MomentOracle("circle", entry.circle_moment, label=entry.weight_id)
    dom = _domain_for(entry, domain)
    a, b = dom.a, dom.b
    cache = {}
    if max_degree is not None:
        cache.update((k, float(entry.interval_moment(k, a, b))) for k in range(max_degree + 1))

    def moment(k):
        if k < 0:
            raise ValueError("interval moments are defined for k >= 0")
        if k not in cache:
            cache[k] = float(entry.interval_moment(k, a, b))
        return cache[k]

    return MomentOracle("interval", moment, (a, b), entry.weight_id)


# Legendre machinery

def legendre_recursion(domain, count):
    """Triples ``(a_j, b_j, c_j)``, ``j < count``, of the orthonormal Legendre
    polynomials on ``[a, b]``: ``x p_j = a_j p_{j+1} + b_j p_j + c_j p_{j-1}``.

    Returns the triples and the constant ``p_0 = 1/sqrt(b - a)``.
    """
    a, b = (domain.a, domain.b) if isinstance(domain, RealDomain) else domain
    half, mid = (b - a) / 2, (a + b) / 2

    def beta(k):
        return half * k / math.sqrt(4 * k * k - 1) if k > 0 else 0.0

    coeffs = tuple((beta(j + 1), mid, beta(j)) for j in range(count))
    return coeffs, 1 / math.sqrt(b - a)


def _jacobi_matrix(domain, size):
    coeffs, _ = legendre_recursion(domain, size)
    J = np.diag([t[1] for t in coeffs])
    off = [t[0] for t in coeffs[:-1]]
    return J + np.diag(off, 1) + np.diag(off, -1)


def _matpoly(M, coeffs):
    """``sum_k coeffs[k] M**k`` by Horner's rule."""
    R = np.zeros_like(M)
    eye = np.eye(M.shape[0])
    for c in reversed(list(coeffs)):
        R = R @ M + c * eye
    return R


def _resolvent_terms(domain, pole):
    """Extra Jacobi rows needed so that ``(J - pole)^-1`` is exact to rounding.

    The truncated resolvent applies an N-point Gauss-Legendre rule to a
    function with a pole outside the interval; its error decays like
    ``rho**(-2N)`` with ``rho`` the Bernstein ellipse parameter of the pole.
    """
    t = abs(2 * pole - domain.a - domain.b) / (domain.b - domain.a)
    rho = t + math.sqrt(t * t - 1)
    return min(int(math.ceil(-math.log(1e-20) / (2 * math.log(rho)))) + 4, 4000)


def _legendre_gram(domain, n, g, extra=0, pole=None):
    """``int g(x) p_i p_j dx`` over ``[a, b]`` for ``i, j <= n + extra``,
    divided by ``(x - pole)`` when a pole is given.

    Polynomial ``g`` alone is exact: entries of ``g(J)`` only involve rows of
    the Jacobi matrix up to ``n + extra + deg(g)/2``. The rational factor is
    the truncated resolvent ``(J - pole)^-1``, i.e. Miller's backward
    recurrence for the Legendre functions of the second kind.
    """
    size = n + extra + len(g) + 2
    if pole is not None:
        size += _resolvent_terms(domain, pole)
    J = _jacobi_matrix(domain, size)
    G = _matpoly(J, g)
    if pole is not None:
        G = solve_linear(J - pole * np.eye(size), G)
    return G[: n + 1 + extra, : n + 1 + extra]


def _augmented_gram(domain, n, g, m0):
    """Gram matrix of ``w(x) = g(x)/(1 + x)`` in the basis
    ``(1 + x) p_0, ..., (1 + x) p_{n-1}, 1``.

    ``m0`` is the integral of ``1/(1 + x)`` over the interval.
    """
    g = np.trim_zeros(np.asarray(g, dtype=float), "b")
    size = n + len(g) + 3
    J = _jacobi_matrix(domain, size)
    Pg = _matpoly(J, g)
    p0 = 1 / math.sqrt(domain.b - domain.a)
    G = np.empty((n + 1, n + 1))
    # (1 + x)^2 / (1 + x) = 1 + x
    G[:n, :n] = ((np.eye(size) + J) @ Pg)[:n, :n]
    G[:n, n] = G[n, :n] = Pg[:n, 0] / p0
    s, rem = P.polydiv(g, [1.0, 1.0])
    G[n, n] = _matpoly(J, s)[0, 0] / p0 ** 2 + rem[0] * m0
    return G


# interval pencils

def pencil_monomial(weight, domain=None, n=0):
    """Hankel pencil ``B_ij = m_{i+j}``, ``A_ij = m_{i+j+1}`` of the monomial basis."""
    entry = get_weight(weight)
    dom = _domain_for(entry, domain)
    oracle = moments(entry, dom, 2 * n + 1)
    m = oracle.table(0, 2 * n + 1)
    idx = np.add.outer(np.arange(n + 1), np.arange(n + 1))
    return QuadraturePencil(m[idx], m[idx + 1], "interval", BasisSpec("monomial", n + 1), dom)


def pencil_paper_augmented(n):
    """Closed-form pencil of ``w = 1/(1 + x)`` on ``[0, 1]`` in the basis
    ``(1 + x) x**i`` (``i < n``) followed by the constant 1.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    ln2 = math.log(2.0)
    B = np.empty((n + 1, n + 1))
    A = np.empty((n + 1, n + 1))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            B[i - 1, j - 1] = 1 / (i + j - 1) + 1 / (i + j)
            A[i - 1, j - 1] = 1 / (i + j) + 1 / (i + j + 1)
        B[i - 1, n] = B[n, i - 1] = 1 / i
        A[i - 1, n] = A[n, i - 1] = 1 / (i + 1)
    B[n, n] = ln2
    A[n, n] = 1 - ln2
    basis = BasisSpec("augmented_by_factor", n + 1, evaluable_index=n, factor=(1.0, 1.0))
    return QuadraturePencil(B, A, "interval", basis, RealDomain(0.0, 1.0, "inv_one_plus_x"))


def pencil_from_recursion(weight, domain, n, coeffs, B, *, next_gram=None, a_columns=None,
                          basis=None, flavor="interval", fixed_nodes=(), weight_sign=1):
    """Pencil whose ``A`` follows from ``B`` through a three-term recursion.

    With ``x q_j = a_j q_{j+1} + b_j q_j + c_j q_{j-1}`` column ``j`` of ``A``
    is ``a_j B[:, j+1] + b_j B[:, j] + c_j B[:, j-1]``. The last column needs
    the Gram column of ``q_{n+1}``, passed as ``next_gram``. Columns where the
    recursion does not apply (``coeffs[j] is None``) are taken from
    ``a_columns``, which also overrides computed columns.
    """
    entry = get_weight(weight)
    dom = _domain_for(entry, domain)
    B = np.asarray(B, dtype=float)
    size = n + 1
    if B.shape != (size, size):
        raise ValueError(f"B must be {size}x{size}")
    a_columns = dict(a_columns or {})
    coeffs = list(coeffs) + [None] * (size - len(coeffs))
    A = np.empty((size, size))
    for j in range(size):
        if j in a_columns:
            A[:, j] = a_columns[j]
            continue
        if coeffs[j] is None:
            raise MissingBoundaryData(j)
        a_j, b_j, c_j = coeffs[j]
        col = b_j * B[:, j]
        if j > 0:
            col = col + c_j * B[:, j - 1]
        if a_j != 0:
            if j + 1 < size:
                col = col + a_j * B[:, j + 1]
            elif next_gram is not None:
                col = col + a_j * np.asarray(next_gram, dtype=float)
            else:
                raise MissingBoundaryData(j)
        A[:, j] = col
    if basis is None:
        triples = [t for t in coeffs[: size - 1]]
        if any(t is None for t in triples):
            raise ValueError("pass basis= when the recursion does not define every element")
        basis = BasisSpec("recursion_defined", size, recursion_coeffs=tuple(triples))
    return QuadraturePencil(B, A, flavor, basis, dom, tuple(fixed_nodes), weight_sign=weight_sign)


def pencil_orthonormal(weight, domain=None, n=0):
    """Pencil of the orthonormal polynomials of ``w``: ``B = I``, ``A`` tridiagonal.

    Available for weights with a known recurrence (currently ``unit``).
    """
    entry = get_weight(weight)
    if entry.weight_id != "unit":
        raise ValueError(f"no closed-form recurrence for weight {entry.weight_id!r}")
    dom = _domain_for(entry, domain)
    coeffs, p0 = legendre_recursion(dom, n + 1)
    basis = BasisSpec("orthonormal", n + 1, recursion_coeffs=coeffs, leading=p0)
    return pencil_from_recursion(entry, dom, n, coeffs, np.eye(n + 1),
                                 next_gram=np.zeros(n + 1), basis=basis)


def pencil_legendre(weight, domain=None, n=0):
    """Pencil of ``w = 1/(x - pole)`` in the orthonormal Legendre basis of the interval.

    ``B = (J - pole)^-1`` restricted to the leading block is the Gram
    matrix of a weight bounded above and below on the interval, so it stays
    well conditioned for any ``n``; ``A`` follows through the Legendre
    recursion.
    """
    entry = get_weight(weight)
    if entry.pole is None:
        raise ValueError(f"weight {entry.weight_id!r} is not the reciprocal of a linear factor")
    dom = _domain_for(entry, domain)
    coeffs, p0 = legendre_recursion(dom, n + 1)
    G = _legendre_gram(dom, n, [1.0], extra=1, pole=entry.pole)
    basis = BasisSpec("recursion_defined", n + 1, recursion_coeffs=coeffs, leading=p0)
    return pencil_from_recursion(entry, dom, n, coeffs, G[: n + 1, : n + 1],
                                 next_gram=G[: n + 1, n + 1], basis=basis)


def pencil_augmented_orthonormal(n, domain=(0.0, 1.0)):
    """Pencil of ``w = 1/(1 + x)`` in the basis ``(1 + x) p_i`` (``i < n``)
    followed by the constant 1, with ``p_i`` the orthonormal Legendre
    polynomials of the interval.

    The leading block of ``B`` is tridiagonal and that of ``A`` pentadiagonal.
    Interior columns of ``A`` come from the Legendre recursion; the two
    columns where it leaves the basis are assembled directly.
    """
    entry = get_weight("inv_one_plus_x")
    dom = _domain_for(entry, domain)
    m0 = entry.interval_moment(0, dom.a, dom.b)
    coeffs, p0 = legendre_recursion(dom, n + 1)
    B = _augmented_gram(dom, n, [1.0], m0)
    A_full = _augmented_gram(dom, n, [0.0, 1.0], m0)
    boundary = {j: A_full[:, j] for j in range(max(n - 1, 0), n + 1)}
    inner = coeffs[: max(n - 1, 0)]
    basis = BasisSpec("augmented_by_factor", n + 1, evaluable_index=n, factor=(1.0, 1.0),
                      recursion_coeffs=inner, leading=p0)
    return pencil_from_recursion(entry, dom, n, inner, B, a_columns=boundary, basis=basis)


# circle pencils

def pencil_circle(weight, n=0):
    """Toeplitz pencil of a circle weight in the basis ``1, z, ..., z**n``.

    ``B_rs = mu_{r-s}`` and ``A_rs = mu_{r-s+1}``: the basis element carrying
    the complex conjugate is the second one, which makes ``B = Q W Q~``
    hold for the quadrature matrices.
    """
    entry = get_weight(weight)
    oracle = moments(entry, "circle")
    mu = {r: complex(oracle(r)) for r in range(-n, n + 2)}
    diff = np.subtract.outer(np.arange(n + 1), np.arange(n + 1))
    B = np.vectorize(mu.__getitem__, otypes=[complex])(diff)
    A = np.vectorize(mu.__getitem__, otypes=[complex])(diff + 1)
    return QuadraturePencil(B, A, "circle", BasisSpec("monomial", n + 1), weight_id=entry.weight_id)


def pencil_circle_sin2(n):
    """``w(t) = sin(t)**2``: ``B_rs = (2 d_{r-s} - d_{r-s+2} - d_{r-s-2})/4`` and
    ``A_rs = (2 d_{r-s+1} - d_{r-s+3} - d_{r-s-1})/4``."""
    if n < 0:
        raise ValueError("n must be non-negative")

    def delta(k):
        return (k == 0).astype(float)

    diff = np.subtract.outer(np.arange(n + 1), np.arange(n + 1))
    B = (2 * delta(diff) - delta(diff + 2) - delta(diff - 2)) / 4
    A = (2 * delta(diff + 1) - delta(diff + 3) - delta(diff - 1)) / 4
    return QuadraturePencil(B.astype(complex), A.astype(complex), "circle",
                            BasisSpec("monomial", n + 1), weight_id="sin2")


# fixed nodes

def _normalize_sign(B, A, fixed):
    try:
        cholesky(B)
        return B, A, 1
    except NotPositiveDefinite:
        pass
    try:
        cholesky(-B)
    except NotPositiveDefinite:
        raise IndefiniteModifiedWeight(fixed) from None
    return -B, -A, -1


def pencil_fixed_nodes(weight, domain=None, n=0, fixed=(), basis="monomial"):
    """Pencil of the modified weight ``w(x) prod(x - y)`` for prescribed nodes ``y``.

    If the modified weight is non-positive on the interval both matrices are
    negated (``weight_sign = -1``), which leaves the eigensystem unchanged and
    keeps ``B`` positive definite. With no fixed nodes this is the ordinary
    pencil of the chosen basis.

    ``basis`` is ``"monomial"`` (any registered weight) or ``"recursion"``,
    the orthonormal Legendre polynomials of the interval (for ``unit`` and
    for weights with a ``pole``).
    """
    entry = get_weight(weight)
    dom = _domain_for(entry, domain)
    fixed = tuple(float(y) for y in fixed)
    if len(set(fixed)) != len(fixed):
        raise ValueError("fixed nodes must be distinct")
    if any(not dom.a <= y <= dom.b for y in fixed):
        raise ValueError("fixed nodes must lie in the interval")
    m = len(fixed)
    if m == 0:
        return build_pencil("interval", entry, dom, n, basis)
    pi = P.polyfromroots(fixed)

    if basis == "monomial":
        oracle = moments(entry, dom, 2 * n + m + 1)
        mk = oracle.table(0, 2 * n + m + 1)
        modified = np.array([pi @ mk[k:k + m + 1] for k in range(2 * n + 2)])
        idx = np.add.outer(np.arange(n + 1), np.arange(n + 1))
        B, A = modified[idx], modified[idx + 1]
        B, A, sign = _normalize_sign(B, A, fixed)
        return QuadraturePencil(B, A, "fixed_node", BasisSpec("monomial", n + 1), dom, fixed,
                                weight_sign=sign)

    if basis != "recursion":
        raise ValueError(f"basis {basis!r} is not available with fixed nodes")
    if entry.weight_id != "unit" and entry.pole is None:
        raise ValueError(f"no recursion basis for weight {entry.weight_id!r}")
    coeffs, p0 = legendre_recursion(dom, n + 1)
    G = _legendre_gram(dom, n, pi, extra=1, pole=entry.pole)
    B, next_gram = G[: n + 1, : n + 1], G[: n + 1, n + 1]
    _, _, sign = _normalize_sign(B, B, fixed)
    spec = BasisSpec("recursion_defined", n + 1, recursion_coeffs=coeffs, leading=p0)
    return pencil_from_recursion(entry, dom, n, coeffs, sign * B, next_gram=sign * next_gram,
                                 basis=spec, flavor="fixed_node", fixed_nodes=fixed,
                                 weight_sign=sign)


def build_pencil(flavor, weight, domain=None, n=0, basis="monomial", fixed=()):
    """Dispatch to the builder for ``flavor`` (``interval``, ``circle``,
    ``fixed_node``) and basis name (``monomial``, ``augmented``,
    ``augmented_orthonormal``, ``recursion``)."""
    entry = get_weight(weight)
    if flavor == "circle":
        if basis != "monomial":
            raise ValueError("circle pencils use the monomial basis")
        if entry.weight_id == "sin2":
            return pencil_circle_sin2(n)
        return pencil_circle(entry, n)
    if flavor == "fixed_node":
        return pencil_fixed_nodes(entry, domain, n, fixed, basis)
    if flavor != "interval":
        raise ValueError(f"unknown flavor {flavor!r}")
    if not entry.on_interval:
        raise ValueError(f"weight {entry.weight_id!r} lives on the unit circle")
    if basis not in entry.bases:
        raise ValueError(f"weight {entry.weight_id!r} offers bases {entry.bases}, not {basis!r}")
    dom = _domain_for(entry, domain)
    if basis == "monomial":
        return pencil_monomial(entry, dom, n)
    if basis == "recursion":
        if entry.weight_id == "unit":
            return pencil_orthonormal(entry, dom, n)
        return pencil_legendre(entry, dom, n)
    if basis == "augmented":
        if (dom.a, dom.b) != (0.0, 1.0):
            raise ValueError("the closed-form augmented pencil is tabulated on [0, 1] only")
        return pencil_paper_augmented(n)
    return pencil_augmented_orthonormal(n, dom)
