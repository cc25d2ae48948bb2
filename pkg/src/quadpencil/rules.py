"""Nodes and weights from a pencil.

The nodes are the generalized eigenvalues of ``A V = B V D``. The weights
need only the eigenvectors and one evaluable basis element ``q_j``:

* interval:    ``w_i = ((V^-1)_ij / q_j(x_i))**2``
* circle:      ``w_r = (V^-1)_rs (B V)_sr / (q_s(z_r) conj(q_s(1/conj z_r)))``
* fixed nodes: ``w_i prod(x_i - y) = (V^-1)_ij (B V)_ji / q_j(x_i)**2``

after which the weights of the fixed nodes follow from a small Vandermonde
system.
"""

import numpy as np

from .errors import (BasisEvaluationZero, InexactRule, NodeAtOrigin, NodeCollision,
                     SingularMatrix, SingularQ)
from .linalg import condition_estimate, general_geig, solve_linear, sym_definite_geig
from .model import QuadratureRule

__all__ = [
    "gauss_rule",
    "gauss_rule_full_basis",
    "circle_rule",
    "fixed_node_rule",
    "ZERO_EVAL_RTOL",
    "COLLISION_RTOL",
]

# |q_j(x_i)| below this fraction of max_k |q_j(x_k)| counts as a zero
ZERO_EVAL_RTOL = 1e-13
# free and fixed nodes closer than this fraction of (b - a) collide
COLLISION_RTOL = 1e-10
# post hoc exactness check of fixed-node rules, relative to max(1, |m_k|)
FIXED_EXACTNESS_RTOL = 1e-6


def _column_of_inverse(V, j):
    e = np.zeros(V.shape[0], dtype=V.dtype)
    e[j] = 1
    return solve_linear(V, e)


def _basis_values(basis, j, nodes):
    q = np.array([basis.evaluate(j, x) for x in nodes])
    scale = np.max(np.abs(q))
    for i, v in enumerate(q):
        if not abs(v) > ZERO_EVAL_RTOL * scale:
            raise BasisEvaluationZero(i, j)
    return q


def _require(pencil, *flavors):
    if pencil.flavor not in flavors:
        raise ValueError(f"expected a {' or '.join(flavors)} pencil, got {pencil.flavor!r}")


def gauss_rule(pencil):
    """Gaussian rule of an interval pencil, exact to degree ``2n + 1``."""
    _require(pencil, "interval")
    eig = sym_definite_geig(pencil.A, pencil.B)
    nodes = eig.eigenvalues
    j = pencil.basis.evaluable_index
    q = _basis_values(pencil.basis, j, nodes)
    weights = (_column_of_inverse(eig.V, j) / q) ** 2
    return QuadratureRule(nodes, weights, "interval", 2 * pencil.n + 1)


def gauss_rule_full_basis(pencil, evaluator=None):
    """Gaussian rule with weights recovered from ``B = Q W Q^T``.

    ``Q_ik = q_i(x_k)`` requires every basis element; ``evaluator(i, x)``
    defaults to the pencil's basis. The weights are the diagonal of
    ``Q^-1 B Q^-T``.
    """
    _require(pencil, "interval")
    if evaluator is None:
        if not pencil.basis.full:
            raise ValueError("basis is not fully evaluable; pass an evaluator")
        evaluator = pencil.basis.evaluate
    nodes = sym_definite_geig(pencil.A, pencil.B).eigenvalues
    size = pencil.size
    Q = np.array([[evaluator(i, x) for x in nodes] for i in range(size)], dtype=float)
    if condition_estimate(Q) > 1e13:
        raise SingularQ("basis evaluation matrix is numerically singular")
    try:
        X = solve_linear(Q, pencil.B)          # Q^-1 B
        W = solve_linear(Q, X.T).T             # Q^-1 B Q^-T
    except SingularMatrix as exc:
        raise SingularQ(str(exc)) from exc
    return QuadratureRule(nodes, np.diag(W).copy(), "interval", 2 * pencil.n + 1)


def circle_rule(pencil):
    """Quadrature on the unit circle, exact for ``z**k``, ``k = -n .. n+1``.

    Weights are complex in general; rounding-level imaginary parts are kept.
    """
    _require(pencil, "circle")
    eig = general_geig(pencil.A, pencil.B)
    nodes = eig.eigenvalues
    V = eig.V
    s = pencil.basis.evaluable_index
    vinv = _column_of_inverse(V, s)
    bv = (pencil.B @ V)[s]
    weights = np.empty(pencil.size, dtype=complex)
    for r, z in enumerate(nodes):
        if pencil.basis.kind == "monomial":
            # z^s * conj((1/conj z)^s) == 1 whenever z != 0
            if z == 0 and s != 0:
                raise NodeAtOrigin(r)
            denom = 1.0
        else:
            if abs(z) <= np.finfo(float).tiny:
                raise NodeAtOrigin(r)
            denom = pencil.basis.evaluate(s, z) * np.conj(pencil.basis.evaluate(s, 1 / np.conj(z)))
            if abs(denom) == 0:
                raise BasisEvaluationZero(r, s)
        weights[r] = vinv[r] * bv[r] / denom
    return QuadratureRule(nodes, weights, "circle", pencil.n + 1)


def fixed_node_rule(pencil, moments):
    """Gauss-type rule with prescribed nodes, exact to degree ``2n + m + 1``.

    ``moments`` is the oracle of the original (unmodified) weight; it
    supplies the right-hand side of the Vandermonde system for the fixed
    weights. An interval pencil (no fixed nodes) gives the Gaussian rule.
    """
    _require(pencil, "fixed_node", "interval")
    if pencil.flavor == "interval":
        return gauss_rule(pencil)
    ys = np.array(pencil.fixed_nodes)
    m = ys.size
    eig = sym_definite_geig(pencil.A, pencil.B)
    nodes = eig.eigenvalues
    V = eig.V
    a, b = pencil.domain.a, pencil.domain.b
    for i, x in enumerate(nodes):
        for alpha, y in enumerate(ys):
            if abs(x - y) < COLLISION_RTOL * (b - a):
                raise NodeCollision(i, alpha)

    j = pencil.basis.evaluable_index
    q = _basis_values(pencil.basis, j, nodes)
    scaled = _column_of_inverse(V, j) * (pencil.B @ V)[j] / q ** 2
    prods = np.prod(nodes[:, None] - ys[None, :], axis=1)
    weights = pencil.weight_sign * scaled / prods

    # sum_alpha v_alpha y_alpha^k = m_k - sum_i w_i x_i^k,  k < m
    powers = np.arange(m)
    rhs = np.array([moments(k) for k in powers]) - (nodes[None, :] ** powers[:, None]) @ weights
    vander = ys[None, :] ** powers[:, None]
    v = solve_linear(vander, rhs)

    rule = QuadratureRule(nodes, weights, "fixed_node", 2 * pencil.n + m + 1,
                          fixed=tuple(zip(ys, v)))
    xs, ws = rule.all_nodes, rule.all_weights
    for k in range(rule.exact_degree + 1):
        mk = moments(k)
        defect = abs(ws @ xs ** k - mk)
        if defect > FIXED_EXACTNESS_RTOL * max(1.0, abs(mk)):
            raise InexactRule(k, defect)
    return rule
