"""Domain types: interval domains, bases, matrix pencils, rules, moments.

Every type here is an immutable value. Arrays are copied on construction and
marked read-only. All types serialize to plain JSON-compatible dicts; floats
are written with ``repr`` so that a round trip reproduces every bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidPencil

__all__ = [
    "RealDomain",
    "BasisSpec",
    "QuadraturePencil",
    "QuadratureRule",
    "EigenDecomposition",
    "MomentOracle",
    "SYMMETRY_RTOL",
    "encode_scalar",
    "decode_scalar",
]

FLAVORS = ("interval", "circle", "fixed_node")
BASIS_KINDS = ("monomial", "augmented_by_factor", "recursion_defined", "orthonormal", "opaque")

# relative tolerance for accepting a matrix as symmetric/Hermitian before averaging
SYMMETRY_RTOL = 1e-12


def encode_scalar(x):
    """Real scalars become floats, complex ones ``{"re": .., "im": ..}``."""
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    return float(x)


def decode_scalar(obj):
    if isinstance(obj, dict):
        return complex(float(obj["re"]), float(obj["im"]))
    return float(obj)


def _encode_array(arr):
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return encode_scalar(arr[()])
    return [_encode_array(row) for row in arr]


def _decode_array(obj):
    def has_complex(o):
        if isinstance(o, dict):
            return True
        if isinstance(o, list):
            return any(has_complex(e) for e in o)
        return False

    dtype = complex if has_complex(obj) else float

    def conv(o):
        if isinstance(o, list):
            return [conv(e) for e in o]
        return decode_scalar(o)

    return np.array(conv(obj), dtype=dtype)


def _frozen_array(values, dtype=None):
    arr = np.array(values, dtype=dtype, copy=True)
    if dtype is None and not np.iscomplexobj(arr):
        arr = arr.astype(float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RealDomain:
    """Interval ``[a, b]`` together with the name of its weight function."""

    a: float
    b: float
    weight_id: str = "unit"

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not self.a < self.b:
            raise ValueError(f"empty interval [{self.a}, {self.b}]")

    @property
    def length(self):
        return self.b - self.a

    def to_dict(self):
        return {"a": self.a, "b": self.b, "weight_id": self.weight_id}

    @classmethod
    def from_dict(cls, d):
        return cls(d["a"], d["b"], d.get("weight_id", "unit"))


def _run_recursion(coeffs, leading, j, x):
    # x q_k = a_k q_{k+1} + b_k q_k + c_k q_{k-1},  q_0 = leading
    prev, cur = 0.0 * x, leading + 0.0 * x
    for k in range(j):
        a_k, b_k, c_k = coeffs[k]
        prev, cur = cur, ((x - b_k) * cur - c_k * prev) / a_k
    return cur


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """Basis ``q_0 .. q_{size-1}`` of the polynomials of degree < size.

    Only ``evaluable_index`` has to be evaluable. Built-in kinds evaluate every
    element; an ``opaque`` basis evaluates what its ``evaluator`` supports and
    declares full evaluability through ``full``.

    ``augmented_by_factor`` is the basis ``factor(x) * r_j(x)`` for
    ``j < size - 1`` followed by the constant 1, where ``r_j`` is ``x**j`` or,
    when ``recursion_coeffs`` is given, the recursion-defined polynomials.
    Indices are zero-based throughout.
    """

    kind: str
    size: int
    evaluable_index: int = 0
    evaluator: Optional[Callable] = None
    recursion_coeffs: Optional[tuple] = None
    leading: float = 1.0
    factor: Optional[tuple] = None
    full: bool = True

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.size < 1:
            raise ValueError("basis size must be positive")
        if not 0 <= self.evaluable_index < self.size:
            raise ValueError(f"evaluable index {self.evaluable_index} outside 0..{self.size - 1}")
        if self.recursion_coeffs is not None:
            coeffs = tuple(tuple(float(c) for c in t) for t in self.recursion_coeffs)
            if any(len(t) != 3 for t in coeffs):
                raise ValueError("recursion coefficients must be (a, b, c) triples")
            object.__setattr__(self, "recursion_coeffs", coeffs)
        if self.factor is not None:
            object.__setattr__(self, "factor", tuple(float(c) for c in self.factor))
        if self.kind in ("recursion_defined", "orthonormal"):
            if self.recursion_coeffs is None or len(self.recursion_coeffs) < self.size - 1:
                raise ValueError(f"{self.kind} basis of size {self.size} needs "
                                 f"{self.size - 1} recursion triples")
            if any(t[0] == 0 for t in self.recursion_coeffs[: self.size - 1]):
                raise ValueError("recursion coefficient a_k must be nonzero")
        if self.kind == "augmented_by_factor":
            if self.factor is None:
                raise ValueError("augmented_by_factor basis needs a factor polynomial")
            if self.recursion_coeffs is not None and len(self.recursion_coeffs) < self.size - 2:
                raise ValueError("not enough recursion triples for the inner basis")
        if self.kind == "opaque":
            if self.evaluator is None:
                raise ValueError("opaque basis needs an evaluator")
        elif self.evaluator is not None:
            raise ValueError("only opaque bases take a custom evaluator")
        if self.kind != "opaque":
            object.__setattr__(self, "full", True)

    def can_evaluate(self, j):
        return self.full or j == self.evaluable_index

    def evaluate(self, j, x):
        """Value of ``q_j`` at ``x`` (scalar or array, real or complex)."""
        if not 0 <= j < self.size:
            raise IndexError(j)
        if not self.can_evaluate(j):
            raise ValueError(f"basis element {j} is not evaluable")
        x = np.asarray(x)[()] if np.ndim(x) == 0 else np.asarray(x)
        if self.kind == "monomial":
            return x ** j
        if self.kind in ("recursion_defined", "orthonormal"):
            return _run_recursion(self.recursion_coeffs, self.leading, j, x)
        if self.kind == "augmented_by_factor":
            if j == self.size - 1:
                return 1.0 + 0.0 * x
            f = np.polynomial.polynomial.polyval(x, self.factor)
            if self.recursion_coeffs is None:
                return f * x ** j
            return f * _run_recursion(self.recursion_coeffs, self.leading, j, x)
        return self.evaluator(j, x)

    def evaluate_all(self, x):
        """Vector ``[q_0(x), ..., q_{size-1}(x)]``; requires a full basis."""
        if not self.full:
            raise ValueError("basis is not fully evaluable")
        return np.array([self.evaluate(j, x) for j in range(self.size)])

    def congruent(self, M):
        """Basis ``q'_i = sum_k M[i, k] q_k`` as an opaque, fully evaluable basis."""
        M = _frozen_array(M)
        if M.shape != (self.size, self.size):
            raise ValueError("change-of-basis matrix has the wrong shape")
        parent = self

        def evaluator(j, x):
            return M[j] @ parent.evaluate_all(x)

        return BasisSpec("opaque", self.size, self.evaluable_index, evaluator=evaluator)

    def to_dict(self):
        if self.kind == "opaque":
            raise TypeError("opaque bases carry a Python callable and cannot be serialized")
        return {
            "kind": self.kind,
            "size": self.size,
            "evaluable_index": self.evaluable_index,
            "recursion_coeffs": None if self.recursion_coeffs is None
            else [list(t) for t in self.recursion_coeffs],
            "leading": self.leading,
            "factor": None if self.factor is None else list(self.factor),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            kind=d["kind"],
            size=d["size"],
            evaluable_index=d["evaluable_index"],
            recursion_coeffs=None if d.get("recursion_coeffs") is None
            else tuple(tuple(t) for t in d["recursion_coeffs"]),
            leading=d.get("leading", 1.0),
            factor=None if d.get("factor") is None else tuple(d["factor"]),
        )


def _check_symmetric(M, name, hermitian):
    scale = np.max(np.abs(M)) if M.size else 0.0
    Mt = M.conj().T if hermitian else M.T
    if np.max(np.abs(M - Mt)) > SYMMETRY_RTOL * scale:
        kind = "Hermitian" if hermitian else "symmetric"
        raise InvalidPencil(f"{name} is not {kind}")
    return (M + Mt) / 2


@dataclass(frozen=True, eq=False)
class QuadraturePencil:
    """Gram matrix ``B`` and multiplication-twisted Gram matrix ``A``.

    For the ``interval`` and ``fixed_node`` flavors both matrices are real
    symmetric; they are validated to ``SYMMETRY_RTOL`` and then averaged with
    their transposes. For the ``circle`` flavor ``B`` must be Hermitian while
    ``A`` is left as is.

    ``weight_sign`` is -1 when assembly negated both matrices to make ``B``
    positive definite (fixed nodes at the right end of the interval, say).
    """

    B: np.ndarray
    A: np.ndarray
    flavor: str
    basis: BasisSpec
    domain: Optional[RealDomain] = None
    fixed_nodes: tuple = ()
    weight_id: Optional[str] = None
    weight_sign: int = 1

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise InvalidPencil(f"unknown flavor {self.flavor!r}")
        B = np.array(self.B)
        A = np.array(self.A)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] < 1:
            raise InvalidPencil(f"B must be a nonempty square matrix, got shape {B.shape}")
        if A.shape != B.shape:
            raise InvalidPencil(f"A has shape {A.shape}, B has shape {B.shape}")
        if self.basis.size != B.shape[0]:
            raise InvalidPencil("basis size does not match the pencil")

        if self.flavor == "circle":
            B = _check_symmetric(B.astype(complex), "B", hermitian=True)
            A = A.astype(complex)
            if self.domain is not None:
                raise InvalidPencil("circle pencils carry no real domain")
        else:
            if np.iscomplexobj(B) or np.iscomplexobj(A):
                raise InvalidPencil(f"{self.flavor} pencils must be real")
            B = _check_symmetric(B.astype(float), "B", hermitian=False)
            A = _check_symmetric(A.astype(float), "A", hermitian=False)
            if self.domain is None:
                raise InvalidPencil(f"{self.flavor} pencils need a domain")

        fixed = tuple(float(y) for y in self.fixed_nodes)
        if self.flavor == "fixed_node":
            if not fixed:
                raise InvalidPencil("fixed_node pencil without fixed nodes")
            if len(set(fixed)) != len(fixed):
                raise InvalidPencil("fixed nodes must be distinct")
            if any(not self.domain.a <= y <= self.domain.b for y in fixed):
                raise InvalidPencil("fixed nodes must lie in the domain")
        elif fixed:
            raise InvalidPencil(f"{self.flavor} pencils take no fixed nodes")
        if self.weight_sign not in (1, -1):
            raise InvalidPencil("weight_sign must be +1 or -1")
        if self.weight_id is None and self.domain is not None:
            object.__setattr__(self, "weight_id", self.domain.weight_id)
        elif self.domain is not None and self.weight_id != self.domain.weight_id:
            raise InvalidPencil("weight_id disagrees with the domain")

        object.__setattr__(self, "B", _frozen_array(B))
        object.__setattr__(self, "A", _frozen_array(A))
        object.__setattr__(self, "fixed_nodes", fixed)

    @property
    def size(self):
        return self.B.shape[0]

    @property
    def n(self):
        return self.size - 1

    @property
    def scalar_kind(self):
        return "complex" if np.iscomplexobj(self.B) else "real"

    def congruent(self, M):
        """The same bilinear forms written in the basis ``M q``."""
        M = np.asarray(M)
        Mh = M.conj().T if self.flavor == "circle" else M.T
        return QuadraturePencil(
            M @ self.B @ Mh, M @ self.A @ Mh, self.flavor, self.basis.congruent(M),
            self.domain, self.fixed_nodes, self.weight_id, self.weight_sign,
        )

    def to_dict(self):
        return {
            "flavor": self.flavor,
            "n": self.n,
            "B": _encode_array(self.B),
            "A": _encode_array(self.A),
            "fixed": list(self.fixed_nodes),
            "weight_id": self.weight_id,
            "domain": None if self.domain is None else {"a": self.domain.a, "b": self.domain.b},
            "weight_sign": self.weight_sign,
            "basis": self.basis.to_dict(),
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d):
        domain = None
        if d.get("domain") is not None:
            domain = RealDomain(d["domain"]["a"], d["domain"]["b"], d["weight_id"])
        return cls(
            B=_decode_array(d["B"]),
            A=_decode_array(d["A"]),
            flavor=d["flavor"],
            basis=BasisSpec.from_dict(d["basis"]),
            domain=domain,
            fixed_nodes=tuple(d.get("fixed", ())),
            weight_id=d.get("weight_id"),
            weight_sign=d.get("weight_sign", 1),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights, plus optional prescribed nodes ``(y, v)``.

    ``exact_degree`` is the highest monomial degree integrated exactly. For
    circle rules with ``n + 1`` nodes the exact band is ``z**-n .. z**(n+1)``
    and ``exact_degree`` is ``n + 1``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    flavor: str
    exact_degree: int
    fixed: tuple = ()

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        nodes = np.atleast_1d(np.array(self.nodes))
        weights = np.atleast_1d(np.array(self.weights))
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise ValueError("nodes and weights must be nonempty vectors of equal length")
        if len(np.unique(nodes)) != nodes.size:
            raise ValueError("nodes must be pairwise distinct")
        if self.flavor != "circle" and (np.iscomplexobj(nodes) or np.iscomplexobj(weights)):
            raise ValueError(f"{self.flavor} rules are real")
        fixed = tuple((float(y), float(v)) for y, v in self.fixed)
        if fixed and self.flavor == "circle":
            raise ValueError("circle rules have no fixed nodes")
        object.__setattr__(self, "nodes", _frozen_array(nodes))
        object.__setattr__(self, "weights", _frozen_array(weights))
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(self, "exact_degree", int(self.exact_degree))

    @property
    def size(self):
        return self.nodes.size

    @property
    def exact_range(self):
        """Inclusive range of monomial exponents the rule integrates exactly."""
        if self.flavor == "circle":
            return (-(self.exact_degree - 1), self.exact_degree)
        return (0, self.exact_degree)

    @property
    def all_nodes(self):
        return np.concatenate([[y for y, _ in self.fixed], self.nodes]) if self.fixed else self.nodes

    @property
    def all_weights(self):
        return np.concatenate([[v for _, v in self.fixed], self.weights]) if self.fixed else self.weights

    def apply(self, f):
        """``sum_i w_i f(x_i)`` over free and fixed nodes."""
        return np.sum(self.all_weights * f(self.all_nodes))

    def to_dict(self):
        return {
            "flavor": self.flavor,
            "nodes": [encode_scalar(x) for x in self.nodes],
            "weights": [encode_scalar(w) for w in self.weights],
            "fixed": [{"y": y, "v": v} for y, v in self.fixed],
            "exact_degree": self.exact_degree,
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d):
        nodes = [decode_scalar(x) for x in d["nodes"]]
        weights = [decode_scalar(w) for w in d["weights"]]
        dtype = complex if d["flavor"] == "circle" else float
        return cls(
            nodes=np.array(nodes, dtype=dtype),
            weights=np.array(weights, dtype=dtype),
            flavor=d["flavor"],
            exact_degree=d["exact_degree"],
            fixed=tuple((e["y"], e["v"]) for e in d.get("fixed", ())),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Solution of ``A V = B V D``; ``D`` is stored as its diagonal."""

    eigenvalues: np.ndarray
    V: np.ndarray
    residual_norm: float

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen_array(self.eigenvalues))
        object.__setattr__(self, "V", _frozen_array(self.V))
        object.__setattr__(self, "residual_norm", float(self.residual_norm))

    @property
    def D(self):
        return np.diag(self.eigenvalues)

    def to_dict(self):
        return {
            "eigenvalues": _encode_array(self.eigenvalues),
            "V": _encode_array(self.V),
            "residual_norm": self.residual_norm,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(_decode_array(d["eigenvalues"]), _decode_array(d["V"]), d["residual_norm"])


@dataclass(frozen=True, eq=False)
class MomentOracle:
    """Moment sequence of a weight.

    ``kind="interval"``: ``moment(k)`` is the integral of ``w(x) x**k`` over
    ``support``. ``kind="circle"``: ``moment(r)`` is the normalized Fourier
    coefficient ``(1/2pi) int e^{i r t} w(t) dt`` for any integer ``r``.
    """

    kind: str
    moment: Callable[[int], complex]
    support: Optional[tuple] = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("interval", "circle"):
            raise ValueError(f"unknown moment kind {self.kind!r}")
        if self.support is not None:
            object.__setattr__(self, "support", (float(self.support[0]), float(self.support[1])))

    def __call__(self, k):
        return self.moment(int(k))

    def table(self, lo, hi):
        """Moments for ``k = lo .. hi`` inclusive."""
        dtype = complex if self.kind == "circle" else float
        return np.array([self(k) for k in range(lo, hi + 1)], dtype=dtype)

    def to_dict(self, lo, hi):
        """Tabulate ``lo .. hi``; the function itself cannot be serialized."""
        return {
            "kind": self.kind,
            "support": None if self.support is None else list(self.support),
            "label": self.label,
            "lo": lo,
            "moments": [encode_scalar(m) for m in self.table(lo, hi)],
        }

    @classmethod
    def from_dict(cls, d):
        lo = d["lo"]
        values = [decode_scalar(m) for m in d["moments"]]
        if d["kind"] == "circle":
            values = [complex(v) for v in values]

        def moment(k):
            if not lo <= k < lo + len(values):
                raise KeyError(f"moment {k} was not tabulated")
            return values[k - lo]

        return cls(d["kind"], moment, None if d["support"] is None else tuple(d["support"]),
                   d.get("label", ""))
