"""Exception hierarchy.

Numerical failures derive from :class:`QuadratureError`; the linear-algebra
ones are also :class:`numpy.linalg.LinAlgError` so callers that already
catch numpy's error keep working. Malformed input raises ``ValueError``
subclasses.
"""

import numpy as np


class QuadratureError(Exception):
    """Base class for numerical failures raised by this package."""


class InvalidPencil(ValueError):
    """A matrix pair violates the structural requirements of its flavor."""


class UnknownWeight(KeyError):
    def __init__(self, weight_id):
        super().__init__(weight_id)
        self.weight_id = weight_id

    def __str__(self):
        return f"unknown weight {self.weight_id!r}"


class MissingBoundaryData(ValueError):
    def __init__(self, column):
        super().__init__(
            f"column {column} of A needs the Gram column of the next basis "
            "element, or the column itself"
        )
        self.column = column


# linear algebra

class LinAlgError(QuadratureError, np.linalg.LinAlgError):
    pass


class NotPositiveDefinite(LinAlgError):
    def __init__(self, pivot):
        super().__init__(f"matrix is not positive definite (pivot {pivot})")
        self.pivot = pivot


class SingularMatrix(LinAlgError):
    def __init__(self, pivot):
        super().__init__(f"matrix is singular to working precision (pivot {pivot})")
        self.pivot = pivot


class NoConvergence(LinAlgError):
    def __init__(self, iterations):
        super().__init__(f"eigenvalue iteration did not converge after {iterations} sweeps")
        self.iterations = iterations


class DefectivePencil(LinAlgError):
    def __init__(self, index, detail=""):
        msg = f"pencil is not diagonalizable (eigenvalue {index})"
        super().__init__(f"{msg}: {detail}" if detail else msg)
        self.index = index


class IndefiniteModifiedWeight(LinAlgError):
    def __init__(self, fixed_nodes):
        super().__init__(
            f"weight times prod(x - y) for y = {list(fixed_nodes)} gives an "
            "indefinite Gram matrix"
        )
        self.fixed_nodes = tuple(fixed_nodes)


# rule extraction

class BasisEvaluationZero(QuadratureError):
    def __init__(self, node_index, basis_index):
        super().__init__(
            f"basis element {basis_index} vanishes at node {node_index}; "
            "choose another evaluable index"
        )
        self.node_index = node_index
        self.basis_index = basis_index


class NodeAtOrigin(QuadratureError):
    def __init__(self, node_index):
        super().__init__(f"node {node_index} is at the origin and the basis "
                         "element cannot be reflected through the unit circle")
        self.node_index = node_index


class NodeCollision(QuadratureError):
    def __init__(self, node_index, fixed_index):
        super().__init__(f"free node {node_index} coincides with fixed node {fixed_index}")
        self.node_index = node_index
        self.fixed_index = fixed_index


class SingularQ(QuadratureError):
    """The basis evaluation matrix q_i(x_k) is numerically singular."""


class InexactRule(QuadratureError):
    def __init__(self, degree, defect):
        super().__init__(f"assembled rule fails exactness at degree {degree} (defect {defect:.3e})")
        self.degree = degree
        self.defect = defect


class NoSolutionFound(QuadratureError):
    """The Newton moment-system oracle exhausted its starting points."""
