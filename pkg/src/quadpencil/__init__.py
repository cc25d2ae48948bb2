"""Gaussian, unit-circle and fixed-node quadrature rules from Gram-matrix pencils.

A rule's nodes are the eigenvalues of a generalized eigenproblem built from
moments of the weight in any convenient polynomial basis; the weights follow
from the eigenvectors and a single evaluable basis element.
"""

from . import assembly, linalg, rules, verify
from .assembly import (build_pencil, get_weight, moments, pencil_circle, pencil_fixed_nodes,
                       pencil_monomial, registered_weights)
from .errors import (BasisEvaluationZero, DefectivePencil, IndefiniteModifiedWeight, InexactRule,
                     InvalidPencil, LinAlgError, MissingBoundaryData, NoConvergence, NodeAtOrigin,
                     NodeCollision, NoSolutionFound, NotPositiveDefinite, QuadratureError,
                     SingularMatrix, SingularQ, UnknownWeight)
from .model import BasisSpec, EigenDecomposition, MomentOracle, QuadraturePencil, QuadratureRule, RealDomain
from .rules import circle_rule, fixed_node_rule, gauss_rule, gauss_rule_full_basis
from .verify import brute_force_rule, check_exactness

__version__ = "0.1.0"
