"""Algebraic Hopf invariants: L-infinity algebras, convolution algebras, homotopy
transfer, differential forms and the skeletal gauge decision."""

from .errors import (ArgumentError, CoherenceError, DomainError, HopfInvError, InvalidComplexError,
                     InvalidInputError, InvalidMCError, SchemaError, TruncationError, UnsupportedError,
                     UnsupportedWeightError)
from .graded import GradedMap, GradedSpace, GradedVector
from .linfty import LInftyAlgebra, MCElement, TableLInfty, check_generalized_jacobi, mc_residual
from .freelie import free_shifted_lie
from .coalgebra import CInftyCoalgebra, dualize, product_of_spheres, sphere_coalgebra
from .convolution import ConvolutionAlgebra, HopfCoefficientMatrix, mc_in_convolution
from .cwtower import AlgebraicCWComplex, TowerDecision, decide_gauge, is_gauge_trivial
from .htt import Contraction, transfer_commutative, validate_contraction
from .forms import DifferentialForm, ParametrizedCycle, SmoothMapSpec, integrate
from .pipeline import SourceModel, TargetModel, coefficient, compare_maps, full_matrix, homotopic_to_constant

__version__ = "0.1.0"
