"""Exact arithmetic in skew power series rings R[[x; sigma, delta]] at finite precision."""

from .errors import (DescriptorMismatch, InsufficientPrecision, NoUniformiser, NotAUnit,
                     NotCompatible, NotInvertible, NotSolvable, OrbitNotClosed, ParseError,
                     PrecisionError, ReducedDegreeTooHigh, ShapeMismatch, SkewError,
                     TwistMismatch, UnknownSuite, ValueTooLow, HypothesisViolated)
from .level import Level
from .rings import Element, FqSeries, Matrix, Product, Zp, uniformiser
from .series import SkewSeries
from .twist import (IDENTITY, TRIVIAL, Auto, Conjugation, Deriv, FrobeniusPow, Inner,
                    LeftMultiple, MatrixLift, MatrixLiftD, PiDerivative, ScaleUniformiser,
                    TauTimes, Twist, auto, check_compatible, check_leibniz, deriv)
from .reparam import Scale, Shift, beta_coeffs, change_variable, gamma_coeffs
from .untwist import IsoContext, MatrixIso, MatrixSeries, split_orbits, theorem_A_map
from .weierstrass import (PreparedForm, polynomial_in_right_ideal,
                          polynomial_in_two_sided_ideal_matrix, prepare, prepare_element)

__version__ = "0.1.0"
