"""Biprojective APN functions over GF(2^m) x GF(2^m): construction, APN tests,
Walsh spectra and equivalence decisions."""

from .errors import (BiprojError, ConditionViolated, DivisionByZero, DomainError, NonInvertible,
                     PreconditionViolated, SearchFailed, TooLarge, UnsupportedM)
from .field import FieldCtx, default_poly, get_field
from .biproj import INF, BiprojectivePair, ProjectivePolynomial, build_delta_system, evaluate, rootless_check
from .families import FamilyInstance, enumerate_family, make_family
from .apn import TruthTable, apn_naive, apn_projective, to_truth_table

__version__ = "0.1.0"
