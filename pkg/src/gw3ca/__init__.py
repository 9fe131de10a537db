"""Exact symbolic engine for the Galilean W3 non-linear Lie conformal algebra."""

from .scalars import ScalarFn, GaussianRational, parse_scalar, symbol, symbols, const
from .conformal import NLCA, VAExpr, LambdaPoly, Lambda2Poly, bracket, normal_order, apply_D, jacobi_residual, composite_fields
from .presets import preset, load_preset, dump_preset
from .modes import Mode, HWVector, VermaModule, adjoint, commutator, state_field_check, hw_params
from .verma import basis, pairing, gram, det_Dn, alpha, reducible, singular_vectors, quotient_and_subsingular, character, vacuum_module, cm0_determinant
from .freefield import gw3_fields, verify_realization, momentum, zero_mode_weights, s3_orbit, fock_act, wt1_images

__version__ = "0.1.0"
