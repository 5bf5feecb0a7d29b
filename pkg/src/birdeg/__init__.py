"""Exact construction and degree analysis of birational maps of projective spaces."""

from .errors import (
    BirdegError,
    CertificateFailure,
    CollapseError,
    DegreeMismatch,
    GuardExceeded,
    NotDivisible,
    NotUnimodular,
    ShapeMismatch,
    SingularMatrix,
    SpectralError,
    ZeroPolynomialError,
)
from .polyring import (
    BlockShape,
    Limits,
    Polynomial,
    add,
    content_and_primitive,
    divexact,
    gcd,
    limits,
    mul,
    substitute,
)
from .projmap import (
    DegreeSequence,
    InverseCertificate,
    RationalMap,
    certify_inverse,
    compose,
    equal,
    iterate_degrees,
    normalize,
    product,
)
from .monomial import (
    IntMatrix,
    det,
    exterior_power,
    inverse_unimodular,
    linear_map,
    monomial_dyndeg_profile,
    spectral_radius,
    to_projective,
)
from .spectral import SpectralEstimate
from .profiles import DynDegProfile, Monom, max_merge_profile
from .constructions import (
    A_BDJK,
    A_SUG,
    NamedConstruction,
    bdjk_map,
    big_psi,
    conjugate,
    matrix_B,
    psi_variant,
    segre_slice_phi,
    step_map_h,
    tower,
)
from .dyndeg import (
    RootCertificate,
    check_conjugacy,
    check_duality,
    check_product,
    lambda1_report,
    root_a,
    tower_profile,
)

__version__ = "0.1.0"
