"""Exact verification toolkit for Pisot matrix semigroups from continued fractions."""

from .intmat import (
    ExactMatrix,
    Family,
    PrimitivityResult,
    Word,
    family_generator,
    inverse_apply,
    is_primitive,
    product,
    transpose,
)
from .charpoly import (
    IntPolynomial,
    PisotReport,
    char_poly,
    count_roots_in_open_unit_disk,
    dominant_eigenvector,
    has_root_on_unit_circle,
    pisot_check,
)
from .cones import (
    BarycentricPoint,
    Cone,
    barycentric_grid,
    contains,
    image_domain,
    localize_check,
    standard_domain,
)
from .seminorm import (
    SeminormCertificate,
    SeminormValue,
    StochasticMatrix,
    cone_seminorm_certify,
    dobrushin_chain_bound,
    hyperplane_seminorm,
    second_eigenvalue_bound,
    stochastic_rep,
)
from .dynamics import (
    BernoulliSpec,
    LyapunovEstimate,
    OrbitTrace,
    cf_step,
    log_integrability_value,
    lyapunov_estimate,
    orbit,
    periodic_lyapunov,
)

__version__ = "0.1.0"
