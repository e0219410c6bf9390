"""Numerical range of elementary operators on matrix algebras.

Computes the numerical range of x -> sum_i a_i x b_i on M_n two
independent ways — the disk/support characterization of the range of the
operator acting on the algebra, and the closed union of fields of values
over the unitary orbit — and verifies numerically that they agree.
"""

from .elemop import (
    KTupleOperator,
    apply,
    matricize,
    random_instance,
    russo_dye_norm,
    shifted_norm,
)
from .fov import FovBoundarySample, field_of_values, fov_support
from .linalg import (
    EigenPair,
    haar_unitary,
    hermitian_part,
    retract,
    spectral_norm,
    top_eigenpair,
)
from .orbit import (
    RangeEstimate,
    banach_region,
    banach_support_ray,
    default_s_schedule,
    orbit_region,
    orbit_support,
)
from .region import (
    DiskSpec,
    RegionEmptyError,
    SupportRegion,
    hausdorff,
    hull_of_points,
    intersect_disks,
    minkowski_sum,
    negate,
    region_from_supports,
)
from .unitary_opt import OptConfig, OptReport
from .verify import (
    CheckResult,
    VerificationReport,
    hermitian_check,
    random_batch,
    verify_derivation,
    verify_inclusion,
    verify_main,
    verify_mult_projection,
)

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "DiskSpec",
    "EigenPair",
    "FovBoundarySample",
    "KTupleOperator",
    "OptConfig",
    "OptReport",
    "RangeEstimate",
    "RegionEmptyError",
    "SupportRegion",
    "VerificationReport",
    "apply",
    "banach_region",
    "banach_support_ray",
    "default_s_schedule",
    "field_of_values",
    "fov_support",
    "haar_unitary",
    "hausdorff",
    "hermitian_check",
    "hermitian_part",
    "hull_of_points",
    "intersect_disks",
    "matricize",
    "minkowski_sum",
    "negate",
    "orbit_region",
    "orbit_support",
    "random_batch",
    "random_instance",
    "region_from_supports",
    "retract",
    "russo_dye_norm",
    "shifted_norm",
    "spectral_norm",
    "top_eigenpair",
    "verify_derivation",
    "verify_inclusion",
    "verify_main",
    "verify_mult_projection",
]
