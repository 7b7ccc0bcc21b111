"""Module norm, numerical range and numerical radius of adjointable operators
on finite-dimensional Hilbert modules over abelian C*-algebras."""

from .exceptions import DomainError, InputError, ModRangeError, PreconditionError
from .gelfand import (
    AlgebraElement,
    CharacterSpace,
    algebra_add,
    algebra_mul,
    algebra_star,
    apply_character,
    is_positive,
    sqrt_positive,
)
from .module_space import (
    ModuleShape,
    ModuleVector,
    inner_product,
    module_action,
    modulus,
    normalize_at,
    random_vector,
)
from .operators import (
    ModuleOperator,
    adjoint,
    apply,
    cartesian_parts,
    is_self_adjoint,
    is_unitary,
    random_operator,
    random_unitary,
)
from .norms import (
    RangeSample,
    SupWitness,
    block_numerical_radius,
    block_operator_norm,
    module_norm,
    module_norm_bilinear,
    module_numerical_radius,
    monte_carlo_sup,
    quadratic_form,
    sample_numerical_range,
)
from .verification import (
    CheckResult,
    FuzzConfig,
    VerificationReport,
    fuzz_suite,
    verify_instance,
)
from .cx_model import (
    DiscretizedSpace,
    MultiplicationOperator,
    build_multiplication,
    check_cx_identities,
    check_refinement,
)

__version__ = "0.1.0"
