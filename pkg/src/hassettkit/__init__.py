"""Integral lattices, quadratic forms and Hassett discriminants."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .lattice import (
    Lattice,
    DiscriminantGroup,
    validate,
    determinant,
    is_even,
    orthogonal_complement,
    smith_normal_form,
    is_distinguished,
    find_distinguished,
    default_distinguished,
    span2_disc,
)
from .enumeration import (
    cholesky,
    iter_ball,
    vectors_with_norm,
    min_norm,
    represents_primitively,
    image_up_to,
    ImageReport,
)
from .arithmetic import (
    in_hassett,
    f0,
    F0Solution,
    solve_hassett_proof,
    solve_hassett_enum,
    nontrivial_three_squares,
    lagrange5_up,
    lagrange5_down,
    lower_five_height,
    mod3_adjust,
    mod3_invariants_check,
    ternary_missed_squarefree,
)
from .hassett import (
    dm_quotient,
    lift_form,
    LiftResult,
    k_lattice,
    yang_yu_check,
    YangYuReport,
    cm_in_cd,
    verify_z_membership,
    check_certificate,
    ZCertificate,
)
from .gramio import read_gram, loads_gram, gram_document, gram_digest
