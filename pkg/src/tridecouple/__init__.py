"""Decide whether a fully symmetric 3-tensor can be decoupled by an
orthogonal change of coordinates, certify the answer with polynomial
invariants, and recover the decoupling map."""

__version__ = "0.1.0"

from .decouple import (  # noqa: E402
    Classification,
    FullyDecoupleable,
    Indeterminate,
    NotDecoupleable,
    PartiallyNotFully,
    classify_fd_generic,
    classify_fd_n3,
    classify_n2,
    classify_pd_not_fd_n3,
    fd_necessary_quick,
)
from .invariants import oa_basis, o2_basis, qtilde_full, qtilde_partial, so2_basis  # noqa: E402
from .molien import molien_series, rep_matrix  # noqa: E402
from .orbitlab import (  # noqa: E402
    haar_orthogonal,
    make_fd,
    make_pd_canonical,
    orbit_search_oracle,
    rational_orthogonal,
    sample,
)
from .recover import (  # noqa: E402
    recover_n2,
    recover_pd_params,
    recover_pd_rotation,
    recover_rotation_via_covariant,
)
from .tensor import (  # noqa: E402
    CovariantSuite,
    OrthogonalMap,
    SymTensor3,
    act,
    covariants,
    eval_cubic,
    tensor_from_cubic,
    tensor_to_cubic,
    u_dot_gamma,
)
