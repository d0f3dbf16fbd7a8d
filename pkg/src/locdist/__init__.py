"""Local distinguishability checks for orthogonal multipartite pure states."""

__version__ = "0.1.0"

from .operators import (  # noqa: E402
    GeneratorBasis,
    complete_to_generator_basis,
    gell_mann_basis,
    gram_schmidt_hs,
    hs_inner,
)
from .statespace import (  # noqa: E402
    GammaDeltaFamily,
    StateSet,
    amplitude_index,
    check_mutual_orthogonality,
    gamma_delta,
    reduced_cross,
)
from .ntop import (  # noqa: E402
    Conclusion,
    InfeasibleError,
    LocalMeasurement,
    NotOrthogonalError,
    NtopReport,
    construct_ntop_povm,
    is_rank_one,
    ntop_check,
    ntop_check_all,
    ntop_oracle,
    projective_ntop_qubit,
    verify_orthogonality_preserving,
)
from .cases import (  # noqa: E402
    CASES,
    GhzFamilyParams,
    case_bells,
    case_bennett9,
    case_ghz3,
    case_upb4,
    case_upb4_variation,
)
from .protocol import (  # noqa: E402
    OneWayProtocol,
    ProtocolDefect,
    ResidualOutcome,
    Verdict,
    apply_local_kraus,
    ghz_family_verdict,
    one_way_protocol_2xn,
    second_round_report,
    simulate_protocol,
)
