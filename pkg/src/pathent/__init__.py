"""Exact few-photon simulation of linear-optical circuits with
post-selected and lossy photon-number detection."""

from .circuits import Circuit, RunResult, build_named, run_circuit, validate_circuit
from .elements import (
    BS_PAIR_MATRIX,
    BeamSplitter,
    PhaseShifter,
    apply_beam_splitter,
    apply_phase_shifter,
    mode_transfer_matrix,
)
from .errors import (
    CircuitParseError,
    CircuitSemanticError,
    DimensionMismatchError,
    ElementError,
    OracleSizeError,
    PathentError,
    ZeroProbabilityError,
)
from .measurement import DetectorSpec, detect_lossy, outcome_distribution, post_select_ideal
from .states import (
    Branch,
    Ensemble,
    PureState,
    canonical_form,
    equal_up_to_global_phase,
    fidelity,
    fock,
    inner_product,
    noon,
    normalize,
    tensor_product,
)

__version__ = "0.1.0"
