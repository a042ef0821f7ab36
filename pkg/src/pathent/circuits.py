"""Circuit representation, validation, execution, and named builders.

Elements execute strictly in list order.  A detector consumes its mode:
the ket loses that entry, and later elements (still written in the
original mode numbering) are re-indexed on the fly.  Multiple detectors
condition jointly; the reported probability is the joint probability of
all click outcomes.

The four-port interferometer builder reproduces the composed transfer
matrix

    a' = b/sqrt2 + (c - i d)/2        c' = (a - i b)/2 + i c/sqrt2
    b' = a/sqrt2 + (d - i c)/2        d' = (b - i a)/2 + i d/sqrt2

exactly.  Composing four bare 50:50 splitters leaves residual mirror
phases relative to that matrix; the builder absorbs them as fixed phase
corrections (pi on the ancilla inputs, -pi/2 / +pi/2 on the arm /
detector outputs), which act trivially on every scheme input used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elements import BeamSplitter, PhaseShifter, apply_element
from .errors import CircuitSemanticError, ElementError
from .measurement import DetectorSpec, detect_lossy, post_select_ideal
from .states import (
    Branch,
    Ensemble,
    PureState,
    fidelity,
    fock,
    noon,
    normalize,
    tensor_product,
)

Element = BeamSplitter | PhaseShifter | DetectorSpec


@dataclass(frozen=True)
class Circuit:
    """Ordered elements over ``mode_count`` modes plus input and target.

    ``input`` spans all modes; ``target`` (optional) spans the modes
    remaining after every detector has consumed its mode.
    """

    mode_count: int
    elements: tuple[Element, ...]
    input: PureState
    target: PureState | None = None

    def detectors(self) -> list[DetectorSpec]:
        return [el for el in self.elements if isinstance(el, DetectorSpec)]

    def remaining_modes(self) -> int:
        return self.mode_count - len(self.detectors())

    def with_detector_eta2(self, eta2: float) -> "Circuit":
        """Copy of the circuit with every detector's efficiency replaced."""
        els = tuple(
            DetectorSpec(el.mode, el.clicks, eta2) if isinstance(el, DetectorSpec) else el
            for el in self.elements
        )
        return Circuit(self.mode_count, els, self.input, self.target)


def validate_circuit(circuit: Circuit) -> None:
    """Raise if the circuit violates structural semantics."""
    m = circuit.mode_count
    if m < 1:
        raise CircuitSemanticError(f"mode count must be >= 1, got {m}")
    if circuit.input.mode_count != m:
        raise CircuitSemanticError(
            f"input spans {circuit.input.mode_count} modes, circuit declares {m}"
        )
    if circuit.input.norm() == 0.0:
        raise CircuitSemanticError("input state has no amplitude")
    consumed: set[int] = set()
    for el in circuit.elements:
        for mode in el.modes:
            if not (0 <= mode < m):
                raise CircuitSemanticError(f"mode {mode} out of range for {m} modes")
            if mode in consumed:
                raise CircuitSemanticError(f"mode {mode} already consumed by a detector")
        if isinstance(el, BeamSplitter) and el.mode_i == el.mode_j:
            raise CircuitSemanticError(
                f"beam splitter needs two distinct modes, got ({el.mode_i}, {el.mode_j})"
            )
        if isinstance(el, DetectorSpec):
            consumed.add(el.mode)
    if circuit.target is not None:
        expected = m - len(consumed)
        if circuit.target.mode_count != expected:
            raise CircuitSemanticError(
                f"target spans {circuit.target.mode_count} modes, "
                f"but {expected} modes remain after detection"
            )


def live_position(consumed: set[int], mode: int) -> int:
    """Position of original ``mode`` after the consumed modes were removed."""
    return mode - sum(1 for c in consumed if c < mode)


@dataclass(frozen=True)
class RunResult:
    """Outcome of executing a circuit.

    ``probability`` is the joint probability of all detector outcomes;
    ``output`` is the normalized conditional ensemble with branch
    labels recording per-detector photon arrivals; ``fidelity`` is
    present iff the circuit declares a target.
    """

    probability: float
    output: Ensemble
    fidelity: float | None = None

    @property
    def per_branch_labels(self) -> tuple[tuple[int, ...], ...]:
        return self.output.labels


def run_circuit(circuit: Circuit) -> RunResult:
    """Execute all elements in order and condition on every detector."""
    validate_circuit(circuit)
    state, _ = normalize(circuit.input)
    ensemble = Ensemble.pure(state)
    probability = 1.0
    consumed: set[int] = set()
    for el in circuit.elements:
        if isinstance(el, DetectorSpec):
            pos = live_position(consumed, el.mode)
            if el.eta2 == 1.0:
                branches = []
                stage = 0.0
                for b in ensemble.branches:
                    conditional, prob = post_select_ideal(b.state, pos, el.clicks)
                    stage += b.weight * prob
                    branches.append(
                        Branch(b.weight * prob, conditional, b.label + (el.clicks,))
                    )
                ensemble = Ensemble(
                    tuple(Branch(b.weight / stage, b.state, b.label) for b in branches)
                )
            else:
                ensemble, stage = detect_lossy(ensemble, pos, el.clicks, el.eta2)
            probability *= stage
            consumed.add(el.mode)
        else:
            remapped = _remap_element(el, consumed)
            ensemble = Ensemble(
                tuple(
                    Branch(b.weight, apply_element(b.state, remapped), b.label)
                    for b in ensemble.branches
                )
            )
    result_fidelity = (
        fidelity(ensemble, circuit.target) if circuit.target is not None else None
    )
    return RunResult(probability, ensemble, result_fidelity)


def _remap_element(el: Element, consumed: set[int]) -> Element:
    if not consumed:
        return el
    if isinstance(el, BeamSplitter):
        return BeamSplitter(
            live_position(consumed, el.mode_i), live_position(consumed, el.mode_j)
        )
    if isinstance(el, PhaseShifter):
        return PhaseShifter(live_position(consumed, el.mode), el.phi)
    raise ElementError(f"cannot remap {el!r}")


# -- named builders ----------------------------------------------------------

PI = math.pi

# Fixed phase corrections absorbing the mirror phases (see module docstring).
_INPUT_CORRECTIONS = (PhaseShifter(2, PI), PhaseShifter(3, PI))
_OUTPUT_CORRECTIONS = (
    PhaseShifter(0, -PI / 2),
    PhaseShifter(1, -PI / 2),
    PhaseShifter(2, PI / 2),
    PhaseShifter(3, PI / 2),
)


def _four_port_elements(
    mid_shifts: tuple[PhaseShifter, ...],
    end_shift: PhaseShifter | None,
    clicks: tuple[int, int],
    eta2: float,
) -> tuple[Element, ...]:
    els: list[Element] = list(_INPUT_CORRECTIONS)
    els.append(BeamSplitter(0, 1))
    els.extend(mid_shifts)
    els.extend((BeamSplitter(0, 2), BeamSplitter(1, 3), BeamSplitter(0, 1)))
    els.extend(_OUTPUT_CORRECTIONS)
    if end_shift is not None:
        els.append(end_shift)
    els.append(DetectorSpec(2, clicks[0], eta2))
    els.append(DetectorSpec(3, clicks[1], eta2))
    return tuple(els)


def _default_ancilla() -> PureState:
    return noon(2, 1.0)


def build_named(
    name: str,
    input_state: PureState | None = None,
    clicks: tuple[int, int] = (1, 1),
    eta2: float = 1.0,
    extra_phase: float | None = None,
) -> Circuit:
    """Construct one of the named schemes.

    hom           single 50:50 splitter on two modes (no detectors)
    fig2          four-port interferometer, arm input on modes (0, 1),
                  detectors on modes 2 and 3
    fig2_33       fig2 plus the pi/2 shifter on arm 1 between the first
                  and intermediate splitters
    fig2_ancilla  fig2 plus the pi/4 shifter on arm 0 at the same spot,
                  ancilla fed on modes (2, 3)

    ``input_state`` may span the arm modes only (it is padded with the
    scheme's default ancilla input) or all four modes.  ``extra_phase``
    appends a phase shifter on output arm 0 after the last splitter.
    """
    if name == "hom":
        state = input_state if input_state is not None else fock(1, 1)
        if state.mode_count != 2:
            raise CircuitSemanticError("hom expects a two-mode input")
        target = noon(2, 1.0) if input_state is None else None
        return Circuit(2, (BeamSplitter(0, 1),), state, target)

    if name not in ("fig2", "fig2_33", "fig2_ancilla"):
        raise CircuitSemanticError(f"unknown circuit name {name!r}")

    mid: tuple[PhaseShifter, ...] = ()
    default_arms = fock(2, 2)
    ancilla = fock(0, 0)
    target = None
    if name == "fig2":
        if input_state is None and clicks == (1, 1):
            target = noon(2, 1.0)
    elif name == "fig2_33":
        mid = (PhaseShifter(1, PI / 2),)
        default_arms = fock(3, 3)
        if input_state is None and clicks == (1, 1) and extra_phase is None:
            target = noon(4, -1.0)
    else:  # fig2_ancilla
        mid = (PhaseShifter(0, PI / 4),)
        ancilla = _default_ancilla()
        if input_state is None and clicks == (1, 1) and extra_phase is None:
            target = noon(4, -1.0)

    arms = input_state if input_state is not None else default_arms
    if arms.mode_count == 2:
        full_input = tensor_product(arms, ancilla)
    elif arms.mode_count == 4:
        full_input = arms
    else:
        raise CircuitSemanticError(
            f"{name} expects a 2- or 4-mode input, got {arms.mode_count} modes"
        )

    end = PhaseShifter(0, extra_phase) if extra_phase is not None else None
    elements = _four_port_elements(mid, end, clicks, eta2)
    circuit = Circuit(4, elements, full_input, target)
    validate_circuit(circuit)
    return circuit
