"""Scheme-level derived quantities: lossy-detector tables, efficiency
sweeps, and the multiphoton-absorption (lithographic deposition) pattern."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, run_circuit
from .elements import apply_pair_transform, apply_phase_shifter
from .errors import CircuitSemanticError, DimensionMismatchError
from .measurement import DetectorSpec
from .states import PureState, fidelity, inner_product

# Balanced combiner whose first output mode annihilates (a + b)/sqrt(2);
# together with a phase shifter on mode 1 it realizes the absorption
# mode (a + exp(i*phi) b)/sqrt(2) probed by an N-photon detector.
COMBINER = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class LossyRow:
    """One detector-arrival pattern with its conditional state and weight."""

    arrivals: tuple[int, int]
    state: PureState
    weight: float


@dataclass(frozen=True)
class LossyReport:
    """Conditional-state table of a two-detector scheme at efficiency eta2."""

    rows: tuple[LossyRow, ...]
    fidelity: float
    eta2: float
    click_probability: float

    def row(self, arrivals: tuple[int, int]) -> LossyRow:
        for r in self.rows:
            if r.arrivals == tuple(arrivals):
                return r
        raise KeyError(f"no arrival pattern {arrivals}")


def lossy_table(circuit: Circuit, eta2: float, target: PureState) -> LossyReport:
    """Enumerate all arrival patterns behind a double single-click heralding.

    The circuit must contain exactly two detectors, both with clicks=1;
    their efficiencies are overridden by ``eta2``.  Rows are sorted by
    arrival pattern; weights sum to one; fidelity is evaluated against
    ``target``.  At eta2 = 1 the table collapses to the single row (1, 1).
    """
    detectors = circuit.detectors()
    if len(detectors) != 2 or any(d.clicks != 1 for d in detectors):
        raise CircuitSemanticError(
            "lossy_table needs a circuit with exactly two clicks=1 detectors"
        )
    if not 0.0 < eta2 <= 1.0:
        raise CircuitSemanticError(f"eta2 must lie in (0, 1], got {eta2}")
    result = run_circuit(circuit.with_detector_eta2(eta2))
    rows = tuple(
        LossyRow((b.label[0], b.label[1]), b.state, b.weight)
        for b in sorted(result.output.branches, key=lambda b: b.label)
    )
    return LossyReport(
        rows=rows,
        fidelity=fidelity(result.output, target),
        eta2=eta2,
        click_probability=result.probability,
    )


def eta_sweep(
    circuit: Circuit, eta2_values: list[float], target: PureState
) -> list[tuple[float, float, float]]:
    """(eta2, fidelity, click probability) for each requested efficiency."""
    points = []
    for eta2 in eta2_values:
        report = lossy_table(circuit, eta2, target)
        points.append((eta2, report.fidelity, report.click_probability))
    return points


def deposition_pattern(
    state: PureState, phi_grid: list[float]
) -> list[tuple[float, float]]:
    """N-photon absorption rate versus relative path phase.

    For a two-mode state with definite total photon number N, the
    deposition intensity at phase phi is <(e^+)^N e^N> with
    e = (a + exp(i*phi) b)/sqrt(2): the phase is applied to mode 1, the
    two paths are recombined on a balanced combiner, and the normally
    ordered rate sum_kets |amp|^2 * n0!/(n0-N)! is read off the kets
    with n0 >= N.  A NOON state yields a pattern proportional to
    1 + cos(N*phi).
    """
    if state.mode_count != 2:
        raise DimensionMismatchError(
            f"deposition pattern needs a two-mode state, got {state.mode_count} modes"
        )
    totals = state.photon_numbers()
    if len(totals) != 1:
        raise DimensionMismatchError(
            f"deposition pattern needs a definite photon number, found totals {sorted(totals)}"
        )
    n = totals.pop()
    points = []
    for phi in phi_grid:
        shifted = apply_phase_shifter(state, 1, phi)
        combined = apply_pair_transform(shifted, 0, 1, COMBINER)
        rate = 0.0
        for ket, amp in combined.items():
            if ket[0] >= n:
                rate += abs(amp) ** 2 * math.perm(ket[0], n)
        points.append((float(phi), rate))
    return points
