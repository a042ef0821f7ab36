"""Linear-optical elements acting on sparse photon-number states.

Only two element families exist: the 50:50 beam splitter and the
single-mode phase shifter.  The beam splitter is fixed to the
convention in which reflection carries phase pi and transmission
pi/2, i.e. the single-photon transfer matrix on a mode pair is

    B = [[-1, 1j], [1j, -1]] / sqrt(2)

Creation operators transform with the columns of the transfer matrix
(a_j^+ -> sum_i T[i, j] a_i^+), which for B is the same formal
substitution a^+ -> (-a^+ + i b^+)/sqrt(2), b^+ -> (i a^+ - b^+)/sqrt(2).
States are evolved ket by ket through the binomial expansion of that
substitution, so sparse states stay sparse and no dense unitary is ever
formed here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ElementError
from .states import PureState

SQRT2 = math.sqrt(2.0)

# Single-pair beam-splitter transfer matrix (fixed convention).
BS_PAIR_MATRIX = np.array([[-1.0, 1.0j], [1.0j, -1.0]], dtype=complex) / SQRT2


@dataclass(frozen=True)
class BeamSplitter:
    """50:50 beam splitter coupling two distinct modes."""

    mode_i: int
    mode_j: int

    @property
    def modes(self) -> tuple[int, int]:
        return (self.mode_i, self.mode_j)


@dataclass(frozen=True)
class PhaseShifter:
    """Multiplies an n-photon component of ``mode`` by exp(i*n*phi)."""

    mode: int
    phi: float

    @property
    def modes(self) -> tuple[int]:
        return (self.mode,)


def _check_pair(state: PureState, i: int, j: int) -> None:
    m = state.mode_count
    if i == j:
        raise ElementError(f"beam splitter needs two distinct modes, got ({i}, {j})")
    if not (0 <= i < m and 0 <= j < m):
        raise ElementError(f"mode pair ({i}, {j}) out of range for {m} modes")


def pair_expansion(n: int, m: int, t: np.ndarray) -> dict[tuple[int, int], complex]:
    """Fock amplitudes <p,q|U(t)|n,m> on one mode pair.

    ``t`` is the 2x2 single-photon transfer matrix; the expansion is the
    creation-operator substitution (a^+)^n (b^+)^m ->
    (t00 a^+ + t10 b^+)^n (t01 a^+ + t11 b^+)^m with the factorial
    normalization bookkeeping.  Output kets always satisfy p + q = n + m.
    """
    t00, t01 = complex(t[0][0]), complex(t[0][1])
    t10, t11 = complex(t[1][0]), complex(t[1][1])
    total = n + m
    base = math.sqrt(math.factorial(n) * math.factorial(m))
    out: dict[tuple[int, int], complex] = {}
    for p in range(total + 1):
        q = total - p
        acc = 0j
        for k in range(max(0, p - m), min(n, p) + 1):
            acc += (
                math.comb(n, k)
                * math.comb(m, p - k)
                * t00**k
                * t10 ** (n - k)
                * t01 ** (p - k)
                * t11 ** (m - p + k)
            )
        if acc != 0j:
            out[(p, q)] = acc * math.sqrt(math.factorial(p) * math.factorial(q)) / base
    return out


def apply_pair_transform(state: PureState, i: int, j: int, t: np.ndarray) -> PureState:
    """Apply an arbitrary 2x2 mode transformation ``t`` to modes (i, j)."""
    _check_pair(state, i, j)
    amps: dict[tuple[int, ...], complex] = {}
    for ket, amp in state.items():
        for (p, q), factor in pair_expansion(ket[i], ket[j], t).items():
            new = list(ket)
            new[i], new[j] = p, q
            new = tuple(new)
            amps[new] = amps.get(new, 0j) + amp * factor
    return PureState(amps, state.mode_count)


def apply_beam_splitter(state: PureState, i: int, j: int) -> PureState:
    """Send modes (i, j) through the fixed-convention 50:50 beam splitter."""
    return apply_pair_transform(state, i, j, BS_PAIR_MATRIX)


def apply_phase_shifter(state: PureState, mode: int, phi: float) -> PureState:
    """Multiply each ket by exp(i * n_mode * phi); occupations untouched."""
    if not (0 <= mode < state.mode_count):
        raise ElementError(f"mode {mode} out of range for {state.mode_count} modes")
    rot = cmath.exp(1j * phi)
    return PureState(
        {ket: amp * rot ** ket[mode] for ket, amp in state.items()},
        state.mode_count,
    )


def apply_element(state: PureState, element) -> PureState:
    """Dispatch a linear element (beam splitter or phase shifter)."""
    if isinstance(element, BeamSplitter):
        return apply_beam_splitter(state, element.mode_i, element.mode_j)
    if isinstance(element, PhaseShifter):
        return apply_phase_shifter(state, element.mode, element.phi)
    raise ElementError(f"not a linear element: {element!r}")


def mode_transfer_matrix(circuit) -> np.ndarray:
    """Composed single-photon transformation of a circuit's linear elements.

    Detectors are ignored.  Column j of the result is the output
    superposition of a single photon injected in mode j.
    """
    m = circuit.mode_count
    total = np.eye(m, dtype=complex)
    for el in circuit.elements:
        if isinstance(el, BeamSplitter):
            step = np.eye(m, dtype=complex)
            i, j = el.mode_i, el.mode_j
            step[i, i] = BS_PAIR_MATRIX[0, 0]
            step[i, j] = BS_PAIR_MATRIX[0, 1]
            step[j, i] = BS_PAIR_MATRIX[1, 0]
            step[j, j] = BS_PAIR_MATRIX[1, 1]
            total = step @ total
        elif isinstance(el, PhaseShifter):
            step = np.eye(m, dtype=complex)
            step[el.mode, el.mode] = cmath.exp(1j * el.phi)
            total = step @ total
        # detectors and anything else: not part of the linear map
    return total
