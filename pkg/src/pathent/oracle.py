"""Two independent reference implementations used to cross-check the engine.

* ``OpPolynomial`` is a symbolic polynomial in per-mode creation
  operators; circuits act on it by substituting each generator with the
  matching column of the composed transfer matrix and re-expanding.
* ``dense_reference_run`` executes a circuit with explicitly
  materialized element unitaries on the full truncated occupation
  basis.  Beam-splitter unitaries are built by exponentiating the
  bilinear hopping generator (3*pi/4)(a_i^+ a_j + a_j^+ a_i), whose
  single-photon exponential equals the fixed pair convention.

Neither path shares state-evolution code with the sparse engine, so
agreement between the three is a meaningful check, not a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuits import Circuit, RunResult, live_position, validate_circuit
from .elements import BeamSplitter, PhaseShifter
from .errors import (
    DimensionMismatchError,
    ElementError,
    OracleSizeError,
    ZeroProbabilityError,
)
from .measurement import DetectorSpec
from .states import PRUNE_TOL, Branch, Ensemble, PureState, normalize

# Hopping angle whose bilinear exponential reproduces the pair matrix
# [[-1, i], [i, -1]]/sqrt(2):  exp(i * (3*pi/4) * sigma_x).
BS_HOPPING_ANGLE = 3.0 * math.pi / 4.0

DENSE_MAX_PHOTONS = 10
DENSE_MAX_MODES = 6


@dataclass(frozen=True)
class OpPolynomial:
    """Polynomial in creation operators: exponent vector -> coefficient."""

    terms: tuple[tuple[tuple[int, ...], complex], ...]
    mode_count: int

    @classmethod
    def from_dict(cls, terms: dict[tuple[int, ...], complex], mode_count: int) -> "OpPolynomial":
        cleaned = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != mode_count:
                raise DimensionMismatchError(
                    f"exponent vector {exps} has {len(exps)} modes, expected {mode_count}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coeff = complex(coeff)
            if coeff != 0j:
                cleaned[exps] = cleaned.get(exps, 0j) + coeff
        ordered = tuple(sorted((e, c) for e, c in cleaned.items() if c != 0j))
        return cls(ordered, mode_count)

    def as_dict(self) -> dict[tuple[int, ...], complex]:
        return dict(self.terms)

    def coefficient(self, exponents: tuple[int, ...]) -> complex:
        return self.as_dict().get(tuple(exponents), 0j)


def monomial(exponents: tuple[int, ...], coeff: complex = 1.0) -> OpPolynomial:
    return OpPolynomial.from_dict({tuple(exponents): coeff}, len(exponents))


def substitute(poly: OpPolynomial, mode_map: np.ndarray) -> OpPolynomial:
    """Replace generator j by sum_i mode_map[i, j] * generator_i and expand.

    ``mode_map`` is the single-photon transfer matrix of the circuit
    (column j = output superposition of a photon entering mode j); it
    must be unitary to 1e-9.  Total degree of every term is preserved.
    """
    mode_map = np.asarray(mode_map, dtype=complex)
    if mode_map.ndim != 2 or mode_map.shape[0] != mode_map.shape[1]:
        raise DimensionMismatchError(f"mode map must be square, got {mode_map.shape}")
    if mode_map.shape[0] != poly.mode_count:
        raise DimensionMismatchError(
            f"mode map is {mode_map.shape[0]}x{mode_map.shape[0]}, "
            f"polynomial has {poly.mode_count} modes"
        )
    m = mode_map.shape[0]
    if not np.allclose(mode_map @ mode_map.conj().T, np.eye(m), atol=1e-9):
        raise ValueError("mode map is not unitary within 1e-9")

    zero = (0,) * m
    result: dict[tuple[int, ...], complex] = {}
    for exps, coeff in poly.terms:
        partial: dict[tuple[int, ...], complex] = {zero: coeff}
        for j, power in enumerate(exps):
            column = mode_map[:, j]
            for _ in range(power):
                nxt: dict[tuple[int, ...], complex] = {}
                for vec, c in partial.items():
                    for i in range(m):
                        if column[i] == 0j:
                            continue
                        grown = list(vec)
                        grown[i] += 1
                        grown = tuple(grown)
                        nxt[grown] = nxt.get(grown, 0j) + c * column[i]
                partial = nxt
        for vec, c in partial.items():
            result[vec] = result.get(vec, 0j) + c
    return OpPolynomial.from_dict(result, m)


def polynomial_to_state(poly: OpPolynomial) -> PureState:
    """Apply the polynomial to the vacuum: exponents (n1..nM) give the ket
    |n1..nM> with amplitude coeff * sqrt(prod n_i!).  Not normalized."""
    amps = {
        exps: coeff * math.sqrt(math.prod(math.factorial(e) for e in exps))
        for exps, coeff in poly.terms
    }
    return PureState(amps, poly.mode_count)


def state_to_polynomial(state: PureState) -> OpPolynomial:
    """Inverse of ``polynomial_to_state`` (exact for sparse states)."""
    terms = {
        ket: amp / math.sqrt(math.prod(math.factorial(n) for n in ket))
        for ket, amp in state.items()
    }
    return OpPolynomial.from_dict(terms, state.mode_count)


# -- dense reference engine ---------------------------------------------------


@lru_cache(maxsize=None)
def _basis(mode_count: int, max_total: int) -> tuple[tuple[int, ...], ...]:
    """All occupation vectors with sum <= max_total, ordered by (total, lex)."""

    def block(total: int, modes: int):
        if modes == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in block(total - first, modes - 1):
                yield (first,) + rest

    states: list[tuple[int, ...]] = []
    for total in range(max_total + 1):
        states.extend(sorted(block(total, mode_count)))
    return tuple(states)


def _index(basis: tuple[tuple[int, ...], ...]) -> dict[tuple[int, ...], int]:
    return {ket: i for i, ket in enumerate(basis)}


def _dense_beam_splitter(basis, i: int, j: int) -> np.ndarray:
    """exp(i * theta * (a_i^+ a_j + h.c.)) materialized on the basis.

    The generator conserves total photon number, so it is diagonalized
    block by block (per total) and the full unitary assembled from the
    blocks.
    """
    dim = len(basis)
    index = _index(basis)
    unitary = np.zeros((dim, dim), dtype=complex)
    blocks: dict[int, list[int]] = {}
    for idx, ket in enumerate(basis):
        blocks.setdefault(sum(ket), []).append(idx)
    for members in blocks.values():
        size = len(members)
        gen = np.zeros((size, size))
        local = {basis[idx]: a for a, idx in enumerate(members)}
        for a, idx in enumerate(members):
            ket = basis[idx]
            if ket[j] > 0:
                hopped = list(ket)
                hopped[i] += 1
                hopped[j] -= 1
                b = local[tuple(hopped)]
                amp = math.sqrt((ket[i] + 1) * ket[j])
                gen[b, a] += amp
                gen[a, b] += amp
        vals, vecs = np.linalg.eigh(gen)
        block_u = (vecs * np.exp(1j * BS_HOPPING_ANGLE * vals)) @ vecs.T
        for a, idx_a in enumerate(members):
            for b, idx_b in enumerate(members):
                unitary[idx_a, idx_b] = block_u[a, b]
    return unitary


def _dense_phase(basis, mode: int, phi: float) -> np.ndarray:
    return np.diag(np.exp(1j * phi * np.array([ket[mode] for ket in basis])))


def _vector(state: PureState, basis, index) -> np.ndarray:
    vec = np.zeros(len(basis), dtype=complex)
    for ket, amp in state.items():
        vec[index[ket]] = amp
    return vec


def _pruned(vec: np.ndarray) -> np.ndarray:
    """Zero out destructive-interference residue (same rule as the engine)."""
    vec = vec.copy()
    vec[np.abs(vec) < PRUNE_TOL] = 0j
    return vec


def _state(vec: np.ndarray, basis, mode_count: int) -> PureState:
    return PureState(
        {ket: amp for ket, amp in zip(basis, vec) if amp != 0j},
        mode_count,
    )


def dense_reference_run(circuit: Circuit) -> RunResult:
    """Same contract as ``run_circuit``, computed with dense unitaries.

    Guarded to total photon number <= 10 and <= 6 modes (the truncated
    basis is exhaustive and loss-free, so results are exact there).
    """
    validate_circuit(circuit)
    max_total = max(circuit.input.photon_numbers())
    if max_total > DENSE_MAX_PHOTONS or circuit.mode_count > DENSE_MAX_MODES:
        raise OracleSizeError(
            f"dense engine limited to N <= {DENSE_MAX_PHOTONS}, "
            f"M <= {DENSE_MAX_MODES}; got N = {max_total}, M = {circuit.mode_count}"
        )

    norm = circuit.input.norm()
    modes = circuit.mode_count
    basis = _basis(modes, max_total)
    index = _index(basis)
    start = _pruned(_vector(circuit.input, basis, index) / norm)
    # branches: (weight, vector, label) with vectors in the current basis
    branches: list[tuple[float, np.ndarray, tuple[int, ...]]] = [(1.0, start, ())]
    probability = 1.0
    consumed: set[int] = set()

    for el in circuit.elements:
        if isinstance(el, DetectorSpec):
            pos = live_position(consumed, el.mode)
            reduced_basis = _basis(modes - 1, max_total)
            reduced_index = _index(reduced_basis)
            new_branches: list[tuple[float, np.ndarray, tuple[int, ...]]] = []
            for weight, vec, label in branches:
                for arrival in range(el.clicks, max_total + 1):
                    click = (
                        math.comb(arrival, el.clicks)
                        * el.eta2**el.clicks
                        * (1.0 - el.eta2) ** (arrival - el.clicks)
                    )
                    if click == 0.0:
                        continue
                    kept = np.zeros(len(reduced_basis), dtype=complex)
                    for idx, ket in enumerate(basis):
                        if ket[pos] == arrival and vec[idx] != 0j:
                            kept[reduced_index[ket[:pos] + ket[pos + 1 :]]] = vec[idx]
                    arrive = float(np.sum(np.abs(kept) ** 2))
                    if arrive == 0.0:
                        continue
                    new_branches.append(
                        (weight * arrive * click, kept / math.sqrt(arrive), label + (arrival,))
                    )
            stage = sum(w for w, _, _ in new_branches)
            if stage == 0.0:
                raise ZeroProbabilityError(
                    f"outcome {el.clicks} on mode {el.mode} has probability zero"
                )
            probability *= stage
            branches = [(w / stage, v, l) for w, v, l in new_branches]
            consumed.add(el.mode)
            modes -= 1
            basis, index = reduced_basis, reduced_index
        else:
            if isinstance(el, BeamSplitter):
                i = live_position(consumed, el.mode_i)
                j = live_position(consumed, el.mode_j)
                if i == j:
                    raise ElementError("beam splitter modes coincide")
                unitary = _dense_beam_splitter(basis, i, j)
            elif isinstance(el, PhaseShifter):
                unitary = _dense_phase(basis, live_position(consumed, el.mode), el.phi)
            else:
                raise ElementError(f"unknown element {el!r}")
            branches = [(w, _pruned(unitary @ v), l) for w, v, l in branches]

    ensemble = Ensemble(
        tuple(
            Branch(w, _state(v, basis, modes), label) for w, v, label in branches
        )
    )
    result_fidelity = None
    if circuit.target is not None:
        target = normalize(circuit.target)[0]
        tvec = _vector(target, basis, index)
        result_fidelity = sum(
            w * abs(np.vdot(tvec, v)) ** 2 for w, v, _ in branches
        )
    return RunResult(probability, ensemble, result_fidelity)
