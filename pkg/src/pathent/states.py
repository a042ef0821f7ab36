"""Sparse multimode photon-number states and their algebra.

A state is a finite complex superposition of occupation-number kets
|n1,...,nM>.  All circuit elements either conserve or strictly reduce
the total photon number, so the representation is exact: there is no
cutoff anywhere, only a pruning threshold that turns destructive
interference into structural zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import DimensionMismatchError, ZeroProbabilityError

Ket = tuple[int, ...]

# Amplitudes below this magnitude are dropped whenever a state is built,
# so post-selection probabilities are clean (the HOM |1,1> amplitude is
# an exact structural zero, not float residue).
PRUNE_TOL = 1e-12

# Minimum magnitude for the amplitude anchoring the canonical phase.
PHASE_ANCHOR_TOL = 1e-9


class PureState:
    """Sparse state vector over ``mode_count`` optical modes.

    Immutable by convention: no method mutates ``self``; operations
    return new instances.  Amplitudes with magnitude below
    ``PRUNE_TOL`` are dropped at construction.
    """

    __slots__ = ("_amps", "mode_count")

    def __init__(self, amplitudes: Mapping[Ket, complex], mode_count: int | None = None):
        amps: dict[Ket, complex] = {}
        for ket, amp in amplitudes.items():
            ket = tuple(int(n) for n in ket)
            if any(n < 0 for n in ket):
                raise ValueError(f"negative occupation in ket {ket}")
            if mode_count is None:
                mode_count = len(ket)
            elif len(ket) != mode_count:
                raise DimensionMismatchError(
                    f"ket {ket} has {len(ket)} modes, expected {mode_count}"
                )
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                amps[ket] = amps.get(ket, 0j) + amp
        if mode_count is None:
            raise ValueError("mode_count required for a state with no amplitudes")
        self._amps = amps
        self.mode_count = mode_count

    # -- mapping-style access -------------------------------------------------

    def items(self) -> Iterator[tuple[Ket, complex]]:
        return iter(self._amps.items())

    def kets(self) -> list[Ket]:
        return sorted(self._amps)

    def amplitude(self, ket: Ket) -> complex:
        return self._amps.get(tuple(ket), 0j)

    def __len__(self) -> int:
        return len(self._amps)

    def __contains__(self, ket: Ket) -> bool:
        return tuple(ket) in self._amps

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PureState)
            and self.mode_count == other.mode_count
            and self._amps == other._amps
        )

    def __hash__(self):
        return hash((self.mode_count, frozenset(self._amps.items())))

    def __repr__(self) -> str:
        terms = " + ".join(
            f"({self._amps[k]:.6g})|{','.join(map(str, k))}>" for k in self.kets()
        )
        return terms or f"0 (on {self.mode_count} modes)"

    # -- basic quantities -----------------------------------------------------

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._amps.values()))

    def photon_numbers(self) -> set[int]:
        """Set of total photon numbers occurring across kets."""
        return {sum(k) for k in self._amps}

    def scaled(self, factor: complex) -> "PureState":
        return PureState({k: a * factor for k, a in self._amps.items()}, self.mode_count)


def fock(*occupations: int) -> PureState:
    """The basis ket |n1,...,nM> with unit amplitude."""
    return PureState({tuple(occupations): 1.0})


def noon(n: int, relative_phase: complex = 1.0) -> PureState:
    """(|n,0> + relative_phase * |0,n>) / sqrt(2) on two modes."""
    return PureState({(n, 0): 1 / math.sqrt(2), (0, n): relative_phase / math.sqrt(2)})


def normalize(state: PureState) -> tuple[PureState, float]:
    """Rescale to unit norm and apply the canonical global phase.

    The canonical phase makes the amplitude of the lexicographically
    smallest ket with magnitude above ``PHASE_ANCHOR_TOL`` real and
    positive, so states quoted only up to global phase can be compared
    directly.  Returns the canonical state and the original norm.
    """
    norm = state.norm()
    if norm == 0.0:
        raise ZeroProbabilityError(
            "cannot normalize a zero state (impossible post-selection upstream?)"
        )
    anchor = None
    for ket in sorted(state._amps):
        if abs(state._amps[ket]) > PHASE_ANCHOR_TOL:
            anchor = state._amps[ket]
            break
    phase = anchor / abs(anchor) if anchor is not None else 1.0
    return state.scaled(1.0 / (norm * phase)), norm


def canonical_form(state: PureState) -> PureState:
    """Unit-norm canonical-phase form of ``state``."""
    return normalize(state)[0]


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.mode_count != b.mode_count:
        raise DimensionMismatchError(
            f"inner product between {a.mode_count}- and {b.mode_count}-mode states"
        )
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    acc = 0j
    for ket, _ in small.items():
        acc += a.amplitude(ket).conjugate() * b.amplitude(ket)
    return acc


def tensor_product(a: PureState, b: PureState) -> PureState:
    """State on the concatenated mode register; norms multiply."""
    amps = {
        ka + kb: va * vb
        for ka, va in a.items()
        for kb, vb in b.items()
    }
    return PureState(amps, a.mode_count + b.mode_count)


def equal_up_to_global_phase(a: PureState, b: PureState, tol: float = 1e-10) -> bool:
    """True when the unit vectors of ``a`` and ``b`` differ only by a phase."""
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        return na == nb
    return 1.0 - abs(inner_product(a, b)) / (na * nb) <= tol


@dataclass(frozen=True)
class Branch:
    """One weighted pure component of a mixed conditional state."""

    weight: float
    state: PureState
    label: tuple[int, ...] = ()


@dataclass(frozen=True)
class Ensemble:
    """Weighted mixture of pure states, e.g. conditioned on detector arrivals.

    Producers keep weights summing to one and branch states unit-norm;
    every conditional state arising in this package is pure, so a full
    density matrix is never needed.
    """

    branches: tuple[Branch, ...] = field(default_factory=tuple)

    def __post_init__(self):
        modes = {b.state.mode_count for b in self.branches}
        if len(modes) > 1:
            raise DimensionMismatchError(f"branch mode counts differ: {sorted(modes)}")

    @classmethod
    def pure(cls, state: PureState, label: tuple[int, ...] = ()) -> "Ensemble":
        return cls((Branch(1.0, state, label),))

    @property
    def mode_count(self) -> int:
        if not self.branches:
            raise ValueError("empty ensemble has no mode count")
        return self.branches[0].state.mode_count

    @property
    def labels(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b.label for b in self.branches)

    def total_weight(self) -> float:
        return sum(b.weight for b in self.branches)

    def branch_by_label(self, label: tuple[int, ...]) -> Branch:
        for b in self.branches:
            if b.label == tuple(label):
                return b
        raise KeyError(f"no branch labeled {label}")


def as_ensemble(rho: Ensemble | PureState) -> Ensemble:
    if isinstance(rho, PureState):
        return Ensemble.pure(rho)
    return rho


def fidelity(rho: Ensemble | PureState, target: PureState) -> float:
    """sum_branches weight * |<target|branch>|^2.

    ``target`` and all branch states are expected unit-norm; the result
    is 1 exactly when every weighted branch equals the target up to a
    global phase.
    """
    rho = as_ensemble(rho)
    if rho.branches and rho.mode_count != target.mode_count:
        raise DimensionMismatchError(
            f"fidelity between {rho.mode_count}-mode ensemble and "
            f"{target.mode_count}-mode target"
        )
    return sum(b.weight * abs(inner_product(target, b.state)) ** 2 for b in rho.branches)
