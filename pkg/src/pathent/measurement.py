"""Photon-number detection: ideal post-selection and the lossy POVM.

An ideal detector reporting k photons projects onto occupation k of its
mode and consumes the mode (the ket shrinks by one entry), so measured
modes can never be reused downstream.  An inefficient detector is an
ideal one preceded by a beam splitter of transmissivity eta: when n
photons arrive, k are reported with the binomial weight
C(n, k) * eta2^k * (1 - eta2)^(n - k), and all n arriving photons leave
the circuit regardless (the lost ones go to the environment).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ElementError, ZeroProbabilityError
from .states import Branch, Ensemble, PureState, as_ensemble


@dataclass(frozen=True)
class DetectorSpec:
    """Photon-number detector on ``mode`` reporting ``clicks`` photons."""

    mode: int
    clicks: int
    eta2: float = 1.0

    def __post_init__(self):
        if self.clicks < 0:
            raise ElementError(f"negative click count {self.clicks}")
        if not 0.0 <= self.eta2 <= 1.0:
            raise ElementError(f"detector efficiency {self.eta2} outside [0, 1]")

    @property
    def modes(self) -> tuple[int]:
        return (self.mode,)


def _check_mode(state: PureState, mode: int) -> None:
    if not (0 <= mode < state.mode_count):
        raise ElementError(f"mode {mode} out of range for {state.mode_count} modes")


def _condition_on_count(state: PureState, mode: int, n: int) -> tuple[float, PureState | None]:
    """Project onto occupation ``n`` of ``mode`` and drop that mode.

    Returns (probability, conditional state); the conditional is
    unit-norm with its phase untouched, or None at probability zero.
    """
    kept: dict[tuple[int, ...], complex] = {}
    for ket, amp in state.items():
        if ket[mode] == n:
            kept[ket[:mode] + ket[mode + 1 :]] = amp
    if not kept:
        return 0.0, None
    prob = sum(abs(a) ** 2 for a in kept.values())
    scale = 1.0 / math.sqrt(prob)
    conditional = PureState(
        {k: a * scale for k, a in kept.items()}, state.mode_count - 1
    )
    return prob, conditional


def post_select_ideal(state: PureState, mode: int, k: int) -> tuple[PureState, float]:
    """Condition on an ideal detector seeing exactly ``k`` photons.

    The measured mode is consumed.  Probabilities over all k for a
    fixed mode sum to one.
    """
    _check_mode(state, mode)
    prob, conditional = _condition_on_count(state, mode, k)
    if conditional is None:
        raise ZeroProbabilityError(
            f"outcome {k} on mode {mode} has probability zero"
        )
    return conditional, prob


def detect_lossy(
    rho: Ensemble | PureState, mode: int, k: int, eta2: float
) -> tuple[Ensemble, float]:
    """Condition on an efficiency-eta2 detector reporting ``k`` photons.

    Every arrival number n >= k contributes a conditional branch whose
    weight carries the binomial click factor; branch labels record the
    arrival number.  At eta2 = 1 this reduces exactly to
    ``post_select_ideal``.  Returns the normalized conditional ensemble
    and the total click probability.
    """
    if not 0.0 <= eta2 <= 1.0:
        raise ElementError(f"detector efficiency {eta2} outside [0, 1]")
    rho = as_ensemble(rho)
    branches: list[Branch] = []
    for branch in rho.branches:
        _check_mode(branch.state, mode)
        max_n = max((ket[mode] for ket, _ in branch.state.items()), default=-1)
        for n in range(k, max_n + 1):
            click = math.comb(n, k) * eta2**k * (1.0 - eta2) ** (n - k)
            if click == 0.0:
                continue
            arrive, conditional = _condition_on_count(branch.state, mode, n)
            if conditional is None:
                continue
            branches.append(
                Branch(branch.weight * arrive * click, conditional, branch.label + (n,))
            )
    probability = sum(b.weight for b in branches)
    if probability == 0.0:
        raise ZeroProbabilityError(
            f"reporting {k} photons on mode {mode} has probability zero"
        )
    normalized = tuple(
        Branch(b.weight / probability, b.state, b.label) for b in branches
    )
    return Ensemble(normalized), probability


def outcome_distribution(
    state: PureState, modes: list[int] | tuple[int, ...]
) -> dict[tuple[int, ...], float]:
    """Joint ideal photon-count distribution over ``modes``.

    Each entry equals the joint ``post_select_ideal`` probability for
    that count pattern; entries sum to one for a unit-norm state.
    """
    modes = tuple(modes)
    if len(set(modes)) != len(modes):
        raise ElementError(f"duplicate modes in {modes}")
    for mode in modes:
        _check_mode(state, mode)
    if not modes:
        return {(): 1.0}
    dist: dict[tuple[int, ...], float] = {}
    for ket, amp in state.items():
        pattern = tuple(ket[m] for m in modes)
        dist[pattern] = dist.get(pattern, 0.0) + abs(amp) ** 2
    return dist
