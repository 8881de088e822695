"""Pure Nash equilibria of finite games, grid searches over continuous operator
families, entanglement-angle sweeps and the small-angle refinement."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .extensive import ExtensiveGame, NormalForm, normal_representation, outcome
from .protocol import (
    MW,
    Family,
    QuantumGameSpec,
    canonical_isomorphism,
    induced_strategic_game,
    pauli_strategies,
    quantize,
)
from .quantum import DomainError, Unitary2, pauli, u_theta_alpha

DEFAULT_EPS = 1e-9
DEFAULT_THETA = tuple(k * math.pi / 8 for k in range(9))
DEFAULT_ALPHA = tuple(k * math.pi / 8 for k in range(5))


@dataclass(frozen=True)
class Equilibrium:
    profile: tuple[int, ...]
    labels: tuple[str, ...]
    payoffs: tuple[float, ...]


@dataclass(frozen=True)
class EquilibriumReport:
    equilibria: tuple[Equilibrium, ...]
    eps: float
    profiles_examined: int
    grid_relative: bool = False

    def label_set(self) -> set[tuple[str, ...]]:
        return {e.labels for e in self.equilibria}


def _nash_mask(payoffs: np.ndarray, eps: float) -> np.ndarray:
    n = payoffs.shape[-1]
    mask = np.ones(payoffs.shape[:-1], dtype=bool)
    for i in range(n):
        u = payoffs[..., i]
        best = u.max(axis=i, keepdims=True)
        mask &= u >= best - eps
    return mask


def pure_nash(nf: NormalForm, eps: float = DEFAULT_EPS, grid_relative: bool = False) -> EquilibriumReport:
    """Every profile where no unilateral deviation gains more than ``eps``.

    Equilibria come out in lexicographic profile order.
    """
    mask = _nash_mask(nf.payoffs, eps)
    eqs = tuple(
        Equilibrium(
            tuple(int(k) for k in idx),
            nf.profile_label(idx),
            tuple(float(v) for v in nf.payoffs[tuple(idx)]),
        )
        for idx in np.argwhere(mask)
    )
    return EquilibriumReport(eqs, eps, int(mask.size), grid_relative)


def best_response_set(
    nf: NormalForm,
    players: int | Sequence[int],
    opponents: Mapping[int, int],
    eps: float = DEFAULT_EPS,
) -> set[tuple[int, ...]]:
    """Strategies (joint, for a coalition) within ``eps`` of the best reply.

    ``players`` holds player positions; ``opponents`` fixes a strategy index
    for everyone else. For a coalition the result keeps joint strategies that
    are within ``eps`` of the maximum for every member's own payoff.
    """
    group = (players,) if isinstance(players, int) else tuple(players)
    n = len(nf.players)
    if set(group) | set(opponents) != set(range(n)) or set(group) & set(opponents):
        raise DomainError("players and opponents must partition the player positions")
    index: list = [slice(None)] * n
    for j, k in opponents.items():
        index[j] = k
    sub = nf.payoffs[tuple(index)]
    # sub axes follow the order of the free positions
    free = sorted(group)
    keep = np.ones(sub.shape[:-1], dtype=bool)
    for i in group:
        u = sub[..., i]
        keep &= u >= u.max() - eps
    result = set()
    for idx in np.argwhere(keep):
        pos = dict(zip(free, (int(k) for k in idx)))
        result.add(tuple(pos[i] for i in group))
    return result


def nash_condition_region(
    spec_builder: Callable[[float], QuantumGameSpec],
    profile: Sequence[int],
    gammas: Iterable[float],
    eps: float = DEFAULT_EPS,
) -> list[tuple[float, bool]]:
    """For each gamma, whether the Pauli profile is a pure equilibrium of the MW game.

    ``profile`` gives each player's strategy index in ``pauli_strategies`` order.
    """
    out = []
    idx = tuple(profile)
    for gamma in gammas:
        spec = spec_builder(gamma)
        nf = induced_strategic_game(spec, pauli_strategies(spec))
        out.append((float(gamma), bool(_nash_mask(nf.payoffs, eps)[idx])))
    return out


@dataclass(frozen=True)
class GridSpec:
    """Angle grid for continuous families; ``per_qubit`` overrides (theta, alpha) by qubit index."""

    theta: tuple[float, ...] = DEFAULT_THETA
    alpha: tuple[float, ...] = DEFAULT_ALPHA
    per_qubit: Mapping[int, tuple[tuple[float, ...], tuple[float, ...]]] = field(default_factory=dict)

    def points(self, j: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
        return self.per_qubit.get(j, (self.theta, self.alpha))


def qubit_operators(family: Family, theta: Sequence[float], alpha: Sequence[float]) -> list[Unitary2]:
    if family is Family.PAULI:
        return [pauli(0), pauli(1)]
    if not theta or (family is not Family.ONE and not alpha):
        raise DomainError("grid has no points")
    if family is Family.ONE:
        return [u_theta_alpha(t, 0.0) for t in theta]
    return [u_theta_alpha(t, a) for t in theta for a in alpha]


def grid_strategies(spec: QuantumGameSpec, grid: GridSpec) -> list[list[tuple[Unitary2, ...]]]:
    out = []
    for p in spec.players:
        per_qubit = [qubit_operators(spec.families[j], *grid.points(j)) for j in spec.qubits_of(p)]
        out.append(list(itertools.product(*per_qubit)))
    return out


def grid_nash(spec: QuantumGameSpec, grid: GridSpec | None = None, eps: float = DEFAULT_EPS):
    """Pure equilibria of the game restricted to grid strategies.

    Results are grid-relative: a listed profile resists every deviation inside
    the grid, which does not certify it against the continuum.
    Returns ``(report, normal_form)``.
    """
    nf = induced_strategic_game(spec, grid_strategies(spec, grid or GridSpec()))
    return pure_nash(nf, eps, grid_relative=True), nf


def perturbation_refinement(
    g: ExtensiveGame, delta: float = 0.01, eps: float = DEFAULT_EPS
) -> set[tuple[str, ...]]:
    """Classical pure equilibria that stay equilibria of the MW game at ``gamma = delta``.

    A classical equilibrium survives when some profile reaching the same terminal
    history has an MW image that is an equilibrium at ``delta``. Strategies that only
    differ off the played path are thus treated alike. Profiles are returned as
    tuples of strategy labels of ``g``.
    """
    if not 0.0 < delta <= math.pi / 2:
        raise DomainError(f"delta={delta!r} must lie in (0, pi/2]")
    classical = normal_representation(g)
    spec, _ = quantize(g, MW(delta))
    iso = canonical_isomorphism(g, spec)
    quantum = induced_strategic_game(spec, pauli_strategies(spec))
    mask = _nash_mask(quantum.payoffs, eps)
    stable_paths = set()
    for idx in classical.profiles():
        profile = [classical.strategies[i][k] for i, k in enumerate(idx)]
        ops = iso.image(profile)
        image = tuple(
            _find(quantum.strategies[i], tuple(ops[j] for j in spec.qubits_of(p)))
            for i, p in enumerate(spec.players)
        )
        if mask[image]:
            stable_paths.add(outcome(g, profile))
    keep = set()
    for e in pure_nash(classical, eps).equilibria:
        profile = [classical.strategies[i][k] for i, k in enumerate(e.profile)]
        if outcome(g, profile) in stable_paths:
            keep.add(e.labels)
    return keep


def _find(strategies, ops) -> int:
    for k, cand in enumerate(strategies):
        if all(a.allclose(b) for a, b in zip(cand, ops)):
            return k
    raise KeyError("operator tuple not among strategies")


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    equilibria: tuple[Equilibrium, ...]


def gamma_sweep(g: ExtensiveGame, gammas: Sequence[float], eps: float = DEFAULT_EPS) -> list[SweepRow]:
    """Pure equilibria of the MW quantization at each gamma (strictly increasing, within [0, pi])."""
    gs = [float(x) for x in gammas]
    if not gs or any(b <= a for a, b in zip(gs, gs[1:])):
        raise DomainError("gamma values must be strictly increasing")
    if gs[0] < 0.0 or gs[-1] > math.pi:
        raise DomainError("gamma values must lie in [0, pi]")
    rows = []
    for gamma in gs:
        spec, _ = quantize(g, MW(gamma))
        nf = induced_strategic_game(spec, pauli_strategies(spec))
        rows.append(SweepRow(gamma, pure_nash(nf, eps).equilibria))
    return rows
