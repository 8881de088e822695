"""Quantum games in six-tuple form and their construction from extensive games.

A quantum game fixes the Hilbert space of ``m`` qubits, the players, an
initial state, the map ``xi`` from qubits to the players acting on them,
an operator family per qubit and a payoff functional per player.
Quantizing an extensive game assigns one qubit to each information set.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .angles import format_angle
from .extensive import (
    ExtensiveGame,
    GameError,
    NormalForm,
    PureStrategy,
    enumerate_pure_strategies,
    normal_representation,
    require_valid,
)
from .quantum import (
    ALGEBRA_TOL,
    Basis,
    BasisKind,
    DomainError,
    StateVector,
    Unitary2,
    all_labels,
    apply_product_operator,
    computational_basis,
    ewl_basis,
    ewl_parameters,
    label_index,
    label_str,
    make_basis,
    measurement_probabilities,
    mw_initial_state,
    parse_label,
    pauli,
    u_theta_alpha,
)

ISOMORPHISM_TOL = 1e-9


class StrategyError(ValueError):
    """An operator is outside the family declared for its qubit."""


class Family(enum.Enum):
    PAULI = "pauli"
    ONE = "one"
    TWO = "two"
    FULL = "full"


def conforms(u: Unitary2, family: Family) -> bool:
    if family is Family.PAULI:
        return u.allclose(pauli(0), 1e-9) or u.allclose(pauli(1), 1e-9)
    if family is Family.FULL:
        return True
    params = ewl_parameters(u)
    if params is None:
        return False
    return family is Family.TWO or abs(params[1]) <= 1e-9


@dataclass(frozen=True)
class MW:
    gamma: float = 0.0


@dataclass(frozen=True)
class EWL:
    families: Mapping[str, Family] | None = None


@dataclass(frozen=True, eq=False)
class QuantumGameSpec:
    scheme: str
    players: tuple[str, ...]
    initial_state: StateVector
    basis: Basis
    zeta: tuple[str, ...]
    xi: tuple[str, ...]
    families: tuple[Family, ...]
    coefficients: np.ndarray
    gamma: float | None = None

    def __post_init__(self):
        m = self.initial_state.num_qubits
        if self.basis.num_qubits != m:
            raise GameError("basis and initial state disagree on the qubit count")
        if not (len(self.zeta) == len(self.xi) == len(self.families) == m):
            raise GameError("zeta, xi and families need one entry per qubit")
        unknown = set(self.xi) - set(self.players)
        if unknown:
            raise GameError(f"xi maps qubits to undeclared players {sorted(unknown)}")
        idle = [p for p in self.players if p not in self.xi]
        if idle:
            raise GameError(f"players {idle} own no qubit; xi must be surjective")
        coef = np.array(self.coefficients, dtype=float)
        if coef.shape != (len(self.players), 2**m):
            raise GameError(f"coefficient table shape {coef.shape} != {(len(self.players), 2**m)}")
        coef.flags.writeable = False
        object.__setattr__(self, "coefficients", coef)

    @property
    def num_qubits(self) -> int:
        return self.initial_state.num_qubits

    def qubits_of(self, player: str) -> list[int]:
        return [j for j, p in enumerate(self.xi) if p == player]


@dataclass(frozen=True, eq=False)
class GameIsomorphism:
    """Per-player bijections from classical plans to operators on the player's qubits."""

    players: tuple[str, ...]
    qubits: tuple[tuple[int, ...], ...]
    maps: tuple[dict, ...]

    def image(self, profile: Sequence[PureStrategy]) -> tuple[Unitary2, ...]:
        m = sum(len(q) for q in self.qubits)
        ops: list[Unitary2 | None] = [None] * m
        for i, s in enumerate(profile):
            for j, u in zip(self.qubits[i], self.maps[i][s]):
                ops[j] = u
        return tuple(ops)

    def is_bijective(self) -> bool:
        for i, mp in enumerate(self.maps):
            images = [tuple(np.round(u.matrix, 9).tobytes() for u in ops) for ops in mp.values()]
            if len(set(images)) != len(images) or len(images) != 2 ** len(self.qubits[i]):
                return False
        return True


def qubit_order(g: ExtensiveGame, zeta_order: Sequence[str] | None = None) -> tuple[str, ...]:
    sets = g.information_sets
    if zeta_order is None:
        return tuple(sorted(sets, key=lambda k: (g.player_index(sets[k].owner), k)))
    order = tuple(zeta_order)
    if sorted(order) != sorted(sets):
        raise GameError("zeta_order must list every information set exactly once")
    return order


def _action_operator(scheme: str, k: int) -> Unitary2:
    if scheme == "mw":
        return pauli(k)
    return u_theta_alpha(k * math.pi, 0.0)


def canonical_isomorphism(
    g: ExtensiveGame, spec: QuantumGameSpec, complemented: bool = False
) -> GameIsomorphism:
    """Action 0 maps to sigma_0 (MW) or U(0,0) (EWL), action 1 to sigma_1 or U(pi,0).

    ``complemented`` swaps the two, which matches MW games whose initial state
    sits on the label 1...1.
    """
    scheme = "mw" if spec.basis.kind is BasisKind.COMPUTATIONAL else "ewl"
    qubits, maps = [], []
    for p in spec.players:
        qs = tuple(spec.qubits_of(p))
        mp = {}
        for s in enumerate_pure_strategies(g, p):
            mp[s] = tuple(
                _action_operator(scheme, s.action(spec.zeta[j]) ^ int(complemented)) for j in qs
            )
        qubits.append(qs)
        maps.append(mp)
    return GameIsomorphism(spec.players, tuple(qubits), tuple(maps))


def _profile_for_label(g, players, zeta, xi, bits) -> list[PureStrategy]:
    profile = []
    for p in players:
        choices = sorted((zeta[j], bits[j]) for j in range(len(bits)) if xi[j] == p)
        profile.append(PureStrategy(p, tuple(choices)))
    return profile


def quantize(
    g: ExtensiveGame, scheme: MW | EWL, zeta_order: Sequence[str] | None = None
) -> tuple[QuantumGameSpec, GameIsomorphism]:
    """Write ``g`` as a quantum game with one qubit per information set.

    The payoff coefficient of basis label ``b`` is the classical payoff of the
    plan profile whose action index at the info set of qubit ``j`` is ``b[j]``.
    """
    require_valid(g)
    zeta = qubit_order(g, zeta_order)
    sets = g.information_sets
    xi = tuple(sets[k].owner for k in zeta)
    m = len(zeta)
    if m == 0:
        raise GameError("a game without information sets has no quantum form")
    nf = normal_representation(g)
    coef = np.empty((len(g.players), 2**m))
    for bits in all_labels(m):
        profile = _profile_for_label(g, g.players, zeta, xi, bits)
        idx = tuple(nf.strategies[i].index(s) for i, s in enumerate(profile))
        coef[:, label_index(bits)] = nf.payoffs[idx]

    if isinstance(scheme, MW):
        spec = QuantumGameSpec(
            "mw",
            g.players,
            mw_initial_state(scheme.gamma, m),
            computational_basis(m),
            zeta,
            xi,
            (Family.PAULI,) * m,
            coef,
            gamma=float(scheme.gamma),
        )
    elif isinstance(scheme, EWL):
        chosen = {str(k): Family(v) for k, v in (scheme.families or {}).items()}
        unknown = set(chosen) - set(g.players)
        if unknown:
            raise GameError(f"families given for unknown players {sorted(unknown)}")
        basis = ewl_basis(m)
        spec = QuantumGameSpec(
            "ewl",
            g.players,
            basis.vector((0,) * m),
            basis,
            zeta,
            xi,
            tuple(chosen.get(p, Family.ONE) for p in xi),
            coef,
        )
    else:
        raise GameError(f"unknown scheme {scheme!r}")
    return spec, canonical_isomorphism(g, spec)


def _check_profile(spec: QuantumGameSpec, ops: Sequence[Unitary2]) -> None:
    if len(ops) != spec.num_qubits:
        raise StrategyError(f"{len(ops)} operators for {spec.num_qubits} qubits")
    for j, (u, fam) in enumerate(zip(ops, spec.families)):
        if not conforms(u, fam):
            raise StrategyError(f"qubit {j + 1}: operator {u!r} is not in family {fam.value}")


def final_state(spec: QuantumGameSpec, ops: Sequence[Unitary2]) -> StateVector:
    _check_profile(spec, ops)
    return apply_product_operator(ops, spec.initial_state)


def payoff(spec: QuantumGameSpec, ops: Sequence[Unitary2]) -> np.ndarray:
    """Expected utilities ``sum_b v_i(b) |<b|psi_fin>|^2``, one per player."""
    probs = measurement_probabilities(final_state(spec, ops), spec.basis)
    return spec.coefficients @ probs


def operator_label(u: Unitary2, family: Family) -> str:
    if family is Family.PAULI:
        return "s0" if u.allclose(pauli(0), 1e-9) else "s1"
    params = ewl_parameters(u)
    if params is None:
        return np.array2string(u.matrix, precision=6, separator=",").replace("\n", "")
    theta, alpha = params
    if family is Family.ONE:
        return format_angle(theta)
    return f"{format_angle(theta)},{format_angle(alpha)}"


def strategy_label(spec: QuantumGameSpec, player: str, ops: Sequence[Unitary2]) -> str:
    qs = spec.qubits_of(player)
    parts = [operator_label(u, spec.families[j]) for j, u in zip(qs, ops)]
    if len(parts) == 1:
        return parts[0]
    return "/".join(f"[{p}]" if "," in p else p for p in parts)


def induced_strategic_game(
    spec: QuantumGameSpec, strategies: Sequence[Sequence[Sequence[Unitary2]]]
) -> NormalForm:
    """Payoff tensor over finitely many strategies per player.

    ``strategies[i]`` lists player ``i``'s strategies; each strategy holds one
    operator per qubit of that player, in qubit order.
    """
    if len(strategies) != len(spec.players):
        raise DomainError("one strategy list per player is required")
    qubits = [spec.qubits_of(p) for p in spec.players]
    for i, lst in enumerate(strategies):
        if not lst:
            raise DomainError(f"player {spec.players[i]} has an empty strategy list")
        for ops in lst:
            if len(ops) != len(qubits[i]):
                raise DomainError(f"player {spec.players[i]}: strategy needs {len(qubits[i])} operators")
            for j, u in zip(qubits[i], ops):
                if not conforms(u, spec.families[j]):
                    raise StrategyError(f"qubit {j + 1}: operator {u!r} is not in family {spec.families[j].value}")
    strategies = [tuple(tuple(s) for s in lst) for lst in strategies]
    shape = tuple(len(s) for s in strategies)
    pay = np.empty(shape + (len(spec.players),))
    m = spec.num_qubits
    psi = spec.initial_state
    for idx in itertools.product(*(range(n) for n in shape)):
        ops: list = [None] * m
        for i, k in enumerate(idx):
            for j, u in zip(qubits[i], strategies[i][k]):
                ops[j] = u
        probs = measurement_probabilities(apply_product_operator(ops, psi), spec.basis)
        pay[idx] = spec.coefficients @ probs
    labels = tuple(
        tuple(strategy_label(spec, p, s) for s in strategies[i]) for i, p in enumerate(spec.players)
    )
    return NormalForm(spec.players, tuple(strategies), labels, pay)


def pauli_strategies(spec: QuantumGameSpec) -> list[list[tuple[Unitary2, ...]]]:
    """All {sigma_0, sigma_1} assignments to each player's qubits."""
    out = []
    for p in spec.players:
        k = len(spec.qubits_of(p))
        out.append([tuple(pauli(b) for b in bits) for bits in itertools.product((0, 1), repeat=k)])
    return out


@dataclass(frozen=True)
class IsomorphismCheck:
    ok: bool
    max_deviation: float
    profiles_checked: int


def verify_isomorphism(
    g: ExtensiveGame,
    spec: QuantumGameSpec,
    iso: GameIsomorphism,
    tol: float = ISOMORPHISM_TOL,
) -> IsomorphismCheck:
    """Check ``u'_i(s) == E_i(g(s))`` for every classical pure profile ``s``."""
    nf = normal_representation(g)
    if tuple(spec.players) != tuple(nf.players) or not iso.is_bijective():
        return IsomorphismCheck(False, math.inf, 0)
    worst = 0.0
    count = 0
    for idx in nf.profiles():
        profile = [nf.strategies[i][k] for i, k in enumerate(idx)]
        e = payoff(spec, iso.image(profile))
        worst = max(worst, float(np.max(np.abs(e - nf.payoffs[idx]))))
        count += 1
    return IsomorphismCheck(worst <= tol, worst, count)


def profile_basis_labels(
    g: ExtensiveGame, spec: QuantumGameSpec, iso: GameIsomorphism
) -> dict[tuple[PureStrategy, ...], tuple[int, ...]]:
    """Basis label reached from the label-0...0 basis vector under each image profile."""
    start = spec.basis.vector((0,) * spec.num_qubits)
    nf = normal_representation(g)
    out = {}
    for idx in nf.profiles():
        profile = tuple(nf.strategies[i][k] for i, k in enumerate(idx))
        probs = measurement_probabilities(apply_product_operator(iso.image(profile), start), spec.basis)
        k = int(np.argmax(probs))
        if abs(probs[k] - 1.0) > 1e-9:
            raise GameError(f"profile {profile} does not map onto a single basis label")
        out[profile] = all_labels(spec.num_qubits)[k]
    return out


def _check_ewl_range(theta, alpha=0.0):
    if not -ALGEBRA_TOL <= theta <= math.pi + ALGEBRA_TOL:
        raise DomainError(f"theta={theta!r} outside [0, pi]")
    if not -ALGEBRA_TOL <= alpha <= math.pi / 2 + ALGEBRA_TOL:
        raise DomainError(f"alpha={alpha!r} outside [0, pi/2]")


def ewl_utility_closed_form(theta1, theta2, theta3, alpha3) -> np.ndarray:
    """Closed-form EWL utilities ``(E_1, E_2, E_3)`` of the quantized Selten's Horse."""
    for t in (theta1, theta2, theta3):
        _check_ewl_range(t)
    _check_ewl_range(0.0, alpha3)
    c1, c2, c3 = (math.cos(t / 2) ** 2 for t in (theta1, theta2, theta3))
    s1, s2, s3 = 1 - c1, 1 - c2, 1 - c3
    ca, sa = math.cos(alpha3) ** 2, math.sin(alpha3) ** 2
    e12 = 2 * (s1 * s2 * s3 + c1 * c2 * c3 * sa) + c3 * ca * (3 * c1 + s1 * (2 + 3 * c2))
    e3 = c3 * ca * (2 * s1 * s2 + c1) + c1 * c3 * sa * (1 + c2) + s1 * s3 * (1 + s2)
    return np.array([e12, e12, e3])


def ewl_amplitudes_closed_form(theta1, theta2, theta3, alpha3) -> np.ndarray:
    """Amplitudes ``lambda_x / sqrt(2)`` of the final EWL state on three qubits."""
    thetas = (theta1, theta2, theta3)
    out = np.empty(8, dtype=complex)
    for k, x in enumerate(all_labels(3)):
        xb = tuple(1 - b for b in x)
        n = sum(x)
        a = (1j) ** n * np.exp(1j * xb[2] * alpha3)
        a *= math.prod(math.cos((x[j] * math.pi - thetas[j]) / 2) for j in range(3))
        b = (-1j) ** n * np.exp(-1j * x[2] * alpha3)
        b *= math.prod(math.cos((xb[j] * math.pi - thetas[j]) / 2) for j in range(3))
        out[k] = (a + b) / math.sqrt(2)
    return out


def classical_mixed_utility(p, q, r) -> np.ndarray:
    """Selten's Horse payoffs when a0, b0, c0 are played with probabilities p, q, r."""
    e12 = 3 * p * r + 5 * (1 - p) * q * r + 2 * (1 - p) * (1 - q)
    e3 = p * r + (1 - p) * q * (1 - r) + 2 * (1 - p) * (1 - q)
    return np.array([e12, e12, e3])


def two_stage_expected_outcome(theta1, theta2, theta3, outcomes: Sequence[Sequence[float]]) -> np.ndarray:
    """Expected outcome of the EWL two-stage game under one-parameter strategies.

    ``outcomes`` is ``(O00, O01, O10, O11)``; each entry may be a scalar or a vector.
    """
    o00, o01, o10, o11 = (np.asarray(o, dtype=float) for o in outcomes)
    c1, c2, c3 = (math.cos(t / 2) ** 2 for t in (theta1, theta2, theta3))
    s1, s2, s3 = 1 - c1, 1 - c2, 1 - c3
    return (o00 * c2 + o01 * s2) * c1 + (o10 * c3 + o11 * s3) * s1


def spec_to_dict(spec: QuantumGameSpec) -> dict:
    m = spec.num_qubits
    return {
        "scheme": spec.scheme,
        "gamma": spec.gamma,
        "num_qubits": m,
        "players": list(spec.players),
        "basis": spec.basis.kind.value,
        "qubits": [
            {"qubit": j + 1, "infoset": spec.zeta[j], "player": spec.xi[j], "family": spec.families[j].value}
            for j in range(m)
        ],
        "initial_state": {
            label_str(b): [float(a.real), float(a.imag)]
            for b, a in zip(all_labels(m), spec.initial_state.amplitudes)
            if abs(a) > 0.0
        },
        "coefficients": {
            label_str(b): [float(v) for v in spec.coefficients[:, label_index(b)]]
            for b in all_labels(m)
        },
    }


def spec_from_dict(d: Mapping) -> QuantumGameSpec:
    m = int(d["num_qubits"])
    players = tuple(str(p) for p in d["players"])
    amps = np.zeros(2**m, dtype=complex)
    for lab, (re_, im_) in d["initial_state"].items():
        amps[label_index(parse_label(lab))] = complex(re_, im_)
    coef = np.zeros((len(players), 2**m))
    for lab, vals in d["coefficients"].items():
        coef[:, label_index(parse_label(lab))] = vals
    qubits = sorted(d["qubits"], key=lambda q: q["qubit"])
    return QuantumGameSpec(
        str(d["scheme"]),
        players,
        StateVector(amps),
        make_basis(BasisKind(d["basis"]), m),
        tuple(str(q["infoset"]) for q in qubits),
        tuple(str(q["player"]) for q in qubits),
        tuple(Family(q["family"]) for q in qubits),
        coef,
        gamma=None if d.get("gamma") is None else float(d["gamma"]),
    )


def mw_spec_builder(g: ExtensiveGame, zeta_order: Sequence[str] | None = None):
    """Return ``gamma -> spec`` for the MW quantization of ``g``."""

    def build(gamma: float) -> QuantumGameSpec:
        return quantize(g, MW(gamma), zeta_order)[0]

    return build

