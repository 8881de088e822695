"""Finite extensive games with two actions per information set.

The game tree is the primary representation; a history is the tuple of
action labels along the path from the root.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

History = tuple[str, ...]

WEIGHT_TOL = 1e-12


class GameError(ValueError):
    """Raised when a game cannot be built or used as requested."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Leaf:
    payoffs: tuple[float, ...]


@dataclass(frozen=True)
class Decision:
    player: str
    infoset: str | None
    children: tuple[tuple[str, "Node"], ...]

    @property
    def actions(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.children)

    def child(self, action: str) -> "Node":
        for a, node in self.children:
            if a == action:
                return node
        raise KeyError(action)


Node = Union[Leaf, Decision]


@dataclass(frozen=True)
class InformationSet:
    id: str
    owner: str
    members: tuple[History, ...]
    actions: tuple[str, str]


@dataclass(frozen=True)
class Violation:
    kind: str
    history: History
    message: str

    def __str__(self):
        return f"{self.kind} at {format_history(self.history)}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind, history, message):
        self.violations.append(Violation(kind, tuple(history), message))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def format_history(h: History) -> str:
    return "(" + ",".join(h) + ")" if h else "()"


@dataclass(frozen=True)
class ExtensiveGame:
    players: tuple[str, ...]
    root: Node

    def nodes(self) -> Iterator[tuple[History, Node]]:
        """Depth-first walk in child order, yielding ``(history, node)``."""
        stack = [((), self.root)]
        while stack:
            h, node = stack.pop()
            yield h, node
            if isinstance(node, Decision):
                for a, child in reversed(node.children):
                    stack.append((h + (a,), child))

    def histories(self) -> list[History]:
        return [h for h, _ in self.nodes()]

    def terminal_histories(self) -> list[History]:
        return [h for h, n in self.nodes() if isinstance(n, Leaf)]

    def node_at(self, h: History) -> Node:
        node = self.root
        for a in h:
            if not isinstance(node, Decision):
                raise KeyError(h)
            node = node.child(a)
        return node

    def player_index(self, player: str) -> int:
        return self.players.index(player)

    @cached_property
    def information_sets(self) -> dict[str, InformationSet]:
        members: dict[str, list[History]] = {}
        first: dict[str, Decision] = {}
        for h, node in self.nodes():
            if isinstance(node, Decision) and node.infoset is not None:
                members.setdefault(node.infoset, []).append(h)
                first.setdefault(node.infoset, node)
        return {
            k: InformationSet(k, first[k].player, tuple(members[k]), first[k].actions)
            for k in sorted(members)
        }

    def infosets_of(self, player: str) -> list[str]:
        return [k for k, s in self.information_sets.items() if s.owner == player]

    def payoff(self, z: History) -> tuple[float, ...]:
        node = self.node_at(z)
        if not isinstance(node, Leaf):
            raise GameError(f"{format_history(z)} is not terminal")
        return node.payoffs


def validate_game(g: ExtensiveGame) -> ValidationReport:
    report = ValidationReport()
    if not g.players:
        report.add("empty player set", (), "the game has no players")
    if len(set(g.players)) != len(g.players):
        report.add("duplicate player", (), f"players {list(g.players)} repeat an id")
    seen: dict[str, tuple[str, frozenset, History]] = {}
    for h, node in g.nodes():
        if isinstance(node, Leaf):
            if len(node.payoffs) != len(g.players):
                report.add(
                    "payoff length",
                    h,
                    f"{len(node.payoffs)} payoffs for {len(g.players)} players",
                )
            elif not all(np.isfinite(node.payoffs)):
                report.add("payoff value", h, "payoffs must be finite")
            continue
        if node.player not in g.players:
            report.add("unknown player", h, f"player {node.player!r} is not declared")
        labels = node.actions
        if len(labels) != 2:
            report.add("two-action violation", h, f"{len(labels)} actions {list(labels)}")
        if len(set(labels)) != len(labels):
            report.add("duplicate action", h, f"actions {list(labels)} repeat a label")
        if not node.infoset:
            report.add("partition incomplete", h, "node belongs to no information set")
            continue
        key = frozenset(labels)
        if node.infoset not in seen:
            seen[node.infoset] = (node.player, key, h)
            continue
        owner, actions, h0 = seen[node.infoset]
        if owner != node.player:
            report.add(
                "owner mismatch",
                h,
                f"information set {node.infoset!r} is owned by {owner!r} at "
                f"{format_history(h0)} but by {node.player!r} here",
            )
        if actions != key:
            report.add(
                "action-set mismatch",
                h,
                f"information set {node.infoset!r} has actions {sorted(actions)} at "
                f"{format_history(h0)} but {sorted(key)} here",
            )
    return report


def require_valid(g: ExtensiveGame) -> None:
    report = validate_game(g)
    if not report.ok:
        raise GameError(f"invalid game:\n{report}", report)


def from_histories(
    players: Sequence,
    histories: Sequence[Sequence[str]],
    player_fn: Mapping,
    info_sets: Mapping[str, Sequence[Sequence[str]]],
    payoffs: Mapping,
) -> ExtensiveGame:
    """Build a game from the history-set description ``(N, H, P, {I_i}, {u_i})``.

    Children are ordered by first appearance in ``histories``. Raises
    ``GameError`` if ``H`` is not prefix closed or components disagree.
    """
    H = [tuple(h) for h in histories]
    Hset = set(H)
    report = ValidationReport()
    if () not in Hset:
        report.add("prefix closure", (), "the empty history is missing")
    for h in H:
        for k in range(len(h)):
            if h[:k] not in Hset:
                report.add("prefix closure", h, f"prefix {format_history(h[:k])} missing")
    children: dict[History, list[str]] = {h: [] for h in H}
    for h in H:
        if h and h[:-1] in children and h[-1] not in children[h[:-1]]:
            children[h[:-1]].append(h[-1])
    pf = {tuple(k): str(v) for k, v in player_fn.items()}
    pay = {tuple(k): tuple(float(x) for x in v) for k, v in payoffs.items()}
    where = {}
    for sid, members in info_sets.items():
        for h in members:
            where[tuple(h)] = sid
    for h in H:
        terminal = not children[h]
        if terminal and h not in pay:
            report.add("missing payoff", h, "terminal history without payoffs")
        if not terminal and h not in pf:
            report.add("missing player", h, "nonterminal history without P(h)")
    for h in list(pf) + list(where):
        if h not in Hset or not children.get(h):
            report.add("not a decision history", h, "P or information set given for it")
    if not report.ok:
        raise GameError(f"invalid history description:\n{report}", report)

    def build(h: History) -> Node:
        if not children[h]:
            return Leaf(pay[h])
        kids = tuple((a, build(h + (a,))) for a in children[h])
        return Decision(pf[h], where.get(h), kids)

    return ExtensiveGame(tuple(str(p) for p in players), build(()))


@dataclass(frozen=True)
class PureStrategy:
    """Plan of a player: action index (0 or 1) per owned information set."""

    owner: str
    choices: tuple[tuple[str, int], ...]

    def action(self, infoset: str) -> int:
        for k, a in self.choices:
            if k == infoset:
                return a
        raise KeyError(infoset)

    def label(self, g: ExtensiveGame) -> str:
        if not self.choices:
            return "-"
        sets = g.information_sets
        return "/".join(sets[k].actions[a] for k, a in self.choices)


def enumerate_pure_strategies(g: ExtensiveGame, player: str) -> list[PureStrategy]:
    """All ``2**k`` plans in canonical order: info-set ids sorted, first one most significant."""
    ids = g.infosets_of(player)
    return [
        PureStrategy(player, tuple(zip(ids, bits)))
        for bits in itertools.product((0, 1), repeat=len(ids))
    ]


def outcome(g: ExtensiveGame, profile: Sequence[PureStrategy]) -> History:
    """Terminal history reached when every player follows their plan."""
    if len(profile) != len(g.players):
        raise GameError(f"profile has {len(profile)} strategies for {len(g.players)} players")
    plans = {s.owner: s for s in profile}
    sets = g.information_sets
    h: History = ()
    node = g.root
    while isinstance(node, Decision):
        k = plans[node.player].action(node.infoset)
        a = sets[node.infoset].actions[k]
        h += (a,)
        node = node.child(a)
    return h


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Finite strategic game stored as a payoff tensor.

    ``payoffs[s_1, ..., s_n]`` is the vector of all players' payoffs, so the
    array has shape ``(|S_1|, ..., |S_n|, n)``.
    """

    players: tuple[str, ...]
    strategies: tuple[tuple, ...]
    labels: tuple[tuple[str, ...], ...]
    payoffs: np.ndarray

    def __post_init__(self):
        pay = np.array(self.payoffs, dtype=float)
        expected = tuple(len(s) for s in self.strategies) + (len(self.players),)
        if pay.shape != expected:
            raise GameError(f"payoff tensor shape {pay.shape}, expected {expected}")
        pay.flags.writeable = False
        object.__setattr__(self, "payoffs", pay)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.payoffs.shape[:-1]

    def profiles(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(n) for n in self.shape))

    def profile_label(self, idx: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.labels[i][k] for i, k in enumerate(idx))

    def index_of(self, labels: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.labels[i].index(lab) for i, lab in enumerate(labels))


def normal_representation(g: ExtensiveGame) -> NormalForm:
    require_valid(g)
    strats = tuple(tuple(enumerate_pure_strategies(g, p)) for p in g.players)
    shape = tuple(len(s) for s in strats)
    pay = np.empty(shape + (len(g.players),))
    for idx in itertools.product(*(range(n) for n in shape)):
        profile = [strats[i][k] for i, k in enumerate(idx)]
        pay[idx] = g.payoff(outcome(g, profile))
    labels = tuple(tuple(s.label(g) for s in ss) for ss in strats)
    return NormalForm(g.players, strats, labels, pay)


def _check_weights(w: np.ndarray, n: int, who) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (n,):
        raise GameError(f"player {who}: {w.size} weights for {n} strategies")
    if np.any(w < -WEIGHT_TOL) or abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise GameError(f"player {who}: weights must be nonnegative and sum to 1")
    return w


def mixed_expected_utility(nf: NormalForm, weights: Sequence[Sequence[float]]) -> np.ndarray:
    """Expected payoff vector when player ``i`` mixes with ``weights[i]``."""
    if len(weights) != len(nf.players):
        raise GameError("one weight vector per player is required")
    t = nf.payoffs
    for i, w in enumerate(weights):
        w = _check_weights(w, nf.shape[i], nf.players[i])
        t = np.tensordot(w, t, axes=([0], [0]))
    return t


def behavioral_weights(g: ExtensiveGame, player: str, prob0: Mapping[str, float]) -> np.ndarray:
    """Mixed strategy induced by playing action 0 at info set ``k`` with probability ``prob0[k]``."""
    ids = g.infosets_of(player)
    out = []
    for s in enumerate_pure_strategies(g, player):
        w = 1.0
        for k in ids:
            p = prob0[k]
            w *= p if s.action(k) == 0 else 1.0 - p
        out.append(w)
    return np.array(out)


def selten_horse() -> ExtensiveGame:
    """Three-player Selten's Horse with modified payoffs; player 3 cannot tell (a0) from (a1,b0)."""
    H = [
        (),
        ("a0",),
        ("a1",),
        ("a0", "c0"),
        ("a0", "c1"),
        ("a1", "b0"),
        ("a1", "b1"),
        ("a1", "b0", "c0"),
        ("a1", "b0", "c1"),
    ]
    P = {(): 1, ("a1",): 2, ("a0",): 3, ("a1", "b0"): 3}
    I = {"I1": [()], "I2": [("a1",)], "I3": [("a0",), ("a1", "b0")]}
    u = {
        ("a0", "c0"): (3, 3, 1),
        ("a0", "c1"): (0, 0, 0),
        ("a1", "b1"): (2, 2, 2),
        ("a1", "b0", "c0"): (5, 5, 0),
        ("a1", "b0", "c1"): (0, 0, 1),
    }
    return from_histories((1, 2, 3), H, P, I, u)


def two_stage(outcomes: Sequence[Sequence[float]]) -> ExtensiveGame:
    """Two-player game: player 1 picks a0/a1, player 2 then picks b (after a0) or c (after a1).

    ``outcomes`` lists the payoff vectors for ``O00, O01, O10, O11``, where
    ``O_jk`` is reached by ``a_j`` followed by player 2's action ``k``.
    """
    outs = [tuple(float(x) for x in o) for o in outcomes]
    if len(outs) != 4 or any(len(o) != 2 for o in outs):
        raise GameError("two_stage needs four payoff vectors of length 2")
    H = [(), ("a0",), ("a1",), ("a0", "b0"), ("a0", "b1"), ("a1", "c0"), ("a1", "c1")]
    P = {(): 1, ("a0",): 2, ("a1",): 2}
    I = {"I1": [()], "I2b": [("a0",)], "I2c": [("a1",)]}
    u = {
        ("a0", "b0"): outs[0],
        ("a0", "b1"): outs[1],
        ("a1", "c0"): outs[2],
        ("a1", "c1"): outs[3],
    }
    return from_histories((1, 2), H, P, I, u)


def random_game(
    rng: np.random.Generator,
    n_players: int,
    n_infosets: int,
    payoff_low: int = 0,
    payoff_high: int = 9,
    extra_member_prob: float = 0.5,
) -> ExtensiveGame:
    """Random valid two-action game where every player owns at least one information set.

    Some information sets receive a second member history (imperfect
    information); members never lie on a common path.
    """
    if n_infosets < n_players:
        raise GameError("each player needs at least one information set")
    owners = list(range(n_players)) + list(rng.integers(0, n_players, n_infosets - n_players))
    rng.shuffle(owners)
    names = "abcdefghijklmnopqrstuvwxyz"

    # decision slots: path (tuple of child indices) -> infoset number
    decisions: dict[tuple[int, ...], int] = {(): 0}
    open_slots = [(0,), (1,)]
    order = list(range(1, n_infosets))
    for j in order:
        slot = open_slots.pop(int(rng.integers(len(open_slots))))
        decisions[slot] = j
        open_slots += [slot + (0,), slot + (1,)]
    for j in range(n_infosets):
        if rng.random() >= extra_member_prob:
            continue
        paths = [p for p, k in decisions.items() if k == j]
        ok = [s for s in open_slots if not any(s[: len(p)] == p for p in paths)]
        if not ok:
            continue
        slot = ok[int(rng.integers(len(ok)))]
        open_slots.remove(slot)
        decisions[slot] = j
        open_slots += [slot + (0,), slot + (1,)]

    players = tuple(str(i + 1) for i in range(n_players))

    def build(path):
        if path not in decisions:
            pay = rng.integers(payoff_low, payoff_high + 1, n_players)
            return Leaf(tuple(float(x) for x in pay))
        j = decisions[path]
        kids = tuple((f"{names[j]}{k}", build(path + (k,))) for k in (0, 1))
        return Decision(players[owners[j]], f"I{j + 1}", kids)

    return ExtensiveGame(players, build(()))
