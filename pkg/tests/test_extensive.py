import itertools

import numpy as np
import pytest

from qgame.extensive import (
    Decision,
    ExtensiveGame,
    GameError,
    Leaf,
    PureStrategy,
    behavioral_weights,
    enumerate_pure_strategies,
    from_histories,
    mixed_expected_utility,
    normal_representation,
    outcome,
    random_game,
    selten_horse,
    two_stage,
    validate_game,
)

OUTCOMES = [(1, 0), (0, 1), (2, 2), (3, 3)]


def kinds(report):
    return {v.kind for v in report.violations}


def test_selten_horse_valid(horse):
    assert validate_game(horse).ok
    assert horse.payoff(("a1", "b1"))[2] == 2
    assert sorted(horse.information_sets) == ["I1", "I2", "I3"]
    assert horse.information_sets["I3"].members == (("a0",), ("a1", "b0"))


def test_selten_horse_histories(horse):
    expected = {
        (), ("a0",), ("a1",), ("a0", "c0"), ("a0", "c1"), ("a1", "b0"), ("a1", "b1"),
        ("a1", "b0", "c0"), ("a1", "b0", "c1"),
    }
    assert set(horse.histories()) == expected
    assert len(horse.terminal_histories()) == 5


def test_action_set_mismatch():
    g = ExtensiveGame(
        ("1", "2"),
        Decision("1", "I1", (
            ("l", Decision("2", "J", (("a", Leaf((0, 0))), ("b", Leaf((1, 1)))))),
            ("r", Decision("2", "J", (("c", Leaf((0, 0))), ("d", Leaf((1, 1)))))),
        )),
    )
    report = validate_game(g)
    assert "action-set mismatch" in kinds(report)
    assert report.violations[0].history == ("r",)


def test_partition_incomplete():
    g = ExtensiveGame(
        ("1", "2"),
        Decision("1", "I1", (
            ("l", Decision("2", None, (("a", Leaf((0, 0))), ("b", Leaf((1, 1)))))),
            ("r", Leaf((2, 2))),
        )),
    )
    assert kinds(validate_game(g)) == {"partition incomplete"}


def test_other_violations():
    g = ExtensiveGame(
        ("1", "2"),
        Decision("1", "I1", (
            ("x", Leaf((0,))),
            ("y", Decision("3", "I1", (("x", Leaf((0, 0))), ("y", Leaf((0, 0)))))),
            ("z", Leaf((0, 0))),
        )),
    )
    assert {"payoff length", "two-action violation", "unknown player", "owner mismatch"} <= kinds(validate_game(g))


def test_prefix_closure_rejected():
    with pytest.raises(GameError) as err:
        from_histories(
            (1,), [(), ("a0", "b0"), ("a0", "b1"), ("a1",)],
            {(): 1, ("a0",): 1}, {"I": [()], "J": [("a0",)]},
            {("a0", "b0"): (0,), ("a0", "b1"): (1,), ("a1",): (2,)},
        )
    assert "prefix closure" in {v.kind for v in err.value.report.violations}


def test_outcome_examples(horse):
    s = {p: enumerate_pure_strategies(horse, p) for p in horse.players}
    z = outcome(horse, [s["1"][1], s["2"][0], s["3"][0]])
    assert z == ("a1", "b0", "c0")
    assert horse.payoff(z) == (5, 5, 0)
    assert outcome(horse, [s["1"][0], s["2"][1], s["3"][0]]) == ("a0", "c0")
    g2 = two_stage(OUTCOMES)
    p2 = enumerate_pure_strategies(g2, "2")
    b1c0 = [s for s in p2 if s.action("I2b") == 1 and s.action("I2c") == 0][0]
    z = outcome(g2, [enumerate_pure_strategies(g2, "1")[0], b1c0])
    assert z == ("a0", "b1")
    assert g2.payoff(z) == OUTCOMES[1]


def test_enumerate_pure_strategies(horse):
    assert [s.label(horse) for s in enumerate_pure_strategies(horse, "3")] == ["c0", "c1"]
    g2 = two_stage(OUTCOMES)
    labels = [s.label(g2) for s in enumerate_pure_strategies(g2, "2")]
    assert labels == ["b0/c0", "b0/c1", "b1/c0", "b1/c1"]


def test_player_without_infosets():
    g = ExtensiveGame(("1", "2"), Decision("1", "I", (("a", Leaf((1, 0))), ("b", Leaf((0, 1))))))
    strats = enumerate_pure_strategies(g, "2")
    assert strats == [PureStrategy("2", ())]
    assert strats[0].label(g) == "-"
    assert normal_representation(g).shape == (2, 1)


def test_normal_representation_horse(horse_nf):
    assert horse_nf.shape == (2, 2, 2)
    idx = horse_nf.index_of(("a0", "b1", "c0"))
    assert tuple(horse_nf.payoffs[idx]) == (3, 3, 1)


def test_normal_representation_two_stage():
    nf = normal_representation(two_stage(OUTCOMES))
    assert nf.shape == (2, 4)
    # rows a0/a1, columns (b, c) plans
    for a in (0, 1):
        for col, (b, c) in enumerate(itertools.product((0, 1), repeat=2)):
            expected = OUTCOMES[2 * a + (b if a == 0 else c)]
            assert tuple(nf.payoffs[a, col]) == expected


def test_single_leaf_game():
    g = ExtensiveGame(("1",), Leaf((7.0,)))
    nf = normal_representation(g)
    assert nf.payoffs.shape == (1, 1)
    assert nf.payoffs[0, 0] == 7


def test_two_stage_shape():
    g = two_stage(OUTCOMES)
    assert validate_game(g).ok
    assert len(g.terminal_histories()) == 4
    with pytest.raises(GameError):
        two_stage(OUTCOMES[:3])


def _oracle_payoff(g, plans, node=None):
    node = g.root if node is None else node
    if isinstance(node, Leaf):
        return node.payoffs
    action = g.information_sets[node.infoset].actions[plans[node.player].action(node.infoset)]
    return _oracle_payoff(g, plans, node.child(action))


@pytest.mark.parametrize("seed", range(25))
def test_normal_representation_matches_recursive_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    g = random_game(rng, n, int(rng.integers(n, 5)))
    assert validate_game(g).ok
    nf = normal_representation(g)
    for p in g.players:
        assert len(enumerate_pure_strategies(g, p)) == 2 ** len(g.infosets_of(p))
    terminals = set(g.terminal_histories())
    for idx in nf.profiles():
        plans = {nf.players[i]: nf.strategies[i][k] for i, k in enumerate(idx)}
        assert outcome(g, list(plans.values())) in terminals
        assert tuple(nf.payoffs[idx]) == _oracle_payoff(g, plans)


def test_mixed_point_masses(horse_nf):
    e = mixed_expected_utility(horse_nf, [[1, 0], [1, 0], [1, 0]])
    assert np.allclose(e, (3, 3, 1))


@pytest.mark.parametrize("r", [0.0, 0.25, 0.6, 1.0])
def test_mixed_against_classical_formula(horse_nf, r):
    # p = 0, q = 1: E_12 = 5r, E_3 = 1 - r
    e = mixed_expected_utility(horse_nf, [[0, 1], [1, 0], [r, 1 - r]])
    assert np.allclose(e, (5 * r, 5 * r, 1 - r), atol=1e-12)


def test_mixed_constant_game():
    g = ExtensiveGame(("1", "2"), Decision("1", "I", (("a", Leaf((4, 4))), ("b", Leaf((4, 4))))))
    nf = normal_representation(g)
    assert np.allclose(mixed_expected_utility(nf, [[0.5, 0.5], [1.0]]), (4, 4))


def test_mixed_weight_errors(horse_nf):
    with pytest.raises(GameError):
        mixed_expected_utility(horse_nf, [[0.5, 0.6], [1, 0], [1, 0]])
    with pytest.raises(GameError):
        mixed_expected_utility(horse_nf, [[1.5, -0.5], [1, 0], [1, 0]])


def test_behavioral_weights(horse):
    g2 = two_stage(OUTCOMES)
    w = behavioral_weights(g2, "2", {"I2b": 0.3, "I2c": 0.8})
    assert np.allclose(w, [0.3 * 0.8, 0.3 * 0.2, 0.7 * 0.8, 0.7 * 0.2])
    assert np.allclose(behavioral_weights(horse, "1", {"I1": 0.4}), [0.4, 0.6])


@pytest.mark.parametrize("seed", range(5))
def test_mixed_utility_is_multilinear(seed):
    rng = np.random.default_rng(100 + seed)
    g = random_game(rng, 3, 4)
    nf = normal_representation(g)
    weights = [rng.dirichlet(np.ones(n)) for n in nf.shape]
    for i, n in enumerate(nf.shape):
        a, b = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
        for lam in rng.uniform(0, 1, 3):
            w_mix = list(weights)
            w_mix[i] = lam * a + (1 - lam) * b
            wa, wb = list(weights), list(weights)
            wa[i], wb[i] = a, b
            lhs = mixed_expected_utility(nf, w_mix)
            rhs = lam * mixed_expected_utility(nf, wa) + (1 - lam) * mixed_expected_utility(nf, wb)
            assert np.allclose(lhs, rhs, atol=1e-12)


def test_random_game_has_imperfect_information_sometimes():
    rng = np.random.default_rng(3)
    sizes = set()
    for _ in range(30):
        g = random_game(rng, 2, 4)
        sizes |= {len(s.members) for s in g.information_sets.values()}
    assert {1, 2} <= sizes
