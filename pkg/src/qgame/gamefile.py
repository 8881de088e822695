"""Reading and writing game documents.

A game document is JSON::

    {"players": [1, 2],
     "families": {"2": "two"},            # optional EWL defaults
     "root": {"player": 1, "infoset": "I1",
              "children": {"a0": {"payoffs": [1, 0]},
                           "a1": {"outcome": "O1"}}}}

Leaves carry numeric ``payoffs`` or a symbolic ``outcome`` name that is bound
to a payoff vector at load time.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .extensive import Decision, ExtensiveGame, GameError, Leaf, Node


class ParseError(ValueError):
    def __init__(self, message: str, position: str = ""):
        super().__init__(f"{position}: {message}" if position else message)
        self.position = position


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ParseError(f"duplicate key {k!r}")
        out[k] = v
    return out


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", "$")
    for key in ("players", "root"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}", "$")
    if not isinstance(doc["players"], list):
        raise ParseError("players must be a list", "$.players")
    return doc


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {x!r}", where)
    return float(x)


def _node(obj, where: str, outcomes: Mapping[str, Sequence[float]], missing: set) -> Node:
    if not isinstance(obj, dict):
        raise ParseError("node must be an object", where)
    if "payoffs" in obj or "outcome" in obj:
        if "children" in obj:
            raise ParseError("a node cannot have both payoffs and children", where)
        if "payoffs" in obj:
            pays = obj["payoffs"]
            if not isinstance(pays, list):
                raise ParseError("payoffs must be a list", where + ".payoffs")
            return Leaf(tuple(_number(x, f"{where}.payoffs[{k}]") for k, x in enumerate(pays)))
        name = str(obj["outcome"])
        if name not in outcomes:
            missing.add(name)
            return Leaf(())
        return Leaf(tuple(float(x) for x in outcomes[name]))
    if "children" not in obj:
        raise ParseError("node needs either children or payoffs", where)
    if "player" not in obj:
        raise ParseError("internal node needs a player", where)
    kids = obj["children"]
    if not isinstance(kids, dict):
        raise ParseError("children must be an object keyed by action label", where + ".children")
    infoset = obj.get("infoset")
    children = tuple(
        (str(a), _node(child, f"{where}.children.{a}", outcomes, missing)) for a, child in kids.items()
    )
    return Decision(str(obj["player"]), None if infoset in (None, "") else str(infoset), children)


def game_from_document(doc: Mapping, outcomes: Mapping[str, Sequence[float]] | None = None) -> ExtensiveGame:
    missing: set[str] = set()
    root = _node(doc["root"], "$.root", outcomes or {}, missing)
    if missing:
        raise GameError(f"unbound symbolic outcomes: {', '.join(sorted(missing))}")
    return ExtensiveGame(tuple(str(p) for p in doc["players"]), root)


def document_families(doc: Mapping) -> dict[str, str]:
    fams = doc.get("families") or {}
    if not isinstance(fams, dict):
        raise ParseError("families must be an object", "$.families")
    return {str(k): str(v) for k, v in fams.items()}


def load_game(path, outcomes=None) -> tuple[ExtensiveGame, dict]:
    """Parse a game file; returns the game and the raw document."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text: {exc}") from None
    doc = parse_document(text)
    return game_from_document(doc, outcomes), doc


def _num(v: float):
    return int(v) if float(v).is_integer() else v


def _node_document(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"payoffs": [_num(v) for v in node.payoffs]}
    return {
        "player": node.player,
        "infoset": node.infoset,
        "children": {a: _node_document(c) for a, c in node.children},
    }


def game_to_document(g: ExtensiveGame, families: Mapping[str, str] | None = None) -> dict:
    doc: dict = {"players": list(g.players)}
    if families:
        doc["families"] = dict(families)
    doc["root"] = _node_document(g.root)
    return doc


def dump_game(g: ExtensiveGame, families: Mapping[str, str] | None = None) -> str:
    return json.dumps(game_to_document(g, families), indent=2) + "\n"


def fixture_text(name: str) -> str:
    return resources.files("qgame").joinpath("data", name).read_text(encoding="utf-8")
