"""Command-line front end.

Exit codes: 0 success, 1 domain or validation failure, 2 parse failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .angles import format_angle, parse_angle
from .equilibrium import (
    DEFAULT_ALPHA,
    DEFAULT_EPS,
    DEFAULT_THETA,
    GridSpec,
    best_response_set,
    gamma_sweep,
    grid_nash,
    perturbation_refinement,
    pure_nash,
)
from .extensive import (
    Decision,
    GameError,
    format_history,
    normal_representation,
    validate_game,
)
from .gamefile import (
    ParseError,
    document_families,
    fixture_text,
    game_from_document,
    load_game,
    parse_document,
)
from .protocol import (
    EWL,
    MW,
    Family,
    StrategyError,
    induced_strategic_game,
    pauli_strategies,
    payoff,
    quantize,
    spec_to_dict,
    two_stage_expected_outcome,
    verify_isomorphism,
)
from .quantum import DomainError, pauli, u_theta_alpha

DEMO_OUTCOMES = {"O00": (1.0, 0.0), "O01": (0.0, 1.0), "O10": (2.0, 2.0), "O11": (3.0, 3.0)}


class UsageError(ValueError):
    """Bad option values; reported with exit status 1."""


def fmt(v: float) -> str:
    v = float(v) + 0.0
    if abs(v) < 1e-13:
        v = 0.0
    return f"{v:.12g}"


def emit(header, rows, output, meta=None, out=None):
    out = out or sys.stdout
    if output == "json":
        doc = dict(meta or {})
        doc["rows"] = [dict(zip(header, r)) for r in rows]
        out.write(json.dumps(doc, indent=2) + "\n")
    elif output == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        for k, v in (meta or {}).items():
            out.write(f"# {k}: {v}\n")
        cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
        widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
        for r in cells:
            out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _outcomes(args) -> dict:
    bound = {}
    for item in args.outcome or []:
        name, sep, values = item.partition("=")
        if not sep:
            raise UsageError(f"--outcome expects NAME=v1,v2,..., got {item!r}")
        try:
            bound[name.strip()] = tuple(float(x) for x in values.split(","))
        except ValueError:
            raise UsageError(f"--outcome {item!r}: payoffs must be numbers") from None
    return bound


def _load(args):
    game, doc = load_game(args.file, _outcomes(args))
    report = validate_game(game)
    if not report.ok:
        raise GameError(f"invalid game:\n{report}", report)
    return game, doc


def _families(args, doc) -> dict[str, Family]:
    fams = dict(document_families(doc))
    for item in args.family or []:
        player, sep, fam = item.partition("=")
        if not sep:
            raise UsageError(f"--family expects PLAYER=one|two|pauli|full, got {item!r}")
        fams[player.strip()] = fam.strip()
    try:
        return {p: Family(f) for p, f in fams.items()}
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _gamma(args) -> float:
    gamma = parse_angle(args.gamma)
    if not 0.0 <= gamma <= math.pi + 1e-12:
        raise UsageError(f"gamma={args.gamma} outside [0, pi]")
    return min(gamma, math.pi)


def _eps(args) -> float:
    if args.eps is not None:
        eps = args.eps
    else:
        try:
            eps = float(os.environ.get("QGAME_EPS", DEFAULT_EPS))
        except ValueError:
            raise UsageError("QGAME_EPS must be a number") from None
    if not eps > 0:
        raise UsageError("eps must be positive")
    return eps


def _scheme(args, doc):
    if args.scheme == "mw":
        return MW(_gamma(args))
    if args.scheme == "ewl":
        return EWL(_families(args, doc))
    return None


def _angle_list(text: str) -> tuple[float, ...]:
    if text.count(":") == 2:
        a, b, n = text.split(":")
        count = int(n)
        if count < 1:
            raise UsageError("grid point count must be positive")
        return tuple(float(x) for x in np.linspace(parse_angle(a), parse_angle(b), count))
    return tuple(parse_angle(x) for x in text.split(",") if x.strip())


def parse_grid(text: str | None) -> GridSpec:
    """``theta=0:pi:9;alpha=0,pi/4,pi/2`` (``start:end:count`` or a comma list)."""
    theta, alpha = DEFAULT_THETA, DEFAULT_ALPHA
    for part in (text or "").split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        try:
            values = _angle_list(value)
        except ValueError as exc:
            raise UsageError(f"bad grid {text!r}: {exc}") from None
        if key.strip() == "theta" and sep:
            theta = values
        elif key.strip() == "alpha" and sep:
            alpha = values
        else:
            raise UsageError(f"bad grid component {part!r}")
    if not theta or not alpha:
        raise UsageError("grid lists must be nonempty")
    return GridSpec(theta, alpha)


def parse_profile(spec, text: str):
    entries = [e.strip() for e in text.split(";")]
    m = spec.num_qubits
    if len(entries) != m:
        raise StrategyError(f"profile has {len(entries)} entries for {m} qubits")
    ops = []
    for j, (entry, fam) in enumerate(zip(entries, spec.families), start=1):
        try:
            if fam is Family.PAULI:
                if entry not in ("s0", "s1"):
                    raise StrategyError(f"expected s0 or s1, got {entry!r}")
                ops.append(pauli(int(entry[1])))
                continue
            parts = entry.split(",")
            if len(parts) > 2:
                raise StrategyError(f"expected theta[,alpha], got {entry!r}")
            theta = parse_angle(parts[0])
            alpha = parse_angle(parts[1]) if len(parts) == 2 else 0.0
            if alpha != 0.0 and fam is Family.ONE:
                raise StrategyError(f"family {fam.value} does not allow alpha")
            ops.append(u_theta_alpha(theta, alpha))
        except (StrategyError, DomainError, ValueError) as exc:
            raise StrategyError(f"qubit {j}: {exc}") from None
    return ops


def _profile_text(labels) -> str:
    return "(" + ",".join(f"({x})" if "," in x else x for x in labels) + ")"


def cmd_validate(args) -> int:
    game, _ = load_game(args.file, _outcomes(args))
    report = validate_game(game)
    if report.ok:
        print("valid")
        return 0
    for v in report.violations:
        print(v)
    return 1


def cmd_normal(args) -> int:
    game, _ = _load(args)
    output = args.output or "table"
    if args.list_histories:
        rows = []
        for h, node in game.nodes():
            if isinstance(node, Decision):
                rows.append([format_history(h), node.player, node.infoset, ""])
            else:
                rows.append([format_history(h), "terminal", "", ";".join(fmt(v) for v in node.payoffs)])
        emit(["history", "player", "infoset", "payoffs"], rows, output)
        return 0
    nf = normal_representation(game)
    header = [f"s{p}" for p in nf.players] + [f"u{p}" for p in nf.players]
    rows = [list(nf.profile_label(idx)) + [fmt(v) for v in nf.payoffs[idx]] for idx in nf.profiles()]
    emit(header, rows, output)
    return 0


def cmd_quantize(args) -> int:
    game, doc = _load(args)
    scheme = _scheme(args, doc) or MW(0.0)
    spec, _ = quantize(game, scheme)
    d = spec_to_dict(spec)
    if args.dump_spec:
        text = json.dumps(d, indent=2) + "\n"
        if args.dump_spec == "-":
            sys.stdout.write(text)
        else:
            Path(args.dump_spec).write_text(text, encoding="utf-8")
        return 0
    output = args.output or "table"
    header = ["label"] + [f"v{p}" for p in spec.players]
    rows = [[lab] + [fmt(v) for v in vals] for lab, vals in d["coefficients"].items()]
    meta = {
        "scheme": spec.scheme,
        "qubits": " ".join(f"{q['qubit']}:{q['infoset']}->{q['player']}[{q['family']}]" for q in d["qubits"]),
    }
    if spec.gamma is not None:
        meta["gamma"] = fmt(spec.gamma)
    emit(header, rows, output, meta)
    return 0


def cmd_payoff(args) -> int:
    game, doc = _load(args)
    scheme = _scheme(args, doc)
    if scheme is None:
        raise UsageError("payoff needs --scheme mw or --scheme ewl")
    spec, _ = quantize(game, scheme)
    values = payoff(spec, parse_profile(spec, args.profile))
    emit(["player", "payoff"], [[p, fmt(v)] for p, v in zip(spec.players, values)], args.output or "table")
    return 0


def _eq_rows(report, players):
    scope = "grid-relative" if report.grid_relative else "exact"
    return [list(e.labels) + [fmt(v) for v in e.payoffs] + [scope] for e in report.equilibria]


def cmd_equilibria(args) -> int:
    game, doc = _load(args)
    eps = _eps(args)
    scheme = _scheme(args, doc)
    meta = {"mode": args.scheme or "classical", "eps": fmt(eps)}
    if scheme is None:
        report = pure_nash(normal_representation(game), eps)
    elif isinstance(scheme, MW):
        spec, _ = quantize(game, scheme)
        report = pure_nash(induced_strategic_game(spec, pauli_strategies(spec)), eps)
        meta["gamma"] = fmt(scheme.gamma)
    else:
        spec, _ = quantize(game, scheme)
        report, _ = grid_nash(spec, parse_grid(args.grid), eps)
    meta["profiles_examined"] = report.profiles_examined
    header = [f"s{p}" for p in game.players] + [f"u{p}" for p in game.players] + ["scope"]
    emit(header, _eq_rows(report, game.players), args.output or "table", meta)
    return 0


def parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be start:end:count, got {text!r}")
    try:
        start, end, count = parse_angle(parts[0]), parse_angle(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None
    if count < 2 or not start < end or start < 0.0 or end > math.pi + 1e-12:
        raise UsageError(f"range {text!r} needs count >= 2 and 0 <= start < end <= pi")
    return np.linspace(start, min(end, math.pi), count)


def cmd_sweep(args) -> int:
    game, _ = _load(args)
    rows = []
    for row in gamma_sweep(game, parse_range(args.range), _eps(args)):
        cells = [fmt(row.gamma), ";".join(_profile_text(e.labels) for e in row.equilibria)]
        for i in range(len(game.players)):
            cells.append(";".join(fmt(e.payoffs[i]) for e in row.equilibria))
        rows.append(cells)
    emit(["gamma", "equilibria"] + [f"u{p}" for p in game.players], rows, args.output or "csv")
    return 0


def _demo_horse(args, out) -> int:
    text = fixture_text("horse.game")
    target = Path(args.dir) / "horse.game"
    target.write_text(text, encoding="utf-8")
    doc = parse_document(text)
    game = game_from_document(doc)
    eps = _eps(args)
    print(f"wrote {target}", file=out)

    classical = pure_nash(normal_representation(game), eps)
    print(f"classical pure equilibria: {len(classical.equilibria)}", file=out)
    for e in classical.equilibria:
        print(f"  {_profile_text(e.labels)} payoff ({', '.join(fmt(v) for v in e.payoffs)})", file=out)

    print("MW scheme, pure equilibria by gamma:", file=out)
    for gamma in (0.01, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi - 0.01):
        (row,) = gamma_sweep(game, [gamma], eps)
        eqs = ", ".join(_profile_text(e.labels) for e in row.equilibria)
        print(f"  gamma={format_angle(gamma)}: {eqs}", file=out)
    refined = sorted(perturbation_refinement(game, 0.01, eps))
    print(f"  surviving a small perturbation of gamma=0: {', '.join(_profile_text(p) for p in refined)}", file=out)

    spec, _ = quantize(game, EWL(_families(args, doc)))
    report, nf = grid_nash(spec, GridSpec(), eps)
    tau = ("0", "0", "0,pi/2")
    found = tau in report.label_set()
    e_tau = payoff(spec, [u_theta_alpha(0, 0), u_theta_alpha(0, 0), u_theta_alpha(0, math.pi / 2)])
    print(f"EWL scheme, grid-relative pure equilibria on {report.profiles_examined} profiles: "
          f"{len(report.equilibria)}", file=out)
    for e in report.equilibria:
        print(f"  {_profile_text(e.labels)} payoff ({', '.join(fmt(v) for v in e.payoffs)})", file=out)
    print(f"tau* = (0,0,(0,pi/2)) listed: {'yes' if found else 'no'}", file=out)
    print(f"tau* payoff ({', '.join(fmt(v) for v in e_tau)})", file=out)
    k3 = nf.labels[2].index("0,pi/2")
    br = best_response_set(nf, (0, 1), {2: k3}, eps)
    br_text = ", ".join(f"({nf.labels[0][a]},{nf.labels[1][b]})" for a, b in sorted(br))
    print(f"best joint reply of players 1,2 to (0,pi/2): {br_text}", file=out)
    return 0


def _demo_two_stage(args, out) -> int:
    text = fixture_text("twostage.game")
    target = Path(args.dir) / "twostage.game"
    target.write_text(text, encoding="utf-8")
    print(f"wrote {target}", file=out)
    outcomes = dict(DEMO_OUTCOMES)
    outcomes.update(_outcomes(args))
    game = game_from_document(parse_document(text), outcomes)
    order = [outcomes[k] for k in ("O00", "O01", "O10", "O11")]
    for k in ("O00", "O01", "O10", "O11"):
        print(f"  {k} = ({', '.join(fmt(v) for v in outcomes[k])})", file=out)

    spec, _ = quantize(game, EWL())
    print("EWL qubit map: " + ", ".join(f"{j + 1}->{p}" for j, p in enumerate(spec.xi)), file=out)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(100):
        t = rng.uniform(0.0, math.pi, 3)
        sim = payoff(spec, [u_theta_alpha(x, 0.0) for x in t])
        worst = max(worst, float(np.max(np.abs(sim - two_stage_expected_outcome(*t, order)))))
    print(f"closed-form vs simulation max deviation: {worst:.3e} over 100 random profiles", file=out)

    mw_spec, iso = quantize(game, MW(0.0))
    check = verify_isomorphism(game, mw_spec, iso)
    print(f"MW at gamma=0 isomorphic to the normal representation: {'yes' if check.ok else 'no'} "
          f"(max deviation {check.max_deviation:.3e})", file=out)
    return 0 if worst < 1e-10 and check.ok else 1


def cmd_demo(args) -> int:
    if args.name == "horse":
        return _demo_horse(args, sys.stdout)
    if args.name in ("two-stage", "twostage"):
        return _demo_two_stage(args, sys.stdout)
    raise UsageError(f"unknown demo {args.name!r}; choose horse or two-stage")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scheme", choices=["mw", "ewl"])
    common.add_argument("--gamma", default="0", help="MW entanglement angle, e.g. pi/2")
    common.add_argument("--family", action="append", metavar="PLAYER=FAMILY",
                        help="EWL operator family per player: pauli, one, two or full")
    common.add_argument("--grid", help="EWL search grid, e.g. 'theta=0:pi:9;alpha=0:pi/2:5'")
    common.add_argument("--eps", type=float, help="equilibrium tolerance (env QGAME_EPS)")
    common.add_argument("--output", choices=["table", "csv", "json"])
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--outcome", action="append", metavar="NAME=v1,v2",
                        help="bind a symbolic leaf outcome")

    parser = argparse.ArgumentParser(prog="qgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a game file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("normal", parents=[common], help="normal representation table")
    p.add_argument("file")
    p.add_argument("--list-histories", action="store_true")
    p.set_defaults(func=cmd_normal)

    p = sub.add_parser("quantize", parents=[common], help="six-tuple form of a game")
    p.add_argument("file")
    p.add_argument("--dump-spec", nargs="?", const="-", metavar="PATH")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("payoff", parents=[common], help="expected payoffs of a quantum profile")
    p.add_argument("file")
    p.add_argument("profile", help="per-qubit entries joined by ';', e.g. 's1;s0;s1' or '0;0;0,pi/2'")
    p.set_defaults(func=cmd_payoff)

    p = sub.add_parser("equilibria", parents=[common], help="pure Nash equilibria")
    p.add_argument("file")
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("sweep", parents=[common], help="MW equilibria across gamma")
    p.add_argument("file")
    p.add_argument("range", help="start:end:count, e.g. 0.01:3.13:5")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("demo", parents=[common], help="run a worked example")
    p.add_argument("name", help="horse or two-stage")
    p.add_argument("--dir", default=".", help="where to write the fixture")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except GameError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (UsageError, StrategyError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
