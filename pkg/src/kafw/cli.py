"""Experiment front-end.

Subcommands: encrypt, schedule, audit, attack, advantage, equivalence,
bound.  Output is newline-delimited JSON, one self-describing record per
line, and every record carries the seed material needed to replay it.
Exit codes: 0 success, 2 when an attack or audit precondition fails
(e.g. no weak offset exists), 1 on any other error.

The default seed may also come from the KAFW_SEED environment variable;
an explicit --seed flag wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import game
from .auditor import (
    check_corollary1_affine,
    check_corollary1_nl,
    check_corollary2,
    check_definition1,
    check_definition3,
)
from .equivalence import kafv_vs_kafw_sweep, lucifer_sandwich_sweep
from .errors import (
    DomainTooLarge,
    KafwError,
    NoWeakDelta,
    NotAffine,
    OddN,
    TooFewRounds,
)
from .feistel import CipherInstance
from .gf2 import DomainParams
from .oracles import RandomFunctionOracle, RandomPermutationOracle, derive_seed
from .schedfile import ParsedSchedule, parse_schedule_file
from .schedules import (
    BUILTIN_NAMES,
    KafvSchedule,
    KeySchedule,
    LuciferSchedule,
    builtin,
    kafv_to_kafw,
)

_PRECONDITION_ERRORS = (NoWeakDelta, NotAffine, TooFewRounds, OddN, DomainTooLarge)

ATTACK_CHOICES = ("thm3", "thm4", "appb5", "appbany", "birthday")

_BUILTIN_HELP = (
    "a schedule file path or one of the builtin names: " + ", ".join(BUILTIN_NAMES)
)


def _emit(record: dict, out) -> None:
    out.write(json.dumps(record) + "\n")


def _hexw(value: int, n: int) -> str:
    return f"{value:0{(n + 3) // 4}x}"


def _default_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("KAFW_SEED")
    return int(env, 0) if env else 0


def _load_schedule(source: str, n: int | None, rounds: int | None) -> ParsedSchedule:
    """Builtin name or file path; builtins need --n."""
    base = source.split("(")[0]
    if base in {name.split("(")[0] for name in BUILTIN_NAMES}:
        if n is None:
            raise KafwError("builtin schedules need --n")
        params = DomainParams.for_width(n)
        kwargs = {}
        if rounds is not None and base == "identity_bad" and "(" not in source:
            kwargs["rounds"] = rounds
        sched = builtin(source, params, **kwargs)
        return ParsedSchedule("kafw", sched)
    return parse_schedule_file(Path(source).read_text())


def _schedule_params(parsed: ParsedSchedule) -> DomainParams:
    return parsed.schedule.params


def _make_round_functions(n: int, rounds: int, seed: int, kind: str, single_f: bool):
    count = 1 if single_f else rounds
    oracles = []
    for i in range(count):
        child = derive_seed(seed, "f", i)
        if kind == "permutation":
            oracles.append(RandomPermutationOracle(n, child))
        else:
            oracles.append(RandomFunctionOracle(n, child))
    return tuple(oracles)


def cmd_encrypt(args, out) -> int:
    seed = _default_seed(args)
    parsed = _load_schedule(args.schedule, args.n, args.rounds)
    construction = args.construction or parsed.construction
    p = _schedule_params(parsed)
    rounds = args.rounds or parsed.schedule.t
    fs = _make_round_functions(p.n, rounds, seed, args.function_kind, not args.per_round_f)
    instance = CipherInstance(p, rounds, parsed.schedule, fs, construction)
    key = int(args.key, 16)
    block = int(args.block, 16)
    ct = instance.encrypt_block(key, block)
    _emit(
        {
            "command": "encrypt",
            "n": p.n,
            "rounds": rounds,
            "construction": construction,
            "schedule": args.schedule,
            "key": _hexw(key, p.n),
            "block": _hexw(block, 2 * p.n),
            "seed": seed,
            "function_kind": args.function_kind,
            "per_round_f": bool(args.per_round_f),
            "ciphertext": _hexw(ct, 2 * p.n),
        },
        out,
    )
    return 0


def cmd_schedule(args, out) -> int:
    parsed = _load_schedule(args.schedule, args.n, args.rounds)
    p = _schedule_params(parsed)
    key = int(args.key, 16)
    s = parsed.schedule
    record = {
        "command": "schedule",
        "construction": parsed.construction,
        "n": p.n,
        "t": s.t,
        "key": _hexw(key, p.n),
    }
    if isinstance(s, KeySchedule):
        record["whitening"] = [_hexw(s.whitening_key(j, key), p.n) for j in range(4)]
        record["round_keys"] = [
            _hexw(s.round_key(i, key), p.n) for i in range(1, s.t + 1)
        ]
    elif isinstance(s, KafvSchedule):
        record["subkeys"] = [_hexw(s.subkey(i, key), p.n) for i in range(s.t + 2)]
    elif isinstance(s, LuciferSchedule):
        record["round_keys"] = [
            _hexw(s.round_key(i, key), p.n) for i in range(1, s.t + 1)
        ]
    _emit(record, out)
    return 0


def cmd_audit(args, out) -> int:
    parsed = _load_schedule(args.schedule, args.n, args.rounds)
    s = parsed.schedule
    if args.check == "def1":
        report = check_definition1(s, args.threshold)
    elif args.check == "def3":
        report = check_definition3(s)
    elif args.check == "cor2":
        report = check_corollary2(s)
    elif args.check == "cor1":
        report = check_corollary1_nl(s, args.threshold) if s.t == 4 else check_corollary1_affine(s)
    else:
        raise KafwError(f"unknown check {args.check!r}")
    n = report.n
    record = {
        "command": "audit",
        "check": report.check,
        "schedule": args.schedule,
        "n": n,
        "passed": report.passed,
    }
    if report.delta1_times_n is not None:
        record.update(
            delta1_times_n=report.delta1_times_n,
            delta2_times_n=report.delta2_times_n,
            delta3_times_n=report.delta3_times_n,
            good_like=report.good_like,
            threshold=report.threshold,
        )
    if report.phi_bijectivity:
        record["phi_bijectivity"] = report.phi_bijectivity
    if report.kernel_witnesses:
        record["kernel_witnesses"] = {
            label: "invertible" if w is None else _hexw(w, n)
            for label, w in report.kernel_witnesses.items()
        }
    _emit(record, out)
    return 0


def _distinguisher_for(args, rounds: int):
    if args.name in ("thm3", "boomerang4"):
        return game.boomerang4_distinguisher()
    if args.name in ("thm4", "switch5"):
        return game.switch5_distinguisher()
    if args.name in ("appb5", "comp5"):
        return game.comp5_distinguisher()
    if args.name in ("appbany", "comp-any"):
        return game.comp_any_distinguisher()
    if args.name == "birthday":
        return game.birthday_distinguisher(args.qe, args.qg, rounds)
    if args.name == "quartet-probe":
        return game.quartet_probe_distinguisher()
    raise KafwError(f"unknown attack {args.name!r}")


def _construction_spec(args, parsed: ParsedSchedule) -> game.ConstructionSpec:
    schedule = parsed.schedule
    construction = args.construction or parsed.construction
    if isinstance(schedule, KafvSchedule):
        # Attacks and the game target the KAFw form; functionally identical.
        schedule = kafv_to_kafw(schedule)
        construction = "kafw"
    elif isinstance(schedule, LuciferSchedule):
        raise KafwError("attack/advantage need a kafw, kaf, or kafv schedule")
    return game.ConstructionSpec(
        params=_schedule_params(parsed),
        rounds=args.rounds or schedule.t,
        schedule=schedule,
        construction=construction,
        function_kind=args.function_kind,
        single_f=not args.per_round_f,
    )


def cmd_attack(args, out) -> int:
    seed = _default_seed(args)
    parsed = _load_schedule(args.schedule, args.n, args.rounds)
    spec = _construction_spec(args, parsed)
    d = _distinguisher_for(args, spec.rounds)
    world = game.WorldSpec(args.world, spec)
    for i in range(args.trials):
        trial_seed = derive_seed(seed, args.world, i)
        outcome = game.run_trial_detailed(d, world, trial_seed)
        _emit(
            {
                "command": "attack",
                "name": args.name,
                "world": args.world,
                "trial": i,
                "seed": seed,
                "trial_seed": trial_seed,
                "bit": outcome.bit,
                "q_e": outcome.q_e_used,
                "q_f": outcome.q_f_used,
            },
            out,
        )
    return 0


def cmd_advantage(args, out) -> int:
    seed = _default_seed(args)
    parsed = _load_schedule(args.schedule, args.n, args.rounds)
    spec = _construction_spec(args, parsed)
    d = _distinguisher_for(args, spec.rounds)
    if args.verbose:
        for kind in (game.REAL, game.IDEAL):
            world = game.WorldSpec(kind, spec)
            for i in range(args.trials):
                trial_seed = derive_seed(seed, kind, i)
                outcome = game.run_trial_detailed(d, world, trial_seed)
                _emit(
                    {
                        "command": "advantage-trial",
                        "attack": args.name,
                        "world": kind,
                        "trial": i,
                        "trial_seed": trial_seed,
                        "bit": outcome.bit,
                        "q_e": outcome.q_e_used,
                        "q_f": outcome.q_f_used,
                    },
                    out,
                )
    est = game.estimate_advantage(d, spec, args.trials, seed)
    _emit(
        {
            "command": "advantage",
            "attack": args.name,
            "schedule": args.schedule,
            "construction": spec.construction,
            "n": spec.params.n,
            "trials": est.trials,
            "seed": seed,
            "p_real": est.p_real,
            "p_ideal": est.p_ideal,
            "advantage": est.advantage,
            "ci_halfwidth": est.ci_halfwidth,
            "mean_q_e": est.mean_q_e,
            "mean_q_f": est.mean_q_f,
            "note": "advantage of one fixed distinguisher: a lower bound on insecurity",
        },
        out,
    )
    return 0


def cmd_equivalence(args, out) -> int:
    seed = _default_seed(args)
    seeds = [derive_seed(seed, "sweep", i) for i in range(args.seeds)]
    if args.pair == "kafv-kafw":
        result = kafv_vs_kafw_sweep(args.n, args.rounds, seeds)
    elif args.pair == "lucifer":
        result = lucifer_sandwich_sweep(args.n, args.rounds, seeds)
    else:
        raise KafwError(f"unknown pair {args.pair!r}")
    _emit(
        {
            "command": "equivalence",
            "pair": args.pair,
            "n": args.n,
            "rounds": args.rounds,
            "seed": seed,
            "oracle_seeds": args.seeds,
            "cases": result.cases,
            "mismatches": result.mismatches,
            "passed": result.passed,
        },
        out,
    )
    return 0 if result.passed else 1


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def cmd_bound(args, out) -> int:
    N = 1 << args.n
    result = game.bound_formula(
        args.theorem, args.qf, args.qe, N, args.delta1, args.delta2, args.delta3
    )
    _emit(
        {
            "command": "bound",
            "theorem": args.theorem,
            "n": args.n,
            "q_f": args.qf,
            "q_e": args.qe,
            "delta1": str(args.delta1),
            "delta2": str(args.delta2),
            "delta3": str(args.delta3),
            "value": str(result.value),
            "value_float": float(result.value),
            "precondition_ok": result.precondition_ok,
            "vacuous": result.vacuous,
        },
        out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kafw",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="builtin schedules: " + ", ".join(BUILTIN_NAMES),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(sp, schedule=True):
        if schedule:
            sp.add_argument("--schedule", required=True, help=_BUILTIN_HELP)
        sp.add_argument("--n", type=int, help="half-block width (required for builtins)")
        sp.add_argument("--rounds", type=int, help="round count override")
        sp.add_argument("--seed", type=int, default=None, help="base seed (default: $KAFW_SEED or 0)")

    sp = sub.add_parser("encrypt", help="evaluate one encryption")
    common(sp)
    sp.add_argument("--construction", choices=("kafw", "kaf", "kafv", "lucifer"))
    sp.add_argument("--key", required=True, help="master key, hex")
    sp.add_argument("--block", required=True, help="2n-bit plaintext, hex")
    sp.add_argument("--function-kind", choices=("function", "permutation"), default="function")
    sp.add_argument("--per-round-f", action="store_true", help="independent per-round functions")
    sp.set_defaults(run=cmd_encrypt)

    sp = sub.add_parser("schedule", help="show derived sub-keys for a key")
    common(sp)
    sp.add_argument("--key", required=True, help="master key, hex")
    sp.set_defaults(run=cmd_schedule)

    sp = sub.add_parser("audit", help="measure key-schedule goodness")
    common(sp)
    sp.add_argument("--check", required=True, choices=("def1", "def3", "cor1", "cor2"))
    sp.add_argument("--threshold", type=int, default=3, help="good-like cutoff for the delta counts")
    sp.set_defaults(run=cmd_audit)

    sp = sub.add_parser("attack", help="run a distinguisher, one record per trial")
    common(sp)
    sp.add_argument("--name", required=True, choices=ATTACK_CHOICES + ("quartet-probe", "boomerang4", "switch5", "comp5", "comp-any"))
    sp.add_argument("--world", required=True, choices=("real", "ideal"))
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--construction", choices=("kafw", "kaf", "kafv", "lucifer"))
    sp.add_argument("--function-kind", choices=("function", "permutation"), default="permutation")
    sp.add_argument("--per-round-f", action="store_true", default=True)
    sp.add_argument("--single-f", dest="per_round_f", action="store_false")
    sp.add_argument("--qe", type=int, default=2, help="related-key queries (birthday)")
    sp.add_argument("--qg", type=int, default=2, help="offline key guesses (birthday)")
    sp.set_defaults(run=cmd_attack)

    sp = sub.add_parser("advantage", help="estimate real-vs-ideal advantage")
    common(sp)
    sp.add_argument("--attack", dest="name", required=True, choices=ATTACK_CHOICES + ("quartet-probe",))
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--construction", choices=("kafw", "kaf", "kafv", "lucifer"))
    sp.add_argument("--function-kind", choices=("function", "permutation"), default="function")
    sp.add_argument("--per-round-f", action="store_true")
    sp.add_argument("--qe", type=int, default=2)
    sp.add_argument("--qg", type=int, default=2)
    sp.add_argument("--out", type=str, default=None, help="write records to this path")
    sp.add_argument("--verbose", action="store_true", help="also emit per-trial records")
    sp.set_defaults(run=cmd_advantage)

    sp = sub.add_parser("equivalence", help="exhaustive structural identity checks")
    sp.add_argument("--pair", required=True, choices=("kafv-kafw", "lucifer"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rounds", type=int, required=True)
    sp.add_argument("--seeds", type=int, default=3, help="number of oracle seeds")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(run=cmd_equivalence)

    sp = sub.add_parser("bound", help="evaluate a published advantage bound")
    sp.add_argument("--theorem", type=int, required=True, choices=(1, 2, 5, 6))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--qf", type=int, required=True)
    sp.add_argument("--qe", type=int, required=True)
    sp.add_argument("--delta1", type=_parse_fraction, default=Fraction(0))
    sp.add_argument("--delta2", type=_parse_fraction, default=Fraction(0))
    sp.add_argument("--delta3", type=_parse_fraction, default=Fraction(0))
    sp.set_defaults(run=cmd_bound)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    opened = None
    if getattr(args, "out", None):
        opened = open(args.out, "w")
        out = opened
    try:
        return args.run(args, out)
    except _PRECONDITION_ERRORS as exc:
        _emit({"command": args.cmd, "error": type(exc).__name__, "message": str(exc)}, sys.stdout)
        return 2
    except KafwError as exc:
        _emit({"command": args.cmd, "error": type(exc).__name__, "message": str(exc)}, sys.stdout)
        return 1
    finally:
        if opened:
            opened.close()


if __name__ == "__main__":
    sys.exit(main())
