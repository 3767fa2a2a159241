"""Command-line front end.

Exit codes: 0 property holds / success, 1 property violated or check failed,
2 bad input or usage, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import gen, oracle
from .machine import InvalidMachine, MachineError, ResourceLimitExceeded, validate_machine
from .ndi import check_ndi, ndi_witness_replay
from .nds import DEFAULT_MAX_STATES, check_nds, witness_is_valid
from .reductions import nfa_to_machine, peek_to_machine
from .res import check_res
from .serialize import (FormatError, dumps, evidence_to_json, load_json, machine_from_dict,
                        machine_to_dict, ndi_witness_from_dict, nds_witness_from_dict,
                        nfa_from_dict, peek_from_dict, unwrap_witness, verdict_to_dict)

EXIT_OK, EXIT_VIOLATES, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

ENVELOPES = {
    # property: (max states, max H actions, max L actions, max observations)
    "ndi": (3, 2, 2, 2),
    "nds": (2, 2, 1, 2),
    "res": (4, 2, 2, 2),
}
RES_MAX_PAIRS = 16


class UsageError(Exception):
    pass


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syncflow",
                                description="Information-flow checks for synchronous two-agent machines.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide ndi, nds or res for a machine file")
    c.add_argument("machine")
    c.add_argument("--property", required=True, choices=("ndi", "nds", "res"))
    c.add_argument("--witness", action="store_true", help="print the violation witness")
    c.add_argument("--limits", type=positive_int, help="cap on visited search states")
    c.add_argument("--depth", type=positive_int, help="nds only: look for excluded views up to this length")
    c.add_argument("--format", choices=("text", "structured"), default="text")
    c.add_argument("--no-timing", action="store_true", help="omit elapsed time from structured output")

    v = sub.add_parser("validate", help="check that a machine file is well formed and input-enabled")
    v.add_argument("machine")

    g = sub.add_parser("gen", help="generate a machine")
    gsub = g.add_subparsers(dest="source", required=True)
    for name, helptext in (("nfa", "machine from an NFA file"), ("peek", "machine from a BLIND-PEEK file")):
        x = gsub.add_parser(name, help=helptext)
        x.add_argument("input")
        x.add_argument("-o", "--output")
    r = gsub.add_parser("random", help="seeded random machine")
    r.add_argument("--states", type=positive_int, default=4)
    r.add_argument("--h-actions", type=positive_int, default=2)
    r.add_argument("--l-actions", type=positive_int, default=2)
    r.add_argument("--observations", type=positive_int, default=2)
    r.add_argument("--max-out", type=positive_int, default=2)
    r.add_argument("--h-blind", action="store_true")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-o", "--output")

    o = sub.add_parser("oracle", help="compare a checker with its brute-force oracle")
    o.add_argument("property", choices=("ndi", "nds", "res"))
    o.add_argument("machines", nargs="*", help="machine files; seeded random machines if omitted")
    o.add_argument("--count", type=positive_int, default=200)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--depth", type=positive_int, default=3, help="nds horizon")
    o.add_argument("--format", choices=("text", "structured"), default="text")

    rp = sub.add_parser("replay", help="validate a witness against a machine")
    rp.add_argument("property", choices=("ndi", "nds"))
    rp.add_argument("machine")
    rp.add_argument("witness", help="bare witness or structured check output")

    b = sub.add_parser("bench", help="scaling benchmark")
    bsub = b.add_subparsers(dest="target", required=True)
    br = bsub.add_parser("res", help="time check_res on random machines and plot")
    br.add_argument("--sizes", type=positive_int, nargs="+", default=[100, 200, 400, 800])
    br.add_argument("--seed", type=int, default=0)
    br.add_argument("--reps", type=positive_int, default=3)
    br.add_argument("--out", default=".", help="directory for res_scaling.csv and res_scaling.png")
    return p


def _read_machine(path):
    return machine_from_dict(load_json(path))


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run_check(m, prop, limits=None, depth=None):
    if prop == "ndi":
        return check_ndi(m, max_states=limits)
    if prop == "nds":
        return check_nds(m, max_states=limits or DEFAULT_MAX_STATES, max_depth=depth)
    return check_res(m)


def _witness_text(v) -> list:
    ev = evidence_to_json(v.evidence)
    if v.prop == "ndi":
        return [f"alpha: {' '.join(ev['alpha'])}", f"view: {' '.join(ev['view'])}"]
    if v.prop == "nds":
        lines = [f"beta: {' '.join(ev['beta'])}"]
        for t, level in enumerate(ev["strategy"]):
            for entry in level:
                lines.append(f"  t={t} {{{', '.join(entry['knowledge'])}}} -> {entry['action']}")
        return lines
    if v.satisfied:
        return ["blocks: " + " | ".join(" ".join(b) for b in ev)]
    return ["state {} separates H actions {} and {} under L action {}".format(*ev)]


def cmd_check(args) -> int:
    m = _read_machine(args.machine)
    validate_or_raise(m)
    if args.depth is not None and args.property != "nds":
        raise UsageError("--depth applies to nds only")
    t0 = time.perf_counter()
    v = run_check(m, args.property, args.limits, args.depth)
    elapsed = time.perf_counter() - t0
    show = args.witness and v.evidence is not None
    if args.format == "structured":
        stats = dict(v.stats)
        if not args.no_timing:
            stats["elapsed"] = round(elapsed, 6)
        sys.stdout.write(dumps(verdict_to_dict(v, witness=show, stats=stats)))
    else:
        print(f"{v.prop}: {v.status.value}")
        if show:
            print("\n".join(_witness_text(v)))
    if v.exceeded:
        print(f"resource limit exceeded after {v.stats.get('visited')} states", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK if v.satisfied else EXIT_VIOLATES


def validate_or_raise(m):
    report = validate_machine(m)
    if not report.ok:
        raise InvalidMachine(report)


def cmd_validate(args) -> int:
    report = validate_machine(_read_machine(args.machine))
    if report.ok:
        print("ok")
        return EXIT_OK
    for violation in report.violations:
        print(violation)
    return EXIT_VIOLATES


def cmd_gen(args) -> int:
    if args.source == "nfa":
        m = nfa_to_machine(nfa_from_dict(load_json(args.input)))
    elif args.source == "peek":
        m = peek_to_machine(peek_from_dict(load_json(args.input)))
    else:
        m = gen.random_machine(args.seed, n_states=args.states, n_h=args.h_actions,
                               n_l=args.l_actions, n_obs=args.observations,
                               max_out=args.max_out, h_blind=args.h_blind)
    validate_or_raise(m)
    _emit(dumps(machine_to_dict(m)), args.output)
    return EXIT_OK


def _in_envelope(m, prop) -> bool:
    ns, nh, nl, no = ENVELOPES[prop]
    if prop == "res":
        # brute_res enumerates subsets of the L-compatible reachable pairs
        return len(oracle.res_candidate_pairs(m)) <= RES_MAX_PAIRS
    return (len(m.states) <= ns and len(m.actions_h) <= nh and len(m.actions_l) <= nl
            and len(m.observations) <= no)


def _compare(m, prop, depth):
    """``None`` on agreement, else a short description of the mismatch."""
    if prop == "ndi":
        mine, ref = check_ndi(m), oracle.brute_ndi(m)
        if mine.status != ref.status:
            return f"check_ndi {mine.status.value}, brute_ndi {ref.status.value}"
        if mine.violated and not ndi_witness_replay(m, mine.evidence):
            return "check_ndi witness fails replay"
    elif prop == "nds":
        mine, ref = check_nds(m, max_depth=depth), oracle.brute_nds(m, depth)
        if mine.status != ref.status:
            return f"check_nds {mine.status.value}, brute_nds {ref.status.value} (horizon {depth})"
        if mine.violated and not witness_is_valid(m, mine.evidence):
            return "check_nds witness fails replay"
    else:
        mine = check_res(m)
        ref, survivors = oracle.brute_res(m, max_pairs=RES_MAX_PAIRS)
        if mine.status != ref.status:
            return f"check_res {mine.status.value}, brute_res {ref.status.value}"
        if mine.satisfied:
            largest = mine.evidence.as_relation()
            if any(not rel <= largest for rel in survivors):
                return "an unwinding found by brute_res is not inside the check_res partition"
    return None


def cmd_oracle(args) -> int:
    ns, nh, nl, no = ENVELOPES[args.property]
    if args.machines:
        cases = [(path, _read_machine(path)) for path in args.machines]
        for name, m in cases:
            validate_or_raise(m)
            if not _in_envelope(m, args.property):
                raise UsageError(f"{name} is outside the {args.property} oracle envelope")
    else:
        cases = [(f"seed {args.seed + i}",
                  gen.random_envelope_machine(args.seed + i, ns, nh, nl, no))
                 for i in range(args.count)]
    failures = []
    for name, m in cases:
        problem = _compare(m, args.property, args.depth)
        if problem:
            failures.append({"case": name, "problem": problem})
    if args.format == "structured":
        sys.stdout.write(dumps({"property": args.property, "cases": len(cases),
                                "disagreements": failures}))
    else:
        for f in failures:
            print(f"{f['case']}: {f['problem']}")
        print(f"{args.property}: {len(cases)} machines, {len(failures)} disagreements")
    return EXIT_OK if not failures else EXIT_VIOLATES


def cmd_replay(args) -> int:
    m = _read_machine(args.machine)
    validate_or_raise(m)
    doc = unwrap_witness(load_json(args.witness))
    try:
        if args.property == "ndi":
            ok = ndi_witness_replay(m, ndi_witness_from_dict(doc))
        else:
            ok = witness_is_valid(m, nds_witness_from_dict(doc))
    except KeyError as e:
        # a strategy without an entry for a knowledge set reached in replay
        raise FormatError(f"strategy undefined at {e.args[0]!r}") from None
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_VIOLATES


def cmd_bench(args) -> int:
    from .report import bench_res, fit_exponent, plot_loglog, write_csv
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = bench_res(args.sizes, seed=args.seed, reps=args.reps)
    slope = fit_exponent(rows) if len(rows) > 1 else float("nan")
    csv_path = write_csv(rows, out / "res_scaling.csv")
    png_path = plot_loglog(rows, out / "res_scaling.png", slope)
    sys.stdout.write(csv_path.read_text(encoding="utf-8"))
    print(f"exponent: {slope:.3f}")
    print(f"wrote {csv_path} and {png_path}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"check": cmd_check, "validate": cmd_validate, "gen": cmd_gen,
            "oracle": cmd_oracle, "replay": cmd_replay, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ResourceLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MachineError, UsageError, OSError, json.JSONDecodeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
