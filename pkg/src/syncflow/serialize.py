"""JSON encodings of machines, automata, games, witnesses and verdicts."""

from __future__ import annotations

import json
from pathlib import Path

from .machine import H, L, Machine, MachineError, View, make_machine
from .ndi import NdiWitness
from .nds import NdsWitness, StrategyTable
from .reductions import Nfa, PeekInstance
from .res import Partition, ReflexivityViolation
from .verdict import Verdict


class FormatError(MachineError):
    """A document does not match the expected shape."""


def _check_keys(doc, required, kind, optional=()):
    if not isinstance(doc, dict):
        raise FormatError(f"{kind}: expected an object")
    unknown = set(doc) - set(required) - set(optional)
    if unknown:
        raise FormatError(f"{kind}: unknown keys {sorted(unknown)}")
    missing = set(required) - set(doc)
    if missing:
        raise FormatError(f"{kind}: missing keys {sorted(missing)}")


def _str_list(value, what):
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise FormatError(f"{what} must be a list of strings")
    return value


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: not valid JSON ({e})") from None


# -- machines ----------------------------------------------------------------

MACHINE_KEYS = ("states", "initial", "actions_h", "actions_l", "observations", "obs", "trans")


def machine_to_dict(m: Machine) -> dict:
    return {
        "states": list(m.states),
        "initial": m.initial,
        "actions_h": list(m.actions_h),
        "actions_l": list(m.actions_l),
        "observations": list(m.observations),
        "obs": {s: {H: m.obs[s][H], L: m.obs[s][L]} for s in m.states if s in m.obs},
        "trans": [list(t) for t in sorted(m.trans)],
    }


def machine_from_dict(doc) -> Machine:
    _check_keys(doc, MACHINE_KEYS, "machine")
    states = _str_list(doc["states"], "states")
    if not isinstance(doc["initial"], str):
        raise FormatError("initial must be a string")
    obs = doc["obs"]
    if not isinstance(obs, dict):
        raise FormatError("obs must map states to {\"H\": o, \"L\": o}")
    for s, entry in obs.items():
        if not isinstance(entry, dict) or set(entry) - {H, L}:
            raise FormatError(f"obs[{s!r}] must be an object with keys H and L")
    trans = []
    for t in doc["trans"] if isinstance(doc["trans"], list) else [None]:
        if not isinstance(t, list) or len(t) != 4 or not all(isinstance(x, str) for x in t):
            raise FormatError(f"transition {t!r} is not a list of four strings")
        trans.append(tuple(t))
    return make_machine(
        states, doc["initial"],
        _str_list(doc["actions_h"], "actions_h"), _str_list(doc["actions_l"], "actions_l"),
        {s: dict(e) for s, e in obs.items()}, trans,
        observations=_str_list(doc["observations"], "observations"),
    )


# -- automata and games ------------------------------------------------------

def nfa_to_dict(a: Nfa) -> dict:
    return {
        "states": list(a.states),
        "initial": sorted(a.initial),
        "alphabet": list(a.alphabet),
        "final": sorted(a.final),
        "trans": [list(e) for e in a.edges()],
    }


def nfa_from_dict(doc) -> Nfa:
    _check_keys(doc, ("states", "initial", "alphabet", "final", "trans"), "nfa")
    edges = []
    for e in doc["trans"] if isinstance(doc["trans"], list) else [None]:
        if not isinstance(e, list) or len(e) != 3 or not all(isinstance(x, str) for x in e):
            raise FormatError(f"NFA transition {e!r} is not [q, a, q']")
        edges.append(tuple(e))
    return Nfa.from_edges(
        _str_list(doc["states"], "states"), _str_list(doc["initial"], "initial"),
        _str_list(doc["alphabet"], "alphabet"), edges, _str_list(doc["final"], "final"),
    )


def peek_to_dict(g: PeekInstance) -> dict:
    return {"n": g.n, "n1": g.n1, "phi1": [list(c) for c in g.phi1],
            "phi2": [list(c) for c in g.phi2], "nu0": list(g.nu0)}


def peek_from_dict(doc) -> PeekInstance:
    _check_keys(doc, ("n", "n1", "phi1", "phi2", "nu0"), "peek")
    for key in ("n", "n1"):
        if not isinstance(doc[key], int) or isinstance(doc[key], bool):
            raise FormatError(f"{key} must be an integer")
    for key in ("phi1", "phi2"):
        phi = doc[key]
        if not isinstance(phi, list) or not all(
                isinstance(c, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in c)
                for c in phi):
            raise FormatError(f"{key} must be a list of clauses of signed integers")
    if not isinstance(doc["nu0"], list) or not all(x in (0, 1) for x in doc["nu0"]):
        raise FormatError("nu0 must be a list of 0/1 values")
    return PeekInstance(doc["n"], doc["n1"], doc["phi1"], doc["phi2"], doc["nu0"])


# -- witnesses ---------------------------------------------------------------

def ndi_witness_to_dict(w: NdiWitness) -> dict:
    return {"alpha": list(w.h_actions), "view": list(w.l_view.trace)}


def ndi_witness_from_dict(doc) -> NdiWitness:
    _check_keys(doc, ("alpha", "view"), "ndi witness")
    view = _str_list(doc["view"], "view")
    try:
        return NdiWitness(tuple(_str_list(doc["alpha"], "alpha")), View(L, tuple(view)))
    except ValueError as e:
        raise FormatError(str(e)) from None


def nds_witness_to_dict(w: NdsWitness) -> dict:
    return {
        "beta": list(w.excluded_view.trace),
        "strategy": [[{"knowledge": list(k), "action": a} for k, a in level]
                     for level in w.strategy.levels()],
    }


def nds_witness_from_dict(doc) -> NdsWitness:
    _check_keys(doc, ("beta", "strategy"), "nds witness")
    levels = []
    if not isinstance(doc["strategy"], list):
        raise FormatError("strategy must be a list of levels")
    for level in doc["strategy"]:
        entries = []
        for entry in level if isinstance(level, list) else [None]:
            _check_keys(entry, ("knowledge", "action"), "strategy entry")
            entries.append((tuple(_str_list(entry["knowledge"], "knowledge")), entry["action"]))
        levels.append(entries)
    try:
        beta = View(L, tuple(_str_list(doc["beta"], "beta")))
        return NdsWitness(beta, StrategyTable.from_levels(levels))
    except ValueError as e:
        raise FormatError(str(e)) from None


def evidence_to_json(ev):
    if ev is None:
        return None
    if isinstance(ev, NdiWitness):
        return ndi_witness_to_dict(ev)
    if isinstance(ev, NdsWitness):
        return nds_witness_to_dict(ev)
    if isinstance(ev, Partition):
        return [list(b) for b in ev.blocks]
    if isinstance(ev, ReflexivityViolation):
        return list(ev.as_tuple())
    raise TypeError(f"cannot encode evidence of type {type(ev).__name__}")


def verdict_to_dict(v: Verdict, witness: bool = True, stats: dict | None = None) -> dict:
    return {
        "property": v.prop,
        "verdict": v.status.value,
        "witness": evidence_to_json(v.evidence) if witness else None,
        "stats": dict(v.stats if stats is None else stats),
    }


def unwrap_witness(doc):
    """Accept either a bare witness or a full verdict document."""
    if isinstance(doc, dict) and "verdict" in doc and "witness" in doc:
        if doc["witness"] is None:
            raise FormatError("verdict document carries no witness")
        return doc["witness"]
    return doc
