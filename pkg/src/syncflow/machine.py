"""Synchronous two-agent machines: structure, runs, views and validation.

A machine has a set of states, an initial state, one action alphabet per
agent (``H`` for the high domain, ``L`` for the low domain), a set of
observations, an observation map ``obs[state][agent]`` and a transition
relation of ``(src, a_h, a_l, dst)`` tuples.  Every identifier is a string
and every enumeration follows the lexicographic order of identifiers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

H = "H"
L = "L"
AGENTS = (H, L)


class MachineError(ValueError):
    """Raised for malformed machines and unknown identifiers."""


class InvalidMachine(MachineError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"machine fails validation: {report.summary()}")


class ResourceLimitExceeded(RuntimeError):
    """An explicit cap on explored states or enumerated objects was hit."""

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored


@dataclass(frozen=True)
class Machine:
    states: tuple
    initial: str
    actions_h: tuple
    actions_l: tuple
    observations: tuple
    obs: Mapping[str, Mapping[str, str]]
    trans: frozenset

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "states", tuple(sorted(set(self.states))))
        set_(self, "actions_h", tuple(sorted(set(self.actions_h))))
        set_(self, "actions_l", tuple(sorted(set(self.actions_l))))
        set_(self, "observations", tuple(sorted(set(self.observations))))
        set_(self, "trans", frozenset(tuple(t) for t in self.trans))
        frozen_obs = {s: MappingProxyType(dict(v)) for s, v in self.obs.items()}
        set_(self, "obs", MappingProxyType(frozen_obs))

    def __eq__(self, other):
        if not isinstance(other, Machine):
            return NotImplemented
        return (
            self.states == other.states
            and self.initial == other.initial
            and self.actions_h == other.actions_h
            and self.actions_l == other.actions_l
            and self.observations == other.observations
            and {s: dict(v) for s, v in self.obs.items()}
            == {s: dict(v) for s, v in other.obs.items()}
            and self.trans == other.trans
        )

    __hash__ = None

    def obs_of(self, state: str, agent: str) -> str:
        try:
            return self.obs[state][agent]
        except KeyError:
            raise MachineError(f"no {agent} observation for state {state!r}") from None

    def actions_of(self, agent: str) -> tuple:
        if agent == H:
            return self.actions_h
        if agent == L:
            return self.actions_l
        raise MachineError(f"unknown agent {agent!r}")

    @cached_property
    def compiled(self) -> "Compiled":
        report = validate_machine(self)
        if not report.ok:
            raise InvalidMachine(report)
        return Compiled(self)

    def __repr__(self):
        return (
            f"Machine(|S|={len(self.states)}, |A_H|={len(self.actions_h)}, "
            f"|A_L|={len(self.actions_l)}, |O|={len(self.observations)}, "
            f"|trans|={len(self.trans)})"
        )


class Compiled:
    """Integer-indexed view of a validated machine; state sets are bitmasks."""

    def __init__(self, m: Machine):
        self.machine = m
        self.n = len(m.states)
        self.state_index = {s: i for i, s in enumerate(m.states)}
        self.h_index = {a: i for i, a in enumerate(m.actions_h)}
        self.l_index = {a: i for i, a in enumerate(m.actions_l)}
        self.obs_index = {o: i for i, o in enumerate(m.observations)}
        nh, nl = len(m.actions_h), len(m.actions_l)
        succ = [[[[] for _ in range(nl)] for _ in range(nh)] for _ in range(self.n)]
        for src, ah, al, dst in m.trans:
            succ[self.state_index[src]][self.h_index[ah]][self.l_index[al]].append(
                self.state_index[dst]
            )
        self.succ = [[[tuple(sorted(set(t))) for t in row] for row in rows] for rows in succ]
        self.succ_mask = [
            [[_mask(t) for t in row] for row in rows] for rows in self.succ
        ]
        self.obs_l = [self.obs_index[m.obs[s][L]] for s in m.states]
        self.obs_h = [self.obs_index[m.obs[s][H]] for s in m.states]
        no = len(m.observations)
        self.l_obs_mask = [0] * no
        self.h_obs_mask = [0] * no
        for i in range(self.n):
            self.l_obs_mask[self.obs_l[i]] |= 1 << i
            self.h_obs_mask[self.obs_h[i]] |= 1 << i
        self.s0 = self.state_index[m.initial]

    def image(self, mask: int, ah: int, al: int) -> int:
        """Union of successor masks of every state in ``mask`` under (ah, al)."""
        out = 0
        succ_mask = self.succ_mask
        while mask:
            low = mask & -mask
            out |= succ_mask[low.bit_length() - 1][ah][al]
            mask ^= low
        return out

    def names(self, mask: int) -> frozenset:
        return frozenset(self.machine.states[i] for i in bits(mask))

    def mask_of(self, names: Iterable[str]) -> int:
        out = 0
        for s in names:
            try:
                out |= 1 << self.state_index[s]
            except KeyError:
                raise MachineError(f"unknown state {s!r}") from None
        return out


def _mask(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # missing-transition | dangling-reference | partial-observation
    element: tuple

    def __str__(self):
        return f"{self.kind}: {self.element}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self, limit: int = 5) -> str:
        if self.ok:
            return "ok"
        shown = "; ".join(str(v) for v in self.violations[:limit])
        more = len(self.violations) - limit
        return shown + (f"; ... {more} more" if more > 0 else "")


def validate_machine(m: Machine) -> ValidationReport:
    """List every dangling identifier, missing observation and missing successor."""
    out = []
    states = set(m.states)
    hs, ls, os_ = set(m.actions_h), set(m.actions_l), set(m.observations)
    if m.initial not in states:
        out.append(Violation("dangling-reference", ("initial", m.initial)))
    if not m.actions_h:
        out.append(Violation("dangling-reference", ("actions_h", "empty")))
    if not m.actions_l:
        out.append(Violation("dangling-reference", ("actions_l", "empty")))
    for t in sorted(m.trans):
        if len(t) != 4:
            out.append(Violation("dangling-reference", ("transition", t)))
            continue
        src, ah, al, dst = t
        for name, val, pool in (("state", src, states), ("action_h", ah, hs),
                                ("action_l", al, ls), ("state", dst, states)):
            if val not in pool:
                out.append(Violation("dangling-reference", (name, val, t)))
    for s in sorted(set(m.obs) - states):
        out.append(Violation("dangling-reference", ("obs-state", s)))
    for s in m.states:
        entry = m.obs.get(s, {})
        for agent in AGENTS:
            if agent not in entry:
                out.append(Violation("partial-observation", (s, agent)))
            elif entry[agent] not in os_:
                out.append(Violation("dangling-reference", ("observation", s, agent, entry[agent])))
        for extra in sorted(set(entry) - set(AGENTS)):
            out.append(Violation("dangling-reference", ("agent", s, extra)))
    enabled = {(src, ah, al) for src, ah, al, _ in (t for t in m.trans if len(t) == 4)}
    for s, ah, al in product(m.states, m.actions_h, m.actions_l):
        if (s, ah, al) not in enabled:
            out.append(Violation("missing-transition", (s, ah, al)))
    return ValidationReport(tuple(out))


def require_valid(m: Machine) -> Compiled:
    return m.compiled


def is_scheduled(m: Machine) -> bool:
    """True iff at every state the transitions ignore L's action or ignore H's."""
    c = require_valid(m)
    nh, nl = len(m.actions_h), len(m.actions_l)
    for s in range(c.n):
        row = c.succ[s]
        ignores_l = all(row[h][l] == row[h][0] for h in range(nh) for l in range(nl))
        ignores_h = all(row[h][l] == row[0][l] for h in range(nh) for l in range(nl))
        if not (ignores_l or ignores_h):
            return False
    return True


def successors(m: Machine, s: str, a_h: str, a_l: str) -> frozenset:
    c = require_valid(m)
    try:
        row = c.succ[c.state_index[s]][c.h_index[a_h]][c.l_index[a_l]]
    except KeyError as e:
        raise MachineError(f"unknown identifier {e.args[0]!r}") from None
    return frozenset(m.states[i] for i in row)


def reachable_states(m: Machine) -> frozenset:
    c = require_valid(m)
    seen = {c.s0}
    queue = deque([c.s0])
    while queue:
        s = queue.popleft()
        for row in c.succ[s]:
            for targets in row:
                for t in targets:
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
    return frozenset(m.states[i] for i in seen)


# -- runs and views -----------------------------------------------------------


@dataclass(frozen=True)
class Run:
    """``states[0] actions[0] states[1] ... states[n]``; each action is (a_h, a_l)."""

    states: tuple
    actions: tuple = ()

    def __post_init__(self):
        if len(self.states) != len(self.actions) + 1:
            raise MachineError("a run has exactly one more state than actions")

    def __len__(self):
        return len(self.actions)

    @property
    def last(self) -> str:
        return self.states[-1]

    def h_actions(self) -> tuple:
        return tuple(a for a, _ in self.actions)

    def l_actions(self) -> tuple:
        return tuple(b for _, b in self.actions)

    def extend(self, a_h: str, a_l: str, t: str) -> "Run":
        return Run(self.states + (t,), self.actions + ((a_h, a_l),))


@dataclass(frozen=True)
class View:
    """An agent's history ``o_0 b_1 o_1 ... b_n o_n``; ``len`` is the action count."""

    agent: str
    trace: tuple

    def __post_init__(self):
        object.__setattr__(self, "trace", tuple(self.trace))
        if len(self.trace) % 2 != 1:
            raise MachineError("a view alternates observations and actions, ending in an observation")
        if self.agent not in AGENTS:
            raise MachineError(f"unknown agent {self.agent!r}")

    def __len__(self):
        return len(self.trace) // 2

    @property
    def observations(self) -> tuple:
        return self.trace[0::2]

    @property
    def actions(self) -> tuple:
        return self.trace[1::2]

    def prefix(self, n: int) -> "View":
        return View(self.agent, self.trace[: 2 * n + 1])

    def extend(self, action: str, observation: str) -> "View":
        return View(self.agent, self.trace + (action, observation))

    def text(self, sep: str = "") -> str:
        """Concatenated symbols, e.g. ``"00001"`` for single-character identifiers."""
        return sep.join(self.trace)

    @classmethod
    def from_lists(cls, agent: str, observations: Sequence[str], actions: Sequence[str]) -> "View":
        if len(observations) != len(actions) + 1:
            raise MachineError("need exactly one more observation than actions")
        trace = [observations[0]]
        for b, o in zip(actions, observations[1:]):
            trace += [b, o]
        return cls(agent, tuple(trace))


def is_run(m: Machine, r: Run) -> bool:
    if not r.states or r.states[0] != m.initial:
        return False
    trans = m.trans
    for i, (a_h, a_l) in enumerate(r.actions):
        if (r.states[i], a_h, a_l, r.states[i + 1]) not in trans:
            return False
    return True


def view_of_run(m: Machine, r: Run, agent: str) -> View:
    if agent not in AGENTS:
        raise MachineError(f"unknown agent {agent!r}")
    if not is_run(m, r):
        raise MachineError("not a run of this machine")
    pick = 0 if agent == H else 1
    trace = [m.obs_of(r.states[0], agent)]
    for act, s in zip(r.actions, r.states[1:]):
        trace += [act[pick], m.obs_of(s, agent)]
    return View(agent, tuple(trace))


def enumerate_runs(m: Machine, depth: int, limit: int = 1_000_000) -> Iterator[Run]:
    """Yield every run of length <= depth, shortest first, in canonical order."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    c = require_valid(m)
    layer = [Run((m.initial,))]
    produced = 0
    for level in range(depth + 1):
        nxt = []
        for r in layer:
            produced += 1
            if produced > limit:
                raise ResourceLimitExceeded(f"more than {limit} runs up to depth {depth}", produced)
            yield r
            if level == depth:
                continue
            row = c.succ[c.state_index[r.last]]
            for hi, a_h in enumerate(m.actions_h):
                for li, a_l in enumerate(m.actions_l):
                    for t in row[hi][li]:
                        nxt.append(r.extend(a_h, a_l, m.states[t]))
        layer = nxt


def l_view_language(m: Machine, depth: int, limit: int = 1_000_000) -> frozenset:
    """All possible L views of length <= depth."""
    return view_language(m, depth, L, limit)


def view_language(m: Machine, depth: int, agent: str = L, limit: int = 1_000_000) -> frozenset:
    c = require_valid(m)
    pick_h = agent == H
    obs_idx = c.obs_h if pick_h else c.obs_l
    names = m.observations
    layer = {(names[obs_idx[c.s0]],): 1 << c.s0}
    out = set(layer)
    for _ in range(depth):
        nxt: dict = {}
        for trace, mask in layer.items():
            for s in bits(mask):
                for hi in range(len(m.actions_h)):
                    for li in range(len(m.actions_l)):
                        act = m.actions_h[hi] if pick_h else m.actions_l[li]
                        for t in c.succ[s][hi][li]:
                            key = trace + (act, names[obs_idx[t]])
                            nxt[key] = nxt.get(key, 0) | (1 << t)
        layer = nxt
        out.update(layer)
        if len(out) > limit:
            raise ResourceLimitExceeded(f"more than {limit} views up to depth {depth}", len(out))
    return frozenset(View(agent, t) for t in out)


def is_possible_view(m: Machine, v: View) -> bool:
    """True iff some run of ``m`` produces ``v`` as its view for ``v.agent``."""
    mine = m.actions_of(v.agent)
    current = {m.initial} if m.obs_of(m.initial, v.agent) == v.trace[0] else set()
    for b, o in zip(v.actions, v.observations[1:]):
        if b not in mine:
            return False
        nxt = set()
        for src, ah, al, dst in m.trans:
            act = ah if v.agent == H else al
            if src in current and act == b and m.obs[dst][v.agent] == o:
                nxt.add(dst)
        current = nxt
        if not current:
            return False
    return bool(current)


# -- construction helpers -----------------------------------------------------


def make_machine(states, initial, actions_h, actions_l, obs, trans, observations=None) -> Machine:
    """Build a machine; ``observations`` defaults to the values used in ``obs``."""
    if observations is None:
        observations = {o for entry in obs.values() for o in entry.values()}
    return Machine(
        states=tuple(states),
        initial=initial,
        actions_h=tuple(actions_h),
        actions_l=tuple(actions_l),
        observations=tuple(observations),
        obs=obs,
        trans=frozenset(trans),
    )


def expand_scheduled(m_states, actions_h, actions_l, edges) -> set:
    """Expand ``(src, agent, action, dst)`` edges of a scheduled machine to joint actions.

    ``agent`` is ``"H"``, ``"L"`` or ``None`` (a step neither agent controls);
    the action of the unscheduled agent(s) is free.
    """
    out = set()
    for src, agent, action, dst in edges:
        hs = [action] if agent == H else actions_h
        ls = [action] if agent == L else actions_l
        for ah in hs:
            for al in ls:
                out.add((src, ah, al, dst))
    return out


def reachable_restriction(m: Machine) -> Machine:
    """The machine restricted to states reachable from the initial state."""
    keep = reachable_states(m)
    return Machine(
        states=tuple(s for s in m.states if s in keep),
        initial=m.initial,
        actions_h=m.actions_h,
        actions_l=m.actions_l,
        observations=m.observations,
        obs={s: dict(m.obs[s]) for s in keep},
        trans=frozenset(t for t in m.trans if t[0] in keep),
    )


# -- fixtures -----------------------------------------------------------------


def fixture_fig1() -> Machine:
    """NDI holds but H can signal one bit: from s1/s2, L's next observation is
    obs_H(current) xor H's action."""
    obs = {
        "s0": {H: "0", L: "0"},
        "s1": {H: "0", L: "0"},
        "s2": {H: "1", L: "0"},
        "s3": {H: "0", L: "0"},
        "s4": {H: "0", L: "1"},
    }
    trans = set()
    for x in "01":
        trans |= {("s0", x, "0", "s1"), ("s0", x, "0", "s2")}
        trans |= {("s3", x, "0", "s3"), ("s4", x, "0", "s4")}
    # xor of obs_H(s) and the H action selects s3 (0) or s4 (1)
    trans |= {("s1", "0", "0", "s3"), ("s1", "1", "0", "s4")}
    trans |= {("s2", "0", "0", "s4"), ("s2", "1", "0", "s3")}
    return make_machine(list(obs), "s0", "01", "0", obs, trans, observations="01")


def fixture_fig2() -> Machine:
    """NDS holds, RES fails; L's views are 000((00)*+(01)*)."""
    obs = {s: {H: "0", L: "0"} for s in ("s0", "s1", "s2", "s3", "s4")}
    obs["s5"] = {H: "0", L: "1"}
    trans = {("s0", "0", "0", "s1"), ("s0", "1", "0", "s2"), ("s0", "1", "0", "s3")}
    for x in "01":
        trans |= {("s1", x, "0", "s4"), ("s1", x, "0", "s5")}
        trans |= {("s2", x, "0", "s4"), ("s3", x, "0", "s5")}
        trans |= {("s4", x, "0", "s4"), ("s5", x, "0", "s5")}
    return make_machine(list(obs), "s0", "01", "0", obs, trans, observations="01")


def single_state_machine(actions_h="0", actions_l="0", observation="0") -> Machine:
    obs = {"s0": {H: observation, L: observation}}
    trans = {("s0", a, b, "s0") for a in actions_h for b in actions_l}
    return make_machine(["s0"], "s0", actions_h, actions_l, obs, trans)
