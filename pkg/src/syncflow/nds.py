"""Nondeducibility on strategies.

A strategy of H excludes an L view when no run consistent with the strategy
produces that view.  It suffices to look for strategies whose choice depends
only on the time and on H's current knowledge set, so the search state is a
pair ``(universe, ksets)``: the states compatible with the L view built so
far, and the collection of knowledge sets H can currently be in.  Each step
picks an action per knowledge set, an L action and an L observation.  A
state whose knowledge sets are all empty witnesses a violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .machine import H, L, Machine, MachineError, View, bits, is_possible_view, require_valid
from .verdict import Status, Verdict

DEFAULT_MAX_STATES = 2 ** 20


class StrategyUndefined(KeyError):
    """A strategy table has no entry for a (time, knowledge set) pair reached in replay."""


@dataclass(frozen=True)
class KnowledgeCollection:
    universe: frozenset
    ksets: frozenset

    @classmethod
    def initial(cls, m: Machine) -> "KnowledgeCollection":
        s0 = frozenset([m.initial])
        return cls(s0, frozenset([s0]))

    @property
    def exhausted(self) -> bool:
        return all(not k for k in self.ksets)


@dataclass(frozen=True)
class StrategyTable:
    """H's choice per (time step, knowledge set)."""

    entries: Mapping = field(default_factory=dict)

    def action(self, time: int, kset: Iterable[str]) -> str:
        key = (time, frozenset(kset))
        try:
            return self.entries[key]
        except KeyError:
            raise StrategyUndefined(key) from None

    def levels(self) -> list:
        """``[[(sorted knowledge, action), ...] per time step]`` in canonical order."""
        depth = 1 + max((t for t, _ in self.entries), default=-1)
        out = [[] for _ in range(depth)]
        for (t, k), a in self.entries.items():
            out[t].append((tuple(sorted(k)), a))
        for level in out:
            level.sort()
        return out

    @classmethod
    def from_levels(cls, levels) -> "StrategyTable":
        entries = {}
        for t, level in enumerate(levels):
            for k, a in level:
                key = (t, frozenset(k))
                if entries.get(key, a) != a:
                    raise ValueError(f"conflicting actions for {key}")
                entries[key] = a
        return cls(entries)


@dataclass(frozen=True)
class NdsWitness:
    excluded_view: View
    strategy: StrategyTable


def knowledge_update(m: Machine, k: Iterable[str], a_h: str, o_h: str, a_l: str, o_l: str) -> frozenset:
    """States reached from ``k`` under (a_h, a_l) that show H ``o_h`` and L ``o_l``."""
    c = require_valid(m)
    try:
        ah, al = c.h_index[a_h], c.l_index[a_l]
        mh, ml = c.h_obs_mask[c.obs_index[o_h]], c.l_obs_mask[c.obs_index[o_l]]
    except KeyError as e:
        raise MachineError(f"unknown identifier {e.args[0]!r}") from None
    return c.names(c.image(c.mask_of(k), ah, al) & mh & ml)


def nds_step(m: Machine, q: KnowledgeCollection, rho: Mapping, a_l: str, o_l: str):
    """One transition of the search; ``None`` when no state shows L ``o_l``.

    ``rho`` maps each nonempty knowledge set of ``q`` to an H action.
    """
    c = require_valid(m)
    if a_l not in c.l_index or o_l not in c.obs_index:
        raise MachineError(f"unknown identifier among {(a_l, o_l)!r}")
    al = c.l_index[a_l]
    ml = c.l_obs_mask[c.obs_index[o_l]]
    universe = 0
    u = c.mask_of(q.universe)
    for ah in range(len(m.actions_h)):
        universe |= c.image(u, ah, al)
    universe &= ml
    if not universe:
        return None
    ksets = set()
    for k in q.ksets:
        if not k:
            ksets.add(frozenset())
            continue
        if k not in rho:
            raise StrategyUndefined(k)
        pre = c.image(c.mask_of(k), c.h_index[rho[k]], al) & ml
        for mh in c.h_obs_mask:
            ksets.add(c.names(pre & mh))
    return KnowledgeCollection(c.names(universe), frozenset(ksets))


def _kkey(mask: int) -> tuple:
    return tuple(bits(mask))


def check_nds(m: Machine, max_states: int | None = DEFAULT_MAX_STATES,
              max_depth: int | None = None) -> Verdict:
    """Breadth-first search for a reachable state whose knowledge sets are all empty.

    With ``max_depth`` only excluded views of length <= max_depth are sought
    and ``Satisfies`` is relative to that horizon (recorded in the stats).
    """
    c = require_valid(m)
    nh, nl, no = len(m.actions_h), len(m.actions_l), len(m.observations)
    start = (1 << c.s0, (1 << c.s0,))
    parent: dict = {start: None}
    layer = [start]
    depth = 0
    image_cache: dict = {}

    def image(mask, ah, al):
        key = (mask, ah, al)
        out = image_cache.get(key)
        if out is None:
            out = image_cache[key] = c.image(mask, ah, al)
        return out

    def stats(**extra):
        return {"visited": len(parent), "depth": depth, **extra}

    while layer:
        if max_depth is not None and depth >= max_depth:
            return Verdict("nds", Status.SATISFIES, None, stats(horizon=max_depth, bounded=True))
        nxt = []
        for node in layer:
            U, K = node
            live = [k for k in K if k]
            has_empty = len(live) < len(K)
            for al in range(nl):
                for ol in range(no):
                    ml = c.l_obs_mask[ol]
                    U2 = 0
                    for ah in range(nh):
                        U2 |= image(U, ah, al)
                    U2 &= ml
                    if not U2:
                        continue
                    options = []
                    for k in live:
                        seen = {}
                        for ah in range(nh):
                            pre = image(k, ah, al) & ml
                            img = frozenset(pre & mh for mh in c.h_obs_mask)
                            seen.setdefault(img, ah)
                        options.append([(ah, img) for img, ah in seen.items()])
                    for combo in product(*options):
                        members = {0} if has_empty else set()
                        for _, img in combo:
                            members |= img
                        K2 = tuple(sorted(members, key=_kkey))
                        child = (U2, K2)
                        if child in parent:
                            continue
                        parent[child] = (node, al, ol, tuple(ah for ah, _ in combo))
                        if not any(K2):
                            depth += 1
                            w = _witness(m, c, parent, child)
                            return Verdict("nds", Status.VIOLATES, w, stats())
                        if max_states is not None and len(parent) > max_states:
                            return Verdict("nds", Status.RESOURCE_EXCEEDED, None,
                                           stats(limit=max_states))
                        nxt.append(child)
        layer = nxt
        depth += 1
    return Verdict("nds", Status.SATISFIES, None, stats())


def _witness(m, c, parent, node) -> NdsWitness:
    path = []
    while parent[node] is not None:
        prev, al, ol, rho = parent[node]
        path.append((prev, al, ol, rho))
        node = prev
    path.reverse()
    trace = [m.observations[c.obs_l[c.s0]]]
    entries = {}
    for t, (prev, al, ol, rho) in enumerate(path):
        trace += [m.actions_l[al], m.observations[ol]]
        live = [k for k in prev[1] if k]
        for k, ah in zip(live, rho):
            entries[(t, c.names(k))] = m.actions_h[ah]
    return NdsWitness(View(L, tuple(trace)), StrategyTable(entries))


def strategy_excludes(m: Machine, pi: StrategyTable, beta: View, horizon: int | None = None) -> bool:
    """Simulate ``pi`` forward along ``beta`` and report whether no run survives.

    Runs are grouped by H's knowledge set at each time; groups with equal
    sets at equal times act alike under a table strategy, so one
    representative per set suffices.
    """
    if beta.agent != L:
        raise ValueError("the excluded view must be an L view")
    if horizon is not None and horizon < len(beta):
        raise ValueError("horizon shorter than the view")
    obs = m.obs
    if obs[m.initial][L] != beta.trace[0]:
        return True
    outgoing: dict = {}
    for src, ah, al, dst in m.trans:
        outgoing.setdefault(src, []).append((ah, al, dst))
    groups = {frozenset([m.initial])}
    for t, (b, o) in enumerate(zip(beta.actions, beta.observations[1:])):
        nxt = set()
        for K in groups:
            a = pi.action(t, K)
            by_h_obs: dict = {}
            for s in K:
                for ah, al, dst in outgoing.get(s, ()):
                    if ah == a and al == b and obs[dst][L] == o:
                        by_h_obs.setdefault(obs[dst][H], set()).add(dst)
            nxt.update(frozenset(g) for g in by_h_obs.values())
        groups = nxt
        if not groups:
            return True
    return not groups


def witness_is_valid(m: Machine, w: NdsWitness) -> bool:
    """The excluded view is possible and the strategy excludes it."""
    return is_possible_view(m, w.excluded_view) and strategy_excludes(m, w.strategy, w.excluded_view)
