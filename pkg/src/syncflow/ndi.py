"""Nondeducibility on inputs.

NDI fails exactly when some possible L view ``v`` and some equal-length H
action sequence ``alpha`` admit no common run.  The search walks the product
of one concrete machine state (which keeps ``v`` possible) with the set of
states compatible with ``(alpha, v)``; reaching an empty set is a violation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .machine import L, Machine, MachineError, View, require_valid
from .verdict import Status, Verdict


@dataclass(frozen=True)
class NdiWitness:
    h_actions: tuple
    l_view: View

    def __post_init__(self):
        object.__setattr__(self, "h_actions", tuple(self.h_actions))


def delta_abo(m: Machine, t_set: Iterable[str], a: str, b: str, o: str) -> frozenset:
    """States reachable from ``t_set`` under (a, b) whose L observation is ``o``."""
    c = require_valid(m)
    if a not in c.h_index or b not in c.l_index or o not in c.obs_index:
        raise MachineError(f"unknown identifier among {(a, b, o)!r}")
    mask = c.image(c.mask_of(t_set), c.h_index[a], c.l_index[b])
    return c.names(mask & c.l_obs_mask[c.obs_index[o]])


def check_ndi(m: Machine, max_states: int | None = None) -> Verdict:
    """Breadth-first search for a shortest (alpha, v) pair with no common run.

    Labels ``(a, b, a')`` are expanded in lexicographic order, so the witness
    is the lexicographically least among the shortest ones.
    """
    c = require_valid(m)
    nh, nl = len(m.actions_h), len(m.actions_l)
    start = (c.s0, 1 << c.s0)
    parent = {start: None}
    queue = deque([start])
    image_cache: dict = {}

    def image(T, ah, al):
        key = (T, ah, al)
        out = image_cache.get(key)
        if out is None:
            out = image_cache[key] = c.image(T, ah, al)
        return out

    while queue:
        node = queue.popleft()
        s, T = node
        for a in range(nh):
            for b in range(nl):
                for a2 in range(nh):
                    pre = image(T, a2, b)
                    for t in c.succ[s][a][b]:
                        T2 = pre & c.l_obs_mask[c.obs_l[t]]
                        child = (t, T2)
                        if child in parent:
                            continue
                        parent[child] = (node, a, b, a2)
                        if T2 == 0:
                            w = _witness(m, c, parent, child)
                            return Verdict("ndi", Status.VIOLATES, w, {"visited": len(parent)})
                        if max_states is not None and len(parent) > max_states:
                            return Verdict(
                                "ndi", Status.RESOURCE_EXCEEDED, None,
                                {"visited": len(parent), "limit": max_states},
                            )
                        queue.append(child)
    return Verdict("ndi", Status.SATISFIES, None, {"visited": len(parent)})


def _witness(m, c, parent, node) -> NdiWitness:
    alpha, steps = [], []
    while parent[node] is not None:
        prev, a, b, a2 = parent[node]
        alpha.append(m.actions_h[a2])
        steps.append((m.actions_l[b], m.observations[c.obs_l[node[0]]]))
        node = prev
    alpha.reverse()
    steps.reverse()
    trace = [m.observations[c.obs_l[c.s0]]]
    for b, o in steps:
        trace += [b, o]
    return NdiWitness(tuple(alpha), View(L, tuple(trace)))


def ndi_witness_replay(m: Machine, w: NdiWitness) -> bool:
    """Recheck a witness directly against the transition relation.

    True iff ``w.l_view`` is produced by some run and no run with H actions
    ``w.h_actions`` produces it.
    """
    v = w.l_view
    if v.agent != L:
        raise ValueError("an NDI witness carries an L view")
    if len(w.h_actions) != len(v):
        raise ValueError(f"|alpha|={len(w.h_actions)} differs from |v|={len(v)}")
    for a in w.h_actions:
        if a not in m.actions_h:
            raise ValueError(f"unknown H action {a!r}")
    obs_l = {s: m.obs[s][L] for s in m.states}
    if obs_l[m.initial] != v.trace[0]:
        return False

    possible = {m.initial}
    knowledge = {m.initial}
    for a, b, o in zip(w.h_actions, v.actions, v.observations[1:]):
        possible = {t for (s, _, bb, t) in m.trans if s in possible and bb == b and obs_l[t] == o}
        knowledge = {
            t for (s, aa, bb, t) in m.trans
            if s in knowledge and aa == a and bb == b and obs_l[t] == o
        }
        if not possible:
            return False
    return not knowledge

