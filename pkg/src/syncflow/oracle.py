"""Brute-force deciders for cross-checking the main algorithms on tiny inputs.

Nothing here shares code with the checkers beyond the machine model itself;
every search works on plain Python sets built from ``m.trans``.
"""

from __future__ import annotations

from itertools import combinations, product

from .machine import (H, L, Machine, ResourceLimitExceeded, View, enumerate_runs,
                      reachable_restriction, require_valid, view_of_run)
from .ndi import NdiWitness
from .reductions import PeekInstance, apply_move, satisfies
from .res import is_unwinding
from .verdict import Status, Verdict


def _table(m: Machine) -> dict:
    out: dict = {}
    for s, a, b, t in m.trans:
        out.setdefault((s, a, b), set()).add(t)
    return out


def sound_ndi_depth(m: Machine) -> int:
    n = len(m.states)
    return n * 2 ** n


def brute_ndi(m: Machine, depth: int | None = None, max_situations: int = 1_000_000) -> Verdict:
    """Grow L views one step at a time and track every knowledge set K(alpha, v).

    For a fixed L view ``v`` the search keeps the set of states producing
    ``v`` and, for each distinct value of K(alpha, v) over all H sequences
    alpha, one representative alpha.  Two views with the same pair have the
    same future, so pairs are visited once.  Depth defaults to the sound
    bound |S| * 2^|S|.
    """
    require_valid(m)
    if depth is None:
        depth = sound_ndi_depth(m)
    step = _table(m)
    obs_l = {s: m.obs[s][L] for s in m.states}
    s0 = m.initial
    start = (frozenset([s0]), {frozenset([s0]): ()})
    seen = {(start[0], frozenset(start[1]))}
    layer = [(start[0], start[1], (obs_l[s0],))]
    for level in range(depth):
        nxt = []
        for U, kmap, trace in layer:
            for b in m.actions_l:
                for o in m.observations:
                    U2 = frozenset(t for s in U for a in m.actions_h
                                   for t in step[(s, a, b)] if obs_l[t] == o)
                    if not U2:
                        continue
                    kmap2: dict = {}
                    for K, alpha in kmap.items():
                        for a in m.actions_h:
                            K2 = frozenset(t for s in K for t in step[(s, a, b)] if obs_l[t] == o)
                            kmap2.setdefault(K2, alpha + (a,))
                    trace2 = trace + (b, o)
                    if frozenset() in kmap2:
                        w = NdiWitness(kmap2[frozenset()], View(L, trace2))
                        return Verdict("ndi", Status.VIOLATES, w, {"depth": level + 1})
                    key = (U2, frozenset(kmap2))
                    if key in seen:
                        continue
                    seen.add(key)
                    if len(seen) > max_situations:
                        raise ResourceLimitExceeded("brute_ndi situation cap", len(seen))
                    nxt.append((U2, kmap2, trace2))
        if not nxt:
            return Verdict("ndi", Status.SATISFIES, None, {"depth": level + 1, "exhausted": True})
        layer = nxt
    return Verdict("ndi", Status.SATISFIES, None, {"depth": depth, "exhausted": False})


def runs_ndi(m: Machine, depth: int, limit: int = 1_000_000) -> Verdict:
    """Literal check: every L view of a run must occur with every H action sequence."""
    realized: dict = {}
    for r in enumerate_runs(m, depth, limit=limit):
        realized.setdefault(view_of_run(m, r, L), set()).add(r.h_actions)
    for v in sorted(realized, key=lambda v: (len(v), v.trace)):
        got = realized[v]
        if len(got) < len(m.actions_h) ** len(v):
            alpha = min(set(product(m.actions_h, repeat=len(v))) - got)
            return Verdict("ndi", Status.VIOLATES, NdiWitness(alpha, v), {"depth": depth})
    return Verdict("ndi", Status.SATISFIES, None, {"depth": depth, "exhausted": False})


def knowledge_table(m: Machine, depth: int, limit: int = 1_000_000) -> dict:
    """``(H view, L view) -> final states`` over all runs of length <= depth."""
    out: dict = {}
    for r in enumerate_runs(m, depth, limit=limit):
        key = (view_of_run(m, r, H), view_of_run(m, r, L))
        out.setdefault(key, set()).add(r.last)
    return {k: frozenset(v) for k, v in out.items()}


def brute_nds(m: Machine, depth: int, max_strategies: int = 1_000_000) -> Verdict:
    """Try every H strategy up to ``depth`` steps and compare L view sets.

    A strategy only matters on H views that actually arise, so choices are
    made level by level for those views.  The verdict is exact for the
    horizon and flagged as bounded.
    """
    require_valid(m)
    step = _table(m)
    obs = m.obs
    s0 = m.initial

    # unconstrained L views, per length, as (trace) tuples
    free = [{(obs[s0][L],)}]
    frontier = {((obs[s0][L],), s0)}
    for _ in range(depth):
        frontier = {(v + (b, obs[t][L]), t) for v, s in frontier
                    for a in m.actions_h for b in m.actions_l for t in step[(s, a, b)]}
        free.append({v for v, _ in frontier})

    counter = [0]

    def search(level, runs, strategy):
        # runs: set of (H view, L view, state) consistent with ``strategy``
        if level == depth:
            return None
        hviews = sorted({x for x, _, _ in runs})
        for choice in product(m.actions_h, repeat=len(hviews)):
            counter[0] += 1
            if counter[0] > max_strategies:
                raise ResourceLimitExceeded("brute_nds strategy cap", counter[0])
            pick = dict(zip(hviews, choice))
            nxt = set()
            for x, v, s in runs:
                a = pick[x]
                for b in m.actions_l:
                    for t in step[(s, a, b)]:
                        nxt.add((x + (a, obs[t][H]), v + (b, obs[t][L]), t))
            strategy2 = {**strategy, **pick}
            missing = free[level + 1] - {v for _, v, _ in nxt}
            if missing:
                beta = View(L, min(missing))
                return beta, strategy2
            found = search(level + 1, nxt, strategy2)
            if found:
                return found
        return None

    start = {((obs[s0][H],), (obs[s0][L],), s0)}
    found = search(0, start, {})
    stats = {"horizon": depth, "bounded": True, "strategies": counter[0]}
    if found:
        return Verdict("nds", Status.VIOLATES, found, stats)
    return Verdict("nds", Status.SATISFIES, None, stats)


def res_candidate_pairs(m: Machine) -> list:
    """Unordered pairs of reachable states that agree on L's observation.

    No unwinding relates states with different L observations, so leaving
    those pairs out of the enumeration loses nothing.
    """
    r = reachable_restriction(m)
    obs_l = {s: r.obs[s][L] for s in r.states}
    pairs = [(s, t) for s, t in combinations(r.states, 2) if obs_l[s] == obs_l[t]]
    return pairs + [(s, s) for s in r.states if s != r.initial]


def brute_res(m: Machine, max_pairs: int = 16):
    """All symmetric relations on reachable states that are unwindings.

    Returns ``(verdict, survivors)``; survivors are frozensets of ordered pairs.
    """
    r = reachable_restriction(m)
    pairs = res_candidate_pairs(r)
    if len(pairs) > max_pairs:
        raise ResourceLimitExceeded(
            f"brute_res would enumerate 2^{len(pairs)} relations (cap 2^{max_pairs})", len(pairs))
    base = {(r.initial, r.initial)}
    survivors = []
    for k in range(len(pairs) + 1):
        for chosen in combinations(pairs, k):
            rel = set(base)
            for s, t in chosen:
                rel.add((s, t))
                rel.add((t, s))
            if is_unwinding(r, rel):
                survivors.append(frozenset(rel))
    status = Status.SATISFIES if survivors else Status.VIOLATES
    return Verdict("res", status, None, {"relations": 2 ** len(pairs)}), survivors


def brute_peek(g: PeekInstance, depth: int) -> bool:
    """Does some player-1 move sequence of length <= depth win every play?"""
    m1, m2 = g.moves(1), g.moves(2)

    def wins(nu, lam, i):
        if i == len(lam):
            return False
        nu1 = apply_move(nu, lam[i])
        if satisfies(g.phi1, nu1):
            return True
        for mu in m2:
            nu2 = apply_move(nu1, mu)
            if satisfies(g.phi2, nu2) or not wins(nu2, lam, i + 1):
                return False
        return True

    for length in range(1, depth + 1):
        for lam in product(m1, repeat=length):
            if wins(g.nu0, lam, 0):
                return True
    return False
