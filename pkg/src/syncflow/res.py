"""Restrictiveness: existence of a synchronous unwinding relation.

The largest unwinding on the reachable states is an equivalence, computed by
partition refinement starting from the classes of equal L observation.  A
state whose successor blocks depend on H's action cannot be related even to
itself, which rules out every unwinding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .machine import Machine, MachineError, reachable_restriction, require_valid
from .verdict import Status, Verdict


@dataclass(frozen=True)
class Partition:
    blocks: tuple  # tuple of sorted tuples of state names, ordered by first member

    @classmethod
    def of(cls, blocks: Iterable[Iterable[str]]) -> "Partition":
        return cls(tuple(sorted(tuple(sorted(b)) for b in blocks)))

    def block_of(self) -> dict:
        return {s: i for i, b in enumerate(self.blocks) for s in b}

    def as_relation(self) -> frozenset:
        return frozenset((s, t) for b in self.blocks for s in b for t in b)

    def __len__(self):
        return len(self.blocks)


@dataclass(frozen=True)
class ReflexivityViolation:
    """``state`` reaches different blocks under (h1, l) and (h2, l)."""

    state: str
    h1: str
    h2: str
    l: str

    def as_tuple(self) -> tuple:
        return (self.state, self.h1, self.h2, self.l)


def check_res(m: Machine, debug: bool = False) -> Verdict:
    """Compute the largest synchronous unwinding of the reachable part of ``m``.

    Blocks are examined in order of their least state; the first block that
    fails the reflexive check ends the search, and the first unstable block
    is split by its successor-block signature under one L action.  Only
    blocks whose members have a successor in the last split block are
    re-examined.
    """
    r = reachable_restriction(m)
    c = require_valid(r)
    n, nh, nl = c.n, len(r.actions_h), len(r.actions_l)

    preds = [set() for _ in range(n)]
    for s in range(n):
        for row in c.succ[s]:
            for targets in row:
                for t in targets:
                    preds[t].add(s)

    block_of = [0] * n
    blocks: dict = {}
    next_id = 0
    for o in range(len(r.observations)):
        members = [s for s in range(n) if c.obs_l[s] == o]
        if members:
            blocks[next_id] = members
            for s in members:
                block_of[s] = next_id
            next_id += 1

    sig: list = [None] * n

    def signature(s):
        out = sig[s]
        if out is None:
            out = sig[s] = tuple(
                tuple(frozenset(block_of[t] for t in c.succ[s][h][l]) for l in range(nl))
                for h in range(nh)
            )
        return out

    def examine(bid):
        members = blocks[bid]
        for s in members:
            R = signature(s)
            for l in range(nl):
                for h in range(1, nh):
                    if R[h][l] != R[0][l]:
                        return ("reflexive", s, 0, h, l)
        # R no longer depends on H's action; compare under the least one
        for l in range(nl):
            groups: dict = {}
            for s in members:
                groups.setdefault(signature(s)[0][l], []).append(s)
            if len(groups) > 1:
                return ("split", l, list(groups.values()))
        return None

    status: dict = {}
    dirty = set(blocks)
    splits = 0
    while True:
        for bid in dirty:
            if bid in blocks:
                status[bid] = examine(bid)
        dirty.clear()
        pending = [bid for bid, st in status.items() if st is not None]
        if not pending:
            break
        bid = min(pending, key=lambda b: blocks[b][0])
        st = status.pop(bid)
        if st[0] == "reflexive":
            _, s, h1, h2, l = st
            cex = ReflexivityViolation(r.states[s], r.actions_h[h1], r.actions_h[h2], r.actions_l[l])
            return Verdict("res", Status.VIOLATES, cex,
                           {"splits": splits, "blocks": len(blocks), "states": n})
        old = blocks.pop(bid)
        for group in st[2]:
            blocks[next_id] = group
            for s in group:
                block_of[s] = next_id
            dirty.add(next_id)
            next_id += 1
        for t in old:
            for s in preds[t]:
                if sig[s] is not None:
                    sig[s] = None
                    dirty.add(block_of[s])
        splits += 1

    partition = Partition.of([[r.states[s] for s in b] for b in blocks.values()])
    if debug:
        assert is_unwinding(m, partition.as_relation()), "stable partition is not an unwinding"
    return Verdict("res", Status.SATISFIES, partition,
                   {"splits": splits, "blocks": len(blocks), "states": n})


def is_unwinding(m: Machine, rel: Iterable[tuple]) -> bool:
    """Check the three unwinding conditions for an explicit symmetric relation."""
    c = require_valid(m)
    rel = set(rel)
    for s, t in rel:
        if s not in c.state_index or t not in c.state_index:
            raise MachineError(f"relation mentions unknown state in {(s, t)!r}")
        if (t, s) not in rel:
            raise ValueError(f"relation is not symmetric: {(s, t)!r}")
    if (m.initial, m.initial) not in rel:
        return False
    related: dict = {}
    for s, t in rel:
        related.setdefault(c.state_index[s], set()).add(c.state_index[t])
    for s, partners in related.items():
        for t in partners:
            if c.obs_l[s] != c.obs_l[t]:
                return False
            for a3 in range(len(m.actions_l)):
                for a1 in range(len(m.actions_h)):
                    for s2 in c.succ[s][a1][a3]:
                        close = related.get(s2, ())
                        for a2 in range(len(m.actions_h)):
                            if not any(t2 in close for t2 in c.succ[t][a2][a3]):
                                return False
    return True


def largest_unwinding(m: Machine) -> frozenset:
    """The largest unwinding as a set of pairs, empty when none exists."""
    verdict = check_res(m)
    return verdict.evidence.as_relation() if verdict.satisfied else frozenset()


__all__ = ["Partition", "ReflexivityViolation", "check_res", "is_unwinding",
           "largest_unwinding"]
