"""Seeded random machines, automata and games for tests and benchmarks."""

from __future__ import annotations

import random

from .machine import H, L, Machine, make_machine
from .reductions import Nfa, PeekInstance


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_machine(seed, n_states: int = 4, n_h: int = 2, n_l: int = 2, n_obs: int = 2,
                   max_out: int = 2, h_blind: bool = False, h_dependence: float = 1.0) -> Machine:
    """Random input-enabled machine with 1..max_out successors per joint action.

    Each (state, L action) row depends on H's action with probability
    ``h_dependence``; ``h_blind`` sets it to zero.  Rows that ignore H make
    machines satisfying the properties common enough to be useful.
    """
    rng = _rng(seed)
    if h_blind:
        h_dependence = 0.0
    states = [f"s{i}" for i in range(n_states)]
    ah = [str(i) for i in range(n_h)]
    al = [chr(ord("a") + i) for i in range(n_l)]
    observations = [str(i) for i in range(n_obs)]
    obs = {s: {H: rng.choice(observations), L: rng.choice(observations)} for s in states}
    trans = set()
    for s in states:
        for b in al:
            depends = h_dependence >= 1.0 or rng.random() < h_dependence
            shared = None
            for a in ah:
                if shared is None or depends:
                    k = rng.randint(1, min(max_out, n_states))
                    shared = rng.sample(states, k)
                for t in shared:
                    trans.add((s, a, b, t))
    return make_machine(states, "s0", ah, al, obs, trans, observations=observations)


def random_envelope_machine(seed, max_states: int = 4, max_h: int = 2, max_l: int = 2,
                            max_obs: int = 2) -> Machine:
    """Random machine inside the given caps, biased towards the largest sizes.

    H's influence is all, none or sparse in equal shares, so that machines
    separating RES from NDS show up in a few hundred samples.
    """
    rng = _rng(seed)

    def dim(cap):
        return cap if rng.random() < 0.75 else rng.randint(1, cap)

    return random_machine(
        rng,
        n_states=dim(max_states),
        n_h=dim(max_h),
        n_l=dim(max_l),
        n_obs=dim(max_obs),
        h_dependence=rng.choice((0.0, 0.15, 1.0)),
    )


def random_nfa(seed, n_states: int = 3, alphabet: str = "ab", p_edge: float = 0.4,
               p_final: float = 0.4) -> Nfa:
    rng = _rng(seed)
    states = [f"q{i}" for i in range(n_states)]
    initial = [q for q in states if rng.random() < 0.5] or [states[0]]
    final = [q for q in states if rng.random() < p_final]
    edges = [(q, x, t) for q in states for x in alphabet for t in states if rng.random() < p_edge]
    return Nfa.from_edges(states, initial, alphabet, edges, final)


def all_nfas(n_states: int = 2, alphabet: str = "ab"):
    """Every NFA over the given states and letters (initial set nonempty)."""
    states = [f"q{i}" for i in range(n_states)]
    slots = [(q, x, t) for q in states for x in alphabet for t in states]
    subsets = range(1, 2 ** n_states)
    for init_mask in subsets:
        initial = [q for i, q in enumerate(states) if init_mask >> i & 1]
        for fin_mask in range(2 ** n_states):
            final = [q for i, q in enumerate(states) if fin_mask >> i & 1]
            for edge_mask in range(2 ** len(slots)):
                edges = [e for i, e in enumerate(slots) if edge_mask >> i & 1]
                yield Nfa.from_edges(states, initial, alphabet, edges, final)


def random_clause(rng: random.Random, n: int) -> list:
    out = []
    for k in range(1, n + 1):
        r = rng.random()
        if r < 0.35:
            out.append(k)
        elif r < 0.7:
            out.append(-k)
    return out


def random_peek(seed, n: int = 2, n1: int = 1, h1: int = 1, h2: int = 1) -> PeekInstance:
    rng = _rng(seed)
    return PeekInstance(
        n, n1,
        [random_clause(rng, n) for _ in range(h1)],
        [random_clause(rng, n) for _ in range(h2)],
        [rng.randint(0, 1) for _ in range(n)],
    )
