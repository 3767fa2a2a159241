"""Hard instance families: NFA universality and BLIND-PEEK games.

``nfa_to_machine`` builds a scheduled machine that satisfies NDI exactly when
the automaton accepts every word.  ``peek_to_machine`` builds a scheduled
machine in which some H strategy excludes an L view exactly when player 1
has a blindfold winning strategy.  Both source problems come with exact
reference solvers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Mapping, Sequence

from .machine import (H, L, Machine, MachineError, ResourceLimitExceeded, expand_scheduled,
                      make_machine)

FRESH = ("s0", "s1", "s2", "s3")
HA, HB = "h", "h'"


# -- NFA universality ------------------------------------------------------

@dataclass(frozen=True)
class Nfa:
    states: tuple
    initial: frozenset
    alphabet: tuple
    delta: Mapping  # (q, a) -> frozenset of states; missing keys mean no move
    final: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(sorted(set(self.states))))
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        delta = {}
        for (q, a), targets in dict(self.delta).items():
            if targets:
                delta[(q, a)] = frozenset(targets) | delta.get((q, a), frozenset())
        object.__setattr__(self, "delta", delta)
        self.validate()

    @classmethod
    def from_edges(cls, states, initial, alphabet, edges, final) -> "Nfa":
        delta: dict = {}
        for q, a, q2 in edges:
            delta.setdefault((q, a), set()).add(q2)
        return cls(tuple(states), frozenset(initial), tuple(alphabet), delta, frozenset(final))

    def validate(self):
        qs = set(self.states)
        if not self.alphabet:
            raise MachineError("NFA alphabet is empty")
        bad = (set(self.initial) | set(self.final)) - qs
        for (q, a), targets in self.delta.items():
            if q not in qs:
                bad.add(q)
            if a not in self.alphabet:
                raise MachineError(f"NFA letter {a!r} not in alphabet")
            bad |= set(targets) - qs
        if bad:
            raise MachineError(f"NFA mentions unknown states {sorted(bad)!r}")

    def step(self, qs, a) -> frozenset:
        out = set()
        for q in qs:
            out |= self.delta.get((q, a), frozenset())
        return frozenset(out)

    def edges(self) -> list:
        return sorted((q, a, t) for (q, a), ts in self.delta.items() for t in ts)

    def accepts(self, word: Sequence[str]) -> bool:
        cur = self.initial
        for a in word:
            cur = self.step(cur, a)
        return bool(cur & self.final)


def _fresh_names(nfa: Nfa) -> dict:
    """Rename NFA states that clash with the four added states."""
    taken = set(nfa.states) | set(FRESH)
    ren = {}
    for q in nfa.states:
        if q in FRESH:
            new = q
            while new in taken:
                new += "'"
            taken.add(new)
            ren[q] = new
        else:
            ren[q] = q
    return ren


def nfa_to_machine(a: Nfa) -> Machine:
    """The scheduled machine M(A): H picks the branch at s0, L spells a word afterwards."""
    ren = _fresh_names(a)
    q_states = [ren[q] for q in a.states]
    s0, s1, s2, s3 = FRESH
    states = q_states + list(FRESH)
    ah, al = (HA, HB), a.alphabet

    edges = [(s0, H, HA, ren[q]) for q in sorted(a.initial)]
    if a.initial & a.final:
        edges.append((s0, H, HA, s2))
    if not a.initial:
        # keep the machine input-enabled; the h branch then rejects everything
        edges.append((s0, H, HA, s3))
    edges += [(s0, H, HB, s1), (s0, H, HB, s2)]
    for x in al:
        edges += [(s1, L, x, s1), (s1, L, x, s2), (s2, L, x, s2), (s3, L, x, s3)]
        for q in a.states:
            targets = a.delta.get((q, x), frozenset())
            edges += [(ren[q], L, x, ren[t]) for t in targets]
            if targets & a.final:
                edges.append((ren[q], L, x, s2))
            if not targets:
                edges.append((ren[q], L, x, s3))

    obs = {s: {H: "0", L: "1" if s == s2 else "0"} for s in states}
    trans = expand_scheduled(states, ah, al, edges)
    return make_machine(states, s0, ah, al, obs, trans, observations=("0", "1"))


def nfa_universal(a: Nfa, max_sets: int | None = None) -> bool:
    """Subset construction; the empty set counts as a rejecting state."""
    start = a.initial
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if not cur & a.final:
            return False
        for x in a.alphabet:
            nxt = a.step(cur, x)
            if nxt not in seen:
                seen.add(nxt)
                if max_sets is not None and len(seen) > max_sets:
                    raise ResourceLimitExceeded("determinized state cap reached", len(seen))
                queue.append(nxt)
    return True


# -- BLIND-PEEK ------------------------------------------------------------

@dataclass(frozen=True)
class PeekInstance:
    n: int
    n1: int
    phi1: tuple  # clauses of signed plate indices
    phi2: tuple
    nu0: tuple   # 0/1 per plate, plate k at index k-1

    def __post_init__(self):
        for name in ("phi1", "phi2"):
            object.__setattr__(self, name, tuple(tuple(int(x) for x in cl) for cl in getattr(self, name)))
        object.__setattr__(self, "nu0", tuple(int(x) for x in self.nu0))
        self.validate()

    def validate(self):
        if self.n < 1 or not 0 <= self.n1 < self.n:
            raise MachineError(f"need 0 <= n1 < n, got n={self.n}, n1={self.n1}")
        if len(self.nu0) != self.n or any(b not in (0, 1) for b in self.nu0):
            raise MachineError("nu0 must be a 0/1 list with one entry per plate")
        for phi in (self.phi1, self.phi2):
            for clause in phi:
                props = [abs(x) for x in clause]
                if any(x == 0 or abs(x) > self.n for x in clause):
                    raise MachineError(f"literal out of range in clause {list(clause)}")
                if len(set(props)) != len(props):
                    raise MachineError(f"clause {list(clause)} repeats a proposition")

    @property
    def h1(self) -> int:
        return len(self.phi1)

    @property
    def h2(self) -> int:
        return len(self.phi2)

    def moves(self, player: int) -> tuple:
        plates = range(1, self.n1 + 1) if player == 1 else range(self.n1 + 1, self.n + 1)
        return tuple(f"move{i}" for i in plates) + ("Pass",)

    def formula(self, player: int) -> tuple:
        return self.phi1 if player == 1 else self.phi2


def satisfies(phi, nu: Sequence[int]) -> bool:
    return any(all((nu[abs(x) - 1] == 1) == (x > 0) for x in clause) for clause in phi)


def apply_move(nu: tuple, move: str) -> tuple:
    if move == "Pass":
        return nu
    i = int(move[4:]) - 1
    return nu[:i] + (1 - nu[i],) + nu[i + 1:]


def open_predicate(g: PeekInstance, player: int, hole: int, plate: int, pos: int) -> bool:
    """Plate ``plate`` in position ``pos`` does not block hole ``hole`` of ``player``."""
    if player not in (1, 2):
        raise MachineError(f"player must be 1 or 2, got {player!r}")
    phi = g.formula(player)
    if not 1 <= hole <= len(phi):
        raise MachineError(f"player {player} has no hole {hole}")
    if not 1 <= plate <= g.n:
        raise MachineError(f"no plate {plate}")
    clause = phi[hole - 1]
    if plate in clause:
        return pos == 1
    if -plate in clause:
        return pos == 0
    return True


BOT = "bot"
WIN, ERROR = "win", "error"
TERMINAL_TAGS = ((WIN, BOT), (ERROR, BOT), (WIN, "1"), (ERROR, "1"), (ERROR, "2"))


def peek_stages(g: PeekInstance) -> tuple:
    return ("L1", "H0", "L2", BOT) + tuple(f"H{j}" for j in range(1, g.h2 + 1))


def plate_state(c, i, k, a) -> str:
    return f"{c}|{i}|{k}|{a}"


def terminal_state(c, r, x) -> str:
    return f"{c}|{r}|{x}"


def stage_of(state: str) -> str | None:
    """The clock component of an M(G) state, ``None`` for the initial state."""
    return None if state == "s0" else state.split("|", 1)[0]


def peek_to_machine(g: PeekInstance) -> Machine:
    """The scheduled machine M(G), one monitored plate per nondeterministic branch."""
    stages = peek_stages(g)
    nxt = {c: stages[(i + 1) % len(stages)] for i, c in enumerate(stages)}
    moves_all = tuple(f"move{i}" for i in range(1, g.n + 1))
    marks = moves_all + ("Pass", BOT)
    a_l = tuple(f"move{i}" for i in range(1, g.n1 + 1)) + ("checkwin",)
    a_h = tuple(f"isOpen{j}" for j in range(1, g.h1 + 1)) + tuple(
        f"isBlocking{i}" for i in range(1, g.n + 1))

    states = ["s0"]
    obs = {"s0": {H: BOT, L: BOT}}
    edges = [("s0", None, None, plate_state("L1", i, g.nu0[i - 1], BOT)) for i in range(1, g.n + 1)]

    for c, i, k, a in product(stages, range(1, g.n + 1), (0, 1), marks):
        s = plate_state(c, i, k, a)
        states.append(s)
        obs[s] = {H: a, L: BOT}
        if c == "L1":
            for j in range(1, g.n1 + 1):
                k2 = 1 - k if j == i else k
                edges.append((s, L, f"move{j}", plate_state("H0", i, k2, f"move{j}")))
            edges.append((s, L, "checkwin", plate_state("H0", i, k, "Pass")))
        elif c == "H0":
            for j in range(1, g.h1 + 1):
                r = WIN if open_predicate(g, 1, j, i, k) else ERROR
                edges.append((s, H, f"isOpen{j}", terminal_state("L2", r, BOT)))
            for j in range(1, g.n + 1):
                edges.append((s, H, f"isBlocking{j}", plate_state("L2", i, k, BOT)))
        elif c == "L2":
            edges.append((s, L, "checkwin", terminal_state(BOT, ERROR, "1")))
            edges.append((s, L, "checkwin", terminal_state(BOT, ERROR, "2")))
            for j in range(1, g.n1 + 1):
                edges.append((s, L, f"move{j}", plate_state(BOT, i, k, BOT)))
        elif c == BOT:
            for j in range(g.n1 + 1, g.n + 1):
                k2 = 1 - k if j == i else k
                edges.append((s, None, None, plate_state(nxt[c], i, k2, f"move{j}")))
            edges.append((s, None, None, plate_state(nxt[c], i, k, "Pass")))
        else:
            hole = int(c[1:])
            for j in range(1, g.h1 + 1):
                edges.append((s, H, f"isOpen{j}", terminal_state(nxt[c], ERROR, BOT)))
            for p in range(1, g.n + 1):
                if p == i and open_predicate(g, 2, hole, i, k):
                    dst = terminal_state(nxt[c], ERROR, BOT)
                else:
                    dst = plate_state(nxt[c], i, k, BOT)
                edges.append((s, H, f"isBlocking{p}", dst))

    for c, (r, x) in product(stages, TERMINAL_TAGS):
        s = terminal_state(c, r, x)
        states.append(s)
        obs[s] = {H: "end", L: x}
        if c == "L2" and x == BOT:
            edges.append((s, L, "checkwin", terminal_state(BOT, r, "1")))
            if r == ERROR:
                edges.append((s, L, "checkwin", terminal_state(BOT, r, "2")))
            for j in range(1, g.n1 + 1):
                edges.append((s, L, f"move{j}", terminal_state(nxt[c], r, x)))
        else:
            # the successor ignores the action of whichever agent is scheduled
            edges.append((s, None, None, terminal_state(nxt[c], r, x)))

    trans = expand_scheduled(states, a_h, a_l, edges)
    return make_machine(states, "s0", a_h, a_l, obs, trans)


class PeekOutcome(str, Enum):
    WIN = "win"
    LOSE = "lose"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class PeekResult:
    outcome: PeekOutcome
    moves: tuple | None = None  # a shortest winning blindfold sequence
    explored: int = 0

    @property
    def won(self) -> bool:
        return self.outcome is PeekOutcome.WIN


def solve_peek(g: PeekInstance, move_bound: int = 6, initial_undecided: bool = True,
               max_beliefs: int = 200_000) -> PeekResult:
    """Search for a shortest blindfold winning move sequence for player 1.

    Player 1 only knows its own moves, so the search runs over the set of game
    states still undecided after each of its moves.  ``WIN`` means a winning
    sequence of length <= ``move_bound`` exists; ``LOSE`` means no finite
    sequence wins at all; ``UNKNOWN`` covers a longer shortest win or the
    belief cap tripping.
    """
    nu0 = g.nu0
    if not initial_undecided:
        if satisfies(g.phi1, nu0):
            return PeekResult(PeekOutcome.WIN, (), 1)
        if satisfies(g.phi2, nu0):
            return PeekResult(PeekOutcome.LOSE, None, 1)
    m1, m2 = g.moves(1), g.moves(2)
    start = frozenset([nu0])
    parent = {start: None}
    layer = [start]
    depth = 0
    while layer:
        nxt_layer = []
        for belief in layer:
            for lam in m1:
                alive = {apply_move(nu, lam) for nu in belief}
                alive = {nu for nu in alive if not satisfies(g.phi1, nu)}
                if not alive:
                    seq = _unwind(parent, belief) + (lam,)
                    outcome = PeekOutcome.WIN if len(seq) <= move_bound else PeekOutcome.UNKNOWN
                    return PeekResult(outcome, seq if outcome is PeekOutcome.WIN else None, len(parent))
                after = set()
                lost = False
                for nu in alive:
                    for mu in m2:
                        nu2 = apply_move(nu, mu)
                        if satisfies(g.phi2, nu2):
                            lost = True
                            break
                        after.add(nu2)
                    if lost:
                        break
                if lost:
                    continue
                child = frozenset(after)
                if child in parent:
                    continue
                parent[child] = (belief, lam)
                if len(parent) > max_beliefs:
                    return PeekResult(PeekOutcome.UNKNOWN, None, len(parent))
                nxt_layer.append(child)
        layer = nxt_layer
        depth += 1
    return PeekResult(PeekOutcome.LOSE, None, len(parent))


def _unwind(parent, belief) -> tuple:
    seq = []
    while parent[belief] is not None:
        belief, lam = parent[belief]
        seq.append(lam)
    return tuple(reversed(seq))
