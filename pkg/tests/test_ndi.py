from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from syncflow.gen import random_envelope_machine, random_machine
from syncflow.machine import L, View, is_possible_view, single_state_machine
from syncflow.ndi import NdiWitness, check_ndi, delta_abo, ndi_witness_replay
from syncflow.oracle import brute_ndi, knowledge_table
from syncflow.reductions import Nfa, nfa_to_machine


def ends_in_a():
    return Nfa.from_edges(["p", "q"], ["p"], "ab",
                          [("p", "a", "p"), ("p", "b", "p"), ("p", "a", "q")], ["q"])


def test_delta_empty(fig1):
    assert delta_abo(fig1, set(), "0", "0", "0") == frozenset()


def test_delta_fig1(fig1):
    # s1 -(1,0)-> s4 shows L 1; s2 -(1,0)-> s3 shows L 0
    assert delta_abo(fig1, {"s1", "s2"}, "1", "0", "1") == {"s4"}
    assert delta_abo(fig1, {"s1", "s2"}, "1", "0", "0") == {"s3"}


def test_delta_unknown_identifier(fig1):
    with pytest.raises(ValueError):
        delta_abo(fig1, {"s0"}, "7", "0", "0")


def test_fixture_verdicts(fig1, fig2):
    assert check_ndi(fig1).satisfied
    assert check_ndi(fig2).satisfied
    assert check_ndi(single_state_machine("01", "ab")).satisfied


def test_nfa_ending_in_a_violates():
    v = check_ndi(nfa_to_machine(ends_in_a()))
    assert v.violated
    # shortest: H picks the automaton branch, L sees 1 right after 'a'
    assert v.evidence == NdiWitness(("h",), View(L, ("0", "a", "1")))
    assert ndi_witness_replay(nfa_to_machine(ends_in_a()), v.evidence)


def test_replay_rejects_bad_lengths(fig1):
    with pytest.raises(ValueError):
        ndi_witness_replay(fig1, NdiWitness(("0",), View(L, tuple("00000"))))
    with pytest.raises(ValueError):
        ndi_witness_replay(fig1, NdiWitness(("0", "9"), View(L, tuple("00000"))))


def test_replay_example_pair_is_realizable(fig1):
    # 00000 arises with H actions 10 along s0 s1 s3
    assert not ndi_witness_replay(fig1, NdiWitness(("1", "0"), View(L, tuple("00000"))))


def test_resource_cap():
    m = nfa_to_machine(Nfa.from_edges(["p"], ["p"], "ab", [("p", "a", "p"), ("p", "b", "p")], ["p"]))
    assert check_ndi(m, max_states=2).exceeded


def test_lexicographic_tie_break_is_stable():
    m = random_machine(3, n_states=4)
    assert check_ndi(m) == check_ndi(m)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 100_000), data=st.data())
def test_delta_distributes_and_is_monotone(seed, data):
    m = random_envelope_machine(seed)
    subsets = st.sets(st.sampled_from(m.states))
    t1, t2 = data.draw(subsets), data.draw(subsets)
    for a, b, o in product(m.actions_h, m.actions_l, m.observations):
        d1, d2 = delta_abo(m, t1, a, b, o), delta_abo(m, t2, a, b, o)
        assert delta_abo(m, t1 | t2, a, b, o) == d1 | d2
        assert delta_abo(m, t1 & t2, a, b, o) <= d1 & d2


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_delta_matches_run_knowledge(seed):
    # K(alpha a, v b o) = delta_{a,b,o}(K(alpha, v)), K computed from enumerated runs
    m = random_envelope_machine(seed, max_states=3)
    table = knowledge_table(m, 4)
    know: dict = {}
    for (hv, lv), states in table.items():
        key = (hv.actions, lv)
        know[key] = know.get(key, frozenset()) | states
    for (alpha, v), K in know.items():
        if len(v) == 4:
            continue
        for a, b, o in product(m.actions_h, m.actions_l, m.observations):
            longer = know.get((alpha + (a,), v.extend(b, o)), frozenset())
            assert delta_abo(m, K, a, b, o) == longer


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 1_000_000))
def test_agrees_with_oracle_and_witness_replays(seed):
    m = random_envelope_machine(seed, max_states=3)
    mine, ref = check_ndi(m), brute_ndi(m)
    assert mine.status == ref.status
    if mine.violated:
        w = mine.evidence
        assert ndi_witness_replay(m, w)
        assert is_possible_view(m, w.l_view)
        # both searches are breadth first, so witness lengths agree
        assert len(w.h_actions) == len(ref.evidence.h_actions)
        # no strict prefix already has an empty knowledge set
        for i in range(len(w.h_actions)):
            assert not ndi_witness_replay(m, NdiWitness(w.h_actions[:i], w.l_view.prefix(i)))
        assert len(w.h_actions) <= len(m.states) * 2 ** len(m.states)
