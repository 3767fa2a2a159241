"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (visible in ``pytest -v`` output)
before asserting.
"""

import time

import pytest

from syncflow.gen import all_nfas, random_envelope_machine, random_machine, random_nfa, random_peek
from syncflow.machine import fixture_fig1, fixture_fig2, is_possible_view, l_view_language
from syncflow.ndi import check_ndi, ndi_witness_replay
from syncflow.nds import check_nds, strategy_excludes
from syncflow.oracle import brute_ndi, brute_nds, brute_res
from syncflow.reductions import PeekOutcome, nfa_to_machine, nfa_universal, peek_to_machine, solve_peek
from syncflow.report import bench_res, fit_exponent
from syncflow.res import check_res, is_unwinding

CONTAINMENT_SEEDS = range(1000, 2000)
PEEK_INSTANCES = 20


@pytest.fixture
def report(capsys):
    def emit(number, name, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok
    return emit


def test_1_fixture_verdicts(report):
    t0 = time.perf_counter()
    fig1, fig2 = fixture_fig1(), fixture_fig2()
    got = {
        "ndi(fig1)": check_ndi(fig1).satisfied,
        "nds(fig1)": check_nds(fig1).violated,
        "nds(fig2)": check_nds(fig2).satisfied,
        "res(fig2)": check_res(fig2).violated,
        "res(fig1)": check_res(fig1).violated,
        "ndi(fig2)": check_ndi(fig2).satisfied,
    }
    elapsed = time.perf_counter() - t0
    ok = all(got.values()) and elapsed < 1.0
    wrong = [k for k, v in got.items() if not v]
    assert report(1, "fixture verdicts", ok, f"{elapsed:.3f}s, wrong: {wrong or 'none'}")


def test_2_containment(report):
    t0 = time.perf_counter()
    violations, exceeded, combos = [], 0, {}
    for seed in CONTAINMENT_SEEDS:
        m = random_envelope_machine(seed)
        nds = check_nds(m, max_states=2 ** 18)
        if nds.exceeded:
            exceeded += 1
            continue
        res, ndi = check_res(m), check_ndi(m)
        key = (res.status.value, nds.status.value, ndi.status.value)
        combos[key] = combos.get(key, 0) + 1
        if (res.satisfied and not nds.satisfied) or (nds.satisfied and not ndi.satisfied):
            violations.append(seed)
    fig1, fig2 = fixture_fig1(), fixture_fig2()
    strict = (check_ndi(fig1).satisfied and check_nds(fig1).violated
              and check_nds(fig2).satisfied and check_res(fig2).violated)
    elapsed = time.perf_counter() - t0
    n = len(CONTAINMENT_SEEDS)
    ok = not violations and strict and exceeded < 0.05 * n and elapsed < 300
    assert report(2, "RES => NDS => NDI containment", ok,
                  f"{n} machines, {exceeded} exceeded, {len(violations)} violations, "
                  f"strict={strict}, {elapsed:.1f}s, verdict mix {sorted(combos.items())}")


def test_3_oracle_equivalence(report):
    t0 = time.perf_counter()
    bad = {"ndi": [], "res": [], "nds": []}
    for seed in range(500):
        m = random_envelope_machine(seed, max_states=3)
        if check_ndi(m).status != brute_ndi(m).status:
            bad["ndi"].append(seed)
    for seed in range(500):
        m = random_envelope_machine(20_000 + seed, max_states=4)
        mine = check_res(m)
        ref, survivors = brute_res(m)
        if mine.status != ref.status or (
                mine.satisfied and any(not s <= mine.evidence.as_relation() for s in survivors)):
            bad["res"].append(seed)
    for seed in range(150):
        m = random_envelope_machine(40_000 + seed, max_states=2, max_l=1)
        if check_nds(m, max_depth=3).status != brute_nds(m, 3).status:
            bad["nds"].append(seed)
    elapsed = time.perf_counter() - t0
    ok = not any(bad.values()) and elapsed < 600
    assert report(3, "oracle equivalence", ok,
                  f"ndi 500, res 500, nds 150 seeds; disagreements "
                  f"{ {k: len(v) for k, v in bad.items()} }, {elapsed:.1f}s")


def test_4_nfa_reduction(report):
    t0 = time.perf_counter()
    disagreements, count = 0, 0
    for a in all_nfas(2, "ab"):
        count += 1
        if check_ndi(nfa_to_machine(a)).satisfied != nfa_universal(a):
            disagreements += 1
    universal = 0
    for seed in range(300):
        a = random_nfa(seed, n_states=3 + seed % 2, p_edge=0.5, p_final=0.6)
        count += 1
        u = nfa_universal(a)
        universal += u
        if check_ndi(nfa_to_machine(a)).satisfied != u:
            disagreements += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and elapsed < 300
    assert report(4, "NFA universality reduction", ok,
                  f"{count} NFAs (all 2-state plus 300 random, {universal} random universal), "
                  f"{disagreements} disagreements, {elapsed:.1f}s")


def test_5_peek_reduction(report):
    t0 = time.perf_counter()
    completed, exceeded, disagreements, wins = 0, 0, 0, 0
    for seed in range(PEEK_INSTANCES):
        g = random_peek(500 + seed, n=2, n1=1, h1=1, h2=1)
        v = check_nds(peek_to_machine(g), max_states=2 ** 20)
        if v.exceeded:
            exceeded += 1
            continue
        completed += 1
        outcome = solve_peek(g).outcome
        wins += outcome is PeekOutcome.WIN
        if (outcome is PeekOutcome.WIN) != v.violated:
            disagreements += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and completed >= 5
    assert report(5, "BLIND-PEEK reduction", ok,
                  f"{PEEK_INSTANCES} instances, {completed} completed ({wins} player-1 wins), {exceeded} exceeded, "
                  f"{disagreements} disagreements, {elapsed:.1f}s")


def test_6_res_scaling(report):
    m = random_machine(2024, n_states=1000, n_h=2, n_l=2, h_blind=True)
    t0 = time.perf_counter()
    v = check_res(m)
    big = time.perf_counter() - t0
    m2 = random_machine(2025, n_states=1000, n_h=2, n_l=2)
    t0 = time.perf_counter()
    check_res(m2)
    big2 = time.perf_counter() - t0
    rows = bench_res((100, 200, 400, 800), seed=1, reps=3)
    slope = fit_exponent(rows)
    ok = big < 10 and big2 < 10 and slope <= 3.5
    assert report(6, "RES polynomial scaling", ok,
                  f"1000 states: {big:.2f}s ({v.status.value}) and {big2:.2f}s; "
                  f"fitted exponent {slope:.2f}")


def test_7_witness_integrity(report):
    ndi_n = ndi_ok = nds_n = nds_ok = res_n = res_ok = 0
    for seed in range(300):
        m = random_envelope_machine(60_000 + seed)
        ndi = check_ndi(m)
        if ndi.violated:
            ndi_n += 1
            ndi_ok += ndi_witness_replay(m, ndi.evidence)
        nds = check_nds(m, max_states=2 ** 18)
        if nds.violated:
            w = nds.evidence
            nds_n += 1
            nds_ok += (strategy_excludes(m, w.strategy, w.excluded_view)
                       and is_possible_view(m, w.excluded_view)
                       and w.excluded_view in l_view_language(m, len(w.excluded_view)))
        res = check_res(m)
        if res.satisfied:
            res_n += 1
            res_ok += is_unwinding(m, res.evidence.as_relation())
    ok = ndi_ok == ndi_n and nds_ok == nds_n and res_ok == res_n and min(ndi_n, nds_n, res_n) > 0
    assert report(7, "witness integrity", ok,
                  f"ndi {ndi_ok}/{ndi_n}, nds {nds_ok}/{nds_n}, res {res_ok}/{res_n}")


def test_8_ndi_witness_bound(report):
    longest, count, over = 0, 0, []
    for seed in range(300):
        m = random_envelope_machine(60_000 + seed)
        v = check_ndi(m)
        if v.violated:
            count += 1
            n = len(v.evidence.h_actions)
            longest = max(longest, n)
            if n > len(m.states) * 2 ** len(m.states):
                over.append(seed)
    ok = not over and count > 0
    assert report(8, "NDI witness length bound", ok,
                  f"{count} witnesses, longest {longest}, {len(over)} over |S|*2^|S|")
