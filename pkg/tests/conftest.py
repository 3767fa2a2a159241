import pytest

from syncflow.machine import H, L, fixture_fig1, fixture_fig2, make_machine, single_state_machine


@pytest.fixture
def fig1():
    return fixture_fig1()


@pytest.fixture
def fig2():
    return fixture_fig2()


@pytest.fixture
def loop2():
    """One state, two H actions, one L action, self-loops everywhere."""
    return single_state_machine(actions_h="01", actions_l="0")


def tiny(states, trans, obs_l, obs_h=None, ah="01", al="0", observations="01"):
    """Small machine helper: ``obs_l``/``obs_h`` are strings indexed like ``states``."""
    obs_h = obs_h or "0" * len(states)
    obs = {s: {H: obs_h[i], L: obs_l[i]} for i, s in enumerate(states)}
    return make_machine(states, states[0], ah, al, obs, trans, observations=observations)
