import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotplan.errors import ActionError, TopologyError
from knotplan.topology import (
    CrossAction,
    CrossingEncounter,
    R1Action,
    R2Action,
    TopologicalState,
    action_from_json_obj,
    action_from_label,
    action_label,
    action_to_json_obj,
    apply_action,
    canonicalize,
    enumerate_actions,
    mirror_topo,
    reverse_topo,
    trivial_state,
)

S = TopologicalState.from_tuples


def chain(*actions):
    state = trivial_state()
    for a in actions:
        state = apply_action(state, a)
    return state


# -- canonicalize -----------------------------------------------------------


def test_canonicalize_trivial():
    assert canonicalize(trivial_state()) == trivial_state()


def test_canonicalize_renumbers_by_first_encounter():
    state = S([(7, "o", 1), (7, "u", 1)])
    assert canonicalize(state) == S([(1, "o", 1), (1, "u", 1)])


def test_canonicalize_idempotent():
    state = chain(R1Action(0, 1, 1), CrossAction(0, 1, 1))
    assert canonicalize(state) == state


def test_canonicalize_rejects_unpaired_id():
    with pytest.raises(TopologyError):
        canonicalize(S([(1, "o", 1), (1, "u", 1), (2, "o", 1), (3, "u", 1)]))


def test_canonicalize_rejects_mismatched_signs():
    with pytest.raises(TopologyError):
        canonicalize(S([(1, "o", 1), (1, "u", -1)]))


def test_canonicalize_rejects_equal_verticals():
    with pytest.raises(TopologyError):
        canonicalize(S([(1, "o", 1), (1, "o", 1)]))


# -- apply_action -----------------------------------------------------------


def test_r1_loop_from_trivial():
    # dragged strand lands on top: second encounter is the over one
    assert chain(R1Action(0, 1, 1)) == S([(1, "u", 1), (1, "o", 1)])
    assert chain(R1Action(0, -1, 1)) == S([(1, "o", 1), (1, "u", 1)])


def test_r1_signs_uniform():
    state = chain(R1Action(0, 1, -1))
    assert all(e.sign == -1 for e in state)


def test_cross_not_applicable_on_trivial():
    with pytest.raises(ActionError):
        apply_action(trivial_state(), CrossAction(0, 0, 1))


def test_cross_needs_end_segment():
    state = chain(R1Action(0, 1, 1), CrossAction(0, 1, 1))  # 2 crossings, segs 0..4
    with pytest.raises(ActionError):
        apply_action(state, CrossAction(1, 3, 1))


def test_overhand_chain_is_alternating_trefoil():
    state = chain(R1Action(0, 1, 1), CrossAction(0, 1, 1), CrossAction(2, 0, 1))
    assert state == S(
        [(1, "u", 1), (2, "o", 1), (3, "u", 1), (1, "o", 1), (2, "u", 1), (3, "o", 1)]
    )


def test_r2_adds_opposite_signs():
    state = chain(R2Action(0, 0, 1, 1))
    assert state == S([(1, "o", 1), (2, "o", -1), (1, "u", 1), (2, "u", -1)])


def test_r2_distinct_segments():
    base = chain(R1Action(0, 1, 1))
    state = apply_action(base, R2Action(0, 2, 1, 1))
    state.validate()
    assert state.num_crossings == 3
    signs = {}
    for e in state:
        signs[e.crossing_id] = e.sign
    # the two new crossings carry opposite signs, the old one keeps its own
    assert sorted(signs.values()) == [-1, 1, 1]


def test_apply_rejects_out_of_range_index():
    with pytest.raises(ActionError):
        apply_action(trivial_state(), R1Action(1, 1, 1))


# -- enumerate_actions ------------------------------------------------------


def test_enumerate_trivial_max3():
    actions = enumerate_actions(trivial_state(), 3)
    r1s = [a for a in actions if isinstance(a, R1Action)]
    r2s = [a for a in actions if isinstance(a, R2Action)]
    crosses = [a for a in actions if isinstance(a, CrossAction)]
    assert sorted(r1s) == sorted(R1Action(0, l, s) for l in (-1, 1) for s in (-1, 1))
    assert sorted(r2s) == sorted(R2Action(0, 0, l, f) for l in (-1, 1) for f in (-1, 1))
    assert crosses == []


def test_enumerate_no_headroom_is_empty():
    state = chain(R1Action(0, 1, 1))
    assert enumerate_actions(state, state.num_crossings) == []


def test_enumerate_cross_requires_end_on_one_crossing_state():
    state = chain(R1Action(0, 1, 1))
    crosses = [a for a in enumerate_actions(state, 2) if isinstance(a, CrossAction)]
    assert crosses
    for a in crosses:
        assert a.over_index in (0, 2) or a.under_index in (0, 2)
        assert a.over_index != a.under_index


def test_enumerate_no_duplicates():
    state = chain(R1Action(0, 1, 1))
    actions = enumerate_actions(state, 4)
    assert len(actions) == len(set(actions))


def test_enumerate_successors_within_budget():
    state = chain(R1Action(0, 1, 1))
    for a in enumerate_actions(state, 3):
        assert apply_action(state, a).num_crossings <= 3


# -- mirror / reverse -------------------------------------------------------


def test_mirror_state_flips_signs():
    assert mirror_topo(S([(1, "o", 1), (1, "u", 1)])) == S([(1, "o", -1), (1, "u", -1)])


def test_mirror_action_examples():
    assert mirror_topo(R1Action(0, 1, 1)) == R1Action(0, -1, -1)
    assert mirror_topo(CrossAction(2, 0, 1)) == CrossAction(2, 0, -1)


def test_reverse_action_examples():
    assert reverse_topo(R2Action(0, 0, 1, 1), crossings=0) == R2Action(0, 0, -1, -1)
    assert reverse_topo(R1Action(0, 1, 1), crossings=0) == R1Action(0, -1, 1)
    assert reverse_topo(CrossAction(2, 0, 1), crossings=2) == CrossAction(2, 4, 1)


def test_reverse_trivial_state():
    assert reverse_topo(trivial_state()) == trivial_state()


# -- random reachable states for property tests -----------------------------


@st.composite
def reachable_states(draw, max_actions=3, max_crossings=4):
    state = trivial_state()
    n = draw(st.integers(0, max_actions))
    for _ in range(n):
        actions = enumerate_actions(state, max_crossings)
        if not actions:
            break
        state = apply_action(state, actions[draw(st.integers(0, len(actions) - 1))])
    return state


@st.composite
def state_action_pairs(draw, max_crossings=4):
    state = draw(reachable_states(max_actions=2, max_crossings=max_crossings - 2))
    actions = enumerate_actions(state, max_crossings)
    action = actions[draw(st.integers(0, len(actions) - 1))]
    return state, action


@settings(max_examples=200, deadline=None)
@given(reachable_states())
def test_mirror_involution_on_states(state):
    assert mirror_topo(mirror_topo(state)) == state


@settings(max_examples=200, deadline=None)
@given(reachable_states())
def test_reverse_involution_on_states(state):
    assert reverse_topo(reverse_topo(state)) == state


@settings(max_examples=200, deadline=None)
@given(state_action_pairs())
def test_mirror_involution_on_actions(pair):
    _, action = pair
    assert mirror_topo(mirror_topo(action)) == action


@settings(max_examples=200, deadline=None)
@given(state_action_pairs())
def test_reverse_involution_on_actions(pair):
    state, action = pair
    k = state.num_crossings
    assert reverse_topo(reverse_topo(action, crossings=k), crossings=k) == action


@settings(max_examples=300, deadline=None)
@given(state_action_pairs())
def test_apply_commutes_with_mirror(pair):
    state, action = pair
    lhs = apply_action(mirror_topo(state), mirror_topo(action))
    rhs = mirror_topo(apply_action(state, action))
    assert lhs == rhs


@settings(max_examples=300, deadline=None)
@given(state_action_pairs())
def test_apply_commutes_with_reverse(pair):
    state, action = pair
    lhs = apply_action(reverse_topo(state), reverse_topo(action, crossings=state.num_crossings))
    rhs = reverse_topo(apply_action(state, action))
    assert lhs == rhs


@settings(max_examples=300, deadline=None)
@given(state_action_pairs())
def test_successors_are_canonical_and_valid(pair):
    state, action = pair
    succ = apply_action(state, action)
    succ.validate()
    assert succ.is_canonical()
    assert succ.num_crossings == state.num_crossings + (
        2 if isinstance(action, R2Action) else 1
    )


@settings(max_examples=200, deadline=None)
@given(reachable_states())
def test_canonicalize_preserves_multiset_structure(state):
    canon = canonicalize(state)
    assert sorted((e.vertical, e.sign) for e in canon) == sorted(
        (e.vertical, e.sign) for e in state
    )


# -- serialization ----------------------------------------------------------


def test_state_json_roundtrip():
    state = chain(R1Action(0, 1, 1), CrossAction(0, 1, 1))
    assert TopologicalState.from_json(state.to_json()) == state
    assert state.to_json_obj()["encounters"][0] == {"id": 1, "v": "o", "s": 1}


def test_action_json_roundtrip():
    for action in (R1Action(0, 1, -1), R2Action(0, 0, 1, -1), CrossAction(2, 0, 1)):
        assert action_from_json_obj(action_to_json_obj(action)) == action


def test_action_labels_roundtrip():
    for action in (R1Action(0, 1, 1), R2Action(1, 3, -1, 1), CrossAction(2, 4, -1)):
        assert action_from_label(action_label(action)) == action


def test_encounter_validation():
    with pytest.raises(TopologyError):
        CrossingEncounter(0, "o", 1)
    with pytest.raises(TopologyError):
        CrossingEncounter(1, "x", 1)
    with pytest.raises(TopologyError):
        CrossingEncounter(1, "o", 2)
