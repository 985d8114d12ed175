"""Symbolic rope topology: crossing sequences and the moves that grow them.

A state records the crossings met while tracing the rope head to tail.
Every crossing is met twice, once on each strand, and each encounter
stores the crossing id, whether the current strand passes over or under,
and the orientation sign of the crossing (normalized cross product of the
over-strand and under-strand directions, dotted with the vertical).

Arcs between consecutive encounters are the *segments*, indexed 0..2k for
a state with k crossings (segment 0 runs from the head to the first
encounter, segment 2k from the last encounter to the tail).

Moves only ever add crossings:

* ``R1Action`` folds a loop into one segment (one new crossing).
* ``R2Action`` pulls the middle of one segment across another segment, or
  across a second part of itself (two new crossings of opposite signs).
* ``CrossAction`` sweeps an end segment across another segment (one new
  crossing with a chosen sign).

The insertion rules used by :func:`apply_action` are a fixed geometric
convention (see the function docstring); they are validated end-to-end by
the simulator-plus-extraction tests rather than trusted by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import ActionError, TopologyError

OVER = "o"
UNDER = "u"


@dataclass(frozen=True, order=True)
class CrossingEncounter:
    """One passage through a crossing along the head-to-tail trace."""

    crossing_id: int
    vertical: str  # OVER or UNDER
    sign: int  # +1 or -1

    def __post_init__(self):
        if self.crossing_id < 1:
            raise TopologyError(f"crossing_id must be >= 1, got {self.crossing_id}")
        if self.vertical not in (OVER, UNDER):
            raise TopologyError(f"vertical must be 'o' or 'u', got {self.vertical!r}")
        if self.sign not in (1, -1):
            raise TopologyError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class TopologicalState:
    """Ordered crossing encounters traced head to tail. Immutable."""

    encounters: tuple[CrossingEncounter, ...] = ()

    @property
    def num_crossings(self) -> int:
        return len(self.encounters) // 2

    @property
    def num_segments(self) -> int:
        return len(self.encounters) + 1

    def __iter__(self) -> Iterator[CrossingEncounter]:
        return iter(self.encounters)

    def __len__(self) -> int:
        return len(self.encounters)

    def validate(self) -> None:
        """Check structural invariants (paired ids, opposite verticals, equal signs)."""
        if len(self.encounters) % 2 != 0:
            raise TopologyError("encounter sequence has odd length")
        seen: dict[int, list[CrossingEncounter]] = {}
        for enc in self.encounters:
            seen.setdefault(enc.crossing_id, []).append(enc)
        for cid, encs in seen.items():
            if len(encs) != 2:
                raise TopologyError(f"crossing {cid} appears {len(encs)} times, expected 2")
            a, b = encs
            if a.vertical == b.vertical:
                raise TopologyError(f"crossing {cid} has equal verticals on both strands")
            if a.sign != b.sign:
                raise TopologyError(f"crossing {cid} has mismatched signs")

    def is_canonical(self) -> bool:
        order: list[int] = []
        for enc in self.encounters:
            if enc.crossing_id not in order:
                order.append(enc.crossing_id)
        return order == list(range(1, len(order) + 1))

    def sort_key(self) -> tuple:
        return tuple((e.crossing_id, e.vertical, e.sign) for e in self.encounters)

    def to_json_obj(self) -> dict:
        return {
            "encounters": [
                {"id": e.crossing_id, "v": e.vertical, "s": e.sign} for e in self.encounters
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @staticmethod
    def from_json_obj(obj: dict) -> "TopologicalState":
        encs = tuple(
            CrossingEncounter(int(e["id"]), str(e["v"]), int(e["s"]))
            for e in obj["encounters"]
        )
        state = TopologicalState(encs)
        state.validate()
        return state

    @staticmethod
    def from_json(text: str) -> "TopologicalState":
        return TopologicalState.from_json_obj(json.loads(text))

    @staticmethod
    def from_tuples(items: Sequence[tuple[int, str, int]]) -> "TopologicalState":
        return TopologicalState(tuple(CrossingEncounter(*item) for item in items))

    def __str__(self) -> str:
        if not self.encounters:
            return "<trivial>"
        body = " ".join(
            f"{e.crossing_id}{e.vertical}{'+' if e.sign > 0 else '-'}" for e in self.encounters
        )
        return f"<{body}>"


def trivial_state() -> TopologicalState:
    """The untangled state: no crossings, a single segment."""
    return TopologicalState(())


@dataclass(frozen=True, order=True)
class R1Action:
    """Fold a loop into segment ``index``.

    ``left`` says whether the loop face lies on the left of the strand
    that ends up on top; ``sign`` is the sign of the new crossing.
    """

    index: int
    left: int
    sign: int

    kind = "R1"

    def params(self) -> tuple:
        return (self.index, self.left, self.sign)


@dataclass(frozen=True, order=True)
class R2Action:
    """Pull the middle of segment ``over_index`` across segment ``under_index``.

    ``left`` says whether the new bigon face lies on the left of the over
    strand. ``over_first`` matters only when both indices name the same
    segment: it says whether the half nearer the head passes over.
    """

    over_index: int
    under_index: int
    left: int
    over_first: int

    kind = "R2"

    def params(self) -> tuple:
        return (self.over_index, self.under_index, self.left, self.over_first)


@dataclass(frozen=True, order=True)
class CrossAction:
    """Sweep an end segment across another segment, crossing it once.

    Either ``over_index`` or ``under_index`` must be an end segment
    (0 or 2k). ``sign`` is the sign of the new crossing.
    """

    over_index: int
    under_index: int
    sign: int

    kind = "C"

    def params(self) -> tuple:
        return (self.over_index, self.under_index, self.sign)


TopoAction = Union[R1Action, R2Action, CrossAction]

_ACTION_ORDER = {"R1": 0, "R2": 1, "C": 2}


def action_sort_key(action: TopoAction) -> tuple:
    return (_ACTION_ORDER[action.kind],) + action.params()


def action_to_json_obj(action: TopoAction) -> dict:
    if isinstance(action, R1Action):
        return {"kind": "R1", "index": action.index, "left": action.left, "sign": action.sign}
    if isinstance(action, R2Action):
        return {
            "kind": "R2",
            "over_index": action.over_index,
            "under_index": action.under_index,
            "left": action.left,
            "over_first": action.over_first,
        }
    if isinstance(action, CrossAction):
        return {
            "kind": "C",
            "over_index": action.over_index,
            "under_index": action.under_index,
            "sign": action.sign,
        }
    raise TypeError(f"not a topological action: {action!r}")


def action_from_json_obj(obj: dict) -> TopoAction:
    kind = obj["kind"]
    if kind == "R1":
        return R1Action(int(obj["index"]), int(obj["left"]), int(obj["sign"]))
    if kind == "R2":
        return R2Action(
            int(obj["over_index"]),
            int(obj["under_index"]),
            int(obj["left"]),
            int(obj["over_first"]),
        )
    if kind == "C":
        return CrossAction(int(obj["over_index"]), int(obj["under_index"]), int(obj["sign"]))
    raise ValueError(f"unknown action kind {kind!r}")


def action_label(action: TopoAction) -> str:
    """Compact display form, e.g. ``R1(0,1,1)`` or ``C(2,4,-1)``."""
    return f"{action.kind}({','.join(str(p) for p in action.params())})"


def action_from_label(text: str) -> TopoAction:
    """Inverse of :func:`action_label`. Accepts e.g. ``R2(0,0,1,1)``."""
    text = text.strip()
    kind, _, rest = text.partition("(")
    if not rest.endswith(")"):
        raise ValueError(f"malformed action label {text!r}")
    nums = [int(p) for p in rest[:-1].split(",")]
    if kind == "R1" and len(nums) == 3:
        return R1Action(*nums)
    if kind == "R2" and len(nums) == 4:
        return R2Action(*nums)
    if kind == "C" and len(nums) == 3:
        return CrossAction(*nums)
    raise ValueError(f"malformed action label {text!r}")


def canonicalize(state: TopologicalState) -> TopologicalState:
    """Renumber crossing ids 1..k in order of first encounter.

    Encounter order is untouched. Raises :class:`TopologyError` on a
    structurally malformed sequence.
    """
    state.validate()
    mapping: dict[int, int] = {}
    out = []
    for enc in state.encounters:
        if enc.crossing_id not in mapping:
            mapping[enc.crossing_id] = len(mapping) + 1
        out.append(CrossingEncounter(mapping[enc.crossing_id], enc.vertical, enc.sign))
    return TopologicalState(tuple(out))


def _check_index(idx: int, num_segments: int, what: str) -> None:
    if not 0 <= idx < num_segments:
        raise ActionError(f"{what} {idx} out of range for {num_segments} segments")


def apply_action(state: TopologicalState, action: TopoAction) -> TopologicalState:
    """Apply a move and return the canonical successor state.

    Insertion conventions (all slots are positions in the encounter list
    of the *input* state; segment i inserts at slot i):

    * R1(i, l, s): two consecutive encounters of one new crossing in
      slot i, both with sign s. The first encounter passes over exactly
      when l*s == -1. This matches planar geometry: a loop laid with its
      face on the left of the top strand has its sign fixed by which
      passage is on top.
    * R2(a, b, l, f), a != b: the over pair (signs l, -l in trace order)
      goes in slot a, the under pair (same ids, same order, same signs)
      in slot b. The convention realizes the tongue whose two crossings
      appear in the same order along both strands.
    * R2(a, a, l, f): four encounters in slot a, interleaved
      (n1, n2, n1, n2) with signs (l, -l, l, -l); the first two are over
      exactly when f == +1.
    * C(a, b, s): a single new crossing, over encounter in slot a, under
      encounter in slot b.
    """
    state.validate()
    k = state.num_crossings
    nseg = state.num_segments
    n1 = k + 1
    n2 = k + 2

    # inserts: list of (slot, [encounters...]) applied from the highest
    # slot down so original positions stay valid
    if isinstance(action, R1Action):
        _check_index(action.index, nseg, "segment index")
        if action.left not in (1, -1) or action.sign not in (1, -1):
            raise ActionError("left and sign must be +1 or -1")
        s = action.sign
        if action.left * s == -1:
            pair = [CrossingEncounter(n1, OVER, s), CrossingEncounter(n1, UNDER, s)]
        else:
            pair = [CrossingEncounter(n1, UNDER, s), CrossingEncounter(n1, OVER, s)]
        inserts = [(action.index, pair)]
    elif isinstance(action, R2Action):
        _check_index(action.over_index, nseg, "over_index")
        _check_index(action.under_index, nseg, "under_index")
        if action.left not in (1, -1) or action.over_first not in (1, -1):
            raise ActionError("left and over_first must be +1 or -1")
        s1, s2 = action.left, -action.left
        if action.over_index == action.under_index:
            v1 = OVER if action.over_first == 1 else UNDER
            v2 = UNDER if action.over_first == 1 else OVER
            block = [
                CrossingEncounter(n1, v1, s1),
                CrossingEncounter(n2, v1, s2),
                CrossingEncounter(n1, v2, s1),
                CrossingEncounter(n2, v2, s2),
            ]
            inserts = [(action.over_index, block)]
        else:
            over_pair = [CrossingEncounter(n1, OVER, s1), CrossingEncounter(n2, OVER, s2)]
            under_pair = [CrossingEncounter(n1, UNDER, s1), CrossingEncounter(n2, UNDER, s2)]
            inserts = [(action.over_index, over_pair), (action.under_index, under_pair)]
    elif isinstance(action, CrossAction):
        _check_index(action.over_index, nseg, "over_index")
        _check_index(action.under_index, nseg, "under_index")
        if action.sign not in (1, -1):
            raise ActionError("sign must be +1 or -1")
        if action.over_index == action.under_index:
            raise ActionError("cross move needs two distinct segments")
        ends = (0, nseg - 1)
        if action.over_index not in ends and action.under_index not in ends:
            raise ActionError(
                f"cross move must use an end segment (0 or {nseg - 1}), "
                f"got over={action.over_index} under={action.under_index}"
            )
        inserts = [
            (action.over_index, [CrossingEncounter(n1, OVER, action.sign)]),
            (action.under_index, [CrossingEncounter(n1, UNDER, action.sign)]),
        ]
    else:
        raise TypeError(f"not a topological action: {action!r}")

    encs = list(state.encounters)
    for slot, block in sorted(inserts, key=lambda item: -item[0]):
        encs[slot:slot] = block
    return canonicalize(TopologicalState(tuple(encs)))


def crossings_added(action: TopoAction) -> int:
    return 2 if isinstance(action, R2Action) else 1


def enumerate_actions(state: TopologicalState, max_crossings: int) -> list[TopoAction]:
    """All applicable moves whose successor stays within ``max_crossings``.

    Deterministic order: R1 moves, then R2, then cross moves, each sorted
    by their parameter tuples. No duplicates by construction.
    """
    if not state.is_canonical():
        raise ActionError("state must be canonical")
    k = state.num_crossings
    nseg = state.num_segments
    ends = (0, nseg - 1)
    out: list[TopoAction] = []
    if k + 1 <= max_crossings:
        for i in range(nseg):
            for left in (-1, 1):
                for sign in (-1, 1):
                    out.append(R1Action(i, left, sign))
    if k + 2 <= max_crossings:
        for a in range(nseg):
            for b in range(nseg):
                if a == b:
                    for left in (-1, 1):
                        for over_first in (-1, 1):
                            out.append(R2Action(a, b, left, over_first))
                else:
                    for left in (-1, 1):
                        out.append(R2Action(a, b, left, 1))
    if k + 1 <= max_crossings:
        for a in range(nseg):
            for b in range(nseg):
                if a != b and (a in ends or b in ends):
                    for sign in (-1, 1):
                        out.append(CrossAction(a, b, sign))
    out.sort(key=action_sort_key)
    return out


def mirror_topo(x: Union[TopologicalState, TopoAction]) -> Union[TopologicalState, TopoAction]:
    """Reflect about a horizontal axis: flips every crossing sign.

    States keep their encounter order and verticals; actions flip their
    ``left`` and ``sign`` parameters. Involution.
    """
    if isinstance(x, TopologicalState):
        return TopologicalState(
            tuple(CrossingEncounter(e.crossing_id, e.vertical, -e.sign) for e in x.encounters)
        )
    if isinstance(x, R1Action):
        return R1Action(x.index, -x.left, -x.sign)
    if isinstance(x, R2Action):
        return R2Action(x.over_index, x.under_index, -x.left, x.over_first)
    if isinstance(x, CrossAction):
        return CrossAction(x.over_index, x.under_index, -x.sign)
    raise TypeError(f"cannot mirror {x!r}")


def reverse_topo(
    x: Union[TopologicalState, TopoAction], crossings: int | None = None
) -> Union[TopologicalState, TopoAction]:
    """Swap head and tail.

    States: the encounter sequence reverses and is re-canonicalized; both
    strand directions flip at every crossing so signs are unchanged, and
    each strand keeps its vertical. Actions: ``left`` and ``over_first``
    flip and every segment index i becomes 2k - i, which needs the
    crossing count ``crossings`` of the state the action applies to.
    Involution for a fixed ``crossings``.
    """
    if isinstance(x, TopologicalState):
        return canonicalize(TopologicalState(tuple(reversed(x.encounters))))
    if crossings is None:
        raise ValueError("reversing an action needs the state's crossing count")
    top = 2 * crossings
    if isinstance(x, R1Action):
        return R1Action(top - x.index, -x.left, x.sign)
    if isinstance(x, R2Action):
        return R2Action(top - x.over_index, top - x.under_index, -x.left, -x.over_first)
    if isinstance(x, CrossAction):
        return CrossAction(top - x.over_index, top - x.under_index, x.sign)
    raise TypeError(f"cannot reverse {x!r}")
