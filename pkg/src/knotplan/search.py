"""Breadth-first search for all shortest move sequences to a goal topology.

The graph has canonical topological states as nodes and moves as edges.
Every in-scope move adds crossings, so the graph is a DAG graded by move
count. ``search_paths`` keeps exactly the states and edges lying on some
minimal-length path from the untangled state to the goal: the solution
DAG used to bias grounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .topology import (
    TopoAction,
    TopologicalState,
    action_from_json_obj,
    action_sort_key,
    action_to_json_obj,
    apply_action,
    enumerate_actions,
    trivial_state,
)

Edge = tuple[TopologicalState, TopoAction, TopologicalState]


@dataclass
class SolutionDag:
    """States and moves on minimal paths from the untangled state to ``goal``."""

    goal: TopologicalState
    nodes: tuple[TopologicalState, ...] = ()
    edges: tuple[Edge, ...] = ()
    depth_of: dict[TopologicalState, int] = field(default_factory=dict)
    reachable: bool = True

    def out_edges(self, state: TopologicalState) -> list[Edge]:
        return [e for e in self.edges if e[0] == state]

    def dist_to_goal(self, state: TopologicalState) -> int | None:
        """Shortest remaining edge count, or None if the state is not in the DAG."""
        return self.depth_of.get(state)

    def path_count(self) -> int:
        """Number of distinct minimal paths from the untangled state to the goal."""
        if not self.reachable:
            return 0
        ways: dict[TopologicalState, int] = {trivial_state(): 1}
        # edges are emitted in BFS level order, so one forward pass suffices
        for src, _, dst in self.edges:
            ways[dst] = ways.get(dst, 0) + ways.get(src, 0)
        return ways.get(self.goal, 1 if self.goal == trivial_state() else 0)

    def all_paths(self) -> list[tuple[TopoAction, ...]]:
        """Every minimal path, each as an action sequence from the untangled state."""
        if not self.reachable:
            return []
        if self.goal == trivial_state():
            return [()]
        by_src: dict[TopologicalState, list[Edge]] = {}
        for e in self.edges:
            by_src.setdefault(e[0], []).append(e)
        paths: list[tuple[TopoAction, ...]] = []

        def walk(state: TopologicalState, prefix: list[TopoAction]) -> None:
            if state == self.goal:
                paths.append(tuple(prefix))
                return
            for e in by_src.get(state, []):
                prefix.append(e[1])
                walk(e[2], prefix)
                prefix.pop()

        walk(trivial_state(), [])
        return paths

    def to_json_obj(self) -> dict:
        index = {s: i for i, s in enumerate(self.nodes)}
        return {
            "goal": self.goal.to_json_obj(),
            "reachable": self.reachable,
            "nodes": [s.to_json_obj() for s in self.nodes],
            "edges": [
                {"src": index[a], "action": action_to_json_obj(act), "dst": index[b]}
                for a, act, b in self.edges
            ],
            "depth_of": [[index[s], d] for s, d in sorted(self.depth_of.items(), key=lambda kv: index[kv[0]])],
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "SolutionDag":
        nodes = [TopologicalState.from_json_obj(n) for n in obj["nodes"]]
        edges = [
            (nodes[e["src"]], action_from_json_obj(e["action"]), nodes[e["dst"]])
            for e in obj["edges"]
        ]
        depth = {nodes[i]: d for i, d in obj["depth_of"]}
        return SolutionDag(
            goal=TopologicalState.from_json_obj(obj["goal"]),
            nodes=tuple(nodes),
            edges=tuple(edges),
            depth_of=depth,
            reachable=bool(obj["reachable"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))


def search_paths(
    goal: TopologicalState, max_depth: int, max_crossings: int | None = None
) -> SolutionDag:
    """All minimal move sequences from the untangled state to ``goal``.

    Level-by-level BFS over canonical states; the first level containing
    the goal fixes the minimal length, and everything not on a path of
    that length is pruned. ``max_crossings`` defaults to the goal's
    crossing count, the tightest bound that cannot prune a minimal path
    (moves only add crossings). Deterministic node and edge order.
    """
    if not goal.is_canonical():
        goal.validate()
        raise ValueError("goal state must be canonical")
    if max_crossings is None:
        max_crossings = goal.num_crossings

    root = trivial_state()
    if goal == root:
        return SolutionDag(goal=goal, nodes=(root,), edges=(), depth_of={root: 0})

    first_level: dict[TopologicalState, int] = {root: 0}
    parents: dict[TopologicalState, list[tuple[TopologicalState, TopoAction]]] = {}
    level_states = [root]
    goal_depth: int | None = None
    depth = 0
    while level_states and depth < max_depth and goal_depth is None:
        depth += 1
        next_level: dict[TopologicalState, list[tuple[TopologicalState, TopoAction]]] = {}
        for state in level_states:
            for action in enumerate_actions(state, max_crossings):
                succ = apply_action(state, action)
                if succ in first_level:  # reached earlier: not on a minimal path
                    continue
                next_level.setdefault(succ, []).append((state, action))
        for succ in sorted(next_level, key=lambda s: s.sort_key()):
            first_level[succ] = depth
            parents[succ] = next_level[succ]
        if goal in next_level:
            goal_depth = depth
        level_states = sorted(next_level, key=lambda s: s.sort_key())

    if goal_depth is None:
        return SolutionDag(goal=goal, nodes=(), edges=(), depth_of={}, reachable=False)

    # backward prune: keep only states/edges on a minimal path
    depth_of: dict[TopologicalState, int] = {goal: 0}
    kept_edges: list[Edge] = []
    frontier = [goal]
    while frontier:
        nxt: set[TopologicalState] = set()
        for state in frontier:
            for parent, action in parents.get(state, []):
                kept_edges.append((parent, action, state))
                remaining = depth_of[state] + 1
                if parent not in depth_of:
                    depth_of[parent] = remaining
                    nxt.add(parent)
        frontier = sorted(nxt, key=lambda s: s.sort_key())

    nodes = sorted(depth_of, key=lambda s: (first_level[s], s.sort_key()))
    kept_edges.sort(key=lambda e: (first_level[e[0]], e[0].sort_key(), action_sort_key(e[1])))
    return SolutionDag(goal=goal, nodes=tuple(nodes), edges=tuple(kept_edges), depth_of=depth_of)


def dist_to_goal(state: TopologicalState, dag: SolutionDag) -> int | None:
    """Shortest remaining edge count in the DAG, or None when absent."""
    return dag.dist_to_goal(state)
