"""Interactive session layer over a minima tree.

A Session owns one tree plus a selection cursor and translates user commands
(select/left/right/up/down/expand/export_selected) into tree operations.
Navigation is purely positional: left/right walk cost-ordered siblings and
saturate at the ends, up moves to the parent, down to the cheapest child.
Every command is appended to an event log so a session can be replayed
deterministically against a fresh tree built from the same seed.
"""

from __future__ import annotations

import itertools
import uuid
from typing import Any

import numpy as np

from .minima_tree import ExplorerParams, MinimaTree

NAV_COMMANDS = ("left", "right", "up", "down")
ALL_COMMANDS = ("select", "expand", "export_selected") + NAV_COMMANDS

_session_counter = itertools.count(1)


def session_view(tree: MinimaTree, selection: int) -> dict:
    """Snapshot of the tree shape plus the cursor. Pure in (tree, selection)."""
    nodes = []
    for nid in sorted(tree.nodes):
        n = tree.nodes[nid]
        nodes.append({
            "id": n.id,
            "level": n.level,
            "parent": n.parent,
            "status": n.status,
            "cost": float(n.cost),
            "children": list(n.children),
        })
    return {
        "selection": selection,
        "levels": {str(k): v for k, v in tree.level_counts().items()},
        "nodes": nodes,
    }


def densify_path(path, samples: int) -> np.ndarray:
    """Evaluate a path at `samples` uniform parameters, endpoints included."""
    samples = max(int(samples), 2)
    return path.eval_many(np.linspace(0.0, 1.0, samples))


class Session:
    """One explorer session: scenario, tree, selection, append-only log."""

    def __init__(self, scenario, overrides: dict | None = None,
                 session_id: str | None = None):
        self.id = session_id or uuid.uuid4().hex[:12]
        self.scenario = scenario
        self.params: ExplorerParams = scenario.params.merged(overrides)
        self.chain = scenario.build_chain()
        self.tree = MinimaTree(self.chain, scenario.start, scenario.goal,
                               self.params, scenario.scenario_hash)
        self.selection: int = self.tree.root_id
        self.events: list[dict] = []
        self._seq = itertools.count(1)

    # -- helpers -------------------------------------------------------

    def _siblings(self) -> list[int]:
        node = self.tree.nodes[self.selection]
        if node.parent is None:
            return [node.id]
        return self.tree.nodes[node.parent].children

    def _log(self, record: dict) -> None:
        record["seq"] = next(self._seq)
        self.events.append(record)

    def view(self) -> dict:
        return session_view(self.tree, self.selection)

    # -- commands ------------------------------------------------------

    def command(self, cmd: str, node_id: int | None = None,
                iterations: int | None = None, seconds: float | None = None,
                on_progress=None) -> dict:
        """Apply one command and return the resulting view.

        The view carries a "notice" key for benign no-ops (left at the first
        sibling, down on a childless node). Hard errors raise ValueError:
        unknown command, select of a missing id, expand at the last level.
        """
        if cmd not in ALL_COMMANDS:
            raise ValueError(f"unknown command {cmd!r}")
        notice = None
        export: dict | None = None
        new_nodes: list[int] = []

        if cmd == "select":
            if node_id is None or node_id not in self.tree.nodes:
                raise ValueError(f"select requires a valid node id, got {node_id!r}")
            self.selection = int(node_id)
        elif cmd in ("left", "right"):
            sibs = self._siblings()
            i = sibs.index(self.selection)
            j = max(i - 1, 0) if cmd == "left" else min(i + 1, len(sibs) - 1)
            if i == j:
                notice = f"already at the {'first' if cmd == 'left' else 'last'} sibling"
            self.selection = sibs[j]
        elif cmd == "up":
            parent = self.tree.nodes[self.selection].parent
            if parent is None:
                notice = "already at the root"
            else:
                self.selection = parent
        elif cmd == "down":
            children = self.tree.nodes[self.selection].children
            if not children:
                notice = "selected node has no children"
            else:
                self.selection = children[0]
        elif cmd == "expand":
            new_nodes = self.tree.expand(self.selection, iterations=iterations,
                                         seconds=seconds, on_progress=on_progress)
            if not new_nodes:
                notice = "expansion found no new minima"
        elif cmd == "export_selected":
            export = self.export_selected()

        record: dict[str, Any] = {"cmd": cmd, "selection": self.selection}
        if node_id is not None:
            record["id"] = int(node_id)
        if cmd == "expand":
            record["iterations"] = iterations
            record["seconds"] = seconds
            record["new_nodes"] = list(new_nodes)
        if notice:
            record["notice"] = notice
        self._log(record)

        view = self.view()
        if notice:
            view["notice"] = notice
        if new_nodes:
            view["new_nodes"] = list(new_nodes)
        if export is not None:
            view["export"] = export
        return view

    def export_selected(self, samples: int = 128) -> dict:
        """Waypoints of the selected path, densified for downstream use.

        Leaf-level paths are exported as-is (they already live in the full
        space); paths on intermediate levels are flagged so a consumer knows
        the coordinates are quotient-space, not robot-space.
        """
        node = self.tree.nodes[self.selection]
        if node.path is None:
            raise ValueError("root has no path to export")
        quotient = node.level < self.chain.K
        dense = densify_path(node.path, samples)
        out = {
            "node": node.id,
            "level": node.level,
            "cost": float(node.cost),
            "waypoints": [[float(v) for v in row] for row in node.path.waypoints],
            "densified": [[float(v) for v in row] for row in dense],
        }
        if quotient:
            out["flag"] = "quotient-level path"
        return out


def replay_events(scenario, events, overrides: dict | None = None) -> Session:
    """Rebuild a session by reapplying a recorded event log.

    With the same scenario, params, and seed this reproduces the identical
    tree: expansion consumes per-node RNG streams keyed by node id, so the
    command order alone determines the outcome (iteration budgets only).
    """
    sess = Session(scenario, overrides)
    for ev in events:
        cmd = ev["cmd"]
        if cmd == "export_selected":
            continue
        sess.command(cmd, node_id=ev.get("id"),
                     iterations=ev.get("iterations"), seconds=ev.get("seconds"))
    return sess
