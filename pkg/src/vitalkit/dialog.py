"""Decision-graph dialog engine.

A graph is a set of nodes, each carrying display text, labeled choice
links, an optional default link (taken when the user makes no choice), and
a checkpoint flag. Sessions walk the graph and can jump back to previously
visited checkpoints: returning moves to the most recent checkpoint, and
returning again from that checkpoint pops back to the one before it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DialogError


@dataclass(frozen=True)
class DialogNode:
    id: str
    text: str
    choices: tuple = ()  # of (label, target_id)
    default_target: str | None = None
    is_checkpoint: bool = False

    @property
    def is_terminal(self) -> bool:
        return not self.choices and self.default_target is None

    def choice_labels(self) -> list[str]:
        return [label for label, _ in self.choices]


@dataclass(frozen=True)
class DialogGraph:
    nodes: dict
    start: str

    def __post_init__(self):
        if self.start not in self.nodes:
            raise DialogError("bad graph")
        for node in self.nodes.values():
            for _, target in node.choices:
                if target not in self.nodes:
                    raise DialogError("bad graph")
            if node.default_target is not None and node.default_target not in self.nodes:
                raise DialogError("bad graph")
            # a default-only node looping onto itself could never progress
            if not node.choices and node.default_target == node.id:
                raise DialogError("bad graph")
            labels = node.choice_labels()
            if len(labels) != len(set(labels)):
                raise DialogError("bad graph")

    def node(self, node_id: str) -> DialogNode:
        return self.nodes[node_id]

    @classmethod
    def from_dict(cls, d: dict) -> "DialogGraph":
        try:
            nodes = {}
            for node_id, spec in d["nodes"].items():
                choices = tuple(
                    (c["label"], c["target"]) for c in spec.get("choices", [])
                )
                nodes[node_id] = DialogNode(
                    id=node_id,
                    text=spec["text"],
                    choices=choices,
                    default_target=spec.get("default_target"),
                    is_checkpoint=bool(spec.get("checkpoint", False)),
                )
            return cls(nodes=nodes, start=d["start"])
        except (KeyError, TypeError, AttributeError) as exc:
            raise DialogError("bad graph") from exc

    @classmethod
    def from_json(cls, text: str) -> "DialogGraph":
        try:
            return cls.from_dict(json.loads(text))
        except (json.JSONDecodeError, ValueError) as exc:
            raise DialogError("bad graph") from exc

    @classmethod
    def from_file(cls, path: Path | str) -> "DialogGraph":
        return cls.from_json(Path(path).read_text())


@dataclass
class DialogSession:
    graph: DialogGraph
    current: str
    checkpoint_stack: list = field(default_factory=list)
    transcript: list = field(default_factory=list)  # of (node_id, label)

    @property
    def current_node(self) -> DialogNode:
        return self.graph.node(self.current)

    @property
    def ended(self) -> bool:
        return self.current_node.is_terminal


def start_session(graph: DialogGraph) -> DialogSession:
    """Fresh session at the graph's start node."""
    session = DialogSession(graph=graph, current=graph.start)
    if graph.node(graph.start).is_checkpoint:
        session.checkpoint_stack.append(graph.start)
    return session


def step(session: DialogSession, choice_label: str | None = None) -> DialogSession:
    """Follow a labeled choice, or the default link when no label is given."""
    node = session.current_node
    if node.is_terminal:
        raise DialogError("session ended")
    if choice_label is not None:
        targets = dict(node.choices)
        if choice_label not in targets:
            raise DialogError("unknown choice")
        target = targets[choice_label]
        label = choice_label
    else:
        if node.default_target is None:
            raise DialogError("choice required")
        target = node.default_target
        label = "default"
    session.current = target
    if session.graph.node(target).is_checkpoint:
        session.checkpoint_stack.append(target)
    session.transcript.append((target, label))
    return session


def return_to_checkpoint(session: DialogSession) -> DialogSession:
    """Jump back to the most recent checkpoint.

    Calling again while already at that checkpoint pops it and moves to the
    next older one; with no older checkpoint left, the call fails and the
    stack is untouched.
    """
    stack = session.checkpoint_stack
    if not stack:
        raise DialogError("no checkpoint")
    if session.current == stack[-1]:
        if len(stack) == 1:
            raise DialogError("no checkpoint")
        stack.pop()
    session.current = stack[-1]
    session.transcript.append((session.current, "return"))
    return session


def load_builtin_graph() -> DialogGraph:
    """The illustrative health-screening graph shipped with the package."""
    from importlib import resources

    text = resources.files("vitalkit.data").joinpath("screening_graph.json").read_text()
    return DialogGraph.from_json(text)
