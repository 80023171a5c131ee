import random

import pytest

from vitalkit.dialog import (
    DialogGraph,
    load_builtin_graph,
    return_to_checkpoint,
    start_session,
    step,
)
from vitalkit.errors import DialogError


def graph_from(nodes, start):
    return DialogGraph.from_dict({"start": start, "nodes": nodes})


def linear(n, checkpoints=()):
    nodes = {}
    for i in range(n):
        nodes[f"n{i}"] = {
            "text": f"node {i}",
            "default_target": f"n{i+1}" if i + 1 < n else None,
            "checkpoint": f"n{i}" in checkpoints,
        }
    return graph_from(nodes, "n0")


def random_valid_graph(rng, n_nodes=12):
    """Arbitrary well-formed graph: every link lands on an existing node."""
    ids = [f"node{i}" for i in range(n_nodes)]
    nodes = {}
    for i, node_id in enumerate(ids):
        style = rng.choice(["choices", "default", "both", "terminal"])
        spec = {"text": f"t{i}", "checkpoint": rng.random() < 0.3}
        if style in ("choices", "both"):
            labels = rng.sample(["a", "b", "c", "d"], k=rng.randint(1, 3))
            spec["choices"] = [
                {"label": lab, "target": rng.choice(ids)} for lab in labels
            ]
        if style in ("default", "both"):
            target = rng.choice(ids)
            if style == "default" and target == node_id:
                target = ids[(i + 1) % n_nodes]
            spec["default_target"] = target
        nodes[node_id] = spec
    return graph_from(nodes, ids[0])


class TestStartSession:
    def test_one_node_terminal_graph(self):
        g = graph_from({"only": {"text": "hi"}}, "only")
        s = start_session(g)
        assert s.current == "only"
        assert s.ended

    def test_start_checkpoint_pushed(self):
        g = linear(3, checkpoints=("n0",))
        s = start_session(g)
        assert s.checkpoint_stack == ["n0"]

    def test_linear_graph_starts_at_head(self):
        s = start_session(linear(3))
        assert s.current == "n0"
        assert s.transcript == []


class TestStep:
    def choice_graph(self):
        return graph_from(
            {
                "q": {
                    "text": "?",
                    "choices": [
                        {"label": "yes", "target": "A"},
                        {"label": "no", "target": "B"},
                    ],
                },
                "A": {"text": "a"},
                "B": {"text": "b"},
            },
            "q",
        )

    def test_follow_choice(self):
        s = step(start_session(self.choice_graph()), "yes")
        assert s.current == "A"
        assert s.transcript == [("A", "yes")]

    def test_follow_default(self):
        g = graph_from(
            {"s": {"text": "", "default_target": "C"}, "C": {"text": "c"}}, "s"
        )
        s = step(start_session(g))
        assert s.current == "C"
        assert s.transcript == [("C", "default")]

    def test_unknown_choice(self):
        with pytest.raises(DialogError, match="unknown choice"):
            step(start_session(self.choice_graph()), "maybe")

    def test_choice_required(self):
        with pytest.raises(DialogError, match="choice required"):
            step(start_session(self.choice_graph()))

    def test_step_at_terminal(self):
        s = step(start_session(self.choice_graph()), "yes")
        with pytest.raises(DialogError, match="session ended"):
            step(s, "yes")


class TestReturnToCheckpoint:
    def test_return_after_two_steps(self):
        g = linear(4, checkpoints=("n1",))
        s = start_session(g)
        step(s)
        step(s)
        step(s)
        assert s.current == "n3"
        return_to_checkpoint(s)
        assert s.current == "n1"

    def test_two_checkpoints_pop_in_order(self):
        g = linear(5, checkpoints=("n1", "n3"))
        s = start_session(g)
        for _ in range(4):
            step(s)
        return_to_checkpoint(s)
        assert s.current == "n3"
        return_to_checkpoint(s)
        assert s.current == "n1"

    def test_empty_stack(self):
        s = start_session(linear(3))
        with pytest.raises(DialogError, match="no checkpoint"):
            return_to_checkpoint(s)

    def test_single_checkpoint_cannot_pop_past_itself(self):
        g = linear(3, checkpoints=("n0",))
        s = start_session(g)
        step(s)
        return_to_checkpoint(s)
        assert s.current == "n0"
        with pytest.raises(DialogError, match="no checkpoint"):
            return_to_checkpoint(s)
        assert s.checkpoint_stack == ["n0"]

    def test_only_visits_previously_entered_nodes(self):
        rng = random.Random(17)
        for trial in range(20):
            g = random_valid_graph(rng)
            s = start_session(g)
            visited = {s.current}
            for _ in range(200):
                node = s.current_node
                ops = []
                if node.choices:
                    ops.append("choice")
                if node.default_target:
                    ops.append("default")
                if s.checkpoint_stack:
                    ops.append("return")
                if not ops:
                    break
                op = rng.choice(ops)
                if op == "choice":
                    step(s, rng.choice(node.choice_labels()))
                elif op == "default":
                    step(s)
                else:
                    before = set(visited)
                    try:
                        return_to_checkpoint(s)
                    except DialogError:
                        continue
                    assert s.current in before
                visited.add(s.current)


class TestWalkStaysInGraph:
    def test_long_random_walks(self):
        rng = random.Random(4)
        total_steps = 0
        while total_steps < 10_000:
            g = random_valid_graph(rng)
            s = start_session(g)
            for _ in range(500):
                node = s.current_node
                if node.is_terminal:
                    break
                if node.choices and (not node.default_target or rng.random() < 0.7):
                    step(s, rng.choice(node.choice_labels()))
                else:
                    step(s)
                total_steps += 1
                assert s.current in g.nodes
            assert len(s.transcript) >= 0

    def test_transcript_tracks_successful_calls(self):
        g = linear(5, checkpoints=("n1",))
        s = start_session(g)
        step(s)
        step(s)
        return_to_checkpoint(s)
        assert len(s.transcript) == 3


class TestGraphValidation:
    def test_missing_start(self):
        with pytest.raises(DialogError, match="bad graph"):
            graph_from({"a": {"text": ""}}, "nope")

    def test_dangling_choice_target(self):
        with pytest.raises(DialogError, match="bad graph"):
            graph_from(
                {"a": {"text": "", "choices": [{"label": "x", "target": "ghost"}]}},
                "a",
            )

    def test_dangling_default(self):
        with pytest.raises(DialogError, match="bad graph"):
            graph_from({"a": {"text": "", "default_target": "ghost"}}, "a")

    def test_self_loop_default_without_choices(self):
        with pytest.raises(DialogError, match="bad graph"):
            graph_from({"a": {"text": "", "default_target": "a"}}, "a")

    def test_duplicate_choice_labels(self):
        with pytest.raises(DialogError, match="bad graph"):
            graph_from(
                {
                    "a": {
                        "text": "",
                        "choices": [
                            {"label": "x", "target": "a"},
                            {"label": "x", "target": "a"},
                        ],
                    }
                },
                "a",
            )

    def test_malformed_json(self):
        with pytest.raises(DialogError, match="bad graph"):
            DialogGraph.from_json("{not json")

    def test_builtin_graph_loads(self):
        g = load_builtin_graph()
        s = start_session(g)
        assert not s.ended
        assert s.checkpoint_stack  # start node is a checkpoint
