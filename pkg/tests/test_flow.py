"""Tests for the step orchestrator"""

import pytest

from sufficient_graph.errors import InvalidConfig
from sufficient_graph.flow import FlowManager, FlowStep


async def test_steps_run_in_dependency_order():
    order = []

    def make(name, value):
        async def process(data):
            order.append(name)
            return {name: value + data.get("base", 0)}
        return process

    flow = (
        FlowManager()
        .add_step(FlowStep(name="last", process=make("last", 3), requires=["middle"]))
        .add_step(FlowStep(name="middle", process=make("middle", 2), requires=["first"]))
        .add_step(FlowStep(name="first", process=make("first", 1)))
    )
    data = await flow.execute({"base": 10})
    assert order == ["first", "middle", "last"]
    assert data == {"base": 10, "first": 11, "middle": 12, "last": 13}
    assert set(flow.results) == {"first", "middle", "last"}


async def test_step_sees_earlier_results():
    async def produce(data):
        return {"value": 4}

    async def consume(data):
        return {"doubled": data["value"] * 2}

    flow = FlowManager()
    flow.add_step(FlowStep(name="produce", process=produce))
    flow.add_step(FlowStep(name="consume", process=consume, requires=["produce"]))
    assert (await flow.execute())["doubled"] == 8


async def test_unknown_requirement_and_cycle():
    async def noop(data):
        return {}

    missing = FlowManager().add_step(FlowStep(name="a", process=noop, requires=["ghost"]))
    with pytest.raises(InvalidConfig):
        await missing.execute()

    cycle = (
        FlowManager()
        .add_step(FlowStep(name="start", process=noop))
        .add_step(FlowStep(name="a", process=noop, requires=["b"]))
        .add_step(FlowStep(name="b", process=noop, requires=["a"]))
    )
    with pytest.raises(InvalidConfig):
        await cycle.execute()


async def test_step_errors_propagate():
    async def broken(data):
        raise ValueError("boom")

    flow = FlowManager().add_step(FlowStep(name="broken", process=broken))
    with pytest.raises(ValueError):
        await flow.execute()


async def test_broken_graph_fails_before_any_stage_runs():
    ran = []

    async def record(data):
        ran.append(True)
        return {}

    flow = (
        FlowManager()
        .add_step(FlowStep(name="start", process=record))
        .add_step(FlowStep(name="a", process=record, requires=["b"]))
        .add_step(FlowStep(name="b", process=record, requires=["a"]))
    )
    with pytest.raises(InvalidConfig):
        await flow.execute()
    assert ran == []


def test_ready_stages_keep_insertion_order():
    async def noop(data):
        return {}

    flow = (
        FlowManager()
        .add_step(FlowStep(name="root", process=noop))
        .add_step(FlowStep(name="join", process=noop, requires=["right", "left"]))
        .add_step(FlowStep(name="right", process=noop, requires=["root"]))
        .add_step(FlowStep(name="left", process=noop, requires=["root"]))
        .add_step(FlowStep(name="solo", process=noop))
    )
    assert flow.order() == ["root", "solo", "right", "left", "join"]
