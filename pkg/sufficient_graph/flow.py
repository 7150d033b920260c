"""Stage orchestration for an estimation run

A run is a small DAG of async stages (tune, score, threshold, assemble).
Each stage reads the shared record and returns the keys it adds.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Awaitable, Callable, Dict, List, Optional

from .errors import InvalidConfig

logger = logging.getLogger(__name__)

StageFn = Callable[[Dict[str, Any]], Awaitable[Dict[str, Any]]]


@dataclass
class FlowStep:
    """One stage of a run

    Attributes:
        name: Unique stage name
        process: Coroutine taking the shared record and returning new keys
        requires: Stages whose output this one reads
    """
    name: str
    process: StageFn
    requires: List[str] = field(default_factory=list)


class FlowManager:
    """Runs stages after the stages they require

    Stages whose requirements are met run in the order they were added.
    """

    def __init__(self):
        self.steps: Dict[str, FlowStep] = {}
        self.results: Dict[str, Dict[str, Any]] = {}

    def add_step(self, step: FlowStep) -> "FlowManager":
        """Register a stage; returns self so calls chain"""
        self.steps[step.name] = step
        return self

    def order(self) -> List[str]:
        """Stage names in run order

        Raises:
            InvalidConfig: On a requirement naming no stage, or a cycle
        """
        waiting: Dict[str, int] = {}
        dependents: Dict[str, List[str]] = {name: [] for name in self.steps}
        for name, step in self.steps.items():
            unknown = [req for req in step.requires if req not in self.steps]
            if unknown:
                raise InvalidConfig(f"Step {name} requires unknown steps {unknown}")
            waiting[name] = len(set(step.requires))
            for req in set(step.requires):
                dependents[req].append(name)

        rank = {name: k for k, name in enumerate(self.steps)}
        ready = deque(name for name in self.steps if waiting[name] == 0)
        ordered: List[str] = []
        while ready:
            name = ready.popleft()
            ordered.append(name)
            released = []
            for child in dependents[name]:
                waiting[child] -= 1
                if waiting[child] == 0:
                    released.append(child)
            ready.extend(sorted(released, key=rank.__getitem__))

        if len(ordered) < len(self.steps):
            stuck = [name for name in self.steps if name not in ordered]
            raise InvalidConfig(f"Steps {stuck} form a dependency cycle")
        return ordered

    async def execute(self, initial_data: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Run every stage and return the merged record

        The order is fixed before the first stage runs, so a broken graph
        fails without side effects. A stage error is logged and re-raised.
        """
        plan = self.order()
        self.results = {}
        data = dict(initial_data or {})
        for name in plan:
            logger.info(f"Running stage {name}")
            try:
                update = await self.steps[name].process(data)
            except Exception as e:
                logger.error(f"Stage {name} failed: {e}")
                raise
            self.results[name] = update
            data.update(update)
        return data
