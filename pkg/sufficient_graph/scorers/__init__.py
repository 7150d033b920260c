"""
Edge scorers
Statistics that turn a node pair into an edge score
"""

from typing import Union

from ..types import Method
from .base import BaseScorer
from .naive import NaiveScorer
from .sgm import SgmScorer

__all__ = [
    "BaseScorer",
    "SgmScorer",
    "NaiveScorer",
    "scorer_for",
]


def scorer_for(method: Union[Method, str]) -> BaseScorer:
    """Scorer instance for a configured method"""
    method = Method(method)
    if method == Method.NAIVE:
        return NaiveScorer()
    return SgmScorer()
