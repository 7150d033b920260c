"""
Sufficient Graph
Nonparametric graphical models built on sufficient dimension reduction
"""

__version__ = "0.1.0"

from .config import PipelineConfig
from .errors import SgmError
from .flow import FlowManager, FlowStep
from .graph import GraphEstimator, GraphEstimatorBuilder, estimate, score_all_pairs, threshold_graph
from .scorers import BaseScorer, NaiveScorer, SgmScorer
from .types import EdgeScoreMatrix, GraphEstimate, GroundTruth, Method, ModelTag, SampleMatrix

__all__ = ["GraphEstimator", "GraphEstimatorBuilder", "PipelineConfig", "estimate",
           "score_all_pairs", "threshold_graph", "BaseScorer", "SgmScorer", "NaiveScorer",
           "FlowManager", "FlowStep", "SampleMatrix", "EdgeScoreMatrix", "GraphEstimate",
           "GroundTruth", "Method", "ModelTag", "SgmError"]
