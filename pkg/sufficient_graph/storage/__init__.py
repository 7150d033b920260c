"""
Storage module for the sufficient graph estimator

This module provides the artifact store that writes estimates, scores and
evaluation results, and the base interface for custom storage implementations.
"""

from .artifacts import ArtifactStore
from .base import BaseStorage, StorageConfig

__all__ = ["BaseStorage", "StorageConfig", "ArtifactStore"]
