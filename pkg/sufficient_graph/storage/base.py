"""Base storage interface definitions"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd


@dataclass
class StorageConfig:
    """Configuration for artifact storage

    Attributes:
        output_dir: Directory all artifacts are written to
        float_format: printf-style format for floats in CSV tables
    """
    output_dir: Union[str, Path] = "."
    float_format: str = "%.12g"


class BaseStorage(ABC):
    """Abstract base class for artifact storage

    Implementations persist tables, JSON records and figures under short
    artifact names such as ``edges.csv``.
    """

    def __init__(self, config: Optional[StorageConfig] = None):
        """Initialize storage with optional configuration

        Args:
            config: Storage configuration parameters
        """
        self.config = config or StorageConfig()

    @abstractmethod
    def write_table(self, name: str, frame: pd.DataFrame) -> Path:
        """Write a table

        Args:
            name: Artifact name
            frame: Table to write, without its index

        Returns:
            Location of the written artifact
        """
        pass

    @abstractmethod
    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        """Write a JSON record"""
        pass

    @abstractmethod
    def write_figure(self, name: str, figure: Any) -> Path:
        """Write a matplotlib figure in the format implied by the name"""
        pass

    @abstractmethod
    def path(self, name: str) -> Path:
        """Location an artifact name maps to"""
        pass
