"""Exception hierarchy for the sufficient graph estimator

Numerical primitives raise these directly. Per-pair scoring catches them and
turns them into failed ScoreResponse objects, so one bad pair never aborts a
full graph estimate.
"""

from typing import Optional


class SgmError(Exception):
    """Base class for all estimator errors

    Attributes:
        message: Human readable description of the failure
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidInput(SgmError):
    """Input matrix or sample is malformed (non-finite, wrong shape, too small)"""


class NearSingular(SgmError):
    """A regularized inverse was requested for a numerically singular matrix"""


class NotPSD(SgmError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue"""


class DegenerateSample(SgmError):
    """All pairwise distances in a sample block are zero"""


class InvalidBlock(SgmError):
    """A variable block references columns that do not exist"""


class RankDeficient(SgmError):
    """Fewer usable GSIR eigenvalues than the requested predictor dimension

    Attributes:
        d_available: Number of eigenvalues above the usable tolerance
    """

    def __init__(self, d_available: int, message: Optional[str] = None):
        super().__init__(
            message or f"Only {d_available} usable eigenvalue(s) for the requested dimension"
        )
        self.d_available = d_available


class GcvDegenerate(SgmError):
    """The GCV criterion is undefined at every grid point"""


class InvalidConfig(SgmError):
    """Configuration or generator parameters violate their constraints"""


class InvalidTruth(SgmError):
    """Ground truth has only one class (no edges, or every pair is an edge)"""


class DatasetError(SgmError):
    """CSV dataset could not be parsed

    Attributes:
        row: 1-based file row of the offending line, if known
        column: 1-based column of the offending cell, if known
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        full = f"{message} ({', '.join(location)})" if location else message
        super().__init__(full)
        self.row = row
        self.column = column
