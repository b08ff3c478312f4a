from pathlib import Path

import numpy as np
import pytest

from vulnlab.classifier.data import Sample

ROOT = Path(__file__).resolve().parent.parent
FIXTURE_COMMITS = ROOT / "fixtures" / "commits"
DIFFCORPUS = ROOT / "tests" / "data" / "diffcorpus"


@pytest.fixture
def fixture_dir():
    return FIXTURE_COMMITS


@pytest.fixture
def diffcorpus_dir():
    return DIFFCORPUS


def make_sample(rows, label, category=None, sid="s", pad_to=None, dim=None):
    """Build a Sample from a list of row vectors, zero-padding to pad_to."""
    matrix = np.array(rows, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    if dim is not None and matrix.shape[1] != dim:
        raise ValueError("row dim mismatch")
    if pad_to is not None and pad_to > matrix.shape[0]:
        matrix = np.vstack([matrix, np.zeros((pad_to - matrix.shape[0], matrix.shape[1]))])
    return Sample(matrix=matrix, label=label, category=category, id=sid)
