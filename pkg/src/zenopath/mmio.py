"""Matrix Market ingestion for problem inputs."""

from __future__ import annotations

import numpy as np
import scipy.io
import scipy.sparse

from .errors import ZenopathError


def load_matrix(path) -> np.ndarray:
    """Dense complex matrix from a Matrix Market file."""
    try:
        raw = scipy.io.mmread(path)
    except (OSError, ValueError) as exc:
        raise ZenopathError(f"cannot read Matrix Market file {path}: {exc}") from exc
    if scipy.sparse.issparse(raw):
        raw = raw.toarray()
    mat = np.asarray(raw, dtype=complex)
    if mat.ndim != 2:
        raise ZenopathError(f"{path}: expected a 2-d matrix, got shape {mat.shape}")
    return mat


def load_vector(path) -> np.ndarray:
    """Vector from a Matrix Market file (n-by-1, 1-by-n, or array format)."""
    mat = load_matrix(path)
    if 1 not in mat.shape and mat.ndim == 2:
        raise ZenopathError(f"{path}: expected a vector, got shape {mat.shape}")
    return mat.reshape(-1)


def save_matrix(path, mat: np.ndarray, comment: str = "") -> None:
    scipy.io.mmwrite(path, np.asarray(mat), comment=comment)
