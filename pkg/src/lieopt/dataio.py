"""Data ingestion and synthesis.

Covers the IDX container used by the MNIST distribution, margin cropping,
the two discriminant-analysis scatter matrices, pair normalization, the
eigengap-removal transform, the synthetic benchmark matrix families, and two
small persistence formats (a binary scatter-pair blob and a plain-text matrix
format).
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import (
    BadMagic,
    BadShape,
    DimensionOverflow,
    EmptyClass,
    TruncatedPayload,
    ZeroMatrix,
)
from .linalg import cholesky, jacobi_eigh, spectral_norm, symmetrize

__all__ = [
    "IDX_MAGIC_IMAGES",
    "IDX_MAGIC_LABELS",
    "parse_idx",
    "encode_idx",
    "crop_margins",
    "ScatterPair",
    "scatter_matrices",
    "normalize_pair",
    "remove_eigengap",
    "gen_goe",
    "gen_negative_wishart",
    "save_scatter_pair",
    "load_scatter_pair",
    "save_matrix_text",
    "load_matrix_text",
    "mnist_paths",
    "load_mnist_training",
    "lda_scatter_from_images",
]

IDX_MAGIC_IMAGES = 0x00000803  # unsigned bytes, 3 dimensions
IDX_MAGIC_LABELS = 0x00000801  # unsigned bytes, 1 dimension

_MAX_IDX_DIM = 1 << 31
_MAX_IDX_ITEMS = 1 << 33

_PAIR_MAGIC = b"LOPT"
_PAIR_VERSION = 1


def parse_idx(data: bytes) -> np.ndarray:
    """Decode an IDX byte stream.

    Layout: big-endian u32 magic (0x00000803 for u8 image tensors,
    0x00000801 for u8 label vectors), one big-endian u32 size per dimension,
    then the raw u8 payload in row-major order.

    Returns a (count, rows, cols) u8 array for images or a (count,) u8 array
    for labels.

    Raises
    ------
    BadMagic, TruncatedPayload, DimensionOverflow
        Each carries the byte offset at which the problem was detected.
    """
    if len(data) < 4:
        raise TruncatedPayload("stream ends inside the magic number", offset=0)
    magic = struct.unpack_from(">I", data, 0)[0]
    if magic == IDX_MAGIC_IMAGES:
        ndim = 3
    elif magic == IDX_MAGIC_LABELS:
        ndim = 1
    else:
        raise BadMagic(f"unrecognized magic 0x{magic:08x}", offset=0)
    header_end = 4 + 4 * ndim
    if len(data) < header_end:
        raise TruncatedPayload("stream ends inside the dimension sizes", offset=len(data))
    dims = struct.unpack_from(f">{ndim}I", data, 4)
    count = 1
    for k, dim in enumerate(dims):
        if dim >= _MAX_IDX_DIM:
            raise DimensionOverflow(f"dimension {k} declares {dim} entries", offset=4 + 4 * k)
        count *= dim
    if count > _MAX_IDX_ITEMS:
        raise DimensionOverflow(f"payload would hold {count} items", offset=4)
    if len(data) < header_end + count:
        raise TruncatedPayload(
            f"payload needs {count} bytes but only {len(data) - header_end} remain",
            offset=len(data),
        )
    payload = np.frombuffer(data, dtype=np.uint8, count=count, offset=header_end)
    return payload.reshape(dims).copy()


def encode_idx(array) -> bytes:
    """Inverse of :func:`parse_idx` for u8 arrays of rank 1 (labels) or 3 (images)."""
    array = np.ascontiguousarray(array, dtype=np.uint8)
    if array.ndim == 1:
        magic = IDX_MAGIC_LABELS
    elif array.ndim == 3:
        magic = IDX_MAGIC_IMAGES
    else:
        raise BadShape(f"can only encode rank-1 or rank-3 u8 arrays, got rank {array.ndim}")
    header = struct.pack(f">I{array.ndim}I", magic, *array.shape)
    return header + array.tobytes()


def crop_margins(image, crop: int = 4) -> np.ndarray:
    """Strip ``crop`` pixels from every side of a 28 x 28 image and flatten.

    The default of 4 turns the 28 x 28 frame into a 400-entry vector.
    Pixel values are scaled to [0, 1] by dividing by 255.
    """
    image = np.asarray(image)
    if image.shape != (28, 28):
        raise BadShape(f"expected a 28 x 28 image, got shape {image.shape}")
    if not 0 <= crop < 14:
        raise BadShape(f"crop must be in 0..13, got {crop}")
    window = image[crop: 28 - crop, crop: 28 - crop]
    return window.astype(np.float64).ravel() / 255.0


@dataclass(frozen=True)
class ScatterPair:
    """Between-class and within-class scatter matrices of labeled vectors."""

    between: np.ndarray
    within: np.ndarray

    @property
    def dim(self) -> int:
        return self.between.shape[0]


def scatter_matrices(vectors, labels) -> ScatterPair:
    """Unweighted scatter pair of (N, d) data with integer labels 0..M-1.

    between = sum_m (mu_m - mean)(mu_m - mean)^T over the M class means,
    within  = sum_m sum_{i in class m} (x_i - mu_m)(x_i - mu_m)^T.

    Raises EmptyClass if any label in 0..max(labels) has no points.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    labels = np.asarray(labels)
    if vectors.ndim != 2 or labels.shape != (vectors.shape[0],):
        raise BadShape(
            f"expected (N, d) vectors with (N,) labels, got {vectors.shape} and {labels.shape}"
        )
    labels = labels.astype(np.int64)
    n_classes = int(labels.max()) + 1 if labels.size else 0
    if n_classes < 2:
        raise EmptyClass("need at least two classes")
    dim = vectors.shape[1]
    grand_mean = vectors.mean(axis=0)
    between = np.zeros((dim, dim))
    within = np.zeros((dim, dim))
    for m in range(n_classes):
        members = vectors[labels == m]
        if members.shape[0] == 0:
            raise EmptyClass(f"class {m} has no data points")
        mu = members.mean(axis=0)
        centered = members - mu
        within += centered.T @ centered
        offset = mu - grand_mean
        between += np.outer(offset, offset)
    return ScatterPair(between=symmetrize(between), within=symmetrize(within))


def normalize_pair(pair: ScatterPair) -> ScatterPair:
    """Scale each scatter matrix by its own 2-norm.

    Joint rescaling leaves the discriminant subspace unchanged; only the
    generalized eigenvalues rescale.
    """
    norm_between = spectral_norm(pair.between)
    norm_within = spectral_norm(pair.within)
    if norm_between == 0.0 or norm_within == 0.0:
        raise ZeroMatrix("cannot normalize a zero scatter matrix")
    return ScatterPair(between=pair.between / norm_between, within=pair.within / norm_within)


def remove_eigengap(pair: ScatterPair) -> ScatterPair:
    """Collapse the top generalized eigenvalue onto the second one.

    With B = L^T L and Ahat = L^(-T) A L^(-1) = V D V^T, the largest entry of
    D is overwritten by the runner-up and A is rebuilt as L^T V Dtilde V^T L.
    The result has a zero gap between its top two generalized eigenvalues
    while every other eigenvalue and the constraint matrix stay put.
    """
    upper = cholesky(pair.within)
    half = solve_triangular(upper, pair.between, trans="T", lower=False)
    reduced = solve_triangular(upper, half.T, trans="T", lower=False).T
    values, vectors = jacobi_eigh(symmetrize(reduced))
    squeezed = values.copy()
    squeezed[0] = squeezed[1]
    rebuilt = upper.T @ (vectors * squeezed) @ vectors.T @ upper
    return ScatterPair(between=symmetrize(rebuilt), within=pair.within)


def gen_goe(n: int, seed: int = 0) -> np.ndarray:
    """Gaussian orthogonal ensemble sample (X + X^T) / 2 / sqrt(n).

    The 1/sqrt(n) scaling keeps the spectrum edge near 2 for any n.
    Bitwise symmetric and bitwise reproducible from the seed.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    raw = rng.standard_normal((n, n))
    return (raw + raw.T) / 2.0 / np.sqrt(n)


def gen_negative_wishart(n: int, seed: int = 0) -> np.ndarray:
    """Negative semidefinite sample -X X^T / 2 with standard normal X.

    Its spectral radius grows linearly with n.  Symmetrized on output so the
    result is bitwise symmetric.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    raw = rng.standard_normal((n, n))
    return symmetrize(-(raw @ raw.T) / 2.0)


def save_scatter_pair(path, pair: ScatterPair) -> None:
    """Persist a scatter pair as the LOPT blob.

    Layout: magic ``LOPT``, u32 version, u32 n, then the two n x n matrices
    as little-endian f64 in row-major order (between first, within second).
    """
    n = pair.dim
    with open(path, "wb") as stream:
        stream.write(_PAIR_MAGIC)
        stream.write(struct.pack("<II", _PAIR_VERSION, n))
        stream.write(np.ascontiguousarray(pair.between, dtype="<f8").tobytes())
        stream.write(np.ascontiguousarray(pair.within, dtype="<f8").tobytes())


def load_scatter_pair(path) -> ScatterPair:
    """Read a blob written by :func:`save_scatter_pair`."""
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != _PAIR_MAGIC:
        raise BadMagic("not a LOPT scatter-pair blob", offset=0)
    version, n = struct.unpack_from("<II", data, 4)
    if version != _PAIR_VERSION:
        raise BadMagic(f"unsupported blob version {version}", offset=4)
    need = 12 + 2 * 8 * n * n
    if len(data) < need:
        raise TruncatedPayload(f"blob needs {need} bytes, found {len(data)}", offset=len(data))
    flat = np.frombuffer(data, dtype="<f8", count=2 * n * n, offset=12)
    between = flat[: n * n].reshape(n, n).copy()
    within = flat[n * n:].reshape(n, n).copy()
    return ScatterPair(between=between, within=within)


def save_matrix_text(path, matrix) -> None:
    """Write a square matrix as an ``n`` header line plus n whitespace rows."""
    matrix = np.asarray(matrix, dtype=np.float64)
    n = matrix.shape[0]
    with open(path, "w") as stream:
        stream.write(f"{n}\n")
        for row in matrix:
            stream.write(" ".join(repr(value) for value in row.tolist()) + "\n")


def load_matrix_text(path) -> np.ndarray:
    """Read a matrix written by :func:`save_matrix_text`."""
    tokens = Path(path).read_text().split()
    if not tokens:
        raise BadShape(f"{path}: empty matrix file")
    n = int(tokens[0])
    values = [float(tok) for tok in tokens[1:]]
    if len(values) != n * n:
        raise BadShape(f"{path}: expected {n * n} entries after the header, found {len(values)}")
    return np.array(values).reshape(n, n)


_IMAGES_NAME = "train-images-idx3-ubyte"
_LABELS_NAME = "train-labels-idx1-ubyte"


def mnist_paths(data_dir=None) -> tuple[Path, Path]:
    """Training image/label paths under ``data_dir`` (default: $LIEOPT_DATA_DIR)."""
    root = Path(data_dir if data_dir is not None else os.environ.get("LIEOPT_DATA_DIR", "."))
    return root / _IMAGES_NAME, root / _LABELS_NAME


def load_mnist_training(data_dir=None) -> tuple[np.ndarray, np.ndarray]:
    """Parse the training images and labels from disk (no downloading)."""
    images_path, labels_path = mnist_paths(data_dir)
    images = parse_idx(images_path.read_bytes())
    labels = parse_idx(labels_path.read_bytes())
    return images, labels


def lda_scatter_from_images(images, labels, crop: int = 4) -> ScatterPair:
    """Crop every image, stack the vectors, and form the scatter pair."""
    vectors = np.stack([crop_margins(image, crop) for image in images])
    return scatter_matrices(vectors, labels)
