"""Model persistence.

Text format: header "<count> <dim>", then one "term v1 ... v_dim" line per
term in vocabulary-id order.

Binary format: magic "TNET1", little-endian u32 count and dim, count
length-prefixed (u32) UTF-8 terms, then the count x dim float32 matrix in
little-endian row-major order. A JSON sidecar (same path + ".idx") maps
every term to the absolute byte offset of its vector so single vectors can
be read without loading the matrix; it also carries optional training
metadata.
"""

from __future__ import annotations

import json
import struct
from collections.abc import Sequence
from pathlib import Path

import numpy as np

MAGIC = b"TNET1"
_U32 = struct.Struct("<I")


def sidecar_path(path: str | Path) -> Path:
    return Path(str(path) + ".idx")


def save_text(path: str | Path, terms: Sequence[str], vectors: np.ndarray) -> None:
    vectors = np.asarray(vectors)
    _check_shape(terms, vectors)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(terms)} {vectors.shape[1]}\n")
        for term, row in zip(terms, vectors):
            fh.write(term)
            for value in row:
                fh.write(f" {value:.8g}")
            fh.write("\n")


def load_text(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"malformed model header in {path}")
        count, dim = int(header[0]), int(header[1])
        terms: list[str] = []
        vectors = np.empty((count, dim), dtype=np.float32)
        for k in range(count):
            parts = fh.readline().split()
            if len(parts) != dim + 1:
                raise ValueError(f"malformed vector line {k + 2} in {path}")
            terms.append(parts[0])
            vectors[k] = [float(p) for p in parts[1:]]
    return terms, vectors


def save_binary(
    path: str | Path,
    terms: Sequence[str],
    vectors: np.ndarray,
    metadata: dict | None = None,
) -> None:
    vectors = np.ascontiguousarray(np.asarray(vectors), dtype="<f4")
    _check_shape(terms, vectors)
    count, dim = vectors.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_U32.pack(count))
        fh.write(_U32.pack(dim))
        for term in terms:
            encoded = term.encode("utf-8")
            fh.write(_U32.pack(len(encoded)))
            fh.write(encoded)
        data_offset = fh.tell()
        fh.write(vectors.tobytes())
    row_bytes = dim * 4
    index = {
        "format": "termnet-model-index",
        "count": count,
        "dim": dim,
        "data_offset": data_offset,
        "offsets": {term: data_offset + k * row_bytes
                    for k, term in enumerate(terms)},
    }
    if metadata is not None:
        index["metadata"] = metadata
    with open(sidecar_path(path), "w", encoding="utf-8") as fh:
        json.dump(index, fh)
        fh.write("\n")


def _read_header(fh) -> tuple[int, int]:
    magic = fh.read(len(MAGIC))
    if magic != MAGIC:
        raise ValueError(f"not a model file (bad magic {magic!r})")
    count = _U32.unpack(fh.read(4))[0]
    dim = _U32.unpack(fh.read(4))[0]
    return count, dim


def load_binary(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read the whole model eagerly."""
    with open(path, "rb") as fh:
        count, dim = _read_header(fh)
        terms = []
        for _ in range(count):
            length = _U32.unpack(fh.read(4))[0]
            terms.append(fh.read(length).decode("utf-8"))
        data = fh.read(count * dim * 4)
    if len(data) != count * dim * 4:
        raise ValueError(f"truncated vector data in {path}")
    vectors = np.frombuffer(data, dtype="<f4").reshape(count, dim)
    return terms, vectors.astype(np.float32, copy=True)


def load_sidecar(path: str | Path) -> dict:
    with open(sidecar_path(path), encoding="utf-8") as fh:
        index = json.load(fh)
    if index.get("format") != "termnet-model-index":
        raise ValueError(f"{sidecar_path(path)} is not a model index")
    return index


def open_mapped(path: str | Path) -> tuple[list[str], np.ndarray, dict | None]:
    """On-demand access: terms come from the sidecar and the vector region
    is memory-mapped, so vectors are paged in only when touched."""
    index = load_sidecar(path)
    count, dim = index["count"], index["dim"]
    offsets = index["offsets"]
    terms = sorted(offsets, key=offsets.__getitem__)
    if len(terms) != count:
        raise ValueError("sidecar term count disagrees with its header")
    vectors = np.memmap(path, dtype="<f4", mode="r",
                        offset=index["data_offset"], shape=(count, dim))
    return terms, vectors, index.get("metadata")


def read_term_vector(path: str | Path, term: str) -> np.ndarray:
    """Seek-read one vector via the sidecar, without mapping the file."""
    index = load_sidecar(path)
    offset = index["offsets"].get(term)
    if offset is None:
        raise KeyError(term)
    dim = index["dim"]
    with open(path, "rb") as fh:
        fh.seek(offset)
        data = fh.read(dim * 4)
    return np.frombuffer(data, dtype="<f4").astype(np.float32)


def _check_shape(terms: Sequence[str], vectors: np.ndarray) -> None:
    if vectors.ndim != 2 or vectors.shape[0] != len(terms):
        raise ValueError("vector matrix shape does not match the term list")
